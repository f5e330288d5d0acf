#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "reident/attack.hpp"
#include "reident/evaluate.hpp"
#include "reident/graph.hpp"
#include "reident/mapping.hpp"
#include "reident/perturb.hpp"
#include "reident/seeding.hpp"

namespace reident::exp {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration blocks. A single JSON file describes one experiment; CLI
// flags override individual fields.

struct PerturbationBlock {
  enum class Method { ns, edge_sample };
  Method method = Method::ns;
  double alpha_v = 0.5;
  double alpha_e = 0.75;
  double s = 0.9;
  std::uint64_t rng_seed = 1;
};

struct SeedingBlock {
  SeedSet::Method method = SeedSet::Method::top;
  std::size_t k = 200;
  double percent = 0.01;
  std::uint64_t rng_seed = 1;
};

struct AttackBlock {
  std::string name;
  AttackConfig config;
};

struct ExperimentConfig {
  std::filesystem::path graph_path;
  std::filesystem::path output_dir;
  PerturbationBlock perturbation;
  SeedingBlock seeding;
  std::vector<AttackBlock> attacks;
  double propagation_threshold = 0.1;  // recall counting as large-scale propagation

  static ExperimentConfig from_json(const json& j, bool validate_paths = true);
  static ExperimentConfig from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path.string());
    json j;
    in >> j;
    return from_json(j);
  }
};

inline const char* seeding_method_name(SeedSet::Method m) {
  return m == SeedSet::Method::top ? "top" : "random.01";
}

namespace detail {

inline MetricSpec metric_from_strings(const std::string& name, double delta) {
  if (name == "nar") return MetricSpec::nar();
  if (name == "grh") return MetricSpec::grh();
  if (name == "blb") return MetricSpec::blb(delta);
  throw std::invalid_argument("unknown metric '" + name + "' (expected nar, grh or blb)");
}

inline IterationOrder order_from_string(const std::string& name) {
  if (name == "sorted_id") return IterationOrder::sorted_id;
  if (name == "shuffled") return IterationOrder::shuffled;
  throw std::invalid_argument("unknown iteration order '" + name + "'");
}

inline SeedSet::Method seeding_method_from_string(const std::string& name) {
  if (name == "top") return SeedSet::Method::top;
  if (name == "random.01" || name == "random_top_percent")
    return SeedSet::Method::random_top_percent;
  throw std::invalid_argument("unknown seeding method '" + name + "'");
}

}  // namespace detail

inline ExperimentConfig ExperimentConfig::from_json(const json& j, bool validate_paths) {
  ExperimentConfig cfg;
  cfg.graph_path = j.at("graph").get<std::string>();
  cfg.output_dir = j.at("output_dir").get<std::string>();
  if (validate_paths && !std::filesystem::exists(cfg.graph_path))
    throw std::invalid_argument("config: graph path does not exist: " + cfg.graph_path.string());

  if (j.contains("perturbation")) {
    const json& p = j.at("perturbation");
    const std::string method = p.value("method", "ns");
    if (method == "ns") {
      cfg.perturbation.method = PerturbationBlock::Method::ns;
    } else if (method == "edge_sample") {
      cfg.perturbation.method = PerturbationBlock::Method::edge_sample;
    } else {
      throw std::invalid_argument("config: unknown perturbation method '" + method + "'");
    }
    cfg.perturbation.alpha_v = p.value("alpha_v", cfg.perturbation.alpha_v);
    cfg.perturbation.alpha_e = p.value("alpha_e", cfg.perturbation.alpha_e);
    cfg.perturbation.s = p.value("s", cfg.perturbation.s);
    cfg.perturbation.rng_seed = p.value("rng_seed", cfg.perturbation.rng_seed);
  }

  if (j.contains("seeding")) {
    const json& s = j.at("seeding");
    cfg.seeding.method = detail::seeding_method_from_string(s.value("method", "top"));
    cfg.seeding.k = s.value("k", cfg.seeding.k);
    cfg.seeding.percent = s.value("percent", cfg.seeding.percent);
    cfg.seeding.rng_seed = s.value("rng_seed", cfg.seeding.rng_seed);
  }

  if (!j.contains("attacks") || !j.at("attacks").is_array() || j.at("attacks").empty())
    throw std::invalid_argument("config: at least one attack block is required");
  for (const json& a : j.at("attacks")) {
    AttackBlock block;
    block.name = a.at("name").get<std::string>();
    block.config.metric =
        detail::metric_from_strings(a.at("metric").get<std::string>(), a.value("delta", 0.0));
    block.config.theta = a.value("theta", 0.01);
    if (block.config.theta < 0.0)
      throw std::invalid_argument("config: theta must be >= 0");
    block.config.rng_seed = a.value("rng_seed", std::uint64_t{0});
    block.config.order = detail::order_from_string(a.value("iteration_order", "sorted_id"));
    block.config.max_rounds = a.value("max_rounds", std::size_t{1000});
    cfg.attacks.push_back(std::move(block));
  }

  cfg.propagation_threshold = j.value("propagation_threshold", cfg.propagation_threshold);
  return cfg;
}

// ---------------------------------------------------------------------------
// Worker pool. Grid points and repeats are independent tasks with their own
// RNG streams, so the worker count never changes any result.

inline std::size_t worker_count() {
  if (const char* env = std::getenv("REIDENT_WORKERS")) {
    char* end = nullptr;
    const unsigned long parsed = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && parsed >= 1) return static_cast<std::size_t>(parsed);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

template <typename Fn>
inline void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// File layout inside the output directory and small format helpers.

struct PairPaths {
  std::filesystem::path src_edges, src_nodes, tar_edges, tar_nodes, ground_truth, manifest;

  static PairPaths in(const std::filesystem::path& dir) {
    return {dir / "src.edges", dir / "src.nodes", dir / "tar.edges",
            dir / "tar.nodes", dir / "ground_truth.tsv", dir / "perturb.json"};
  }
  // Node-list sidecars are optional so externally prepared pairs (plain edge
  // lists plus a ground-truth TSV) can be dropped into an output directory.
  bool all_exist() const {
    namespace fs = std::filesystem;
    return fs::exists(src_edges) && fs::exists(tar_edges) && fs::exists(ground_truth);
  }
};

namespace detail {

inline std::string fmt_rate(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::string fmt_elapsed(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("I/O error writing " + path.string());
}

inline void write_json(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

inline json metrics_to_json(const Metrics& m) {
  return json{{"recall", m.recall},
              {"error", m.error},
              {"precision", m.precision},
              {"mapping_size", m.mapping_size},
              {"v_common_size", m.v_common_size},
              {"correct", m.correct}};
}

inline json attack_config_to_json(const AttackConfig& c) {
  json j{{"metric", metric_name(c.metric.kind)},
         {"theta", c.theta},
         {"rng_seed", c.rng_seed},
         {"iteration_order", c.order == IterationOrder::sorted_id ? "sorted_id" : "shuffled"},
         {"max_rounds", c.max_rounds}};
  if (c.metric.kind == MetricKind::blb) j["delta"] = c.metric.delta;
  return j;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Commands.

struct PreparedPair {
  Graph src;
  Graph tar;
  GroundTruth gt;
  OverlapMeasure overlaps;
  double edge_jaccard_common = 0.0;
};

// Perturbs the configured graph and writes the pair, ground truth and a
// manifest holding the measured (not target) overlaps.
inline json cmd_perturb(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.output_dir);
  const Graph original = Graph::load_edge_list(cfg.graph_path);

  PerturbedPair pair;
  json params;
  if (cfg.perturbation.method == PerturbationBlock::Method::ns) {
    PerturbationParams p{cfg.perturbation.alpha_v, cfg.perturbation.alpha_e,
                         cfg.perturbation.rng_seed};
    pair = ns_perturb(original, p);
    params = {{"method", "ns"},
              {"alpha_v", p.alpha_v},
              {"alpha_e", p.alpha_e},
              {"rng_seed", p.rng_seed}};
  } else {
    pair = edge_sample_pair(original, cfg.perturbation.s, cfg.perturbation.rng_seed);
    params = {{"method", "edge_sample"},
              {"s", cfg.perturbation.s},
              {"rng_seed", cfg.perturbation.rng_seed}};
  }

  const PairPaths paths = PairPaths::in(cfg.output_dir);
  save_edge_list(pair.src, paths.src_edges);
  save_node_list(pair.src, paths.src_nodes);
  save_edge_list(pair.tar, paths.tar_edges);
  save_node_list(pair.tar, paths.tar_nodes);
  pair.gt.save_tsv(paths.ground_truth);

  const OverlapMeasure overlaps = measure_overlap(pair.src, pair.tar, pair.gt);
  json manifest{
      {"graph", cfg.graph_path.string()},
      {"perturbation", params},
      {"src", {{"nodes", pair.src.node_count()}, {"edges", pair.src.edge_count()}}},
      {"tar", {{"nodes", pair.tar.node_count()}, {"edges", pair.tar.edge_count()}}},
      {"v_common", pair.gt.size()},
      {"overlaps",
       {{"jaccard_nodes", overlaps.jaccard_nodes},
        {"jaccard_edges", overlaps.jaccard_edges},
        {"jaccard_edges_common_subgraph",
         common_subgraph_edge_jaccard(pair.src, pair.tar, pair.gt)}}}};
  detail::write_json(paths.manifest, manifest);
  return manifest;
}

inline PreparedPair load_pair(const std::filesystem::path& dir) {
  const PairPaths paths = PairPaths::in(dir);
  const auto load = [](const std::filesystem::path& edges, const std::filesystem::path& nodes) {
    return std::filesystem::exists(nodes) ? Graph::load_with_nodes(edges, nodes)
                                          : Graph::load_edge_list(edges);
  };
  PreparedPair pair;
  pair.src = load(paths.src_edges, paths.src_nodes);
  pair.tar = load(paths.tar_edges, paths.tar_nodes);
  pair.gt = GroundTruth::load_tsv(paths.ground_truth);
  pair.overlaps = measure_overlap(pair.src, pair.tar, pair.gt);
  pair.edge_jaccard_common = common_subgraph_edge_jaccard(pair.src, pair.tar, pair.gt);
  return pair;
}

inline PreparedPair ensure_pair(const ExperimentConfig& cfg) {
  if (!PairPaths::in(cfg.output_dir).all_exist()) cmd_perturb(cfg);
  return load_pair(cfg.output_dir);
}

inline SeedSet make_seeds(const ExperimentConfig& cfg, const PreparedPair& pair,
                          std::size_t k, std::uint64_t rng_seed) {
  if (k == 0) return {};
  if (cfg.seeding.method == SeedSet::Method::top) return seed_top(pair.src, pair.tar, pair.gt, k);
  return seed_random_top_percent(pair.src, pair.tar, pair.gt, k, cfg.seeding.percent, rng_seed);
}

// Writes seeds.tsv for the configured pair (perturbing first if needed).
inline json cmd_seed(const ExperimentConfig& cfg) {
  const PreparedPair pair = ensure_pair(cfg);
  const SeedSet seeds = make_seeds(cfg, pair, cfg.seeding.k, cfg.seeding.rng_seed);
  const auto path = cfg.output_dir / "seeds.tsv";
  seeds.save_tsv(path);
  return json{{"file", path.string()},
              {"method", seeding_method_name(cfg.seeding.method)},
              {"size", seeds.size()}};
}

inline SeedSet ensure_seeds(const ExperimentConfig& cfg, const PreparedPair& pair) {
  const auto path = cfg.output_dir / "seeds.tsv";
  if (std::filesystem::exists(path)) return SeedSet::load_tsv(path, cfg.seeding.method);
  const SeedSet seeds = make_seeds(cfg, pair, cfg.seeding.k, cfg.seeding.rng_seed);
  seeds.save_tsv(path);
  return seeds;
}

inline void write_rounds_csv(const std::vector<RoundLog>& rounds,
                             const std::filesystem::path& path) {
  std::string text = "round,delta,mapping_size,recall,error,precision,elapsed_s\n";
  for (const RoundLog& r : rounds) {
    if (!r.metrics) throw std::logic_error("round log without metrics cannot be exported");
    text += std::to_string(r.round_index) + ',' + std::to_string(r.delta) + ',' +
            std::to_string(r.mapping_size) + ',' + detail::fmt_rate(r.metrics->recall) + ',' +
            detail::fmt_rate(r.metrics->error) + ',' + detail::fmt_rate(r.metrics->precision) +
            ',' + detail::fmt_elapsed(r.elapsed_s) + '\n';
  }
  detail::write_text(path, text);
}

struct AttackArtifacts {
  std::string name;
  std::filesystem::path result_json, mapping_tsv, rounds_csv;
  Metrics metrics;
  AttackResult result;
};

inline AttackArtifacts run_attack_block(const ExperimentConfig& cfg, const PreparedPair& pair,
                                        const SeedSet& seeds, const AttackBlock& block) {
  AttackArtifacts art;
  art.name = block.name;
  art.result = run_attack(pair.src, pair.tar, seeds, block.config, &pair.gt);
  art.metrics = evaluate(art.result.mapping, pair.gt);

  art.result_json = cfg.output_dir / (block.name + ".result.json");
  art.mapping_tsv = cfg.output_dir / (block.name + ".mapping.tsv");
  art.rounds_csv = cfg.output_dir / (block.name + ".rounds.csv");

  art.result.mapping.save_tsv(art.mapping_tsv);
  write_rounds_csv(art.result.rounds, art.rounds_csv);

  json result{{"name", block.name},
              {"attack", detail::attack_config_to_json(block.config)},
              {"seeds", {{"method", seeding_method_name(cfg.seeding.method)},
                         {"size", seeds.size()}}},
              {"overlaps",
               {{"jaccard_nodes", pair.overlaps.jaccard_nodes},
                {"jaccard_edges", pair.overlaps.jaccard_edges},
                {"jaccard_edges_common_subgraph", pair.edge_jaccard_common}}},
              {"metrics", detail::metrics_to_json(art.metrics)},
              {"rounds", art.result.rounds.size()},
              {"converged", art.result.converged},
              {"total_seconds", art.result.total_seconds}};
  detail::write_json(art.result_json, result);
  return art;
}

// Runs every configured attack on the prepared pair (building pair and seeds
// inline when missing) and writes result JSON, mapping TSV and round CSV per
// attack.
inline std::vector<AttackArtifacts> cmd_attack(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.output_dir);
  const PreparedPair pair = ensure_pair(cfg);
  const SeedSet seeds = ensure_seeds(cfg, pair);
  std::vector<AttackArtifacts> out;
  out.reserve(cfg.attacks.size());
  for (const AttackBlock& block : cfg.attacks) out.push_back(run_attack_block(cfg, pair, seeds, block));
  return out;
}

// ---------------------------------------------------------------------------
// Parameter sweep over theta and/or delta.

struct SweepGrid {
  std::vector<double> thetas;
  std::vector<double> deltas;  // applies to blb attacks only
};

struct SweepRow {
  std::string attack;
  MetricKind metric = MetricKind::nar;
  double theta = 0.0;
  std::optional<double> delta;
  Metrics metrics;
};

inline std::vector<SweepRow> cmd_sweep(const ExperimentConfig& cfg, const SweepGrid& grid) {
  if (grid.thetas.empty() && grid.deltas.empty())
    throw std::invalid_argument("sweep: the parameter grid is empty");
  std::filesystem::create_directories(cfg.output_dir);
  const PreparedPair pair = ensure_pair(cfg);
  const SeedSet seeds = ensure_seeds(cfg, pair);

  std::vector<std::pair<const AttackBlock*, AttackConfig>> tasks;
  for (const AttackBlock& block : cfg.attacks) {
    const std::vector<double> thetas =
        grid.thetas.empty() ? std::vector<double>{block.config.theta} : grid.thetas;
    const bool vary_delta = block.config.metric.kind == MetricKind::blb && !grid.deltas.empty();
    const std::vector<double> deltas =
        vary_delta ? grid.deltas : std::vector<double>{block.config.metric.delta};
    for (const double theta : thetas) {
      for (const double delta : deltas) {
        AttackConfig c = block.config;
        c.theta = theta;
        if (c.metric.kind == MetricKind::blb) c.metric = MetricSpec::blb(delta);
        tasks.emplace_back(&block, c);
      }
    }
  }

  std::vector<SweepRow> rows(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t i) {
    const auto& [block, config] = tasks[i];
    const AttackResult result = run_attack(pair.src, pair.tar, seeds, config, &pair.gt);
    SweepRow row;
    row.attack = block->name;
    row.metric = config.metric.kind;
    row.theta = config.theta;
    if (config.metric.kind == MetricKind::blb) row.delta = config.metric.delta;
    row.metrics = evaluate(result.mapping, pair.gt);
    rows[i] = std::move(row);
  });

  std::string csv = "attack,metric,theta,delta,recall,error,precision\n";
  for (const SweepRow& row : rows) {
    csv += row.attack + ',' + metric_name(row.metric) + ',' + detail::fmt_rate(row.theta) + ',' +
           (row.delta ? detail::fmt_rate(*row.delta) : std::string{}) + ',' +
           detail::fmt_rate(row.metrics.recall) + ',' + detail::fmt_rate(row.metrics.error) +
           ',' + detail::fmt_rate(row.metrics.precision) + '\n';
  }
  detail::write_text(cfg.output_dir / "sweep.csv", csv);
  return rows;
}

// ---------------------------------------------------------------------------
// Seed-set size sensitivity.

struct SeedSensitivityRow {
  std::string attack;
  std::size_t size = 0;
  std::size_t repeats = 0;
  double recall_mean = 0.0, recall_min = 0.0, recall_max = 0.0;
  double error_mean = 0.0, error_min = 0.0, error_max = 0.0;
  bool propagated = false;  // mean recall reached the configured threshold
};

// For each seed-set size, runs every configured attack `repeats` times and
// aggregates recall/error. Repeats redraw the seed set, which matters for
// random.01 seeding; top seeding is deterministic, so its repeats coincide.
// The summary flags, per attack, the smallest size whose mean recall reaches
// the propagation threshold.
inline std::vector<SeedSensitivityRow> cmd_seed_sensitivity(const ExperimentConfig& cfg,
                                                            const std::vector<std::size_t>& sizes,
                                                            std::size_t repeats,
                                                            json* summary_out = nullptr) {
  if (sizes.empty()) throw std::invalid_argument("seed sensitivity: no sizes given");
  if (repeats < 1) throw std::invalid_argument("seed sensitivity: repeats must be >= 1");
  std::filesystem::create_directories(cfg.output_dir);
  const PreparedPair pair = ensure_pair(cfg);

  struct Cell {
    std::size_t attack_index, size_index, repeat;
  };
  std::vector<Cell> cells;
  for (std::size_t a = 0; a < cfg.attacks.size(); ++a) {
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      for (std::size_t r = 0; r < repeats; ++r) cells.push_back({a, s, r});
    }
  }

  std::vector<Metrics> cell_metrics(cells.size());
  parallel_for(cells.size(), [&](std::size_t i) {
    const Cell& cell = cells[i];
    const SeedSet seeds = make_seeds(cfg, pair, sizes[cell.size_index],
                                     derive_seed(cfg.seeding.rng_seed, cell.repeat));
    const AttackResult result =
        run_attack(pair.src, pair.tar, seeds, cfg.attacks[cell.attack_index].config, &pair.gt);
    cell_metrics[i] = evaluate(result.mapping, pair.gt);
  });

  std::vector<SeedSensitivityRow> rows;
  json summary = json::object();
  for (std::size_t a = 0; a < cfg.attacks.size(); ++a) {
    std::optional<std::size_t> min_stable;
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      SeedSensitivityRow row;
      row.attack = cfg.attacks[a].name;
      row.size = sizes[s];
      row.repeats = repeats;
      row.recall_min = row.error_min = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < repeats; ++r) {
        const std::size_t idx = (a * sizes.size() + s) * repeats + r;
        const Metrics& m = cell_metrics[idx];
        row.recall_mean += m.recall;
        row.error_mean += m.error;
        row.recall_min = std::min(row.recall_min, m.recall);
        row.recall_max = std::max(row.recall_max, m.recall);
        row.error_min = std::min(row.error_min, m.error);
        row.error_max = std::max(row.error_max, m.error);
      }
      row.recall_mean /= static_cast<double>(repeats);
      row.error_mean /= static_cast<double>(repeats);
      row.propagated = row.recall_mean >= cfg.propagation_threshold;
      if (row.propagated && !min_stable) min_stable = sizes[s];
      rows.push_back(row);
    }
    summary[cfg.attacks[a].name] =
        min_stable ? json(*min_stable) : json(nullptr);
  }

  std::string csv =
      "attack,size,repeats,recall_mean,recall_min,recall_max,error_mean,error_min,error_max,"
      "propagated\n";
  for (const SeedSensitivityRow& row : rows) {
    csv += row.attack + ',' + std::to_string(row.size) + ',' + std::to_string(row.repeats) + ',' +
           detail::fmt_rate(row.recall_mean) + ',' + detail::fmt_rate(row.recall_min) + ',' +
           detail::fmt_rate(row.recall_max) + ',' + detail::fmt_rate(row.error_mean) + ',' +
           detail::fmt_rate(row.error_min) + ',' + detail::fmt_rate(row.error_max) + ',' +
           (row.propagated ? "1" : "0") + '\n';
  }
  detail::write_text(cfg.output_dir / "seed_sensitivity.csv", csv);

  json full_summary{{"threshold", cfg.propagation_threshold},
                    {"min_stable_size", summary}};
  detail::write_json(cfg.output_dir / "seed_sensitivity.json", full_summary);
  if (summary_out) *summary_out = full_summary;
  return rows;
}

// Scores any externally produced mapping TSV against a ground truth TSV.
inline Metrics cmd_evaluate(const std::filesystem::path& mapping_tsv,
                            const std::filesystem::path& ground_truth_tsv) {
  const Mapping mu = Mapping::load_tsv(mapping_tsv);
  const GroundTruth gt = GroundTruth::load_tsv(ground_truth_tsv);
  return evaluate(mu, gt);
}

}  // namespace reident::exp
