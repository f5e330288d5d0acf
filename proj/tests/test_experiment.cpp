#include <catch2/catch.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "reident/experiment.hpp"
#include "reident/generate.hpp"

using namespace reident;
using namespace reident::exp;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempTree {
  fs::path root;
  explicit TempTree(const std::string& name) : root(fs::temp_directory_path() / name) {
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~TempTree() { fs::remove_all(root); }
};

// A small committed scenario: one input graph plus a config with two attacks.
struct Scenario {
  TempTree tree;
  fs::path graph_path;
  json config_json;

  explicit Scenario(const std::string& name, std::size_t nodes = 900)
      : tree("reident_test_" + name) {
    graph_path = tree.root / "input.edges";
    save_edge_list(barabasi_albert(nodes, 5, 42), graph_path);
    config_json = {
        {"graph", graph_path.string()},
        {"output_dir", (tree.root / "out").string()},
        {"perturbation",
         {{"method", "ns"}, {"alpha_v", 0.5}, {"alpha_e", 0.75}, {"rng_seed", 3}}},
        {"seeding", {{"method", "top"}, {"k", 25}, {"rng_seed", 1}}},
        {"attacks",
         json::array({{{"name", "blb_05"}, {"metric", "blb"}, {"delta", 0.5}, {"theta", 0.01}},
                      {{"name", "nar"}, {"metric", "nar"}, {"theta", 0.01}}})}};
  }

  ExperimentConfig config() const { return ExperimentConfig::from_json(config_json); }
};

}  // namespace

TEST_CASE("config parsing validates its blocks") {
  Scenario sc("config");

  SECTION("a full config round-trips") {
    const ExperimentConfig cfg = sc.config();
    CHECK(cfg.attacks.size() == 2);
    CHECK(cfg.attacks[0].config.metric.kind == MetricKind::blb);
    CHECK(cfg.attacks[0].config.metric.delta == 0.5);
    CHECK(cfg.seeding.k == 25);
    CHECK(cfg.perturbation.alpha_e == 0.75);
  }

  SECTION("missing attacks are rejected") {
    json j = sc.config_json;
    j.erase("attacks");
    CHECK_THROWS_AS(ExperimentConfig::from_json(j), std::invalid_argument);
    j["attacks"] = json::array();
    CHECK_THROWS_AS(ExperimentConfig::from_json(j), std::invalid_argument);
  }

  SECTION("unknown enum spellings are rejected") {
    json j = sc.config_json;
    j["perturbation"]["method"] = "rewire";
    CHECK_THROWS_AS(ExperimentConfig::from_json(j), std::invalid_argument);
    j = sc.config_json;
    j["attacks"][0]["metric"] = "cosine";
    CHECK_THROWS_AS(ExperimentConfig::from_json(j), std::invalid_argument);
    j = sc.config_json;
    j["seeding"]["method"] = "betweenness";
    CHECK_THROWS_AS(ExperimentConfig::from_json(j), std::invalid_argument);
  }

  SECTION("unresolvable graph paths are rejected at load time") {
    json j = sc.config_json;
    j["graph"] = (sc.tree.root / "missing.edges").string();
    CHECK_THROWS_AS(ExperimentConfig::from_json(j), std::invalid_argument);
  }

  SECTION("random.01 spelling selects the percent-pool method") {
    json j = sc.config_json;
    j["seeding"]["method"] = "random.01";
    CHECK(ExperimentConfig::from_json(j).seeding.method == SeedSet::Method::random_top_percent);
  }
}

TEST_CASE("cmd_perturb writes the pair and a manifest with measured overlaps") {
  Scenario sc("perturb");
  const ExperimentConfig cfg = sc.config();
  const json manifest = cmd_perturb(cfg);

  const PairPaths paths = PairPaths::in(cfg.output_dir);
  CHECK(paths.all_exist());
  CHECK(fs::exists(paths.manifest));
  CHECK(manifest["overlaps"].contains("jaccard_nodes"));
  CHECK(manifest["overlaps"].contains("jaccard_edges"));
  const double jn = manifest["overlaps"]["jaccard_nodes"].get<double>();
  CHECK(jn == Approx(0.5).margin(0.08));

  const PreparedPair pair = load_pair(cfg.output_dir);
  CHECK(pair.gt.size() == manifest["v_common"].get<std::size_t>());
  CHECK(pair.overlaps.jaccard_nodes == Approx(jn).epsilon(1e-12));
}

TEST_CASE("identity perturbation produces byte-identical copies") {
  Scenario sc("identity");
  json j = sc.config_json;
  j["perturbation"]["alpha_v"] = 1.0;
  j["perturbation"]["alpha_e"] = 1.0;
  const ExperimentConfig cfg = ExperimentConfig::from_json(j);
  cmd_perturb(cfg);
  const PairPaths paths = PairPaths::in(cfg.output_dir);
  CHECK(slurp(paths.src_edges) == slurp(paths.tar_edges));
  CHECK(slurp(paths.src_nodes) == slurp(paths.tar_nodes));
}

TEST_CASE("edge_sample perturbation reports the expected overlap direction") {
  Scenario sc("esample");
  json j = sc.config_json;
  j["perturbation"] = {{"method", "edge_sample"}, {"s", 0.95}, {"rng_seed", 2}};
  const json manifest = cmd_perturb(ExperimentConfig::from_json(j));
  const double jn = manifest["overlaps"]["jaccard_nodes"].get<double>();
  const double je = manifest["overlaps"]["jaccard_edges"].get<double>();
  CHECK(jn == 1.0);  // nodes kept intact
  CHECK(je == Approx(0.95 / 1.05).margin(0.02));
  CHECK(je < jn);
}

TEST_CASE("cmd_attack writes all three artifacts per attack deterministically") {
  Scenario sc("attack");
  const ExperimentConfig cfg = sc.config();
  const auto artifacts = cmd_attack(cfg);
  REQUIRE(artifacts.size() == 2);

  for (const auto& art : artifacts) {
    CHECK(fs::exists(art.result_json));
    CHECK(fs::exists(art.mapping_tsv));
    CHECK(fs::exists(art.rounds_csv));
    const std::string csv = slurp(art.rounds_csv);
    CHECK(csv.rfind("round,delta,mapping_size,recall,error,precision,elapsed_s\n", 0) == 0);
    const json result = json::parse(slurp(art.result_json));
    CHECK(result["overlaps"].contains("jaccard_nodes"));
    CHECK(result["converged"].get<bool>());
  }

  const std::string first = slurp(artifacts[0].mapping_tsv);
  const auto rerun = cmd_attack(cfg);
  CHECK(slurp(rerun[0].mapping_tsv) == first);
}

TEST_CASE("sweep grids") {
  Scenario sc("sweep");
  const ExperimentConfig cfg = sc.config();

  SECTION("empty grid is rejected") {
    CHECK_THROWS_AS(cmd_sweep(cfg, SweepGrid{}), std::invalid_argument);
  }

  SECTION("a single-point grid reproduces cmd_attack") {
    const auto artifacts = cmd_attack(cfg);
    const auto rows = cmd_sweep(cfg, SweepGrid{{0.01}, {}});
    REQUIRE(rows.size() == 2);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].metrics.recall == artifacts[i].metrics.recall);
      CHECK(rows[i].metrics.error == artifacts[i].metrics.error);
      CHECK(rows[i].metrics.precision == artifacts[i].metrics.precision);
    }
  }

  SECTION("delta grid varies blb only and covers the named regimes") {
    const auto rows = cmd_sweep(cfg, SweepGrid{{}, {0.0, 0.005, 0.5}});
    // blb gets three delta rows, nar collapses to one
    REQUIRE(rows.size() == 4);
    std::vector<double> blb_deltas;
    for (const auto& row : rows) {
      if (row.metric == MetricKind::blb) blb_deltas.push_back(*row.delta);
    }
    CHECK(blb_deltas == std::vector<double>{0.0, 0.005, 0.5});
    CHECK(fs::exists(cfg.output_dir / "sweep.csv"));
  }

  SECTION("worker count never changes sweep output") {
    const SweepGrid grid{{0.01, 0.5, 2.0}, {0.0, 0.5}};
    setenv("REIDENT_WORKERS", "1", 1);
    cmd_sweep(cfg, grid);
    const std::string serial = slurp(cfg.output_dir / "sweep.csv");
    setenv("REIDENT_WORKERS", "4", 1);
    cmd_sweep(cfg, grid);
    const std::string parallel = slurp(cfg.output_dir / "sweep.csv");
    unsetenv("REIDENT_WORKERS");
    CHECK(serial == parallel);
  }
}

TEST_CASE("theta sweep trends conservative on a low-overlap pair") {
  Scenario sc("theta", 1600);
  json j = sc.config_json;
  j["perturbation"]["alpha_v"] = 0.4;
  j["perturbation"]["alpha_e"] = 0.4;
  j["attacks"] = json::array(
      {{{"name", "blb"}, {"metric", "blb"}, {"delta", 0.5}, {"theta", 0.01}}});
  const ExperimentConfig cfg = ExperimentConfig::from_json(j);
  const auto rows = cmd_sweep(cfg, SweepGrid{{0.01, 2.0}, {}});
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].metrics.recall <= rows[0].metrics.recall);
  CHECK(rows[1].metrics.error <= rows[0].metrics.error);
}

TEST_CASE("seed sensitivity aggregates and flags propagation") {
  Scenario sc("sensitivity");
  json j = sc.config_json;
  j["attacks"] = json::array(
      {{{"name", "blb"}, {"metric", "blb"}, {"delta", 0.5}, {"theta", 0.01}}});
  const ExperimentConfig cfg = ExperimentConfig::from_json(j);

  json summary;
  const auto rows = cmd_seed_sensitivity(cfg, {0, 25}, 2, &summary);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].size == 0);
  CHECK(rows[0].recall_mean == 0.0);  // no seeds, no propagation
  CHECK_FALSE(rows[0].propagated);
  CHECK(rows[1].recall_mean > 0.0);
  CHECK(fs::exists(cfg.output_dir / "seed_sensitivity.csv"));
  CHECK(fs::exists(cfg.output_dir / "seed_sensitivity.json"));
  CHECK(summary["threshold"].get<double>() == 0.1);

  CHECK_THROWS_AS(cmd_seed_sensitivity(cfg, {}, 1), std::invalid_argument);
  CHECK_THROWS_AS(cmd_seed_sensitivity(cfg, {1}, 0), std::invalid_argument);
}

TEST_CASE("externally prepared pairs are used as-is") {
  Scenario sc("external");
  const ExperimentConfig cfg = sc.config();
  fs::create_directories(cfg.output_dir);

  // plain edge lists and a ground truth, no node sidecars, no manifest
  const Graph g = barabasi_albert(400, 4, 77);
  const PerturbedPair external = edge_sample_pair(g, 0.9, 5);
  const PairPaths paths = PairPaths::in(cfg.output_dir);
  save_edge_list(external.src, paths.src_edges);
  save_edge_list(external.tar, paths.tar_edges);
  external.gt.save_tsv(paths.ground_truth);
  const std::string src_before = slurp(paths.src_edges);

  const auto artifacts = cmd_attack(cfg);
  CHECK(slurp(paths.src_edges) == src_before);  // not re-perturbed
  CHECK(artifacts[0].metrics.v_common_size == external.gt.size());
}

TEST_CASE("cmd_evaluate scores external mappings") {
  Scenario sc("evaluate");
  const fs::path gt_path = sc.tree.root / "gt.tsv";
  const fs::path mapping_path = sc.tree.root / "external.tsv";
  GroundTruth::from_pairs({{0, 10}, {1, 11}, {2, 12}, {3, 13}}).save_tsv(gt_path);
  Mapping external;
  external.register_pair(0, 10);
  external.register_pair(1, 99);
  external.save_tsv(mapping_path);

  const Metrics m = cmd_evaluate(mapping_path, gt_path);
  CHECK(m.correct == 1);
  CHECK(m.mapping_size == 2);
  CHECK(m.recall == Approx(0.25).epsilon(1e-15));
  CHECK(m.error == Approx(0.25).epsilon(1e-15));
  CHECK(m.precision == Approx(0.5).epsilon(1e-15));
}
