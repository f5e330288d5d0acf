// Command-line front end: dataset generation and perturbation, seeding,
// attacks, parameter sweeps, seed-sensitivity scans and mapping evaluation.
// Experiments are described by a JSON config file; flags override its fields.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "reident/reident.hpp"

namespace {

using reident::exp::ExperimentConfig;
using nlohmann::json;

struct Options {
  std::string config_path;
  std::string graph;
  std::string out_dir;

  std::string perturb_method;
  double alpha_v = 0.5;
  double alpha_e = 0.75;
  double sample_s = 0.9;
  std::uint64_t perturb_seed = 1;

  std::string seed_method;
  std::size_t seed_k = 200;
  double seed_percent = 0.01;
  std::uint64_t seed_seed = 1;

  std::string metric;
  double delta = 0.5;
  double theta = 0.01;
  std::uint64_t attack_seed = 0;
  std::string order = "sorted_id";
  std::size_t max_rounds = 1000;
  std::string attack_name;

  std::vector<double> theta_grid;
  std::vector<double> delta_grid;
  std::vector<std::size_t> sizes;
  std::size_t repeats = 1;
  double threshold = 0.1;
};

void add_config_option(CLI::App* cmd, Options& o) {
  cmd->add_option("-c,--config", o.config_path, "experiment config JSON");
}

void add_common_options(CLI::App* cmd, Options& o) {
  add_config_option(cmd, o);
  cmd->add_option("-g,--graph", o.graph, "input edge list");
  cmd->add_option("-o,--out", o.out_dir, "output directory");
}

void add_perturb_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--method", o.perturb_method, "ns or edge_sample");
  cmd->add_option("--alpha-v", o.alpha_v, "target node overlap (ns)");
  cmd->add_option("--alpha-e", o.alpha_e, "target edge overlap (ns)");
  cmd->add_option("--s", o.sample_s, "edge keep probability (edge_sample)");
  cmd->add_option("--perturb-seed", o.perturb_seed, "perturbation RNG seed");
}

void add_seeding_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed-method", o.seed_method, "top or random.01");
  cmd->add_option("-k,--seed-size", o.seed_k, "seed set size");
  cmd->add_option("--percent", o.seed_percent, "degree-rank pool fraction (random.01)");
  cmd->add_option("--seeding-seed", o.seed_seed, "seeding RNG seed");
}

void add_attack_options(CLI::App* cmd, Options& o) {
  cmd->add_option("-m,--metric", o.metric, "nar, grh or blb");
  cmd->add_option("--delta", o.delta, "degree-ratio exponent (blb)");
  cmd->add_option("--theta", o.theta, "eccentricity gate");
  cmd->add_option("--attack-seed", o.attack_seed, "attack RNG seed");
  cmd->add_option("--order", o.order, "sorted_id or shuffled");
  cmd->add_option("--max-rounds", o.max_rounds, "propagation round cap");
  cmd->add_option("--name", o.attack_name, "attack result name");
}

// Builds the effective config: the JSON file when given, flag-provided fields
// on top, defaults for the rest.
ExperimentConfig assemble_config(const CLI::App* cmd, const Options& o) {
  json j;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw std::runtime_error("cannot open config: " + o.config_path);
    in >> j;
  } else {
    j = json::object();
  }
  const auto given = [&](const std::string& flag) {
    const CLI::Option* opt = cmd->get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  };

  if (given("--graph")) j["graph"] = o.graph;
  if (given("--out")) j["output_dir"] = o.out_dir;
  if (!j.contains("graph")) throw std::runtime_error("no input graph (use --graph or a config)");
  if (!j.contains("output_dir"))
    throw std::runtime_error("no output directory (use --out or a config)");

  json& p = j["perturbation"];
  if (given("--method")) p["method"] = o.perturb_method;
  if (given("--alpha-v")) p["alpha_v"] = o.alpha_v;
  if (given("--alpha-e")) p["alpha_e"] = o.alpha_e;
  if (given("--s")) p["s"] = o.sample_s;
  if (given("--perturb-seed")) p["rng_seed"] = o.perturb_seed;
  if (p.is_null()) j.erase("perturbation");

  json& s = j["seeding"];
  if (given("--seed-method")) s["method"] = o.seed_method;
  if (given("--seed-size")) s["k"] = o.seed_k;
  if (given("--percent")) s["percent"] = o.seed_percent;
  if (given("--seeding-seed")) s["rng_seed"] = o.seed_seed;
  if (s.is_null()) j.erase("seeding");

  if (!j.contains("attacks") || !j["attacks"].is_array() || j["attacks"].empty())
    j["attacks"] = json::array({json::object()});
  // Attack flags apply to every configured block; --name and --metric only
  // make sense against a single block.
  json& attacks = j["attacks"];
  if (attacks.size() > 1 && (given("--name") || given("--metric")))
    throw std::runtime_error("--name/--metric cannot override a multi-attack config");
  for (json& a : attacks) {
    if (given("--metric")) a["metric"] = o.metric;
    if (!a.contains("metric")) a["metric"] = o.metric.empty() ? "blb" : o.metric;
    if (given("--delta")) a["delta"] = o.delta;
    if (a["metric"] == "blb" && !a.contains("delta")) a["delta"] = o.delta;
    if (given("--theta")) a["theta"] = o.theta;
    if (given("--attack-seed")) a["rng_seed"] = o.attack_seed;
    if (given("--order")) a["iteration_order"] = o.order;
    if (given("--max-rounds")) a["max_rounds"] = o.max_rounds;
    if (given("--name"))
      a["name"] = o.attack_name;
    else if (!a.contains("name"))
      a["name"] = a["metric"].get<std::string>();
  }

  if (given("--threshold")) j["propagation_threshold"] = o.threshold;
  return ExperimentConfig::from_json(j);
}

int run(int argc, char** argv) {
  CLI::App app{"structural graph re-identification toolkit"};
  app.require_subcommand(1);
  Options o;

  // generate
  std::string gen_model = "ba";
  std::size_t gen_nodes = 10000;
  std::size_t gen_attach = 6;
  double gen_prob = 0.01;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  CLI::App* generate = app.add_subcommand("generate", "write a synthetic graph edge list");
  generate->add_option("--model", gen_model, "ba (preferential attachment) or er");
  generate->add_option("-n,--nodes", gen_nodes, "node count");
  generate->add_option("--attach", gen_attach, "edges per new node (ba)");
  generate->add_option("--edge-prob", gen_prob, "edge probability (er)");
  generate->add_option("--seed", gen_seed, "RNG seed");
  generate->add_option("-o,--out", gen_out, "output edge list path")->required();

  CLI::App* perturb = app.add_subcommand("perturb", "derive a (src, tar, ground truth) pair");
  add_common_options(perturb, o);
  add_perturb_options(perturb, o);

  CLI::App* seed = app.add_subcommand("seed", "write a seed set for a prepared pair");
  add_common_options(seed, o);
  add_perturb_options(seed, o);
  add_seeding_options(seed, o);

  CLI::App* attack = app.add_subcommand("attack", "run the configured attacks");
  add_common_options(attack, o);
  add_perturb_options(attack, o);
  add_seeding_options(attack, o);
  add_attack_options(attack, o);

  CLI::App* sweep = app.add_subcommand("sweep", "grid over theta and/or delta");
  add_common_options(sweep, o);
  add_perturb_options(sweep, o);
  add_seeding_options(sweep, o);
  add_attack_options(sweep, o);
  sweep->add_option("--theta-grid", o.theta_grid, "theta values")->delimiter(',');
  sweep->add_option("--delta-grid", o.delta_grid, "delta values (blb)")->delimiter(',');

  CLI::App* sensitivity =
      app.add_subcommand("seed-sensitivity", "recall/error across seed set sizes");
  add_common_options(sensitivity, o);
  add_perturb_options(sensitivity, o);
  add_seeding_options(sensitivity, o);
  add_attack_options(sensitivity, o);
  sensitivity->add_option("--sizes", o.sizes, "seed set sizes")->delimiter(',')->required();
  sensitivity->add_option("--repeats", o.repeats, "runs per size");
  sensitivity->add_option("--threshold", o.threshold, "large-scale propagation recall threshold");

  std::string eval_mapping, eval_gt, eval_out;
  CLI::App* evaluate = app.add_subcommand("evaluate", "score a mapping TSV against ground truth");
  evaluate->add_option("--mapping", eval_mapping, "mapping TSV")->required();
  evaluate->add_option("--ground-truth", eval_gt, "ground truth TSV")->required();
  evaluate->add_option("-o,--out", eval_out, "also write metrics JSON here");

  CLI11_PARSE(app, argc, argv);

  if (generate->parsed()) {
    reident::Graph g;
    if (gen_model == "ba") {
      g = reident::barabasi_albert(gen_nodes, gen_attach, gen_seed);
    } else if (gen_model == "er") {
      g = reident::erdos_renyi_gnp(gen_nodes, gen_prob, gen_seed);
    } else {
      throw std::runtime_error("unknown model '" + gen_model + "' (expected ba or er)");
    }
    reident::save_edge_list(g, gen_out);
    std::cout << json{{"model", gen_model},
                      {"nodes", g.node_count()},
                      {"edges", g.edge_count()},
                      {"file", gen_out}}
                     .dump(2)
              << "\n";
    return 0;
  }
  if (perturb->parsed()) {
    std::cout << reident::exp::cmd_perturb(assemble_config(perturb, o)).dump(2) << "\n";
    return 0;
  }
  if (seed->parsed()) {
    std::cout << reident::exp::cmd_seed(assemble_config(seed, o)).dump(2) << "\n";
    return 0;
  }
  if (attack->parsed()) {
    const auto artifacts = reident::exp::cmd_attack(assemble_config(attack, o));
    json out = json::array();
    for (const auto& art : artifacts) {
      out.push_back({{"name", art.name},
                     {"recall", art.metrics.recall},
                     {"error", art.metrics.error},
                     {"precision", art.metrics.precision},
                     {"rounds", art.result.rounds.size()},
                     {"converged", art.result.converged},
                     {"result", art.result_json.string()}});
    }
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  if (sweep->parsed()) {
    reident::exp::SweepGrid grid{o.theta_grid, o.delta_grid};
    const auto rows = reident::exp::cmd_sweep(assemble_config(sweep, o), grid);
    std::cout << json{{"rows", rows.size()}}.dump(2) << "\n";
    return 0;
  }
  if (sensitivity->parsed()) {
    json summary;
    reident::exp::cmd_seed_sensitivity(assemble_config(sensitivity, o), o.sizes, o.repeats,
                                       &summary);
    std::cout << summary.dump(2) << "\n";
    return 0;
  }
  if (evaluate->parsed()) {
    const reident::Metrics m = reident::exp::cmd_evaluate(eval_mapping, eval_gt);
    const json j{{"recall", m.recall},         {"error", m.error},
                 {"precision", m.precision},   {"mapping_size", m.mapping_size},
                 {"v_common_size", m.v_common_size}, {"correct", m.correct}};
    if (!eval_out.empty()) reident::exp::detail::write_json(eval_out, j);
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
