#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "splitlab/harness.hpp"

using nlohmann::json;

namespace {

// --param k=v flags accumulate into the config's params object
void apply_params(json& cfg, const std::vector<std::string>& params) {
  for (const std::string& p : params) {
    auto eq = p.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--param", "expected key=value, got '" + p + "'");
    cfg["params"][p.substr(0, eq)] = std::stod(p.substr(eq + 1));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale laboratory for Douglas-Rachford splitting"};
  app.require_subcommand(0, 1);

  std::string config_file;
  app.add_option("--config", config_file, "JSON config mirroring the subcommand flags");

  json cfg;

  auto* silver = app.add_subcommand("silver", "print the silver relaxation schedule");
  int silver_k = 1;
  silver->add_option("--k", silver_k, "schedule level")->required();

  auto* run = app.add_subcommand("run", "run an algorithm and emit a trace CSV");
  std::string run_instance, run_lambda_schedule, run_w1, run_out;
  std::vector<std::string> run_params;
  double run_gamma = 1.0, run_lambda = 1.0;
  int run_iters = 0;
  bool run_extras = false;
  run->add_option("--instance", run_instance)->required();
  run->add_option("--param", run_params, "instance parameter key=value");
  run->add_option("--gamma", run_gamma);
  run->add_option("--lambda", run_lambda);
  run->add_option("--lambda-schedule", run_lambda_schedule, "e.g. silver:3");
  run->add_option("--iters", run_iters)->required();
  run->add_option("--w1", run_w1, "initial point, comma separated")->required();
  run->add_option("--out", run_out, "trace CSV path (stdout when omitted)");
  run->add_flag("--extras", run_extras, "print unasserted derived quantities");

  auto* check = app.add_subcommand("check", "verify one bound on one instance");
  std::string check_bound, check_instance, check_w1;
  std::vector<std::string> check_params;
  double check_gamma = 1.0, check_lambda = 1.0;
  int check_iters = 0;
  std::uint64_t check_seed = 1;
  check->add_option("--bound", check_bound)->required();
  check->add_option("--instance", check_instance)->required();
  check->add_option("--param", check_params, "parameter key=value");
  check->add_option("--gamma", check_gamma);
  check->add_option("--lambda", check_lambda);
  check->add_option("--iters", check_iters)->required();
  check->add_option("--w1", check_w1, "initial point (random from --seed when omitted)");
  check->add_option("--seed", check_seed);

  auto* certify = app.add_subcommand("certify", "validate proof certificates numerically");
  std::string certify_which = "all";
  int certify_trials = 100;
  std::uint64_t certify_seed = 1;
  certify->add_option("--which", certify_which,
                      "thm31|prop44|lemma51-base|lemma51-traj|interp|all");
  certify->add_option("--trials", certify_trials);
  certify->add_option("--seed", certify_seed);

  auto* search = app.add_subcommand("search", "hunt for conjecture violations");
  std::string search_target;
  int search_budget = 1000, search_dim = 3;
  std::uint64_t search_seed = 1;
  search->add_option("--target", search_target)->required();
  search->add_option("--budget", search_budget);
  search->add_option("--seed", search_seed);
  search->add_option("--dim", search_dim);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_file.empty()) {
      std::ifstream f(config_file);
      if (!f) {
        std::cerr << "cannot open config file: " << config_file << "\n";
        return 2;
      }
      std::stringstream ss;
      ss << f.rdbuf();
      return splitlab::run_experiment(ss.str(), std::cout, std::cerr);
    }

    if (silver->parsed()) {
      cfg["command"] = "silver";
      cfg["k"] = silver_k;
    } else if (run->parsed()) {
      cfg["command"] = "run";
      cfg["instance"] = run_instance;
      apply_params(cfg, run_params);
      cfg["gamma"] = run_gamma;
      if (run_lambda_schedule.empty())
        cfg["lambda"] = run_lambda;
      else
        cfg["lambda_schedule"] = run_lambda_schedule;
      cfg["iters"] = run_iters;
      cfg["w1"] = run_w1;
      if (!run_out.empty()) cfg["out"] = run_out;
      if (run_extras) cfg["extras"] = true;
    } else if (check->parsed()) {
      cfg["command"] = "check";
      cfg["bound"] = check_bound;
      cfg["instance"] = check_instance;
      apply_params(cfg, check_params);
      cfg["gamma"] = check_gamma;
      cfg["lambda"] = check_lambda;
      cfg["iters"] = check_iters;
      cfg["seed"] = check_seed;
      if (!check_w1.empty()) cfg["w1"] = check_w1;
    } else if (certify->parsed()) {
      cfg["command"] = "certify";
      cfg["which"] = certify_which;
      cfg["trials"] = certify_trials;
      cfg["seed"] = certify_seed;
    } else if (search->parsed()) {
      cfg["command"] = "search";
      cfg["target"] = search_target;
      cfg["budget"] = search_budget;
      cfg["seed"] = search_seed;
      cfg["dim"] = search_dim;
    } else {
      std::cerr << app.help();
      return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  return splitlab::run_experiment(cfg.dump(), std::cout, std::cerr);
}
