// Experiment driver: synthetic or file streams in, line-delimited trajectory
// records out. Exit codes: 0 ok, 2 usage, 3 input parse, 4 contract violation.

#include <CLI11.hpp>
#include <cstdio>
#include <future>
#include <iostream>
#include <vector>

#include "axs/runner.hpp"

namespace {

std::string seed_suffixed(const std::string& path, std::uint64_t seed) {
  const auto dot = path.rfind('.');
  const std::string tag = ".seed" + std::to_string(seed);
  if (dot == std::string::npos || dot == 0) return path + tag;
  return path.substr(0, dot) + tag + path.substr(dot);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"axstream: streaming estimators with shrinking error bounds"};

  axs::RunConfig cfg;
  std::uint64_t seeds = 1;

  app.add_option("--task", cfg.task, "f2 | cluster | regress | matmul | oracle | gen")
      ->required();
  app.add_option("--seed", cfg.seed, "base RNG seed");
  app.add_option("--seeds", seeds, "number of consecutive seeds to run in parallel");
  app.add_option("--epsilon0", cfg.epsilon0, "base precision in (0, 1/2)");
  app.add_option("--delta", cfg.delta, "failure probability in (0, 1/2)");
  app.add_option("--n0", cfg.n0, "base block size");
  app.add_option("--k", cfg.k, "cluster count");
  app.add_option("--d", cfg.d, "dimension / feature count");
  app.add_option("--dprime", cfg.d_prime, "matmul: second matrix width");
  app.add_option("--policy", cfg.policy, "f2: parallel | two_sketch");
  app.add_option("--mode", cfg.mode,
                 "cluster: means|median; matmul: improving|fixed; oracle: f2|lsq");
  app.add_option("--alpha", cfg.alpha, "matmul schedule exponent");
  app.add_option("--checkpoints", cfg.checkpoints, "pow2 | pow8");
  app.add_option("--input", cfg.input_path, "input file path");
  app.add_option("--gen", cfg.gen_spec, "generator spec, e.g. uniform-int:N=16");
  app.add_option("--n", cfg.n_max, "maximum stream length");
  app.add_option("--out", cfg.out_path, "output file path");
  std::string oracle_str = "on";
  std::string timing_str = "off";
  app.add_option("--oracle", oracle_str, "exact reference columns: on | off")
      ->check(CLI::IsMember({"on", "off"}));
  app.add_option("--timing", timing_str,
                 "elapsed_ns column: on | off (off keeps outputs byte-reproducible)")
      ->check(CLI::IsMember({"on", "off"}));
  app.add_option("--restarts", cfg.restarts, "cluster solver restarts");
  app.add_option("--sketch-constant", cfg.sketch_constant, "f2 row constant C");
  app.add_option("--sched-constant", cfg.sched_constant, "linalg row constant C");
  app.add_option("--coreset-constant", cfg.coreset_constant, "coreset size constant C_g");
  app.add_option("--epsilon-fixed", cfg.epsilon_fixed, "matmul fixed-mode precision");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }
  cfg.oracle = oracle_str == "on";
  cfg.timing = timing_str == "on";

  try {
    if (cfg.task == "gen") {
      axs::run_generate(cfg);
      return 0;
    }
    if (cfg.task == "oracle") {
      std::cout << axs::run_oracle(cfg) << '\n';
      return 0;
    }
    if (seeds <= 1) {
      const auto recs = axs::run_experiment(cfg);
      if (cfg.out_path.empty()) std::fputs(axs::to_json_lines(recs).c_str(), stdout);
      return 0;
    }
    // Batch mode: independent seeded trials, one output file each.
    std::vector<std::future<void>> jobs;
    for (std::uint64_t s = 0; s < seeds; ++s) {
      axs::RunConfig sub = cfg;
      sub.seed = cfg.seed + s;
      if (!cfg.out_path.empty()) sub.out_path = seed_suffixed(cfg.out_path, sub.seed);
      jobs.push_back(std::async(std::launch::async, [sub] { axs::run_experiment(sub); }));
    }
    for (auto& j : jobs) j.get();
    return 0;
  } catch (const axs::ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
}
