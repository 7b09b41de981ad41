#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "axs/trajectory.hpp"

namespace axs {

// Thrown on malformed input files; carries the 1-based offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::uint64_t line)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::uint64_t line() const { return line_; }

 private:
  std::uint64_t line_ = 0;
};

struct RunConfig {
  std::string task = "f2";  // f2 | cluster | regress | matmul | oracle | gen
  std::uint64_t seed = 1;
  double epsilon0 = 0.5;
  double delta = 0.1;
  std::uint64_t n0 = 64;
  std::size_t k = 3;
  std::size_t d = 2;
  std::string policy = "parallel";    // f2: parallel | two_sketch
  std::string mode = "means";         // cluster: means | median; matmul: improving | fixed;
                                      // oracle: f2 | lsq
  double alpha = 0.5;                 // matmul schedule exponent
  std::string checkpoints = "pow2";   // pow2 | pow8
  std::string input_path;
  std::string gen_spec;
  std::uint64_t n_max = 1 << 16;
  std::string out_path;
  bool oracle = true;
  bool timing = false;

  // Schedule constants, calibrated defaults.
  double sketch_constant = 8.0;   // f2 rows C
  double sched_constant = 2.0;    // linalg m_i C
  double coreset_constant = 2.0;  // C_g
  std::size_t restarts = 10;
  std::uint64_t oracle_cap = std::uint64_t{1} << 17;
  double epsilon_fixed = 0.25;    // matmul fixed mode
  std::size_t d_prime = 1;        // matmul second width
};

void validate(const RunConfig& cfg);

std::vector<std::uint64_t> build_checkpoints(std::uint64_t n0, std::uint64_t n_max,
                                             const std::string& schedule);

// Feeds the configured stream into the configured estimator and emits one
// record per checkpoint; writes them to cfg.out_path when set.
std::vector<TrajectoryRecord> run_experiment(const RunConfig& cfg);

// Input files: f2 one unsigned integer per line; cluster one comma-separated
// point per line; regress d features then the target per line.
std::vector<std::uint64_t> parse_items(const std::string& path);
std::vector<std::vector<double>> parse_rows(const std::string& path, std::size_t width);

// gen task: writes n_max generated entries to out_path in the input format.
void run_generate(const RunConfig& cfg);

// oracle task: exact reference value for an input file; returns the printed line.
std::string run_oracle(const RunConfig& cfg);

}  // namespace axs
