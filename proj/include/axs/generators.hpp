#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace axs {

// Generator descriptor parsed from strings like
//   "uniform-int:N=16"  "zipf-int:N=1000,s=1.1"  "constant-item:value=7"
//   "gaussian-mixture:k=3,d=2,sep=10"  "regression-rows:d=5,noise=1"
struct GenSpec {
  std::string name;
  std::map<std::string, double> params;

  static GenSpec parse(const std::string& text);
  double get(const std::string& key, double fallback) const;
};

// Deterministic synthetic stream source. Integer generators feed the f2
// task; row generators feed cluster (d coords), regress (d features plus
// target) and matmul (d + d' columns via gaussian-mixture with k=1).
class StreamGenerator {
 public:
  StreamGenerator(const GenSpec& spec, std::uint64_t seed);

  bool integer_stream() const { return integer_stream_; }
  std::uint64_t universe() const { return universe_; }
  std::size_t row_width() const { return row_width_; }

  std::uint64_t next_item();
  void next_row(std::span<double> out);

  // regression-rows only: the planted coefficient vector.
  const std::vector<double>& planted_coefficients() const { return planted_; }

 private:
  double uniform();  // [0, 1)
  double normal();

  enum class Kind { uniform_int, zipf_int, constant_item, gaussian_mixture, regression_rows };
  Kind kind_;
  bool integer_stream_ = false;
  std::uint64_t universe_ = 0;
  std::size_t row_width_ = 0;
  std::uint64_t rng_state_ = 0;
  bool have_spare_normal_ = false;
  double spare_normal_ = 0.0;

  std::uint64_t constant_value_ = 0;
  std::vector<double> zipf_cdf_;

  std::size_t mixture_k_ = 0;
  std::vector<double> mixture_centers_;  // k x d
  std::uint64_t counter_ = 0;

  std::vector<double> planted_;
  double noise_ = 0.0;
};

}  // namespace axs
