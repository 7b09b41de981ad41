#include "axs/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "axs/clustering.hpp"
#include "axs/hashing.hpp"

namespace axs {

GenSpec GenSpec::parse(const std::string& text) {
  GenSpec spec;
  const auto colon = text.find(':');
  spec.name = text.substr(0, colon);
  if (spec.name.empty()) throw std::invalid_argument("empty generator name");
  if (colon == std::string::npos) return spec;
  std::string rest = text.substr(colon + 1);
  std::size_t pos = 0;
  while (pos < rest.size()) {
    auto comma = rest.find(',', pos);
    if (comma == std::string::npos) comma = rest.size();
    const std::string kv = rest.substr(pos, comma - pos);
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("bad generator parameter '" + kv + "'");
    }
    try {
      spec.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad generator parameter value in '" + kv + "'");
    }
    pos = comma + 1;
  }
  return spec;
}

double GenSpec::get(const std::string& key, double fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

StreamGenerator::StreamGenerator(const GenSpec& spec, std::uint64_t seed) {
  rng_state_ = seed ^ 0xa02b8c3df6d1e4f7ULL;
  splitmix64(rng_state_);

  if (spec.name == "uniform-int") {
    kind_ = Kind::uniform_int;
    integer_stream_ = true;
    universe_ = static_cast<std::uint64_t>(spec.get("N", 16));
    if (universe_ == 0) throw std::invalid_argument("uniform-int needs N >= 1");
  } else if (spec.name == "zipf-int") {
    kind_ = Kind::zipf_int;
    integer_stream_ = true;
    universe_ = static_cast<std::uint64_t>(spec.get("N", 1024));
    const double s = spec.get("s", 1.1);
    if (universe_ == 0 || universe_ > (1u << 24)) {
      throw std::invalid_argument("zipf-int needs 1 <= N <= 2^24");
    }
    zipf_cdf_.resize(universe_);
    double acc = 0.0;
    for (std::uint64_t i = 0; i < universe_; ++i) {
      acc += std::pow(static_cast<double>(i + 1), -s);
      zipf_cdf_[i] = acc;
    }
    for (double& v : zipf_cdf_) v /= acc;
  } else if (spec.name == "constant-item") {
    kind_ = Kind::constant_item;
    integer_stream_ = true;
    constant_value_ = static_cast<std::uint64_t>(spec.get("value", 1));
    universe_ = std::max<std::uint64_t>(constant_value_, 1);
  } else if (spec.name == "gaussian-mixture") {
    kind_ = Kind::gaussian_mixture;
    mixture_k_ = static_cast<std::size_t>(spec.get("k", 3));
    row_width_ = static_cast<std::size_t>(spec.get("d", 2));
    const double sep = spec.get("sep", 10.0);
    if (mixture_k_ == 0 || row_width_ == 0) {
      throw std::invalid_argument("gaussian-mixture needs k >= 1 and d >= 1");
    }
    mixture_centers_.assign(mixture_k_ * row_width_, 0.0);
    if (mixture_k_ > 1) {
      if (row_width_ == 1) {
        for (std::size_t j = 0; j < mixture_k_; ++j) {
          mixture_centers_[j] = sep * static_cast<double>(j);
        }
      } else {
        // Centers on a circle in the first two coordinates at pairwise
        // distance ~sep.
        const double radius =
            sep / (2.0 * std::sin(std::numbers::pi / static_cast<double>(mixture_k_)));
        for (std::size_t j = 0; j < mixture_k_; ++j) {
          const double theta =
              2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(mixture_k_);
          mixture_centers_[j * row_width_] = radius * std::cos(theta);
          mixture_centers_[j * row_width_ + 1] = radius * std::sin(theta);
        }
      }
    }
  } else if (spec.name == "regression-rows") {
    kind_ = Kind::regression_rows;
    const std::size_t d = static_cast<std::size_t>(spec.get("d", 5));
    if (d == 0) throw std::invalid_argument("regression-rows needs d >= 1");
    row_width_ = d + 1;
    noise_ = spec.get("noise", 1.0);
    planted_.resize(d);
    for (double& v : planted_) v = 2.0 * (2.0 * uniform() - 1.0);
  } else {
    throw std::invalid_argument("unknown generator '" + spec.name + "'");
  }
}

double StreamGenerator::uniform() { return to_unit_double(splitmix64(rng_state_)); }

double StreamGenerator::normal() {
  if (have_spare_normal_) {
    have_spare_normal_ = false;
    return spare_normal_;
  }
  // Box-Muller; written out so samples are identical on every stdlib.
  double u1 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_normal_ = r * std::sin(2.0 * std::numbers::pi * u2);
  have_spare_normal_ = true;
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t StreamGenerator::next_item() {
  if (!integer_stream_) throw std::logic_error("generator produces rows, not items");
  switch (kind_) {
    case Kind::uniform_int:
      return splitmix64(rng_state_) % universe_ + 1;
    case Kind::zipf_int: {
      const double u = uniform();
      const auto it = std::lower_bound(zipf_cdf_.begin(), zipf_cdf_.end(), u);
      return static_cast<std::uint64_t>(it - zipf_cdf_.begin()) + 1;
    }
    case Kind::constant_item:
      return constant_value_;
    default:
      throw std::logic_error("unreachable");
  }
}

void StreamGenerator::next_row(std::span<double> out) {
  if (integer_stream_) throw std::logic_error("generator produces items, not rows");
  if (out.size() != row_width_) throw std::invalid_argument("row buffer width mismatch");
  if (kind_ == Kind::gaussian_mixture) {
    const std::size_t j = static_cast<std::size_t>(counter_++ % mixture_k_);
    for (std::size_t c = 0; c < row_width_; ++c) {
      out[c] = mixture_centers_[j * row_width_ + c] + normal();
    }
  } else {  // regression_rows
    double y = 0.0;
    for (std::size_t c = 0; c + 1 < row_width_; ++c) {
      out[c] = normal();
      y += out[c] * planted_[c];
    }
    out[row_width_ - 1] = y + noise_ * normal();
  }
}

}  // namespace axs
