#include "axs/f2_estimator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace axs {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

F2Estimator::F2Estimator(Config cfg) : cfg_(cfg) {
  if (cfg_.epsilon0 <= 0.0 || cfg_.epsilon0 >= 0.5 + 1e-12 || cfg_.delta <= 0.0 ||
      cfg_.delta >= 0.5) {
    throw std::invalid_argument("epsilon0 and delta must lie in (0, 1/2)");
  }
  if (cfg_.base_block == 0) throw std::invalid_argument("base_block must be positive");
  if (cfg_.universe_bound == 0 || cfg_.universe_bound >= cfg_.prime_modulus) {
    throw std::invalid_argument("universe bound must satisfy 0 < N < hash modulus");
  }
  // Buffer capacity words are charged up front: two words per slot.
  ledger_.allocate(2 * static_cast<std::uint64_t>(cfg_.pending_capacity));
  spawn(0);
  if (cfg_.policy == F2Policy::parallel) {
    next_step_ = 1;
    next_spawn_at_ = spawn_threshold(1, cfg_.base_block) - cfg_.base_block;  // n0 * (2^1 - 1)
  }
}

std::uint64_t F2Estimator::spawn_threshold(std::uint32_t step, std::uint64_t n0) {
  if (n0 == 0) throw std::invalid_argument("n0 must be positive");
  if (step >= 64 || n0 > (std::numeric_limits<std::uint64_t>::max() >> step)) {
    throw std::overflow_error("spawn threshold saturates the word size");
  }
  return n0 << step;
}

double F2Estimator::error_bound(double precision, std::uint64_t start_offset, std::uint64_t n) {
  if (n == 0) throw std::logic_error("error bound undefined for an empty stream");
  // Precondition n1 <= sqrt(n), checked exactly: offset^2 > n iff
  // offset > floor(n / offset).
  if (start_offset > 0 && start_offset > n / start_offset) return kInf;
  return precision + 3.0 * static_cast<double>(start_offset) / std::sqrt(static_cast<double>(n));
}

double F2Estimator::precision_for_step(std::uint32_t step) const {
  return cfg_.epsilon0 / static_cast<double>(std::max<std::uint32_t>(1, step));
}

std::size_t F2Estimator::rows_for_step(std::uint32_t step) const {
  const double eff = static_cast<double>(std::max<std::uint32_t>(1, step));
  const double eps = cfg_.epsilon0 / eff;
  const double delta_i = cfg_.delta / (2.0 * eff * eff);
  const double rows = std::ceil(cfg_.rows_constant / (eps * eps) * std::log(2.0 / delta_i));
  return static_cast<std::size_t>(std::max(1.0, rows));
}

void F2Estimator::spawn(std::uint32_t step) {
  std::uint64_t seed_state = cfg_.seed + 0x51ed2701u * (static_cast<std::uint64_t>(step) + 1);
  const std::uint64_t sketch_seed = splitmix64(seed_state);
  active_.push_back(ManagedSketch{
      SignSketch(sketch_seed, rows_for_step(step), 1, cfg_.prime_modulus, &ledger_),
      items_total_, precision_for_step(step), step});
  ++spawn_count_;
}

std::uint32_t F2Estimator::step_for_offset(std::uint64_t offset) const {
  if (offset < cfg_.base_block) return 0;
  const std::uint64_t q = offset / cfg_.base_block;
  return static_cast<std::uint32_t>(std::bit_width(q));  // floor(log2(q)) + 1
}

void F2Estimator::maybe_spawn_companion() {
  if (active_.size() >= 2) return;
  const std::uint32_t candidate = step_for_offset(items_total_);
  double best_live = kInf;
  std::uint32_t max_step = 0;
  for (const auto& ms : active_) {
    best_live = std::min(best_live, ms.precision);
    max_step = std::max(max_step, ms.spawn_step);
  }
  if (candidate > max_step && precision_for_step(candidate) < best_live) {
    flush();
    spawn(candidate);
  }
}

void F2Estimator::insert(std::uint64_t item) {
  if (item == 0 || item > cfg_.universe_bound) {
    throw std::out_of_range("item " + std::to_string(item) + " outside universe [1, " +
                            std::to_string(cfg_.universe_bound) + "]");
  }
  ++items_total_;
  ++pending_[item];
  if (pending_.size() >= cfg_.pending_capacity) flush();

  if (cfg_.policy == F2Policy::parallel) {
    if (items_total_ == next_spawn_at_) {
      flush();
      spawn(next_step_);
      prune();
      ++next_step_;
      // Next boundary is n0 * (2^next_step - 1); saturate instead of wrapping.
      if (next_step_ < 63 &&
          cfg_.base_block <= (std::numeric_limits<std::uint64_t>::max() >> (next_step_ + 1))) {
        next_spawn_at_ = (cfg_.base_block << next_step_) - cfg_.base_block;
      } else {
        next_spawn_at_ = std::numeric_limits<std::uint64_t>::max();
      }
    }
  } else {
    prune();
    maybe_spawn_companion();
  }
}

void F2Estimator::flush() {
  if (pending_.empty()) return;
  std::vector<std::uint64_t> items;
  std::vector<double> weights;
  items.reserve(pending_.size());
  weights.reserve(pending_.size());
  for (const auto& [item, count] : pending_) {
    items.push_back(item);
    weights.push_back(static_cast<double>(count));
  }
  for (auto& ms : active_) ms.sketch.update_batch(items, weights);
  pending_.clear();
}

void F2Estimator::prune() {
  if (items_total_ == 0 || active_.size() < 2) return;
  const std::uint64_t n = items_total_;
  std::vector<double> bounds(active_.size());
  for (std::size_t i = 0; i < active_.size(); ++i) bounds[i] = error_bound(active_[i], n);
  std::vector<ManagedSketch> kept;
  kept.reserve(active_.size());
  for (std::size_t i = 0; i < active_.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < active_.size(); ++j) {
      if (active_[j].spawn_step > active_[i].spawn_step && bounds[j] < bounds[i]) {
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(std::move(active_[i]));
  }
  active_ = std::move(kept);
}

F2Estimate F2Estimator::estimate() {
  flush();
  F2Estimate out;
  out.bound = kInf;
  if (items_total_ == 0) return out;
  const ManagedSketch* best = nullptr;
  double best_bound = kInf;
  for (const auto& ms : active_) {
    const double b = error_bound(ms, items_total_);
    if (!std::isfinite(b)) continue;
    // Ties go to the sketch covering more items (smaller start offset),
    // then to the earlier schedule step.
    const bool better =
        b < best_bound ||
        (b == best_bound && best != nullptr &&
         (ms.start_offset < best->start_offset ||
          (ms.start_offset == best->start_offset && ms.spawn_step < best->spawn_step)));
    if (best == nullptr || better) {
      best = &ms;
      best_bound = b;
    }
  }
  if (best == nullptr) return out;  // stream too short for any finite bound
  out.value = best->sketch.norm_sq();
  out.bound = best_bound;
  out.ready = true;
  return out;
}

}  // namespace axs
