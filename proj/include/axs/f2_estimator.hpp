#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "axs/memory_ledger.hpp"
#include "axs/sign_sketch.hpp"

namespace axs {

enum class F2Policy { two_sketch, parallel };

// One live sketch plus the metadata needed to score it: how many stream
// items were discarded before it began and the precision it was sized for.
struct ManagedSketch {
  SignSketch sketch;
  std::uint64_t start_offset = 0;  // items seen by the estimator before this sketch began
  double precision = 0.0;          // epsilon0 / max(1, spawn_step)
  std::uint32_t spawn_step = 0;
};

struct F2Estimate {
  double value = 0.0;
  double bound = 0.0;
  bool ready = false;
};

// Second-frequency-moment estimator whose reported error bound shrinks as
// the stream grows. The parallel policy keeps a geometric ladder of sketches
// with improving precisions; the two-sketch policy keeps at most two and
// replaces the old one once the young one's bound wins.
//
// Updates are batched in a small exact count buffer and flushed to the live
// sketches at schedule boundaries and queries; sketch state stays a pure
// function of the stream prefix.
class F2Estimator {
 public:
  struct Config {
    F2Policy policy = F2Policy::parallel;
    std::uint64_t universe_bound = (std::uint64_t{1} << 31) - 2;  // N
    std::uint64_t base_block = 64;                                // n0
    double epsilon0 = 0.5;
    double delta = 0.1;
    double rows_constant = 8.0;  // C in m = ceil(C / eps^2 * ln(2 / delta_i))
    std::uint64_t seed = 1;
    std::size_t pending_capacity = 1024;
    std::uint64_t prime_modulus = kMersenne31;
  };

  explicit F2Estimator(Config cfg);

  // Throws std::out_of_range unless 1 <= item <= universe_bound.
  void insert(std::uint64_t item);

  // Estimate plus Lemma bound of the best live sketch. Not ready (bound
  // +inf) while no sketch has a finite bound, i.e. on an empty stream.
  F2Estimate estimate();

  // Drops every sketch whose bound is beaten by a strictly younger one.
  void prune();

  std::uint64_t items_total() const { return items_total_; }
  std::size_t active_count() const { return active_.size(); }
  const std::vector<ManagedSketch>& active() const { return active_; }
  const MemoryLedger& ledger() const { return ledger_; }
  const Config& config() const { return cfg_; }

  // 2^step * n0; throws std::overflow_error when it does not fit in 64 bits.
  static std::uint64_t spawn_threshold(std::uint32_t step, std::uint64_t n0);

  // precision + 3 * start_offset / sqrt(n); +inf when start_offset > sqrt(n).
  // Throws std::logic_error when n == 0.
  static double error_bound(double precision, std::uint64_t start_offset, std::uint64_t n);
  static double error_bound(const ManagedSketch& ms, std::uint64_t n) {
    return error_bound(ms.precision, ms.start_offset, n);
  }

  void flush();  // applies buffered counts to every live sketch

 private:
  void spawn(std::uint32_t step);
  void maybe_spawn_companion();
  std::uint32_t step_for_offset(std::uint64_t offset) const;
  std::size_t rows_for_step(std::uint32_t step) const;
  double precision_for_step(std::uint32_t step) const;

  Config cfg_;
  MemoryLedger ledger_;
  std::vector<ManagedSketch> active_;
  std::map<std::uint64_t, std::uint64_t> pending_;  // item -> count since last flush
  std::uint64_t items_total_ = 0;
  std::uint32_t next_step_ = 0;          // parallel: next schedule index to spawn
  std::uint64_t next_spawn_at_ = 0;      // parallel: items_total that triggers it
  std::uint64_t spawn_count_ = 0;
};

}  // namespace axs
