// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// Exits nonzero if any criterion fails. Heavy seed sweeps parallelize over
// hardware threads; every result is a deterministic function of the fixed
// seeds below.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "axs/block_sketch.hpp"
#include "axs/coreset.hpp"
#include "axs/f2_estimator.hpp"
#include "axs/generators.hpp"
#include "axs/hashing.hpp"
#include "axs/oracles.hpp"
#include "axs/runner.hpp"

using namespace axs;

namespace {

// ---- committed calibration constants -------------------------------------
// Memory constant for criterion 4, fixed once from calibration runs.
constexpr double kCmem = 256.0;
// F2 acceptance schedule: small base block so better sketches take over
// within the tested horizon (the bound penalty 3*offset/sqrt(n) decays only
// once n ~ offset^2).
constexpr std::uint64_t kF2BaseBlock = 2;
constexpr double kF2Epsilon0 = 0.5;
constexpr double kF2Delta = 0.1;
// Criterion 6 coreset size: the g-formula saturates at n = 200 for any
// reasonable C_g, which would make the check vacuous; a forced sub-linear
// size of 100 of 200 exercises the sampler for real.
constexpr std::uint64_t kCoresetSampleSize = 100;

struct SeedStats {
  std::vector<double> bounds;    // per checkpoint, -1 when not ready
  std::vector<double> rel_errs;  // per checkpoint, -1 when unavailable
  bool covered = true;           // every finite-bound checkpoint inside the bound
};

template <typename Fn>
void parallel_for(std::size_t jobs, Fn fn) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), jobs);
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> futs;
  for (std::size_t w = 0; w < workers; ++w) {
    futs.push_back(std::async(std::launch::async, [&] {
      for (std::size_t i = next.fetch_add(1); i < jobs; i = next.fetch_add(1)) fn(i);
    }));
  }
  for (auto& f : futs) f.get();
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// ---- criterion 1 ----------------------------------------------------------
bool hash_exactness(std::string& detail) {
  const std::uint64_t p = 5;
  std::array<std::uint64_t, 5> all{0, 1, 2, 3, 4};
  int subsets = 0;
  for (int skip = 0; skip < 5; ++skip) {
    std::vector<std::uint64_t> idx;
    for (int i = 0; i < 5; ++i) {
      if (i != skip) idx.push_back(all[i]);
    }
    std::array<int, 16> sign_counts{};
    std::vector<int> value_counts(625, 0);
    std::array<std::uint64_t, 4> c{};
    for (c[0] = 0; c[0] < p; ++c[0])
      for (c[1] = 0; c[1] < p; ++c[1])
        for (c[2] = 0; c[2] < p; ++c[2])
          for (c[3] = 0; c[3] < p; ++c[3]) {
            const auto h = FourWiseHash::from_coefficients(c, p);
            int pattern = 0;
            int vcode = 0;
            for (int i = 0; i < 4; ++i) {
              const std::uint64_t v = h.poly_eval(idx[i]);
              vcode = vcode * 5 + static_cast<int>(v);
              pattern = pattern * 2 + (h.sign_at(idx[i]) == 1 ? 1 : 0);
            }
            ++sign_counts[pattern];
            ++value_counts[vcode];
          }
    for (int v : value_counts) {
      if (v != 1) return false;  // value tuples must be exactly uniform
    }
    for (int pattern = 0; pattern < 16; ++pattern) {
      int expected = 1;
      for (int b = 3; b >= 0; --b) expected *= ((pattern >> b) & 1) ? 3 : 2;
      if (sign_counts[pattern] != expected) return false;
    }
    ++subsets;
  }
  detail = std::to_string(subsets) +
           " index quadruples enumerated: value tuples exactly uniform, sign patterns at "
           "exact product counts (sign marginal bias 1/p is inherent for odd p)";
  return true;
}

// ---- criteria 2 and 3 share one set of runs -------------------------------
std::vector<SeedStats> f2_runs(std::size_t seeds, std::uint64_t n_max) {
  std::vector<SeedStats> stats(seeds);
  parallel_for(seeds, [&](std::size_t s) {
    F2Estimator::Config cfg;
    cfg.policy = F2Policy::parallel;
    cfg.universe_bound = 16;
    cfg.base_block = kF2BaseBlock;
    cfg.epsilon0 = kF2Epsilon0;
    cfg.delta = kF2Delta;
    cfg.seed = 0xace0 + s;
    F2Estimator est(cfg);
    StreamGenerator gen(GenSpec::parse("uniform-int:N=16"), 0xbeef00 + s);
    ExactCounter counter;
    SeedStats& st = stats[s];
    for (std::uint64_t i = 1; i <= n_max; ++i) {
      const std::uint64_t item = gen.next_item();
      est.insert(item);
      counter.insert(item);
      if ((i & (i - 1)) == 0 && i >= kF2BaseBlock) {
        const auto e = est.estimate();
        const double f2 = static_cast<double>(counter.f2());
        if (e.ready) {
          st.bounds.push_back(e.bound);
          const double rel = std::abs(e.value - f2) / f2;
          st.rel_errs.push_back(rel);
          if (rel > e.bound) st.covered = false;
        } else {
          st.bounds.push_back(-1.0);
          st.rel_errs.push_back(-1.0);
        }
      }
    }
  });
  return stats;
}

const std::vector<SeedStats>& shared_f2_runs() {
  static const std::vector<SeedStats> runs = f2_runs(100, std::uint64_t{1} << 18);
  return runs;
}

bool f2_coverage(std::string& detail) {
  const auto& runs = shared_f2_runs();
  int covered = 0;
  for (const auto& st : runs) covered += st.covered;
  detail = std::to_string(covered) + "/100 runs inside the bound at every finite checkpoint";
  return covered >= 90;
}

bool f2_decay(std::string& detail) {
  const auto& runs = shared_f2_runs();
  // Bounds are seed-independent (offsets and precisions are schedule-only),
  // nonincreasing at pow8 checkpoints: n = 2 * 8^j are indices 0, 3, 6, ...
  for (const auto& st : runs) {
    double last = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < st.bounds.size(); i += 3) {
      if (st.bounds[i] < 0) continue;
      if (st.bounds[i] > last + 1e-12) {
        detail = "bound increased at a pow8 checkpoint";
        return false;
      }
      last = st.bounds[i];
    }
  }
  // First checkpoint with a finite bound, shared across runs.
  std::size_t first = 0;
  while (first < runs[0].bounds.size() && runs[0].bounds[first] < 0) ++first;
  std::vector<double> first_errs, last_errs;
  for (const auto& st : runs) {
    if (st.rel_errs[first] >= 0) first_errs.push_back(st.rel_errs[first]);
    if (st.rel_errs.back() >= 0) last_errs.push_back(st.rel_errs.back());
  }
  const double med_first = median(first_errs);
  const double med_last = median(last_errs);
  detail = "median rel err " + fmt(med_first) + " at first finite checkpoint vs " +
           fmt(med_last) + " at n=2^18 (ratio " + fmt(med_last / med_first) + ")";
  return med_last < 0.5 * med_first;
}

// ---- criterion 4 ----------------------------------------------------------
bool f2_memory(std::string& detail) {
  const std::uint64_t n = std::uint64_t{1} << 20;
  const double log2n = 20.0;
  const double ln_inv_delta = std::log(1.0 / kF2Delta);
  std::array<std::uint64_t, 2> peaks{};
  parallel_for(2, [&](std::size_t which) {
    F2Estimator::Config cfg;
    cfg.policy = which == 0 ? F2Policy::parallel : F2Policy::two_sketch;
    cfg.universe_bound = 16;
    cfg.base_block = kF2BaseBlock;
    cfg.epsilon0 = kF2Epsilon0;
    cfg.delta = kF2Delta;
    cfg.seed = 0x4d + which;
    F2Estimator est(cfg);
    StreamGenerator gen(GenSpec::parse("uniform-int:N=16"), 0x11aa + which);
    for (std::uint64_t i = 0; i < n; ++i) est.insert(gen.next_item());
    est.estimate();
    peaks[which] = est.ledger().words_peak();
  });
  const double budget_parallel = kCmem * log2n * log2n * log2n * ln_inv_delta;
  const double budget_two = kCmem * log2n * log2n * ln_inv_delta;
  detail = "parallel peak " + std::to_string(peaks[0]) + " <= " + fmt(budget_parallel) +
           "; two-sketch peak " + std::to_string(peaks[1]) + " <= " + fmt(budget_two) +
           " (C_mem = " + fmt(kCmem) + ")";
  return static_cast<double>(peaks[0]) <= budget_parallel &&
         static_cast<double>(peaks[1]) <= budget_two;
}

// ---- criterion 5 ----------------------------------------------------------
bool lemma_core_exhaustive(std::string& detail) {
  std::uint64_t streams_checked = 0;
  for (int n = 1; n <= 12; ++n) {
    const int max_n1 = static_cast<int>(std::sqrt(static_cast<double>(n)));
    std::vector<int> stream(n, 0);
    while (true) {
      std::array<std::int64_t, 4> total{};
      for (int v : stream) ++total[v];
      std::int64_t norm_all = 0;
      for (int v = 0; v < 4; ++v) norm_all += total[v] * total[v];
      std::array<std::int64_t, 4> suffix = total;
      for (int n1 = 0; n1 <= max_n1; ++n1) {
        if (n1 > 0) --suffix[stream[n1 - 1]];
        std::int64_t norm_suffix = 0;
        for (int v = 0; v < 4; ++v) norm_suffix += suffix[v] * suffix[v];
        if (norm_suffix > norm_all) {
          detail = "suffix norm exceeded the full norm";
          return false;
        }
        const std::int64_t gap = norm_all - norm_suffix;
        if (static_cast<std::int64_t>(n) * gap * gap >
            9 * static_cast<std::int64_t>(n1) * n1 * norm_all * norm_all) {
          detail = "lemma lower bound violated at n=" + std::to_string(n);
          return false;
        }
      }
      ++streams_checked;
      int pos = n - 1;
      while (pos >= 0 && stream[pos] == 3) stream[pos--] = 0;
      if (pos < 0) break;
      ++stream[pos];
    }
  }
  detail = std::to_string(streams_checked) +
           " streams over [4], every split n1 <= sqrt(n), exact integer arithmetic";
  return true;
}

// ---- criterion 6 ----------------------------------------------------------
bool coreset_property(std::string& detail) {
  StreamGenerator gen(GenSpec::parse("gaussian-mixture:k=3,d=2,sep=10"), 1234);
  PointSet pts(2);
  std::vector<double> row(2);
  for (int i = 0; i < 200; ++i) {
    gen.next_row(row);
    pts.add(row, 1.0);
  }
  std::uint64_t state = 999;
  std::vector<Centers> probes;
  for (int i = 0; i < 1000; ++i) {
    Centers c{3, 2, std::vector<double>(6)};
    for (double& v : c.coords) v = 30.0 * to_unit_double(splitmix64(state)) - 15.0;
    probes.push_back(std::move(c));
  }
  std::vector<double> full_costs(probes.size());
  for (std::size_t i = 0; i < probes.size(); ++i) {
    full_costs[i] = clustering_cost(pts, probes[i], ClusterObjective::means);
  }
  std::atomic<int> good{0};
  parallel_for(100, [&](std::size_t seed) {
    const PointSet core =
        sample_coreset(pts, 3, kCoresetSampleSize, ClusterObjective::means, 77 + seed);
    double worst = 0.0;
    for (std::size_t i = 0; i < probes.size(); ++i) {
      const double approx = clustering_cost(core, probes[i], ClusterObjective::means);
      worst = std::max(worst, std::abs(approx - full_costs[i]) / full_costs[i]);
    }
    if (worst <= 0.2) ++good;
  });
  detail = std::to_string(good.load()) +
           "/100 construction seeds kept every of 1000 center-set deviations <= 0.2 "
           "(forced size 100 of 200; the g-formula caps at n here)";
  return good >= 95;
}

// ---- criterion 7 ----------------------------------------------------------
bool clustering_convergence(std::string& detail) {
  CoresetSummary::Config cfg;
  cfg.k = 3;
  cfg.dim = 2;
  cfg.epsilon0 = 0.5;
  cfg.delta = 0.1;
  cfg.size_constant = 2.0;
  cfg.seed = 4242;
  CoresetSummary summary(cfg);
  StreamGenerator gen(GenSpec::parse("gaussian-mixture:k=3,d=2,sep=10"), 2222);
  PointSet prefix(2);
  std::vector<double> row(2);
  std::vector<double> ratios;
  bool size_ok = true;
  const std::uint64_t n_max = std::uint64_t{1} << 16;
  for (std::uint64_t i = 1; i <= n_max; ++i) {
    gen.next_row(row);
    summary.insert(row);
    prefix.add(row, 1.0);
    if ((i & (i - 1)) == 0 && i >= (std::uint64_t{1} << 10)) {
      const auto solved = solve_kmeans(summary, 3, 10, 31 + i);
      const auto oracle = solve_kmeans(prefix, 3, 50, 57 + i);
      if (!solved || !oracle) return false;
      const double cost_solved = clustering_cost(prefix, solved->centers, ClusterObjective::means);
      const double cost_oracle = clustering_cost(prefix, oracle->centers, ClusterObjective::means);
      ratios.push_back(cost_solved / cost_oracle);
      const double log2n = std::log2(static_cast<double>(i));
      const double g = static_cast<double>(coreset_size_g(
          1.0 / log2n, i, cfg.k, cfg.dim, cfg.delta, cfg.size_constant));
      if (static_cast<double>(summary.summary_size()) > g * log2n) size_ok = false;
    }
  }
  bool monotone = true;
  for (std::size_t i = 1; i < ratios.size(); ++i) {
    if (ratios[i] > ratios[i - 1] * 1.05) monotone = false;
  }
  std::string rs;
  for (double r : ratios) rs += fmt(r) + " ";
  detail = "cost ratios " + rs + "; summary within g(1/log n, n) log n at every checkpoint: " +
           (size_ok ? "yes" : "no");
  return monotone && ratios.back() <= 1.1 && size_ok;
}

// ---- criterion 8 ----------------------------------------------------------
bool tiny_optimality(std::string& detail) {
  std::atomic<int> means_ok{0}, median_ok{0};
  parallel_for(50, [&](std::size_t trial) {
    std::uint64_t state = 0x8a11 + trial * 1013;
    {
      const int n = 6 + static_cast<int>(splitmix64(state) % 7);  // 6..12
      PointSet pts(2);
      for (int i = 0; i < n; ++i) {
        pts.add(std::vector<double>{to_unit_double(splitmix64(state)) * 10.0,
                                    to_unit_double(splitmix64(state)) * 10.0});
      }
      const auto oracle = optimal_clustering_tiny(pts, 2, ClusterObjective::means);
      const auto solved = solve_kmeans(pts, 2, 50, splitmix64(state));
      if (solved && solved->cost <= 1.0001 * oracle.cost + 1e-12) ++means_ok;
    }
    {
      const int n = 6 + static_cast<int>(splitmix64(state) % 5);  // 6..10
      PointSet pts(2);
      for (int i = 0; i < n; ++i) {
        pts.add(std::vector<double>{to_unit_double(splitmix64(state)) * 10.0,
                                    to_unit_double(splitmix64(state)) * 10.0});
      }
      const auto oracle = optimal_clustering_tiny(pts, 2, ClusterObjective::median);
      const auto solved = solve_kmedian(pts, 2, 50, splitmix64(state));
      if (solved && solved->cost <= 1.01 * oracle.cost + 1e-12) ++median_ok;
    }
  });
  detail = "k-means " + std::to_string(means_ok.load()) + "/50 within 1.0001x of enumeration; "
           "k-median " + std::to_string(median_ok.load()) + "/50 within 1.01x of the grid oracle";
  return means_ok == 50 && median_ok == 50;
}

// ---- criterion 9 ----------------------------------------------------------
bool geometry_lemmas(std::string& detail) {
  std::uint64_t state = 0x6e0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(splitmix64(state) % 49);
    PointSet pts(2);
    for (int i = 0; i < n; ++i) {
      pts.add(std::vector<double>{to_unit_double(splitmix64(state)) * 12.0 - 6.0,
                                  to_unit_double(splitmix64(state)) * 12.0 - 6.0});
    }
    Centers c1{2, 2, std::vector<double>(4)};
    Centers c2{2, 2, std::vector<double>(4)};
    for (double& v : c1.coords) v = to_unit_double(splitmix64(state)) * 16.0 - 8.0;
    for (double& v : c2.coords) v = to_unit_double(splitmix64(state)) * 16.0 - 8.0;
    double alpha = 0.0;
    for (std::size_t j = 0; j < c2.count; ++j) {
      double d_sq = 0.0;
      nearest_center(c2.center(j), c1, &d_sq);
      alpha = std::max(alpha, std::sqrt(d_sq));
    }
    const double nn = static_cast<double>(n);
    const double mean1 = clustering_cost(pts, c1, ClusterObjective::means);
    const double mean2 = clustering_cost(pts, c2, ClusterObjective::means);
    if (!(mean1 <= mean2 + nn * alpha * alpha + 2.0 * alpha * std::sqrt(nn * mean2))) {
      detail = "means-form shift inequality failed at trial " + std::to_string(trial);
      return false;
    }
    const double med1 = clustering_cost(pts, c1, ClusterObjective::median);
    const double med2 = clustering_cost(pts, c2, ClusterObjective::median);
    if (!(med1 <= nn * alpha + med2)) {
      detail = "median-form shift inequality failed at trial " + std::to_string(trial);
      return false;
    }
  }
  detail = "both cost-shift inequalities held on 1000 random instances, no tolerance";
  return true;
}

// ---- criterion 10 ---------------------------------------------------------
bool regression_consistency(std::string& detail) {
  std::atomic<int> good{0};
  parallel_for(100, [&](std::size_t seed) {
    std::uint64_t state = 0xc0de + seed * 7919;
    SketchSchedule sched;
    sched.mode = SketchMode::regression;
    sched.d = 4;
    sched.C = 2.0;
    sched.n0 = 64;
    BlockDiagonalSketch sk(sched, 0x77 + seed, 4, true);
    Eigen::VectorXd x0(4);
    for (int c = 0; c < 4; ++c) x0(c) = to_unit_double(splitmix64(state)) * 4.0 - 2.0;
    std::vector<double> row(4);
    for (int i = 0; i < 1024; ++i) {
      double b = 0.0;
      for (int c = 0; c < 4; ++c) {
        row[c] = to_unit_double(splitmix64(state)) * 2.0 - 1.0;
        b += row[c] * x0(c);
      }
      sk.ingest_row(row, b);
    }
    const auto sol = solve_regression(sk);
    if (!sol.rank_deficient && (sol.coefficients - x0).norm() <= 1e-8 * x0.norm()) ++good;
  });
  detail = std::to_string(good.load()) + "/100 seeds recovered the planted solution to 1e-8";
  return good == 100;
}

// ---- criterion 11 ---------------------------------------------------------
bool regression_decay(std::string& detail) {
  constexpr int kSeeds = 100;
  constexpr std::uint64_t kNMax = std::uint64_t{1} << 16;
  const std::uint64_t first_cp = std::uint64_t{1} << 10;
  std::vector<std::vector<double>> ratios(kSeeds);  // per seed, per checkpoint
  std::atomic<int> hypothesis_fail{0};
  parallel_for(kSeeds, [&](std::size_t seed) {
    SketchSchedule sched;
    sched.mode = SketchMode::regression;
    sched.d = 5;
    sched.C = 2.0;
    sched.n0 = 64;
    sched.epsilon0 = 0.5;
    sched.delta = 0.1;
    BlockDiagonalSketch sk(sched, 0x5eed + seed, 5, true);
    StreamGenerator gen(GenSpec::parse("regression-rows:d=5,noise=1"), 0xfeed + seed);
    Eigen::MatrixXd a(kNMax, 5);
    Eigen::VectorXd b(kNMax);
    std::vector<double> row(6);
    for (std::uint64_t i = 1; i <= kNMax; ++i) {
      gen.next_row(row);
      for (int c = 0; c < 5; ++c) a(i - 1, c) = row[c];
      b(i - 1) = row[5];
      sk.ingest_row(std::span<const double>(row.data(), 5), row[5]);
      if ((i & (i - 1)) == 0 && i >= first_cp) {
        const auto view_a = a.topRows(i);
        const auto view_b = b.head(i);
        // Divergence hypothesis: smallest singular value squared >= n / 4.
        if (min_singular_value_sq(view_a) < static_cast<double>(i) / 4.0) ++hypothesis_fail;
        const auto sol = solve_regression(sk);
        const auto exact = exact_least_squares(view_a, view_b);
        ratios[seed].push_back((view_a * sol.coefficients - view_b).norm() / exact.residual);
      }
    }
  });
  int runs_ok = 0;
  for (const auto& rs : ratios) {
    bool ok = true;
    for (double r : rs) ok &= r <= 1.1;
    runs_ok += ok;
  }
  const std::size_t cps = ratios[0].size();
  std::vector<double> med_excess;
  for (std::size_t c = 0; c < cps; ++c) {
    std::vector<double> ex;
    for (const auto& rs : ratios) ex.push_back(rs[c] - 1.0);
    med_excess.push_back(median(ex));
  }
  bool monotone = true;
  for (std::size_t c = 1; c < cps; ++c) {
    if (med_excess[c] > med_excess[c - 1] * 1.05 + 1e-12) monotone = false;
  }
  std::string ms;
  for (double m : med_excess) ms += fmt(m) + " ";
  detail = std::to_string(runs_ok) + "/100 runs <= 1.1 at every checkpoint; median excess " +
           ms + "; sigma_d^2 >= n/4 failures: " + std::to_string(hypothesis_fail.load());
  return runs_ok >= 90 && monotone && hypothesis_fail == 0;
}

// ---- criterion 12 ---------------------------------------------------------
bool matmul_bounds(std::string& detail) {
  std::atomic<int> fixed_ok{0};
  parallel_for(100, [&](std::size_t seed) {
    SketchSchedule sched;
    sched.mode = SketchMode::matmul;
    sched.d = 3;
    sched.d_prime = 2;
    sched.C = 8.0;
    sched.n0 = 64;
    sched.fixed_precision = true;
    sched.epsilon_fixed = 0.25;
    BlockDiagonalSketch sa(sched, 0xaa + seed, 3, false);
    BlockDiagonalSketch sb(sched, 0xaa + seed, 2, false);
    std::uint64_t state = 0x12d + seed * 31;
    Eigen::MatrixXd a(256, 3), b(256, 2);
    std::vector<double> row(3);
    for (int i = 0; i < 256; ++i) {
      for (int c = 0; c < 3; ++c) {
        a(i, c) = to_unit_double(splitmix64(state)) * 2.0 - 1.0;
        row[c] = a(i, c);
      }
      sa.ingest_row(row);
      std::vector<double> row2(2);
      for (int c = 0; c < 2; ++c) {
        b(i, c) = to_unit_double(splitmix64(state)) * 2.0 - 1.0;
        row2[c] = b(i, c);
      }
      sb.ingest_row(row2);
    }
    const Eigen::MatrixXd approx = sketched_matmul(sa, sb);
    const Eigen::MatrixXd exact = exact_matmul(a, b);
    if ((approx - exact).norm() <= 0.25 * a.norm() * b.norm()) ++fixed_ok;
  });

  // Improving mode, alpha = 1/2: per-checkpoint median error ratio must not
  // increase across pow8 checkpoints.
  constexpr int kSeeds = 100;
  const std::vector<std::uint64_t> cps{16, 128, 1024, 8192};
  std::vector<std::vector<double>> errs(kSeeds);
  parallel_for(kSeeds, [&](std::size_t seed) {
    SketchSchedule sched;
    sched.mode = SketchMode::matmul;
    sched.alpha = 0.5;
    sched.d = 3;
    sched.d_prime = 2;
    sched.C = 8.0;
    sched.n0 = 16;
    BlockDiagonalSketch sa(sched, 0xbb + seed, 3, false);
    BlockDiagonalSketch sb(sched, 0xbb + seed, 2, false);
    StreamGenerator gen(GenSpec::parse("gaussian-mixture:k=1,d=5,sep=0"), 0x9f + seed);
    const std::uint64_t n_max = cps.back();
    Eigen::MatrixXd a(n_max, 3), b(n_max, 2);
    std::vector<double> row(5);
    std::size_t cp = 0;
    for (std::uint64_t i = 1; i <= n_max; ++i) {
      gen.next_row(row);
      for (int c = 0; c < 3; ++c) a(i - 1, c) = row[c];
      for (int c = 0; c < 2; ++c) b(i - 1, c) = row[3 + c];
      sa.ingest_row(std::span<const double>(row.data(), 3));
      sb.ingest_row(std::span<const double>(row.data() + 3, 2));
      if (cp < cps.size() && i == cps[cp]) {
        const Eigen::MatrixXd approx = sketched_matmul(sa, sb);
        const auto va = a.topRows(i);
        const auto vb = b.topRows(i);
        const Eigen::MatrixXd exact = exact_matmul(va, vb);
        errs[seed].push_back((approx - exact).norm() / (va.norm() * vb.norm()));
        ++cp;
      }
    }
  });
  std::vector<double> med;
  for (std::size_t c = 0; c < cps.size(); ++c) {
    std::vector<double> col;
    for (const auto& e : errs) col.push_back(e[c]);
    med.push_back(median(col));
  }
  bool monotone = true;
  for (std::size_t c = 1; c < med.size(); ++c) monotone &= med[c] <= med[c - 1];
  std::string ms;
  for (double m : med) ms += fmt(m) + " ";
  detail = "fixed mode " + std::to_string(fixed_ok.load()) +
           "/100 inside 0.25 ||A|| ||B||; improving-mode median ratios " + ms;
  return fixed_ok >= 90 && monotone;
}

// ---- criterion 13 ---------------------------------------------------------
bool block_diagonal_exactness(std::string& detail) {
  SketchSchedule sched;
  sched.mode = SketchMode::subspace;
  sched.d = 3;
  sched.C = 2.0;
  sched.n0 = 32;
  BlockDiagonalSketch state(sched, 0xd1a6, 3, false);
  std::uint64_t rng = 0x200;
  Eigen::MatrixXd a(200, 3);
  std::vector<double> row(3);
  for (int i = 0; i < 200; ++i) {
    for (int c = 0; c < 3; ++c) {
      a(i, c) = to_unit_double(splitmix64(rng)) * 2.0 - 1.0;
      row[c] = a(i, c);
    }
    state.ingest_row(row);
  }
  const auto infos = state.blocks_info();
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(state.image_rows(), 3);
  std::size_t r0 = 0;
  Eigen::Index stream_row = 0;
  for (const auto& info : infos) {
    const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(info.sketch_rows));
    for (std::uint64_t j = 0; j < info.filled; ++j, ++stream_row) {
      for (std::size_t r = 0; r < info.sketch_rows; ++r) {
        const double sgn = state.block_sign(info.index, r, j) * inv_sqrt_m;
        for (Eigen::Index c = 0; c < 3; ++c) dense(r0 + r, c) += sgn * a(stream_row, c);
      }
    }
    r0 += info.sketch_rows;
  }
  const Eigen::MatrixXd streamed = state.sketched_matrix();
  for (Eigen::Index i = 0; i < streamed.rows(); ++i) {
    for (Eigen::Index c = 0; c < 3; ++c) {
      if (streamed(i, c) != dense(i, c)) {
        detail = "bit mismatch at image row " + std::to_string(i);
        return false;
      }
    }
  }
  detail = "streamed image equals dense diag(S_1,...,S_l) A bit for bit across " +
           std::to_string(infos.size()) + " blocks";
  return true;
}

// ---- criterion 14 ---------------------------------------------------------
bool reproducibility(std::string& detail) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path();
  const fs::path out1 = dir / "axs_accept_run1.jsonl";
  const fs::path out2 = dir / "axs_accept_run2.jsonl";
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  };

  bool via_cli = false;
  if (const char* cli = std::getenv("STREAM_CLI")) {
    const std::string base = std::string(cli) +
        " --task f2 --gen uniform-int:N=16 --n 16384 --n0 2 --seed 7 --out ";
    if (std::system((base + out1.string()).c_str()) == 0 &&
        std::system((base + out2.string()).c_str()) == 0) {
      via_cli = true;
    }
  }
  if (!via_cli) {
    RunConfig cfg;
    cfg.task = "f2";
    cfg.gen_spec = "uniform-int:N=16";
    cfg.n_max = 16384;
    cfg.n0 = 2;
    cfg.seed = 7;
    cfg.out_path = out1.string();
    run_experiment(cfg);
    cfg.out_path = out2.string();
    run_experiment(cfg);
  }
  const std::string a = slurp(out1);
  const std::string b = slurp(out2);
  fs::remove(out1);
  fs::remove(out2);
  if (a.empty() || a != b) {
    detail = "trajectory files differ between invocations";
    return false;
  }
  detail = std::string("two ") + (via_cli ? "CLI" : "library") +
           " invocations produced byte-identical trajectories (" +
           std::to_string(a.size()) + " bytes)";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "hash-exactness", hash_exactness},
      {2, "f2-coverage", f2_coverage},
      {3, "f2-decay", f2_decay},
      {4, "f2-memory", f2_memory},
      {5, "lemma-core-exhaustive", lemma_core_exhaustive},
      {6, "coreset-property", coreset_property},
      {7, "clustering-convergence", clustering_convergence},
      {8, "tiny-instance-optimality", tiny_optimality},
      {9, "geometry-lemmas", geometry_lemmas},
      {10, "regression-consistency", regression_consistency},
      {11, "regression-decay", regression_decay},
      {12, "matmul-bound", matmul_bounds},
      {13, "block-diagonal-exactness", block_diagonal_exactness},
      {14, "reproducibility", reproducibility},
  };

  bool all_ok = true;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %02d %s: %s (%.1fs)\n", ok ? "PASS" : "FAIL", c.id, c.name,
                detail.c_str(), secs);
    std::fflush(stdout);
    all_ok &= ok;
  }
  return all_ok ? 0 : 1;
}
