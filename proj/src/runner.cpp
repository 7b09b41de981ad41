#include "axs/runner.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "axs/block_sketch.hpp"
#include "axs/coreset.hpp"
#include "axs/f2_estimator.hpp"
#include "axs/generators.hpp"
#include "axs/oracles.hpp"

namespace axs {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t state = seed ^ (0x6a09e667f3bcc909ULL + salt);
  return splitmix64(state);
}

class Stopwatch {
 public:
  std::uint64_t ns() const {
    return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(
                                          std::chrono::steady_clock::now() - start_)
                                          .count());
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void write_records(const RunConfig& cfg, const std::vector<TrajectoryRecord>& recs) {
  if (cfg.out_path.empty()) return;
  std::ofstream out(cfg.out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + cfg.out_path);
  out << to_json_lines(recs);
}

void set_rel_err(TrajectoryRecord& rec) {
  if (rec.value && rec.oracle && *rec.oracle > 0.0) {
    rec.rel_err = std::abs(*rec.value - *rec.oracle) / *rec.oracle;
  }
}

StreamGenerator make_generator(const RunConfig& cfg) {
  if (cfg.gen_spec.empty()) throw std::invalid_argument("task needs --gen or --input");
  return StreamGenerator(GenSpec::parse(cfg.gen_spec), mix_seed(cfg.seed, 0x67e55044));
}

std::vector<TrajectoryRecord> run_f2(const RunConfig& cfg) {
  const auto checkpoints = build_checkpoints(cfg.n0, cfg.n_max, cfg.checkpoints);
  F2Estimator::Config est_cfg;
  est_cfg.policy = cfg.policy == "two_sketch" ? F2Policy::two_sketch : F2Policy::parallel;
  est_cfg.base_block = cfg.n0;
  est_cfg.epsilon0 = cfg.epsilon0;
  est_cfg.delta = cfg.delta;
  est_cfg.rows_constant = cfg.sketch_constant;
  est_cfg.seed = mix_seed(cfg.seed, 0xf2);

  std::vector<std::uint64_t> items;
  StreamGenerator* gen = nullptr;
  std::optional<StreamGenerator> gen_storage;
  if (!cfg.input_path.empty()) {
    items = parse_items(cfg.input_path);
  } else {
    gen_storage.emplace(make_generator(cfg));
    gen = &*gen_storage;
    est_cfg.universe_bound = std::max<std::uint64_t>(gen->universe(), 1);
  }

  F2Estimator est(est_cfg);
  ExactCounter counter;
  Stopwatch watch;
  std::vector<TrajectoryRecord> recs;
  std::size_t next_cp = 0;
  const std::uint64_t total = gen ? cfg.n_max : items.size();
  for (std::uint64_t i = 0; i < total && next_cp < checkpoints.size(); ++i) {
    const std::uint64_t item = gen ? gen->next_item() : items[i];
    est.insert(item);
    if (cfg.oracle && est.items_total() <= cfg.oracle_cap) counter.insert(item);
    if (est.items_total() == checkpoints[next_cp]) {
      TrajectoryRecord rec;
      rec.n = est.items_total();
      const F2Estimate e = est.estimate();
      if (e.ready) {
        rec.value = e.value;
        rec.bound = e.bound;
      }
      if (cfg.oracle && rec.n <= cfg.oracle_cap) {
        rec.oracle = static_cast<double>(counter.f2());
      }
      set_rel_err(rec);
      rec.mem_words = est.ledger().words_live();
      if (cfg.timing) rec.elapsed_ns = watch.ns();
      recs.push_back(rec);
      ++next_cp;
    }
  }
  return recs;
}

std::vector<TrajectoryRecord> run_cluster(const RunConfig& cfg) {
  const auto checkpoints = build_checkpoints(cfg.n0, cfg.n_max, cfg.checkpoints);
  const ClusterObjective objective =
      cfg.mode == "median" ? ClusterObjective::median : ClusterObjective::means;

  CoresetSummary::Config sum_cfg;
  sum_cfg.k = cfg.k;
  sum_cfg.dim = cfg.d;
  sum_cfg.epsilon0 = cfg.epsilon0;
  sum_cfg.delta = cfg.delta;
  sum_cfg.size_constant = cfg.coreset_constant;
  sum_cfg.seed = mix_seed(cfg.seed, 0xc0);
  sum_cfg.objective = objective;

  std::vector<std::vector<double>> rows;
  StreamGenerator* gen = nullptr;
  std::optional<StreamGenerator> gen_storage;
  if (!cfg.input_path.empty()) {
    rows = parse_rows(cfg.input_path, cfg.d);
  } else {
    gen_storage.emplace(make_generator(cfg));
    gen = &*gen_storage;
    if (gen->row_width() != cfg.d) {
      throw std::invalid_argument("generator width does not match --d");
    }
  }

  CoresetSummary summary(sum_cfg);
  PointSet prefix(cfg.d);  // oracle-side copy, capped
  std::vector<double> row(cfg.d);
  Stopwatch watch;
  std::vector<TrajectoryRecord> recs;
  std::size_t next_cp = 0;
  const std::uint64_t total = gen ? cfg.n_max : rows.size();
  for (std::uint64_t i = 0; i < total && next_cp < checkpoints.size(); ++i) {
    if (gen) {
      gen->next_row(row);
    } else {
      row = rows[i];
    }
    summary.insert(row);
    if (cfg.oracle && summary.points_total() <= cfg.oracle_cap) prefix.add(row, 1.0);
    if (summary.points_total() == checkpoints[next_cp]) {
      TrajectoryRecord rec;
      rec.n = summary.points_total();
      const auto solved =
          solve_clustering(summary.sealed_points(), cfg.k, cfg.restarts,
                           mix_seed(cfg.seed, 0x50 + next_cp), objective);
      const bool oracle_ok = cfg.oracle && rec.n <= cfg.oracle_cap;
      if (solved) {
        rec.value = oracle_ok ? clustering_cost(prefix, solved->centers, objective)
                              : solved->cost;
      }
      if (solved && oracle_ok) {
        const auto ref = solve_clustering(prefix, cfg.k, 50,
                                          mix_seed(cfg.seed, 0x0c0 + next_cp), objective);
        if (ref) rec.oracle = clustering_cost(prefix, ref->centers, objective);
      }
      set_rel_err(rec);
      rec.mem_words = summary.ledger().words_live();
      if (cfg.timing) rec.elapsed_ns = watch.ns();
      recs.push_back(rec);
      ++next_cp;
    }
  }
  return recs;
}

std::vector<TrajectoryRecord> run_regress(const RunConfig& cfg) {
  const auto checkpoints = build_checkpoints(cfg.n0, cfg.n_max, cfg.checkpoints);
  SketchSchedule sched;
  sched.mode = SketchMode::regression;
  sched.epsilon0 = cfg.epsilon0;
  sched.delta = cfg.delta;
  sched.d = cfg.d;
  sched.C = cfg.sched_constant;
  sched.n0 = cfg.n0;

  std::vector<std::vector<double>> rows;
  StreamGenerator* gen = nullptr;
  std::optional<StreamGenerator> gen_storage;
  if (!cfg.input_path.empty()) {
    rows = parse_rows(cfg.input_path, cfg.d + 1);
  } else {
    gen_storage.emplace(make_generator(cfg));
    gen = &*gen_storage;
    if (gen->row_width() != cfg.d + 1) {
      throw std::invalid_argument("generator width does not match --d features plus target");
    }
  }

  MemoryLedger ledger;
  BlockDiagonalSketch state(sched, mix_seed(cfg.seed, 0x4e), cfg.d, true, &ledger);
  const std::uint64_t total = gen ? cfg.n_max : rows.size();
  const std::uint64_t cap = std::min<std::uint64_t>(cfg.oracle_cap, total);
  Eigen::MatrixXd a_prefix;
  Eigen::VectorXd b_prefix;
  if (cfg.oracle) {
    a_prefix.resize(cap, cfg.d);
    b_prefix.resize(cap);
  }
  std::vector<double> row(cfg.d + 1);
  Stopwatch watch;
  std::vector<TrajectoryRecord> recs;
  std::size_t next_cp = 0;
  for (std::uint64_t i = 0; i < total && next_cp < checkpoints.size(); ++i) {
    if (gen) {
      gen->next_row(row);
    } else {
      row = rows[i];
    }
    state.ingest_row(std::span<const double>(row.data(), cfg.d), row[cfg.d]);
    if (cfg.oracle && i < cap) {
      for (std::size_t c = 0; c < cfg.d; ++c) a_prefix(i, c) = row[c];
      b_prefix(i) = row[cfg.d];
    }
    if (state.rows_total() == checkpoints[next_cp]) {
      TrajectoryRecord rec;
      rec.n = state.rows_total();
      if (state.sealed_blocks() > 0 && state.image_rows() >= cfg.d) {
        const RegressionSolution sol = solve_regression(state);
        const bool oracle_ok = cfg.oracle && rec.n <= cfg.oracle_cap;
        if (oracle_ok) {
          const auto a_view = a_prefix.topRows(rec.n);
          const auto b_view = b_prefix.head(rec.n);
          rec.value = (a_view * sol.coefficients - b_view).norm();
          rec.oracle = exact_least_squares(a_view, b_view).residual;
        } else {
          rec.value = sol.sketched_residual;
        }
      }
      set_rel_err(rec);
      rec.mem_words = ledger.words_live();
      if (cfg.timing) rec.elapsed_ns = watch.ns();
      recs.push_back(rec);
      ++next_cp;
    }
  }
  return recs;
}

std::vector<TrajectoryRecord> run_matmul(const RunConfig& cfg) {
  const auto checkpoints = build_checkpoints(cfg.n0, cfg.n_max, cfg.checkpoints);
  SketchSchedule sched;
  sched.mode = SketchMode::matmul;
  sched.epsilon0 = cfg.epsilon0;
  sched.delta = cfg.delta;
  sched.alpha = cfg.alpha;
  sched.d = cfg.d;
  sched.d_prime = cfg.d_prime;
  sched.C = cfg.sched_constant;
  sched.n0 = cfg.n0;
  if (cfg.mode == "fixed") {
    sched.fixed_precision = true;
    sched.epsilon_fixed = cfg.epsilon_fixed;
  }

  const std::size_t width = cfg.d + cfg.d_prime;
  std::vector<std::vector<double>> rows;
  StreamGenerator* gen = nullptr;
  std::optional<StreamGenerator> gen_storage;
  if (!cfg.input_path.empty()) {
    rows = parse_rows(cfg.input_path, width);
  } else {
    gen_storage.emplace(make_generator(cfg));
    gen = &*gen_storage;
    if (gen->row_width() != width) {
      throw std::invalid_argument("generator width must equal d + d'");
    }
  }

  MemoryLedger ledger;
  const std::uint64_t shared_seed = mix_seed(cfg.seed, 0x3a);
  BlockDiagonalSketch state_a(sched, shared_seed, cfg.d, false, &ledger);
  BlockDiagonalSketch state_b(sched, shared_seed, cfg.d_prime, false, &ledger);

  const std::uint64_t total = gen ? cfg.n_max : rows.size();
  const std::uint64_t cap = std::min<std::uint64_t>(cfg.oracle_cap, total);
  Eigen::MatrixXd a_prefix, b_prefix;
  if (cfg.oracle) {
    a_prefix.resize(cap, cfg.d);
    b_prefix.resize(cap, cfg.d_prime);
  }
  double a_norm_sq = 0.0, b_norm_sq = 0.0;
  std::vector<double> row(width);
  Stopwatch watch;
  std::vector<TrajectoryRecord> recs;
  std::size_t next_cp = 0;
  for (std::uint64_t i = 0; i < total && next_cp < checkpoints.size(); ++i) {
    if (gen) {
      gen->next_row(row);
    } else {
      row = rows[i];
    }
    std::span<const double> a_row(row.data(), cfg.d);
    std::span<const double> b_row(row.data() + cfg.d, cfg.d_prime);
    state_a.ingest_row(a_row);
    state_b.ingest_row(b_row);
    for (double v : a_row) a_norm_sq += v * v;
    for (double v : b_row) b_norm_sq += v * v;
    if (cfg.oracle && i < cap) {
      for (std::size_t c = 0; c < cfg.d; ++c) a_prefix(i, c) = a_row[c];
      for (std::size_t c = 0; c < cfg.d_prime; ++c) b_prefix(i, c) = b_row[c];
    }
    if (state_a.rows_total() == checkpoints[next_cp]) {
      TrajectoryRecord rec;
      rec.n = state_a.rows_total();
      const Eigen::MatrixXd approx = sketched_matmul(state_a, state_b);
      rec.value = approx.norm();
      if (sched.fixed_precision) {
        rec.bound = sched.epsilon_fixed * std::sqrt(a_norm_sq * b_norm_sq);
      }
      if (cfg.oracle && rec.n <= cfg.oracle_cap) {
        rec.oracle = exact_matmul(a_prefix.topRows(rec.n), b_prefix.topRows(rec.n)).norm();
      }
      set_rel_err(rec);
      rec.mem_words = ledger.words_live();
      if (cfg.timing) rec.elapsed_ns = watch.ns();
      recs.push_back(rec);
      ++next_cp;
    }
  }
  return recs;
}

}  // namespace

void validate(const RunConfig& cfg) {
  // Inclusive upper end: the default schedules start at epsilon0 = 1/2.
  if (!(cfg.epsilon0 > 0.0 && cfg.epsilon0 <= 0.5) || !(cfg.delta > 0.0 && cfg.delta < 0.5)) {
    throw std::invalid_argument("epsilon0 must lie in (0, 1/2] and delta in (0, 1/2)");
  }
  if (cfg.n0 == 0) throw std::invalid_argument("n0 must be positive");
  if (cfg.k == 0 || cfg.d == 0) throw std::invalid_argument("k and d must be positive");
  if (cfg.checkpoints != "pow2" && cfg.checkpoints != "pow8") {
    throw std::invalid_argument("checkpoints must be pow2 or pow8");
  }
}

std::vector<std::uint64_t> build_checkpoints(std::uint64_t n0, std::uint64_t n_max,
                                             const std::string& schedule) {
  const std::uint64_t base = schedule == "pow8" ? 8 : 2;
  std::vector<std::uint64_t> out;
  std::uint64_t cp = n0;
  while (cp <= n_max) {
    out.push_back(cp);
    if (cp > n_max / base) break;
    cp *= base;
  }
  return out;
}

std::vector<TrajectoryRecord> run_experiment(const RunConfig& cfg) {
  validate(cfg);
  std::vector<TrajectoryRecord> recs;
  if (cfg.task == "f2") {
    recs = run_f2(cfg);
  } else if (cfg.task == "cluster") {
    recs = run_cluster(cfg);
  } else if (cfg.task == "regress") {
    recs = run_regress(cfg);
  } else if (cfg.task == "matmul") {
    recs = run_matmul(cfg);
  } else {
    throw std::invalid_argument("unknown experiment task '" + cfg.task + "'");
  }
  write_records(cfg, recs);
  return recs;
}

std::vector<std::uint64_t> parse_items(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file " + path);
  std::vector<std::uint64_t> items;
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      std::size_t used = 0;
      const std::uint64_t v = std::stoull(line, &used);
      if (used != line.size() || v == 0) throw std::invalid_argument("not a positive integer");
      items.push_back(v);
    } catch (const std::exception&) {
      throw ParseError("malformed item '" + line + "'", lineno);
    }
  }
  return items;
}

std::vector<std::vector<double>> parse_rows(const std::string& path, std::size_t width) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw ParseError("malformed value '" + cell + "'", lineno);
      }
    }
    if (row.size() != width) {
      throw ParseError("expected " + std::to_string(width) + " values, got " +
                           std::to_string(row.size()),
                       lineno);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void run_generate(const RunConfig& cfg) {
  if (cfg.out_path.empty()) throw std::invalid_argument("gen task needs --out");
  StreamGenerator gen = make_generator(cfg);
  std::ofstream out(cfg.out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + cfg.out_path);
  out.precision(17);
  if (gen.integer_stream()) {
    for (std::uint64_t i = 0; i < cfg.n_max; ++i) out << gen.next_item() << '\n';
  } else {
    std::vector<double> row(gen.row_width());
    for (std::uint64_t i = 0; i < cfg.n_max; ++i) {
      gen.next_row(row);
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out << ',';
        out << row[c];
      }
      out << '\n';
    }
  }
}

std::string run_oracle(const RunConfig& cfg) {
  if (cfg.input_path.empty()) throw std::invalid_argument("oracle task needs --input");
  nlohmann::ordered_json j;
  if (cfg.mode == "f2") {
    const auto items = parse_items(cfg.input_path);
    j["f2"] = exact_f2(items);
  } else if (cfg.mode == "lsq") {
    const auto rows = parse_rows(cfg.input_path, cfg.d + 1);
    Eigen::MatrixXd a(rows.size(), cfg.d);
    Eigen::VectorXd b(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t c = 0; c < cfg.d; ++c) a(i, c) = rows[i][c];
      b(i) = rows[i][cfg.d];
    }
    const auto sol = exact_least_squares(a, b);
    j["residual"] = sol.residual;
    j["coefficients"] = std::vector<double>(sol.coefficients.data(),
                                            sol.coefficients.data() + sol.coefficients.size());
  } else {
    throw std::invalid_argument("oracle mode must be f2 or lsq");
  }
  return j.dump();
}

}  // namespace axs
