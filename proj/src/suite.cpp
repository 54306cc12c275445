#include "circdiv/suite.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <random>
#include <set>

#include "circdiv/error_terms.hpp"
#include "circdiv/exp_sums.hpp"
#include "circdiv/exponents.hpp"
#include "circdiv/first_spacing.hpp"
#include "circdiv/lattice_cache.hpp"
#include "circdiv/second_spacing.hpp"

namespace circdiv {

namespace {

bool selected(const ExperimentConfig& cfg, const std::string& sub) {
  return cfg.command == "verify-all" || cfg.command == sub;
}

// Builds one table while forwarding each row to the callback.
struct Emitter {
  Table t;
  const RowCallback& cb;
  void row(std::vector<double> r) {
    if (cb) cb(t.name, r);
    t.add_row(std::move(r));
  }
};

std::vector<std::uint64_t> log_grid(std::uint64_t lo, std::uint64_t hi, std::size_t n) {
  std::set<std::uint64_t> xs;
  const double a = std::log(static_cast<double>(lo)), b = std::log(static_cast<double>(hi));
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    xs.insert(static_cast<std::uint64_t>(std::llround(std::exp(a + t * (b - a)))));
  }
  return {xs.begin(), xs.end()};
}

Table error_terms_sweep(const ExperimentConfig& cfg, const RowCallback& cb, SweepNotes* notes) {
  Emitter e{{"error_terms_sweep",
             {"X", "divisor_sum", "delta", "lattice_count", "r_error", "delta_over_sqrtX", "r_error_over_hardy"},
             {}},
            cb};
  const auto xs = log_grid(cfg.xmin, cfg.xmax, cfg.points);
  std::vector<std::int64_t> lat;
  if (!cfg.cache.empty()) {
    LatticeCache cache(cfg.cache);
    std::mt19937_64 rng(cfg.seed);
    cache.spot_check(rng, 10);
    lat = cache.counts(xs);
    const std::size_t after = cache.spot_check(rng, 10);
    if (notes) {
      notes->cache_used = true;
      notes->cache_mismatches += after;
      notes->warnings.insert(notes->warnings.end(), cache.warnings().begin(), cache.warnings().end());
    }
  } else {
    for (auto X : xs) lat.push_back(lattice_count(X));
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const std::uint64_t X = xs[i];
    const double x = static_cast<double>(X);
    const double re = static_cast<double>(lat[i]) - static_cast<double>(kPi) * x;
    e.row({x, static_cast<double>(divisor_sum(X)), delta(X), static_cast<double>(lat[i]), re, delta(X) / std::sqrt(x),
           re / std::pow(x * std::log(x), 0.25)});
  }
  return e.t;
}

Table exponent_curve(const ExperimentConfig& cfg, const RowCallback& cb) {
  Emitter e{{"exponent_curve", {"x", "f", "g", "f_plus_x"}, {}}, cb};
  for (const auto& r : export_curve(cfg.grid)) e.row({r.x, r.f, r.g, r.f_plus_x});
  return e.t;
}

Table exponent_grid(const ExperimentConfig& cfg, const RowCallback& cb) {
  Emitter e{{"exponent_grid", {"x", "q", "E", "corollary", "identity_residual", "ineq1", "ineq2"}, {}}, cb};
  const auto xs = ExponentGrid::admissible(std::max<std::size_t>(cfg.points, 2)).samples();
  for (double x : xs) {
    const double q = q_of_x(x);
    e.row({x, q, exponent_final(x), corollary_exponent(x), q > 4.0 + 1e-6 ? algebra_identity(x) : 0.0,
           check_ineq_1(x) ? 1.0 : 0.0, check_ineq_2(x) ? 1.0 : 0.0});
  }
  return e.t;
}

Table expsum_sweep(const ExperimentConfig&, const RowCallback& cb) {
  Emitter e{{"expsum_sweep",
             {"H", "M", "T", "q", "abs_S", "simple_bound", "final_bound", "case_code", "degenerate"},
             {}},
            cb};
  const double th = theta_star_value();
  for (double T : {1e6, 1e7, 1e8}) {
    const double M = std::floor(std::pow(T, 0.45));
    for (double x : {-0.375, -0.35, -0.33, -th}) {
      const double H = M * std::pow(T, x);
      if (H < 1.0) continue;
      SumSpec s;
      s.H = H;
      s.M = M;
      s.T = T;
      const double q = q_of_x(std::max(x, -0.375));
      const auto label = classify_case(H, M, T);
      const auto p = derive_params(H, M, T, SumCase::A);
      e.row({H, M, T, q, std::abs(eval_S(s)), simple_bound(H, M, T).full, bound_final_form(H, M, T, q).value,
             (label.A ? 1.0 : 0.0) + (label.B ? 2.0 : 0.0), p.degenerate ? 1.0 : 0.0});
    }
  }
  return e.t;
}

Table spacing1_sweep(const ExperimentConfig& cfg, const RowCallback& cb) {
  Emitter e{{"spacing1_sweep",
             {"K", "L", "eta", "q", "beta1", "beta2", "count_star", "count_unloc", "e4_bound", "gq_norm",
              "gq_upper_bound"},
             {}},
            cb};
  for (int K = 4; K <= std::min(cfg.kmax, 8); K *= 2)
    for (int L : {1, 2, 3}) {
      if (L >= K) continue;
      const double eta = 1.0 / K;
      const std::vector<std::pair<double, double>> betas = {{0.0, 0.0}, {0.5, 0.5}, {1.0, 1.0}};
      std::vector<StarQuery> qs;
      for (const auto& [b1, b2] : betas) qs.push_back({eta, b1, b2, 1.0});
      const auto counts = count_system_star_batch(K, L, qs);
      const double gq = gq_norm({K, L, eta, 4.0}, ones_grid(K, L)).value;
      const double up = gq_upper_bound(K, L, eta, 4.0, cfg.eps).value();
      for (std::size_t i = 0; i < betas.size(); ++i)
        e.row({double(K), double(L), eta, 4.0, betas[i].first, betas[i].second, double(counts[i]), double(counts[0]),
               e4_bound(K, L, eta, betas[i].first, betas[i].second, cfg.eps).value(), gq, up});
    }
  return e.t;
}

std::vector<Table> spacing2_sweep(const ExperimentConfig& cfg, const RowCallback& cb) {
  const PhaseFamily F = PhaseFamily::reciprocal();
  Emitter arcs_t{{"arcs", {"a", "r", "m", "mu", "nu", "c", "kappa", "abar", "boundary"}, {}}, cb};
  const auto arcs = enumerate_arcs(F, 32.0, 1e5, std::min(cfg.rmax, 16));
  for (const auto& d : arcs)
    arcs_t.row({double(d.a), double(d.r), double(d.m), d.mu, d.nu, double(d.c), d.kappa, double(d.abar),
                d.boundary ? 1.0 : 0.0});
  Emitter pairs_t{{"close_pairs", {"K", "L", "d1", "d2", "d3", "d4", "arcs", "count", "violations"}, {}}, cb};
  std::vector<MinorArcData> mid;
  for (const auto& d : arcs)
    if (d.r >= 8) mid.push_back(d);
  for (const auto& [K, L] : std::vector<std::pair<int, int>>{{4, 2}, {8, 2}, {16, 4}}) {
    const PairWindow w = PairWindow::from_spacing(K, L);
    const auto rep = count_close_pairs(mid, w, false);
    pairs_t.row({double(K), double(L), w.d1, w.d2, w.d3, w.d4, double(mid.size()), double(rep.count),
                 double(rep.violations.size())});
  }
  return {arcs_t.t, pairs_t.t};
}

}  // namespace

std::vector<Table> sweep(const ExperimentConfig& cfg, const RowCallback& on_row, SweepNotes* notes) {
  cfg.validate();
  std::vector<Table> out;
  if (selected(cfg, "error-terms")) out.push_back(error_terms_sweep(cfg, on_row, notes));
  if (selected(cfg, "exponents")) {
    out.push_back(exponent_curve(cfg, on_row));
    out.push_back(exponent_grid(cfg, on_row));
  }
  if (selected(cfg, "expsum")) out.push_back(expsum_sweep(cfg, on_row));
  if (selected(cfg, "spacing1")) out.push_back(spacing1_sweep(cfg, on_row));
  if (selected(cfg, "spacing2"))
    for (auto& t : spacing2_sweep(cfg, on_row)) out.push_back(std::move(t));
  return out;
}

RunReport run_suite(const ExperimentConfig& cfg, const std::function<void(const CriterionResult&)>& on_criterion) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  RunReport rep;
  rep.command = cfg.command;
  rep.seed = cfg.seed;
  rep.config = cfg.echo();
  for (const auto& c : criteria()) {
    if (!selected(cfg, c.subcommand)) continue;
    auto r = run_criterion(c, cfg);
    if (on_criterion) on_criterion(r);
    rep.check(r.id + " " + r.title, r.passed, r.detail);
    if (!r.table.name.empty()) rep.tables.push_back(std::move(r.table));
  }
  SweepNotes notes;
  for (auto& t : sweep(cfg, {}, &notes)) rep.tables.push_back(std::move(t));
  if (notes.cache_used) {
    std::string detail = std::to_string(notes.cache_mismatches) + " mismatches in the post-sweep spot check";
    for (const auto& w : notes.warnings) detail += "; " + w;
    rep.check("lattice cache agrees with recomputation", notes.cache_mismatches == 0, detail);
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace circdiv
