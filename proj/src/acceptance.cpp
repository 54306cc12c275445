#include "circdiv/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include "circdiv/error_terms.hpp"
#include "circdiv/exp_sums.hpp"
#include "circdiv/exponents.hpp"
#include "circdiv/first_spacing.hpp"
#include "circdiv/oracles.hpp"
#include "circdiv/second_spacing.hpp"

namespace circdiv {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Collects the first few failure messages and a running verdict.
struct Checks {
  bool ok = true;
  std::vector<std::string> notes;
  void expect(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    if (notes.size() < 5) notes.push_back(what);
  }
  std::string summary(const std::string& good) const {
    if (ok) return good;
    std::string s;
    for (const auto& n : notes) s += (s.empty() ? "" : "; ") + n;
    return s;
  }
};

std::vector<std::uint64_t> log_spaced(std::uint64_t lo, std::uint64_t hi, std::size_t n) {
  std::set<std::uint64_t> xs;
  const double a = std::log(static_cast<double>(lo)), b = std::log(static_cast<double>(hi));
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    xs.insert(static_cast<std::uint64_t>(std::llround(std::exp(a + t * (b - a)))));
  }
  xs.insert(lo);
  xs.insert(hi);
  return {xs.begin(), xs.end()};
}

CriterionResult ac1(const ExperimentConfig&) {
  CriterionResult r;
  const auto t0 = Clock::now();
  const ThetaResult th = theta_star();
  const double secs = since(t0);
  const double err = std::fabs(th.theta_star - 0.3144831759741);
  r.passed = err <= 1e-10 && secs < 1e-3;
  r.detail = "theta*=" + format_double(th.theta_star) + " |err|=" + num(err) + " residual=" + num(th.residual) +
             " runtime=" + num(secs * 1e3) + "ms";
  return r;
}

CriterionResult ac2(const ExperimentConfig& cfg) {
  CriterionResult r;
  Checks c;
  const double th = theta_star_value();
  const double q0 = q_of_x(-0.375), q1 = q_of_x(-th);
  c.expect(std::fabs(q0 - 4.0) <= 1e-12, "q(-3/8)=" + format_double(q0));
  c.expect(q1 >= 4.29 && q1 <= 4.30, "q(-theta*)=" + format_double(q1));
  const auto xs = ExponentGrid::admissible(cfg.grid).samples();
  double prev = -INFINITY;
  std::size_t bad = 0;
  for (double x : xs) {
    const double q = q_of_x(x);
    if (!(q > prev)) ++bad;
    prev = q;
  }
  c.expect(bad == 0, std::to_string(bad) + " non-increasing steps");
  r.passed = c.ok;
  r.detail = c.summary("q(-3/8)=" + format_double(q0) + " q(-theta*)=" + num(q1) + ", increasing on " +
                       std::to_string(xs.size()) + " points");
  return r;
}

CriterionResult ac3(const ExperimentConfig& cfg) {
  CriterionResult r;
  Checks c;
  const double th = theta_star_value();
  const double e0 = exponent_final(-0.375);
  c.expect(std::fabs(e0 - 0.3125) <= 1e-12, "E(-3/8)=" + format_double(e0));
  const auto exact = exponent_final_exact(Rational(-3, 8));
  c.expect(exact && *exact == Rational(5, 16), "exact E(-3/8) is not 5/16");
  const double e1 = exponent_final(-th);
  c.expect(std::fabs(e1 - th) <= 1e-9, "E(-theta*)-theta*=" + num(e1 - th));
  const auto xs = ExponentGrid::admissible(cfg.grid).samples();
  double prev = -INFINITY;
  std::size_t bad = 0;
  for (double x : xs) {
    const double e = exponent_final(x);
    if (!(e > prev)) ++bad;
    prev = e;
  }
  c.expect(bad == 0, std::to_string(bad) + " non-increasing steps");
  r.passed = c.ok;
  r.detail = c.summary("E(-3/8)=" + format_double(e0) + " (exact 5/16), E(-theta*)-theta*=" + num(e1 - th) +
                       ", increasing on " + std::to_string(xs.size()) + " points");
  return r;
}

CriterionResult ac4(const ExperimentConfig& cfg) {
  CriterionResult r;
  Checks c;
  const auto xs = ExponentGrid::admissible(cfg.grid).samples();
  std::size_t fail1 = 0, fail2 = 0, disagree = 0, poly_bad = 0;
  for (double x : xs) {
    const auto f1 = ineq1_forms(x);
    const auto f2 = ineq2_forms(x);
    if (!check_ineq_1(x)) ++fail1;
    if (!check_ineq_2(x)) ++fail2;
    if (!f1.agree() || !f2.agree()) ++disagree;
    if (!(ineq2_polynomial(to_rational(x)) <= 0)) ++poly_bad;
  }
  c.expect(ineq2_polynomial(Rational(-3, 8)) == 0, "polynomial at -3/8 is not exactly 0");
  c.expect(fail1 == 0, std::to_string(fail1) + " points fail the first inequality");
  c.expect(fail2 == 0, std::to_string(fail2) + " points fail the second inequality");
  c.expect(disagree == 0, std::to_string(disagree) + " points where equivalent forms disagree");
  c.expect(poly_bad == 0, std::to_string(poly_bad) + " points where (8x+3)(4888x+683) > 0 exactly");
  r.passed = c.ok;
  r.detail = c.summary("both inequalities hold and all forms agree on " + std::to_string(xs.size()) +
                       " points; exact polynomial <= 0 everywhere");
  return r;
}

CriterionResult ac5(const ExperimentConfig& cfg) {
  CriterionResult r;
  Checks c;
  const auto xs = ExponentGrid::admissible(cfg.grid).samples();
  double worst_id = 0.0, worst_cor = 0.0;
  std::size_t used = 0;
  for (double x : xs) {
    if (q_of_x(x) > 4.0 + 1e-6) {
      worst_id = std::max(worst_id, algebra_identity(x));
      ++used;
    }
    worst_cor = std::max(worst_cor, std::fabs(corollary_exponent(x) - exponent_final(x)));
  }
  c.expect(worst_id < 1e-9, "identity residual " + num(worst_id));
  c.expect(worst_cor <= 1e-9, "corollary gap " + num(worst_cor));
  r.passed = c.ok;
  r.detail = c.summary("max identity residual " + num(worst_id) + " over " + std::to_string(used) +
                       " points, max |corollary - E| " + num(worst_cor));
  return r;
}

CriterionResult ac6(const ExperimentConfig& cfg) {
  CriterionResult r;
  Checks c;
  const auto t0 = Clock::now();
  const auto sieve = oracle::divisor_sums_sieve(10000);
  std::size_t bad = 0;
  for (std::uint64_t X = 1; X <= 10000; ++X)
    if (divisor_sum(X) != sieve[X]) ++bad;
  c.expect(bad == 0, std::to_string(bad) + " divisor sums differ for X <= 1e4");

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::uint64_t> xs;
  for (int i = 0; i < 100; ++i) xs.push_back(1 + rng() % 10000000ULL);
  const auto big = oracle::divisor_sums_sieve(*std::max_element(xs.begin(), xs.end()));
  bad = 0;
  for (auto X : xs)
    if (divisor_sum(X) != big[X]) ++bad;
  c.expect(bad == 0, std::to_string(bad) + " random divisor sums differ");

  const auto lat = oracle::lattice_counts_exhaustive(10000);
  bad = 0;
  for (std::uint64_t X = 0; X <= 10000; ++X)
    if (lattice_count(X) != lat[X]) ++bad;
  c.expect(bad == 0, std::to_string(bad) + " lattice counts differ for X <= 1e4");
  const double secs = since(t0);
  c.expect(secs < 60.0, "runtime " + num(secs) + "s");
  r.passed = c.ok;
  r.detail = c.summary("all X <= 1e4 and 100 random X <= 1e7 agree; runtime " + num(secs) + "s");
  return r;
}

Table error_table(const std::vector<std::uint64_t>& xs) {
  Table t{"error_terms", {"X", "delta", "divisor_sawtooth", "r_error", "circle_sawtooth", "delta_over_sqrtX",
                          "r_error_over_sqrtX"}, {}};
  for (auto X : xs) {
    const double d = delta(X), re = r_error(X);
    const double sx = std::sqrt(static_cast<double>(X));
    t.add_row({static_cast<double>(X), d, error_via_sawtooth(ErrorKind::divisor, X), re,
               error_via_sawtooth(ErrorKind::circle, X), d / sx, re / sx});
  }
  return t;
}

CriterionResult ac7(const ExperimentConfig&) {
  CriterionResult r;
  const auto xs = log_spaced(1, 1000000, 200);
  r.table = error_table(xs);
  double wd = 0.0, wc = 0.0;
  for (const auto& row : r.table.rows) {
    wd = std::max(wd, std::fabs(row[1] - row[2]));
    wc = std::max(wc, std::fabs(row[3] - row[4]));
  }
  r.passed = wd <= 3.0 && wc <= 8.0;
  r.detail = "max |delta - sawtooth| = " + num(wd) + " (<= 3), max |R - circle sawtooth| = " + num(wc) + " (<= 8) over " +
             std::to_string(xs.size()) + " X";
  return r;
}

CriterionResult ac8(const ExperimentConfig&) {
  CriterionResult r;
  Checks c;
  const auto xs = log_spaced(1, 1000000, 200);
  double wd = -INFINITY, wr = -INFINITY;
  for (auto X : xs) {
    const double sx = std::sqrt(static_cast<double>(X));
    wd = std::max(wd, std::fabs(delta(X)) - (sx + 3.0));
    wr = std::max(wr, std::fabs(r_error(X)) - (8.0 * sx + 8.0));
  }
  c.expect(wd <= 0.0, "|delta| exceeds sqrt(X)+3 by " + num(wd));
  c.expect(wr <= 0.0, "|R| exceeds 8 sqrt(X)+8 by " + num(wr));
  const auto h = hardy_ratio(2, 1000000);
  c.expect(h.max_ratio >= 0.1, "Hardy ratio " + num(h.max_ratio));
  r.passed = c.ok;
  r.detail = c.summary("crude bounds hold on " + std::to_string(xs.size()) + " X; Hardy ratio max " +
                       num(h.max_ratio) + " at X=" + std::to_string(h.argmax));
  return r;
}

CriterionResult ac9(const ExperimentConfig& cfg) {
  CriterionResult r;
  Checks c;
  const auto t0 = Clock::now();
  r.table = Table{"system_star", {"K", "L", "eta", "beta1", "beta2", "count", "cap", "count_over_cap"}, {}};
  std::size_t points = 0;
  double worst = 0.0;
  for (int K = 4; K <= cfg.kmax; K *= 2)
    for (int L = 1; L < K; ++L) {
      std::vector<StarQuery> qs;
      for (double eta : {1.0 / K, 2.0 / K})
        for (double b1 : {0.0, 0.5, 1.0})
          for (double b2 : {0.0, 0.5, 1.0}) qs.push_back({eta, b1, b2, 1.0});
      const auto counts = count_system_star_batch(K, L, qs);
      for (std::size_t i = 0; i < qs.size(); ++i) {
        const auto& q = qs[i];
        const double cap = e4_count_cap(K, L, q.eta, q.beta1, q.beta2);
        const double n = static_cast<double>(counts[i]);
        ++points;
        worst = std::max(worst, n / cap);
        c.expect(n <= cap, "K=" + std::to_string(K) + " L=" + std::to_string(L) + " eta=" + num(q.eta) +
                               " beta=(" + num(q.beta1) + "," + num(q.beta2) + "): count " + num(n) + " > cap " + num(cap));
        if (q.beta1 == 0.0 && q.beta2 == 0.0) {
          const double diag = static_cast<double>(K) * K * L * L;
          c.expect(n >= diag, "K=" + std::to_string(K) + " L=" + std::to_string(L) + ": count below K^2 L^2");
        }
        r.table.add_row({double(K), double(L), q.eta, q.beta1, q.beta2, n, cap, n / cap});
      }
    }
  const double secs = since(t0);
  c.expect(secs < 300.0, "runtime " + num(secs) + "s");
  r.passed = c.ok;
  r.detail = c.summary(std::to_string(points) + " sweep points, max count/cap " + num(worst) +
                       ", diagonal floor holds; runtime " + num(secs) + "s");
  return r;
}

CriterionResult ac10(const ExperimentConfig&) {
  CriterionResult r;
  Checks c;
  r.table = Table{"gq_norm", {"K", "L", "eta", "coarse", "fine", "relative_change", "lower", "upper"}, {}};
  const std::vector<std::pair<int, std::vector<int>>> sweep = {{4, {1, 2, 3}}, {8, {1, 2, 4}}, {16, {1, 2, 4}}};
  double worst_change = 0.0;
  for (const auto& [K, Ls] : sweep)
    for (int L : Ls)
      for (double eta : {1.0 / K, 0.5 / K}) {
        if (eta * K * L < 1.0) continue;  // keeps 1/eta <= KL
        const SpacingConfig s{K, L, eta, 4.0};
        const auto g = gq_norm_doubling(s, ones_grid(K, L));
        const double lo = 0.1 * std::sqrt(double(K) * L), hi = 10.0 * std::pow(K, 0.55) * std::sqrt(double(L));
        worst_change = std::max(worst_change, g.relative_change);
        const std::string at = "K=" + std::to_string(K) + " L=" + std::to_string(L) + " eta=" + num(eta);
        c.expect(g.coarse >= lo && g.coarse <= hi && g.fine >= lo && g.fine <= hi, at + ": G4 out of range");
        c.expect(g.relative_change < 0.01, at + ": doubling changed G4 by " + num(g.relative_change));
        r.table.add_row({double(K), double(L), eta, g.coarse, g.fine, g.relative_change, lo, hi});
      }
  r.passed = c.ok;
  r.detail = c.summary(std::to_string(r.table.rows.size()) + " sweep points inside the band; max doubling change " +
                       num(worst_change));
  return r;
}

CriterionResult ac11(const ExperimentConfig&) {
  CriterionResult r;
  Checks c;
  std::vector<std::pair<std::int64_t, std::int64_t>> fr;
  for (std::int64_t q = 1; q <= 20; ++q)
    for (std::int64_t a = -q; a < 2 * q; ++a)
      if (std::gcd(a, q) == 1) fr.emplace_back(a, q);
  std::size_t pairs = 0, mismatch = 0, invariant = 0;
  for (const auto& [a, q] : fr)
    for (const auto& [a1, q1] : fr) {
      ++pairs;
      const UnimodMatrix M = pair_matrix(a, q, a1, q1);
      const auto S = oracle::pair_matrix_search(a, q, a1, q1);
      if (!S || *S != M) ++mismatch;
      const bool det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0) == 1;
      const bool rec = M(0, 0) * a + M(0, 1) * q == a1 && M(1, 0) * a + M(1, 1) * q == q1;
      if (!det || !rec || !gamma_in_window(M(1, 0), q, q1)) ++invariant;
    }
  c.expect(mismatch == 0, std::to_string(mismatch) + " pairs differ from exhaustive search");
  c.expect(invariant == 0, std::to_string(invariant) + " pairs break an invariant");

  // gamma bound on the enumerated arcs, with only the first window binding
  const auto arcs = enumerate_arcs(PhaseFamily::reciprocal(), 32.0, 1e5, 20);
  PairWindow w;
  w.d1 = 1.0 / 16.0;  // 1/(KL) at K = 8, L = 2
  w.d2 = 0.5;
  w.d3 = 1e300;
  w.d4 = 1.0;
  const auto rep = count_close_pairs(arcs, w, false);
  c.expect(rep.violations.empty(), std::to_string(rep.violations.size()) + " gamma violations, e.g. " +
                                        (rep.violations.empty() ? std::string() : rep.violations.front()));
  r.passed = c.ok;
  r.detail = c.summary(std::to_string(pairs) + " fraction pairs match the exhaustive search; " +
                       std::to_string(rep.count) + " close arc pairs (of " + std::to_string(arcs.size()) +
                       " arcs) all have |gamma| <= d1 r r1");
  return r;
}

CriterionResult ac12(const ExperimentConfig& cfg) {
  CriterionResult r;
  Checks c;
  const PhaseFamily F = PhaseFamily::reciprocal();
  const double M = 32.0, T = 1e5;
  const auto arcs = enumerate_arcs(F, M, T, cfg.rmax);
  std::size_t boundary = 0, bad = 0, xbad = 0;
  double worst = 0.0;
  for (const auto& d : arcs) {
    if (d.boundary) {
      ++boundary;
    } else if (!(std::fabs(d.nu) <= 1.0 && d.kappa >= 0.0 && d.kappa < 1.0)) {
      ++bad;
    }
    const auto x = x_vector(d);
    const Eigen::Vector4d ref = oracle::x_vector_recompute(d.a, d.r, d.m, F, M, T);
    for (int i = 0; i < 4; ++i) {
      // kappa near 0 has no relative scale of its own; it is measured in units of 1/sqrt(mu r^3)
      const double scale = i == 3 ? std::max(std::fabs(ref(3)), ref(2)) : std::fabs(ref(i));
      const double rel = scale == 0.0 ? std::fabs(x.raw(i)) : std::fabs(x.raw(i) - ref(i)) / scale;
      worst = std::max(worst, rel);
      if (!(rel <= 1e-12)) ++xbad;
    }
  }
  c.expect(bad == 0, std::to_string(bad) + " non-boundary arcs break |nu| <= 1 or kappa in [0,1)");
  c.expect(xbad == 0, std::to_string(xbad) + " x-vector components differ by more than 1e-12 relative");
  r.passed = c.ok;
  r.detail = c.summary(std::to_string(arcs.size()) + " arcs, " + std::to_string(boundary) +
                       " boundary; max relative x-vector gap " + num(worst));
  return r;
}

CriterionResult ac13(const ExperimentConfig&) {
  CriterionResult r;
  Checks c;
  const double T = 1e12, M = std::pow(T, 0.45), H = M * std::pow(T, -0.32);
  r.table = Table{"middle_form", {"q", "N", "bound"}, {}};
  const std::size_t n = 601;
  for (double q : {4.0, 4.125, 4.25, 4.375, 4.5}) {
    double prev = INFINITY;
    std::size_t bad = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double N = 2.0 * std::pow(5e5, static_cast<double>(i) / (n - 1));
      const double b = bound_middle_form(H, M, T, q, N);
      if (!(b < prev)) ++bad;
      prev = b;
      if (i % 60 == 0) r.table.add_row({q, N, b});
    }
    const auto e = middle_form_N_exponents(q);
    c.expect(bad == 0, "q=" + num(q) + ": " + std::to_string(bad) + " non-decreasing steps");
    c.expect(e.main < 0.0 && e.bracket < 0.0, "q=" + num(q) + ": an N-exponent is not negative");
  }
  r.passed = c.ok;
  r.detail = c.summary("strictly decreasing on " + std::to_string(n) + " N values in [2, 1e6] for all five q");
  return r;
}

CriterionResult ac14(const ExperimentConfig& cfg) {
  CriterionResult r;
  const auto rep = case_b_reduction_check(cfg.T, cfg.samples, cfg.seed);
  r.passed = rep.samples == cfg.samples && rep.violations == 0;
  r.detail = std::to_string(rep.samples) + " accepted points (" + std::to_string(rep.attempts) + " draws), " +
             std::to_string(rep.violations) + " violations, min log margin " + num(rep.min_log_margin);
  if (!rep.failures.empty()) r.detail += "; first: " + rep.failures.front();
  return r;
}

}  // namespace

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"AC1", "exponents", "theta* value and runtime", ac1},
      {"AC2", "exponents", "q(x) endpoints and monotonicity", ac2},
      {"AC3", "exponents", "final exponent endpoints and monotonicity", ac3},
      {"AC4", "exponents", "auxiliary inequalities and their equivalent forms", ac4},
      {"AC5", "exponents", "algebra identity and corollary exponent", ac5},
      {"AC6", "error-terms", "divisor and lattice counts against brute force", ac6},
      {"AC7", "error-terms", "sawtooth recompositions within O(1)", ac7},
      {"AC8", "error-terms", "crude error bounds and Hardy ratio", ac8},
      {"AC9", "spacing1", "system (*) counts against the explicit cap", ac9},
      {"AC10", "spacing1", "G4 of all-ones coefficients inside the band", ac10},
      {"AC11", "spacing2", "pair matrix against exhaustive search", ac11},
      {"AC12", "spacing2", "minor-arc data audit and x-vector recomputation", ac12},
      {"AC13", "expsum", "middle form decreasing in N", ac13},
      {"AC14", "expsum", "Case II implies Case B and the reduction condition", ac14},
  };
  return all;
}

CriterionResult run_criterion(const Criterion& c, const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  CriterionResult r;
  try {
    r = c.run(cfg);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.id = c.id;
  r.title = c.title;
  r.seconds = since(t0);
  return r;
}

}  // namespace circdiv
