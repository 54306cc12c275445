#include "circdiv/exp_sums.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "circdiv/exponents.hpp"
#include "circdiv/first_spacing.hpp"

namespace circdiv {

namespace {

constexpr double kLogPowA = 171.0 / 140.0;
constexpr double kLogPowN = 969.0 / 14000.0;

double lnln(double T) {
  if (!(T > 1.0) || !std::isfinite(T)) throw DomainError("need finite T > 1 for the log T factors");
  return std::log(std::log(T));
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be finite and positive");
}

void require_q(double q, const char* what) {
  if (!(q >= 4.0 && q <= 4.5)) throw DomainError(std::string(what) + ": q must lie in [4, 4.5]");
}

// ln(1 + e^b) without overflow
double log1p_exp(double b) { return b > 0.0 ? b + std::log1p(std::exp(-b)) : std::log1p(std::exp(b)); }

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double weight_at(const Weight& w, double t) { return w ? w(t) : 1.0; }

}  // namespace

void ConditionConstants::validate() const {
  for (double c : {C1, C2, C3, C4, C5})
    if (!(c >= 2.0)) throw DomainError("ConditionConstants: C1..C5 must be >= 2");
  if (!(B0 > 0.0)) throw DomainError("ConditionConstants: B0 must be positive");
}

MinimalConstants minimal_constants(const PhaseFamily& F, std::size_t grid) {
  if (grid < 2) throw DomainError("minimal_constants: grid needs at least 2 points");
  double lo[4], hi[4];
  std::fill(lo, lo + 4, std::numeric_limits<double>::infinity());
  std::fill(hi, hi + 4, 0.0);
  for (std::size_t i = 0; i < grid; ++i) {
    const double z = 1.0 + static_cast<double>(i) / static_cast<double>(grid - 1);
    const double d1 = F.derivative(1, z), d2 = F.derivative(2, z), d3 = F.derivative(3, z);
    const double v[4] = {std::fabs(d1), std::fabs(d2), std::fabs(d3), std::fabs(d1 * d3 - 3.0 * d2 * d2)};
    for (int r = 0; r < 4; ++r) {
      lo[r] = std::min(lo[r], v[r]);
      hi[r] = std::max(hi[r], v[r]);
    }
  }
  MinimalConstants out;
  out.C1 = std::max(hi[0], 1.0 / lo[0]);
  out.C2 = std::max(hi[1], 1.0 / lo[1]);
  out.C3 = std::max(hi[2], 1.0 / lo[2]);
  out.C4 = 1.0 / lo[3];
  return out;
}

bool check_F_conditions(const PhaseFamily& F, const ConditionConstants& c, std::size_t grid) {
  const auto m = minimal_constants(F, grid);
  return m.C1 <= c.C1 && m.C2 <= c.C2 && m.C3 <= c.C3 && m.C4 <= c.C4;
}

Weight tabulated_weight(std::vector<double> samples) {
  if (samples.size() < 2) throw DomainError("tabulated_weight: need at least 2 samples");
  return [s = std::move(samples)](double t) {
    const double pos = std::clamp(t - 1.0, 0.0, 1.0) * static_cast<double>(s.size() - 1);
    const auto i = std::min(static_cast<std::size_t>(pos), s.size() - 2);
    const double w = pos - static_cast<double>(i);
    return s[i] * (1.0 - w) + s[i + 1] * w;
  };
}

void SumSpec::validate() const {
  if (!(H >= 1.0) || !std::isfinite(H)) throw DomainError("SumSpec: H must be >= 1");
  if (!(M >= 1.0) || !std::isfinite(M)) throw DomainError("SumSpec: M must be >= 1");
  if (!(std::fabs(T) >= M) || !std::isfinite(T)) throw DomainError("SumSpec: need |T| >= M");
}

std::int64_t dyadic_count(double a) {
  return static_cast<std::int64_t>(std::floor(2.0 * a)) - static_cast<std::int64_t>(std::ceil(a)) + 1;
}

namespace {

struct Tables {
  std::vector<long double> phase;  // (T/M) F(m/M)
  std::vector<double> Gm;
  std::vector<long double> gh;
  std::int64_t h0 = 0, m0 = 0;
  long double max_phase = 0.0L;
};

Tables make_tables(const SumSpec& s) {
  s.validate();
  Tables t;
  t.h0 = static_cast<std::int64_t>(std::ceil(s.H));
  t.m0 = static_cast<std::int64_t>(std::ceil(s.M));
  const auto nh = dyadic_count(s.H);
  const auto nm = dyadic_count(s.M);
  for (std::int64_t m = t.m0; m < t.m0 + nm; ++m) {
    const double z = static_cast<double>(m) / s.M;
    t.phase.push_back(static_cast<long double>(s.T) / s.M * s.F(z));
    t.Gm.push_back(weight_at(s.G, z));
  }
  for (std::int64_t h = t.h0; h < t.h0 + nh; ++h) t.gh.push_back(weight_at(s.g, static_cast<double>(h) / s.H));
  for (auto p : t.phase) t.max_phase = std::max(t.max_phase, std::fabs(p) * static_cast<long double>(t.h0 + nh - 1));
  return t;
}

}  // namespace

std::complex<double> eval_S(const SumSpec& spec, SumOrder order) {
  const auto t = make_tables(spec);
  std::complex<long double> acc = 0.0L;
  const auto nh = t.gh.size();
  const auto nm = t.phase.size();
  if (order == SumOrder::h_outer) {
    for (std::size_t i = 0; i < nh; ++i) {
      if (t.gh[i] == 0.0L) continue;
      const auto h = static_cast<long double>(t.h0 + static_cast<std::int64_t>(i));
      std::complex<long double> inner = 0.0L;
      for (std::size_t j = 0; j < nm; ++j) inner += static_cast<long double>(t.Gm[j]) * unit_phase<std::complex<long double>>(h * t.phase[j]);
      acc += t.gh[i] * inner;
    }
  } else {
    for (std::size_t j = 0; j < nm; ++j) {
      if (t.Gm[j] == 0.0) continue;
      std::complex<long double> inner = 0.0L;
      for (std::size_t i = 0; i < nh; ++i) {
        const auto h = static_cast<long double>(t.h0 + static_cast<std::int64_t>(i));
        inner += t.gh[i] * unit_phase<std::complex<long double>>(h * t.phase[j]);
      }
      acc += static_cast<long double>(t.Gm[j]) * inner;
    }
  }
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

SumEvaluation eval_S_checked(const SumSpec& spec) {
  SumEvaluation out;
  out.value = eval_S(spec, SumOrder::h_outer);
  out.alternate = eval_S(spec, SumOrder::m_outer);
  out.relative_gap = std::abs(out.value - out.alternate) / std::max(1.0, std::abs(out.value));
  const auto t = make_tables(spec);
  out.phase_exact = t.max_phase < 0x1.0p53L;
  out.terms = dyadic_count(spec.H) * dyadic_count(spec.M);
  return out;
}

std::string CaseLabel::label() const {
  if (A && B) return "A+B";
  if (A) return "A";
  if (B) return "B";
  return "Neither";
}

bool in_case_A(double H, double M, double T, const CaseOptions& opts) {
  require_positive(H, "H");
  require_positive(M, "M");
  const double lT = std::log(T), lM = std::log(M), lH = std::log(H), ll = lnln(T);
  const double guard = opts.literal_guard ? -7.0 / 16.0 : 7.0 / 16.0;
  if (lM < guard * lT && lH < -9.0 * lM + 4.0 * lT + kLogPowA * ll) return false;
  if (lM > 9.0 / 16.0 * lT && lH < 11.0 * lM - 6.0 * lT + kLogPowA * ll) return false;
  return lH <= lM - 49.0 / 164.0 * lT;
}

bool in_case_B(double H, double M, double T, const ConditionConstants& c) {
  require_positive(H, "H");
  require_positive(M, "M");
  require_positive(T, "T");
  const double lT = std::log(T), lM = std::log(M), lH = std::log(H);
  if (!(lM <= std::log(c.C5) + 0.5 * lT)) return false;
  const double cap = std::min(35.0 / 69.0 * lM - 2.0 / 23.0 * lT, std::log(c.B0) + 1.5 * lM - 0.5 * lT);
  return lH <= cap;
}

CaseLabel classify_case(double H, double M, double T, const ConditionConstants& c, const CaseOptions& opts) {
  CaseLabel out;
  out.A = in_case_A(H, M, T, opts);
  out.B = in_case_B(H, M, T, c);
  return out;
}

bool reduction_condition(double H, double M, double T) {
  const double lT = std::log(T), lM = std::log(M), lH = std::log(H);
  return lH > -27.0 / 23.0 * lM + 53.0 / 92.0 * lT && lH < -9.0 * lM + 4.0 * lT + kLogPowA * lnln(T);
}

double N_case_A(double H, double M, double T) {
  const double lT = std::log(T);
  return std::exp(std::log(H) + 41.0 / 25.0 * (std::log(M) - std::log(H)) - 0.49 * lT + kLogPowN * lnln(T));
}

double N_case_B(double H, double M, double T) {
  const double lT = std::log(T), lM = std::log(M), lH = std::log(H);
  const double a = 7.0 / 8.0 * lM + 969.0 / 5600.0 * lnln(T) - 0.15 * lT - 29.0 / 40.0 * lH;
  const double b = 2.0 * lM - lH / 3.0 - 2.0 / 3.0 * lT;
  return std::exp(std::min(a, b));
}

bool DerivedParams::ordered(double rel_tol) const {
  const double s = 1.0 + rel_tol;
  return L <= K * s && K <= s / eta && 1.0 / eta <= K * L * s;
}

DerivedParams derive_params(double H, double M, double T, SumCase which, const ConditionConstants& c,
                            const CaseOptions& opts) {
  require_positive(H, "H");
  require_positive(M, "M");
  require_positive(T, "T");
  if (which == SumCase::A && !in_case_A(H, M, T, opts)) throw DomainError("derive_params: (H, M, T) is not in Case A");
  if (which == SumCase::B && !in_case_B(H, M, T, c)) throw DomainError("derive_params: (H, M, T) is not in Case B");
  DerivedParams p;
  p.which = which;
  p.H = H;
  p.M = M;
  p.T = T;
  p.N = which == SumCase::A ? N_case_A(H, M, T) : N_case_B(H, M, T);
  require_positive(p.N, "N");
  p.R = std::exp(0.5 * (3.0 * std::log(M) - std::log(p.N) - std::log(T)));
  require_positive(p.R, "R");
  // at Q = R
  p.K = p.N / p.R;
  p.L = H / p.R;
  p.eta = p.R * p.R / (p.N * H);
  p.Q_min = p.R;
  p.Q_max = 3.0 * H;
  p.Q2 = 2.0 * H > p.R ? p.R * std::pow(H / p.R, 39.0 / 119.0) * std::pow(std::log(2.0 * H / p.R), -0.75)
                       : std::numeric_limits<double>::quiet_NaN();
  p.degenerate = p.R > H;
  return p;
}

SimpleBound simple_bound(double H, double M, double T) {
  require_positive(H, "H");
  require_positive(M, "M");
  require_positive(T, "T");
  if (!(M <= std::sqrt(T))) throw DomainError("simple_bound: need M <= T^{1/2}");
  SimpleBound b;
  b.full = H * (M * M / (H * T) + M * std::sqrt(H * T / (M * M * M)));
  b.simplified = std::pow(H, 1.5) * std::sqrt(T) / std::sqrt(M);
  return b;
}

bool condition_N_check(double H, double M, double T, double q, double N, double margin) {
  require_q(q, "condition_N_check");
  require_positive(N, "N");
  require_positive(margin, "margin");
  const double lhs = (6.0 - q) * std::log(N);
  const double rhs = std::log(margin) + (2.0 * q - 6.0) * std::log(H) + (4.0 - q) * (3.0 * std::log(M) - std::log(T));
  return lhs >= rhs;
}

bool case_a_condition(double H, double M, double T, double q, double margin) {
  require_q(q, "case_a_condition");
  require_positive(margin, "margin");
  const double a = (2.0 * q - 6.0) / (6.0 - q) + 16.0 / 25.0;
  const double c = -0.49 - (q - 4.0) / (6.0 - q);
  const double lT = std::log(T);
  return a * (std::log(H) - std::log(M)) <= c * lT + kLogPowN * lnln(T) - std::log(margin) / (6.0 - q);
}

bool case_a_condition_printed(double H, double M, double T, double q, double margin) {
  require_q(q, "case_a_condition_printed");
  require_positive(margin, "margin");
  const double a = (2.0 * q - 6.0) / (6.0 - q) + 16.0 / 25.0;
  const double lhs = a * std::log(H) + 34.0 / 25.0 * std::log(M);
  return lhs <= 0.51 * std::log(T) + kLogPowN * lnln(T) - std::log(margin) / (6.0 - q);
}

MiddleExponents middle_form_N_exponents(double q) {
  return {0.5 - 57.0 / (17.0 * q) - 2.0 * (q - 4.0) / (q * (q - 2.0)), 1.5 - 4.0 / (q - 2.0)};
}

double bound_middle_form(double H, double M, double T, double q, double N) {
  require_q(q, "bound_middle_form");
  require_positive(H, "H");
  require_positive(M, "M");
  require_positive(T, "T");
  require_positive(N, "N");
  const double lH = std::log(H), lM = std::log(M), lT = std::log(T), lN = std::log(N);
  const auto e = middle_form_N_exponents(q);
  const double r = (q - 4.0) / (q * (q - 2.0));
  const double main = 2.5 * lM - 0.5 * lT + 11.0 / (17.0 * q) * (2.0 * lH + lT - 3.0 * lM) +
                      (1.0 - 2.0 / q - r) * (lT + lH - 3.0 * lM) + e.main * lN;
  const double inner = 2.0 / (q - 2.0) * (3.0 * lM - lH - lT) + 0.5 * lT - 1.5 * lM + e.bracket * lN;
  return std::exp(main + log1p_exp(inner) / q);
}

FinalForm bound_final_form(double H, double M, double T, double q) {
  require_q(q, "bound_final_form");
  require_positive(H, "H");
  require_positive(M, "M");
  require_positive(T, "T");
  const double u = std::log(H) - std::log(M), lT = std::log(T);
  const double r = (q - 4.0) / (q * (q - 2.0));
  const double main = u * (-8.0 / 25.0 + 36.0 / (25.0 * q) + 7.0 * r / 25.0) + lT * (51.0 / 200.0 + 29.0 / (100.0 * q) - r / 50.0);
  const double inner = u * (14.0 / (25.0 * (q - 2.0)) - 24.0 / 25.0) + lT * (-1.0 / (25.0 * (q - 2.0)) - 47.0 / 200.0);
  FinalForm out;
  out.value = std::exp(main + log1p_exp(inner) / q);
  // N_A carries (log T)^{969/14000}; each N-power of the middle form inherits it
  const auto e = middle_form_N_exponents(q);
  const double ll = kLogPowN * lnln(T);
  out.with_logs = std::exp(main + e.main * ll + log1p_exp(inner + e.bracket * ll) / q);
  return out;
}

double gq_at_Q(const DerivedParams& p, double q, double Q) {
  const double K = p.N * Q / (p.R * p.R);
  const double L = p.H * Q / (p.R * p.R);
  return gq_upper_formula(K, L, p.eta, q);
}

QRangeMax q_range_max_bound(const DerivedParams& p, double q, const std::function<double(double)>& Gq, std::size_t grid) {
  if (!(q >= 4.0)) throw DomainError("q_range_max_bound: need q >= 4");
  if (grid < 1) throw DomainError("q_range_max_bound: empty Q grid");
  if (!(p.R <= p.Q2)) throw DomainError("q_range_max_bound: empty Q range (R > Q2)");
  QRangeMax out;
  out.grid = grid;
  const double scale = (p.M * p.R / p.N) * std::pow(p.H / p.R, 22.0 / (17.0 * q));
  out.value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid; ++i) {
    const double t = grid == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(grid - 1);
    const double Q = i + 1 == grid && grid > 1 ? p.Q2 : p.R * std::pow(p.Q2 / p.R, t);
    const double v = std::pow(p.R / Q, 3.0 - 6.0 / q) * scale * Gq(Q);
    if (v > out.value) {
      out.value = v;
      out.argmax_Q = Q;
    }
  }
  return out;
}

QRangeMax q_range_max_bound(const DerivedParams& p, double q, double Gq, std::size_t grid) {
  return q_range_max_bound(p, q, [Gq](double) { return Gq; }, grid);
}

CaseBReductionReport case_b_reduction_check(double T, std::size_t samples, std::uint64_t seed, const ConditionConstants& c) {
  require_positive(T, "T");
  const double th = theta_star_value();
  const double lT = std::log(T), ll = lnln(T);
  std::mt19937_64 rng(seed);
  CaseBReductionReport rep;
  rep.min_log_margin = std::numeric_limits<double>::infinity();
  const std::size_t cap = samples * 100000 + 1000;
  while (rep.samples < samples && rep.attempts < cap) {
    ++rep.attempts;
    const double mexp = 0.5 * unit_uniform(rng);
    // x in [2 theta* - 1, -theta*] covers H in [M T^{2 theta* - 1}, M T^{-theta*}]
    const double x = (2.0 * th - 1.0) + unit_uniform(rng) * (1.0 - 3.0 * th);
    const double lM = mexp * lT;
    const double lH = lM + x * lT;
    if (lH < 0.0) continue;
    if (lH < (7.0 * th - 2.0) / 2.0 * lT) continue;
    // Case I holds: outside this check
    if (lH >= -9.0 * lM + 4.0 * lT + kLogPowA * ll) continue;
    ++rep.samples;
    const double margins[] = {
        std::log(c.C5) + 0.5 * lT - lM,
        35.0 / 69.0 * lM - 2.0 / 23.0 * lT - lH,
        std::log(c.B0) + 1.5 * lM - 0.5 * lT - lH,
        lH - (-27.0 / 23.0 * lM + 53.0 / 92.0 * lT),
        -9.0 * lM + 4.0 * lT + kLogPowA * ll - lH,
    };
    static const char* names[] = {"M <= C5 T^{1/2}", "H <= M^{35/69} T^{-2/23}", "H <= B0 M^{3/2} T^{-1/2}",
                                  "H > M^{-27/23} T^{53/92}", "H < M^{-9} T^4 (log T)^{171/140}"};
    bool bad = false;
    for (int k = 0; k < 5; ++k) {
      // the first three are non-strict
      const bool ok = k < 3 ? margins[k] >= 0.0 : margins[k] > 0.0;
      rep.min_log_margin = std::min(rep.min_log_margin, margins[k]);
      if (!ok) {
        bad = true;
        if (rep.failures.size() < 20)
          rep.failures.push_back(std::string(names[k]) + " fails at x=" + std::to_string(x) + " m=" + std::to_string(mexp));
      }
    }
    if (bad) ++rep.violations;
  }
  return rep;
}

}  // namespace circdiv
