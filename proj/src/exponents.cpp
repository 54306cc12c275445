#include "circdiv/exponents.hpp"

#include <cmath>
#include <limits>

namespace circdiv {

namespace {

constexpr double kXLo = -0.375;
// float forms of the second inequality meet with equality at x = -3/8
constexpr double kFormTol = 1e-12;

double bracket(double x) {
  const double d = std::sqrt(2.0 * (1.0 - 14.0 * x)) - 5.0 * std::sqrt(-1.0 - 8.0 * x);
  return d * d;
}

double root_ratio(double x) { return std::sqrt((-1.0 - 8.0 * x) / (2.0 * (1.0 - 14.0 * x))); }

void require_range(double x, const char* what) {
  if (!in_admissible_range(x)) throw DomainError(std::string(what) + ": x outside [-3/8, -theta*]");
}

// sqrt of a non-negative rational, when it is itself rational
std::optional<Rational> rational_sqrt(const Rational& v) {
  if (v < 0) return std::nullopt;
  const BigInt num = boost::multiprecision::numerator(v);
  const BigInt den = boost::multiprecision::denominator(v);
  const BigInt sn = boost::multiprecision::sqrt(num);
  const BigInt sd = boost::multiprecision::sqrt(den);
  if (sn * sn != num || sd * sd != den) return std::nullopt;
  return Rational(sn, sd);
}

}  // namespace

double closing_f(double x) {
  if (!(x <= -0.125) || !std::isfinite(x)) throw DomainError("closing_f: need x <= -1/8");
  return -0.32 * x - bracket(x) / 200.0 + 51.0 / 200.0;
}

ThetaResult theta_star(double tol) {
  if (!(tol >= 1e-14)) throw DomainError("theta_star: tol must be >= 1e-14");
  ThetaResult out;
  double lo = out.lo;
  double hi = out.hi;
  auto g = [](double x) { return closing_f(x) + x; };
  double glo = g(lo);
  const double ghi = g(hi);
  if (!(glo * ghi < 0.0)) throw DomainError("theta_star: no sign change on the bracket");
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = g(mid);
    ++out.iterations;
    if (gm == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  const double root = 0.5 * (lo + hi);
  out.theta_star = -root;
  out.residual = g(root);
  if (!(std::fabs(out.residual) < tol)) throw DomainError("theta_star: residual above tolerance");
  return out;
}

double theta_star_value() {
  static const double v = theta_star().theta_star;
  return v;
}

bool in_admissible_range(double x) {
  return std::isfinite(x) && x >= kXLo && x <= -theta_star_value() + 1e-12;
}

double q_of_x(double x) {
  require_range(x, "q_of_x");
  return 2.0 / (5.0 * root_ratio(x) - 1.0) + 2.0;
}

double exponent_final(double x) {
  require_range(x, "exponent_final");
  return closing_f(x);
}

double q_exponent_terms(double x) {
  const double q = q_of_x(x);
  return 36.0 * x / (25.0 * q) + 29.0 / (100.0 * q) + ((14.0 * x - 1.0) / 50.0) * (q - 4.0) / (q * (q - 2.0));
}

double corollary_exponent(double x) { return -0.32 * x + 51.0 / 200.0 + q_exponent_terms(x); }

double algebra_identity(double x) {
  if (!(q_of_x(x) > 4.0)) throw DomainError("algebra_identity: requires q > 4");
  return std::fabs(q_exponent_terms(x) + bracket(x) / 200.0);
}

double algebra_identity_intermediate(double x) {
  const double q = q_of_x(x);
  const double v = std::sqrt(-1.0 - 8.0 * x);
  return (1.0 / q) * (v / 20.0) * (std::sqrt(2.0 * (1.0 - 14.0 * x)) - 5.0 * v);
}

Ineq1Forms ineq1_forms(double x) {
  const double q = q_of_x(x);
  Ineq1Forms f;
  const double lhs = (0.28 * x - 0.02) / (1.64 * x + 0.49);
  const double reduced_lhs = -17.0 * (8.0 * x + 3.0) / (164.0 * x + 49.0);
  if (q - 4.0 <= 0.0) {
    // limit convention: the right-hand sides are +infinity
    f.printed = true;
    f.reduced = true;
  } else {
    f.printed = lhs < (q - 2.0) / (q - 4.0);
    f.reduced = reduced_lhs < 2.0 / (q - 4.0);
  }
  // N-condition with the Case-A N and H/M = T^x: x a < c in T-exponents
  const double a = (2.0 * q - 6.0) / (6.0 - q) + 16.0 / 25.0;
  const double c = -0.49 - (q - 4.0) / (6.0 - q);
  f.from_condition = x * a < c;
  return f;
}

Ineq2Forms ineq2_forms(double x) {
  const double q = q_of_x(x);
  const double s = root_ratio(x);
  Ineq2Forms f;
  const double lhs = (0.96 * x + 0.235) / (0.28 * x - 0.02);
  const double rhs = 2.0 / (q - 2.0);
  f.printed = lhs <= rhs + kFormTol * std::fabs(rhs);
  const double r = (248.0 * x + 43.0) / (56.0 * x - 4.0);
  f.rewritten = r <= 5.0 * s + kFormTol * 5.0 * s;
  const double sq_rhs = 25.0 * (-1.0 - 8.0 * x) / (2.0 * (1.0 - 14.0 * x));
  f.squared = r * r <= sq_rhs + kFormTol * sq_rhs;
  f.polynomial = ineq2_polynomial(to_rational(x)) <= 0;
  return f;
}

bool check_ineq_1(double x) {
  const auto f = ineq1_forms(x);
  return f.printed && f.reduced && f.from_condition;
}

bool check_ineq_2(double x) {
  const auto f = ineq2_forms(x);
  return f.printed && f.rewritten && f.squared && f.polynomial;
}

std::optional<Rational> exponent_final_exact(const Rational& x) {
  const Rational u = 2 * (1 - 14 * x);
  const Rational v = -1 - 8 * x;
  if (u < 0 || v < 0) throw DomainError("exponent_final_exact: x outside the square-root domain");
  // (sqrt u - 5 sqrt v)^2 = u + 25 v - 10 sqrt(uv)
  const auto root = rational_sqrt(u * v);
  if (!root) return std::nullopt;
  const Rational br = u + 25 * v - 10 * *root;
  return Rational(-8, 25) * x - br / 200 + Rational(51, 200);
}

ExponentGrid ExponentGrid::admissible(std::size_t points) {
  ExponentGrid g;
  g.lo = kXLo;
  g.hi = -theta_star_value();
  g.points = points;
  return g;
}

std::vector<double> ExponentGrid::samples() const {
  if (points < 2 || !(lo < hi)) throw DomainError("ExponentGrid: need at least 2 points and lo < hi");
  std::vector<double> xs(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) xs[i] = lo + static_cast<double>(i) * step;
  xs.back() = hi;
  return xs;
}

std::vector<CurveRow> export_curve(std::size_t points, double lo, double hi) {
  ExponentGrid g;
  g.lo = lo;
  g.hi = hi;
  g.points = points;
  std::vector<CurveRow> rows;
  rows.reserve(points);
  for (double x : g.samples()) {
    CurveRow r;
    r.x = x;
    r.f = closing_f(x);
    r.g = -x;
    r.f_plus_x = r.f + x;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace circdiv
