#pragma once

// The closing exponent pipeline: theta*, the choice q(x), the two auxiliary
// inequalities, and the final exponent curve.
//
// Throughout, x parametrises H = M T^x, with x in [-3/8, -theta*].

#include <cstddef>
#include <optional>
#include <vector>

#include "circdiv/numeric.hpp"

namespace circdiv {

struct ThetaResult {
  double theta_star = 0.0;
  double residual = 0.0;  // f(-theta*) + (-theta*)
  double lo = -0.35;      // bracket on x
  double hi = -0.30;
  int iterations = 0;
};

/// f(x) = -(8/25)x - (1/200)(sqrt(2(1-14x)) - 5 sqrt(-1-8x))^2 + 51/200.
double closing_f(double x);

/// Bisection root of f(x) + x on [-0.35, -0.3]; returns theta* = -root.
ThetaResult theta_star(double tol = 1e-14);

/// theta* cached from a full-precision bisection.
double theta_star_value();

/// Admissible-range test with a small slack at the -theta* endpoint.
bool in_admissible_range(double x);

double q_of_x(double x);

/// E(x), the final exponent; identical in form to closing_f but range-checked.
double exponent_final(double x);

/// -(8/25)x + 51/200 + 36x/(25q) + 29/(100q) + ((14x-1)/50)(q-4)/(q(q-2)).
double corollary_exponent(double x);

/// |q-dependent exponent + (1/200)(sqrt(2(1-14x)) - 5 sqrt(-1-8x))^2|; requires q > 4.
double algebra_identity(double x);

/// q-dependent exponent written through the intermediate product form
/// (1/q) sqrt(-1-8x)/20 (sqrt(2(1-14x)) - 5 sqrt(-1-8x)).
double algebra_identity_intermediate(double x);

/// Sum of the q-dependent exponent terms.
double q_exponent_terms(double x);

struct Ineq1Forms {
  bool printed = false;         // ((7/25)x - 1/50)/((41/25)x + 49/100) < (q-2)/(q-4)
  bool reduced = false;         // -17(8x+3)/(164x+49) < 2/(q-4)
  bool from_condition = false;  // N-condition with Case-A N, T-exponents compared
  bool agree() const { return printed == reduced && reduced == from_condition; }
};

struct Ineq2Forms {
  bool printed = false;     // ((24/25)x + 47/200)/((7/25)x - 1/50) <= 2/(q-2)
  bool rewritten = false;   // (248x+43)/(56x-4) <= 5 sqrt((-1-8x)/(2(1-14x)))
  bool squared = false;     // ((248x+43)/(56x-4))^2 <= 25(-1-8x)/(2(1-14x))
  bool polynomial = false;  // (8x+3)(4888x+683) <= 0, exact rational arithmetic
  bool agree() const { return printed == rewritten && rewritten == squared && squared == polynomial; }
};

Ineq1Forms ineq1_forms(double x);
Ineq2Forms ineq2_forms(double x);

/// True iff every form holds. Callers that need the pointwise agreement
/// should inspect the forms directly.
bool check_ineq_1(double x);
bool check_ineq_2(double x);

template <class Scalar>
Scalar ineq2_polynomial(const Scalar& x) {
  return (Scalar(8) * x + Scalar(3)) * (Scalar(4888) * x + Scalar(683));
}

/// (248x+43)^2 - 200(-1-8x)(1-14x), the expanded form before factoring.
template <class Scalar>
Scalar ineq2_expanded(const Scalar& x) {
  const Scalar a = Scalar(248) * x + Scalar(43);
  return a * a - Scalar(200) * (Scalar(-1) - Scalar(8) * x) * (Scalar(1) - Scalar(14) * x);
}

/// Exponent of T in the main factor of the final S/H bound, with H/M = T^x.
template <class Scalar>
Scalar final_form_T_exponent(const Scalar& x, const Scalar& q) {
  const Scalar r = (q - Scalar(4)) / (q * (q - Scalar(2)));
  const Scalar h_exp = Scalar(-8) / Scalar(25) + Scalar(36) / (Scalar(25) * q) + Scalar(7) * r / Scalar(25);
  const Scalar t_exp = Scalar(51) / Scalar(200) + Scalar(29) / (Scalar(100) * q) - r / Scalar(50);
  return x * h_exp + t_exp;
}

/// Exponent of T inside the bracket (1 + ...)^{1/q} of the final bound.
template <class Scalar>
Scalar final_bracket_T_exponent(const Scalar& x, const Scalar& q) {
  const Scalar h_exp = Scalar(14) / (Scalar(25) * (q - Scalar(2))) - Scalar(24) / Scalar(25);
  const Scalar t_exp = Scalar(-1) / (Scalar(25) * (q - Scalar(2))) - Scalar(47) / Scalar(200);
  return x * h_exp + t_exp;
}

/// E(x) exactly, when 2(1-14x)(-1-8x) is a rational square; nullopt otherwise.
std::optional<Rational> exponent_final_exact(const Rational& x);

struct ExponentGrid {
  double lo = -0.375;
  double hi = 0.0;  // set to -theta* by admissible()
  std::size_t points = 10000;

  static ExponentGrid admissible(std::size_t points = 10000);
  /// Equispaced samples including both endpoints.
  std::vector<double> samples() const;
};

struct CurveRow {
  double x = 0.0;
  double f = 0.0;
  double g = 0.0;  // -x
  double f_plus_x = 0.0;
};

std::vector<CurveRow> export_curve(std::size_t points, double lo = -0.38, double hi = -0.30);

}  // namespace circdiv
