#pragma once

// The double exponential sum S(H, M, T), the derivative conditions on F,
// the Case A / Case B split, the derived parameter block, and the bound
// formulas that close the argument.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "circdiv/numeric.hpp"
#include "circdiv/phase_family.hpp"

namespace circdiv {

struct ConditionConstants {
  double C1 = 16.0;
  double C2 = 16.0;
  double C3 = 20.0;
  double C4 = 200.0;
  double C5 = 3.0;
  double B0 = 1.0;
  void validate() const;
};

/// max(max|F^(r)|, 1/min|F^(r)|) for r = 1..3 and 1/min|F'F''' - 3F''^2| on the grid.
struct MinimalConstants {
  double C1 = 0.0, C2 = 0.0, C3 = 0.0, C4 = 0.0;
};

MinimalConstants minimal_constants(const PhaseFamily& F, std::size_t grid = 1001);

/// The two derivative conditions on [1,2], checked on an equispaced grid.
bool check_F_conditions(const PhaseFamily& F, const ConditionConstants& c, std::size_t grid = 1001);

using Weight = std::function<double(double)>;

/// Piecewise-linear weight on [1,2] through equispaced samples.
Weight tabulated_weight(std::vector<double> samples);

struct SumSpec {
  double H = 1.0;
  double M = 1.0;
  double T = 1.0;
  PhaseFamily F = PhaseFamily::reciprocal();
  Weight g;  // empty means constant 1
  Weight G;
  void validate() const;
};

enum class SumOrder { h_outer, m_outer };

std::complex<double> eval_S(const SumSpec& spec, SumOrder order = SumOrder::h_outer);

struct SumEvaluation {
  std::complex<double> value;      // h-outer order
  std::complex<double> alternate;  // m-outer order
  double relative_gap = 0.0;       // |value - alternate| / max(1, |value|)
  bool phase_exact = true;         // false once |hT/M F| exceeds 2^53
  std::int64_t terms = 0;
};

SumEvaluation eval_S_checked(const SumSpec& spec);

/// Number of integers in [a, 2a].
std::int64_t dyadic_count(double a);

struct CaseOptions {
  bool literal_guard = false;  // read the first guard of Case A as M < T^{-7/16}
};

struct CaseLabel {
  bool A = false;
  bool B = false;
  std::string label() const;  // "A", "B", "A+B" or "Neither"
};

bool in_case_A(double H, double M, double T, const CaseOptions& opts = {});
bool in_case_B(double H, double M, double T, const ConditionConstants& c);
CaseLabel classify_case(double H, double M, double T, const ConditionConstants& c = {},
                        const CaseOptions& opts = {});

/// M^{-27/23} T^{53/92} < H < M^{-9} T^4 (log T)^{171/140}.
bool reduction_condition(double H, double M, double T);

enum class SumCase { A, B };

double N_case_A(double H, double M, double T);
double N_case_B(double H, double M, double T);

struct DerivedParams {
  SumCase which = SumCase::A;
  double H = 0.0, M = 0.0, T = 0.0;
  double N = 0.0, R = 0.0, K = 0.0, L = 0.0, eta = 0.0;
  double Q_min = 0.0, Q_max = 0.0, Q2 = 0.0;
  bool degenerate = false;  // R > H
  /// L <= K <= 1/eta <= KL up to a relative tolerance.
  bool ordered(double rel_tol = 1e-9) const;
};

DerivedParams derive_params(double H, double M, double T, SumCase which, const ConditionConstants& c = {},
                            const CaseOptions& opts = {});

struct SimpleBound {
  double full = 0.0;        // H((HT/M^2)^{-1} + M (HT/M^3)^{1/2})
  double simplified = 0.0;  // H^{3/2} T^{1/2} / M^{1/2}
};

SimpleBound simple_bound(double H, double M, double T);

/// N^{6-q} >= margin H^{2q-6} (M^3/T)^{4-q}, evaluated in logarithms.
bool condition_N_check(double H, double M, double T, double q, double N, double margin = 1.0);

/// The Case-A N substituted and simplified: (H/M)^a <= T^c (log T)^{969/14000} margin^{-1/(6-q)}.
bool case_a_condition(double H, double M, double T, double q, double margin = 1.0);

/// The simplified Case-A condition exactly as printed, with the M^{34/25} factor.
bool case_a_condition_printed(double H, double M, double T, double q, double margin = 1.0);

/// Both N-exponents of the middle form.
struct MiddleExponents {
  double main = 0.0;     // 1/2 - 57/(17q) - 2(q-4)/(q(q-2))
  double bracket = 0.0;  // 3/2 - 4/(q-2)
};
MiddleExponents middle_form_N_exponents(double q);

/// Upper bound for S (not S/H) in the N-dependent form.
double bound_middle_form(double H, double M, double T, double q, double N);

struct FinalForm {
  double value = 0.0;      // S/H bound with every log T power dropped
  double with_logs = 0.0;  // same form with the Case-A log powers restored
};

FinalForm bound_final_form(double H, double M, double T, double q);

struct QRangeMax {
  double value = 0.0;
  double argmax_Q = 0.0;
  std::size_t grid = 0;
};

/// max over a log-spaced Q grid in [R, Q2] with Gq held constant.
QRangeMax q_range_max_bound(const DerivedParams& p, double q, double Gq, std::size_t grid = 200);

/// Same with Gq depending on Q.
QRangeMax q_range_max_bound(const DerivedParams& p, double q, const std::function<double(double)>& Gq,
                std::size_t grid = 200);

/// The first-spacing upper bound at K(Q) = NQ/R^2, L(Q) = HQ/R^2 with eta fixed.
double gq_at_Q(const DerivedParams& p, double q, double Q);

struct CaseBReductionReport {
  std::size_t samples = 0;   // accepted points (domain holds and Case I fails)
  std::size_t attempts = 0;
  std::size_t violations = 0;
  double min_log_margin = 0.0;  // smallest ln(rhs/lhs) over every checked inequality
  std::vector<std::string> failures;
};

/// Rejection-samples (x, log_T M) with H = M T^x from the restricted domain at
/// fixed T, keeps points where Case I fails, and checks both Case-B
/// conditions and the reduction condition.
CaseBReductionReport case_b_reduction_check(double T, std::size_t samples, std::uint64_t seed,
                            const ConditionConstants& c = {});

}  // namespace circdiv
