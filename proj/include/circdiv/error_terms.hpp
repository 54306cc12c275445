#pragma once

// Circle and divisor error terms: exact counts, main terms, and the sawtooth
// recompositions that feed the exponential-sum machinery.

#include <cstdint>
#include <vector>

namespace circdiv {

struct ErrorSample {
  std::uint64_t X = 0;
  std::int64_t exact = 0;  // lattice count or divisor sum
  double main_term = 0.0;
  double error = 0.0;      // exact - main_term
};

struct SawtoothConfig {
  double Y = 1.0;  // truncation length of the Fourier expansion
  void validate() const;
};

enum class ErrorKind { circle, divisor };

/// Which form of the circle recomposition to use. `printed` repeats the
/// -1/4 shifted sum with opposite signs (so the pair cancels); `corrected`
/// pairs a -1/4 sum with a +1/4 sum.
enum class CircleVariant { printed, corrected };

/// sum_{n<=X} d(n) via 2*sum_{m<=sqrt X} floor(X/m) - floor(sqrt X)^2.
std::int64_t divisor_sum(std::uint64_t X);

/// #{(m,n) in Z^2 : m^2 + n^2 <= X}, row by row with exact integer sqrt.
std::int64_t lattice_count(std::uint64_t X);

/// Lattice counts N(0..Xmax) in one pass (r2 histogram plus prefix sum).
std::vector<std::int64_t> lattice_counts_upto(std::uint64_t Xmax);

double divisor_main_term(std::uint64_t X);
double circle_main_term(std::uint64_t X);

double delta(std::uint64_t X);
double r_error(std::uint64_t X);

ErrorSample divisor_sample(std::uint64_t X);
ErrorSample circle_sample(std::uint64_t X);

/// Sawtooth psi(t) = {t} - 1/2.
double psi(double t);

/// -Im sum_{1<=h<=Y} e(ht)/(pi h), the truncated Fourier series of psi.
double psi_truncated(double t, const SawtoothConfig& cfg);

/// -2 sum_{m<=sqrt X} psi(X/m) for the divisor problem, or the four-sum
/// recomposition for the circle problem. Each psi is evaluated from integer
/// residues, so no floating rounding enters the sawtooth values.
double error_via_sawtooth(ErrorKind kind, std::uint64_t X,
                          CircleVariant variant = CircleVariant::corrected);

struct HardyRatio {
  double max_ratio = 0.0;
  std::uint64_t argmax = 0;
};

/// max over Xmin <= X <= Xmax of |R(X)| / (X ln X)^{1/4}. Xmin must be >= 2.
HardyRatio hardy_ratio(std::uint64_t Xmin, std::uint64_t Xmax);

}  // namespace circdiv
