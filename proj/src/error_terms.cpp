#include "circdiv/error_terms.hpp"

#include <cmath>
#include <string>

#include "circdiv/numeric.hpp"

namespace circdiv {

namespace {

// psi(p/q) for q > 0, exact up to the final division.
long double psi_ratio(std::int64_t p, std::int64_t q) {
  return static_cast<long double>(mod_floor(p, q)) / static_cast<long double>(q) - 0.5L;
}

}  // namespace

void SawtoothConfig::validate() const {
  if (!std::isfinite(Y) || Y < 1.0) throw DomainError("SawtoothConfig: Y must be finite and >= 1");
}

std::int64_t divisor_sum(std::uint64_t X) {
  if (X < 1) throw DomainError("divisor_sum: X must be >= 1");
  if (X > static_cast<std::uint64_t>(INT64_MAX)) throw OverflowError("divisor_sum: X exceeds int64");
  const std::uint64_t s = isqrt(X);
  std::int64_t acc = 0;
  for (std::uint64_t m = 1; m <= s; ++m) acc = checked_add(acc, static_cast<std::int64_t>(X / m), "divisor_sum");
  acc = checked_mul(acc, 2, "divisor_sum");
  const auto sq = checked_mul(static_cast<std::int64_t>(s), static_cast<std::int64_t>(s), "divisor_sum");
  return acc - sq;
}

std::int64_t lattice_count(std::uint64_t X) {
  if (X > static_cast<std::uint64_t>(INT64_MAX)) throw OverflowError("lattice_count: X exceeds int64");
  const std::uint64_t s = isqrt(X);
  // row m = 0 plus the symmetric rows +-m
  std::int64_t acc = 2 * static_cast<std::int64_t>(s) + 1;
  for (std::uint64_t m = 1; m <= s; ++m) {
    const auto row = 2 * static_cast<std::int64_t>(isqrt(X - m * m)) + 1;
    acc = checked_add(acc, checked_mul(row, 2, "lattice_count"), "lattice_count");
  }
  return acc;
}

std::vector<std::int64_t> lattice_counts_upto(std::uint64_t Xmax) {
  std::vector<std::int64_t> counts(Xmax + 1, 0);
  const auto s = static_cast<std::int64_t>(isqrt(Xmax));
  for (std::int64_t m = -s; m <= s; ++m) {
    const auto rest = Xmax - static_cast<std::uint64_t>(m * m);
    const auto t = static_cast<std::int64_t>(isqrt(rest));
    for (std::int64_t n = -t; n <= t; ++n) ++counts[static_cast<std::size_t>(m * m + n * n)];
  }
  for (std::size_t i = 1; i < counts.size(); ++i) counts[i] += counts[i - 1];
  return counts;
}

double divisor_main_term(std::uint64_t X) {
  const auto x = static_cast<long double>(X);
  return static_cast<double>(x * std::log(x) + (2.0L * kEulerGamma - 1.0L) * x);
}

double circle_main_term(std::uint64_t X) { return static_cast<double>(kPi * static_cast<long double>(X)); }

double delta(std::uint64_t X) {
  const auto x = static_cast<long double>(X);
  const auto main = x * std::log(x) + (2.0L * kEulerGamma - 1.0L) * x;
  return static_cast<double>(static_cast<long double>(divisor_sum(X)) - main);
}

double r_error(std::uint64_t X) {
  return static_cast<double>(static_cast<long double>(lattice_count(X)) - kPi * static_cast<long double>(X));
}

ErrorSample divisor_sample(std::uint64_t X) {
  ErrorSample s;
  s.X = X;
  s.exact = divisor_sum(X);
  s.main_term = divisor_main_term(X);
  s.error = delta(X);
  return s;
}

ErrorSample circle_sample(std::uint64_t X) {
  ErrorSample s;
  s.X = X;
  s.exact = lattice_count(X);
  s.main_term = circle_main_term(X);
  s.error = r_error(X);
  return s;
}

double psi(double t) { return frac(t) - 0.5; }

double psi_truncated(double t, const SawtoothConfig& cfg) {
  cfg.validate();
  const auto H = static_cast<std::int64_t>(std::floor(cfg.Y));
  const long double f = t - std::floor(static_cast<long double>(t));
  long double acc = 0.0L;
  for (std::int64_t h = 1; h <= H; ++h) {
    // reduce h*f mod 1 before the sine so large h keeps full precision
    const long double ph = h * f - std::floor(h * f);
    acc += std::sin(2.0L * kPi * ph) / static_cast<long double>(h);
  }
  return static_cast<double>(-acc / kPi);
}

double error_via_sawtooth(ErrorKind kind, std::uint64_t X, CircleVariant variant) {
  if (X < 1) throw DomainError("error_via_sawtooth: X must be >= 1");
  if (X > static_cast<std::uint64_t>(INT64_MAX / 8)) throw OverflowError("error_via_sawtooth: X too large");
  const auto x = static_cast<std::int64_t>(X);
  const auto s = static_cast<std::int64_t>(isqrt(X));
  long double acc = 0.0L;
  if (kind == ErrorKind::divisor) {
    for (std::int64_t m = 1; m <= s; ++m) acc += psi_ratio(x, m);
    return static_cast<double>(-2.0L * acc);
  }
  // chi(d) psi(X/d) over odd d <= sqrt X, i.e. d = 4m+1 (m >= 0) and d = 4m-1 (m >= 1)
  for (std::int64_t d = 1; d <= s; d += 2) acc += (d % 4 == 1 ? 1.0L : -1.0L) * psi_ratio(x, d);
  long double minus_quarter = 0.0L;
  long double plus_quarter = 0.0L;
  for (std::int64_t m = 1; m <= s; ++m) {
    minus_quarter += psi_ratio(x - m, 4 * m);  // X/(4m) - 1/4
    plus_quarter += psi_ratio(x + m, 4 * m);   // X/(4m) + 1/4
  }
  if (variant == CircleVariant::printed) {
    // as printed: the -1/4 sum enters with both signs
    acc += minus_quarter - minus_quarter;
  } else {
    acc += minus_quarter - plus_quarter;
  }
  return static_cast<double>(-4.0L * acc);
}

HardyRatio hardy_ratio(std::uint64_t Xmin, std::uint64_t Xmax) {
  if (Xmin < 2 || Xmax < Xmin) throw DomainError("hardy_ratio: need 2 <= Xmin <= Xmax");
  const auto counts = lattice_counts_upto(Xmax);
  HardyRatio out;
  for (std::uint64_t X = Xmin; X <= Xmax; ++X) {
    const auto x = static_cast<long double>(X);
    const long double R = static_cast<long double>(counts[X]) - kPi * x;
    const auto ratio = static_cast<double>(std::fabs(R) / std::pow(x * std::log(x), 0.25L));
    if (ratio > out.max_ratio) {
      out.max_ratio = ratio;
      out.argmax = X;
    }
  }
  return out;
}

}  // namespace circdiv
