#include "circdiv/oracles.hpp"

#include <cmath>

namespace circdiv::oracle {

std::vector<std::int64_t> divisor_sums_sieve(std::uint64_t Xmax) {
  std::vector<std::uint16_t> d(Xmax + 1, 0);
  for (std::uint64_t a = 1; a <= Xmax; ++a)
    for (std::uint64_t n = a; n <= Xmax; n += a) ++d[n];
  std::vector<std::int64_t> out(Xmax + 1, 0);
  for (std::uint64_t n = 1; n <= Xmax; ++n) out[n] = out[n - 1] + d[n];
  return out;
}

std::vector<std::int64_t> lattice_counts_exhaustive(std::uint64_t Xmax) {
  std::int64_t side = 0;
  while (static_cast<std::uint64_t>((side + 1) * (side + 1)) <= Xmax) ++side;
  std::vector<std::int64_t> hits(Xmax + 1, 0);
  for (std::int64_t m = -side; m <= side; ++m)
    for (std::int64_t n = -side; n <= side; ++n) {
      const auto s = static_cast<std::uint64_t>(m * m + n * n);
      if (s <= Xmax) ++hits[s];
    }
  for (std::uint64_t x = 1; x <= Xmax; ++x) hits[x] += hits[x - 1];
  return hits;
}

std::int64_t star_count_bruteforce(int K, int L, double eta, double beta1, double beta2, double w) {
  const double win = w * eta * L * std::sqrt(static_cast<double>(K)) + 1e-9;
  const double dk = std::pow(eta, beta1) * K + 1e-9, dl = std::pow(eta, beta2) * L + 1e-9;
  std::int64_t count = 0;
  int k[4], l[4];
  for (k[0] = K; k[0] < 2 * K; ++k[0])
    for (k[1] = K; k[1] < 2 * K; ++k[1])
      for (k[2] = K; k[2] < 2 * K; ++k[2])
        for (k[3] = K; k[3] < 2 * K; ++k[3]) {
          const int kdiam = std::max({k[0], k[1], k[2], k[3]}) - std::min({k[0], k[1], k[2], k[3]});
          if (kdiam > dk) continue;
          for (l[0] = L; l[0] < 2 * L; ++l[0])
            for (l[1] = L; l[1] < 2 * L; ++l[1])
              for (l[2] = L; l[2] < 2 * L; ++l[2]) {
                l[3] = l[0] + l[1] - l[2];
                if (l[3] < L || l[3] >= 2 * L) continue;
                const int ldiam = std::max({l[0], l[1], l[2], l[3]}) - std::min({l[0], l[1], l[2], l[3]});
                if (ldiam > dl) continue;
                if (k[0] * l[0] + k[1] * l[1] != k[2] * l[2] + k[3] * l[3]) continue;
                const double gap = l[0] * std::sqrt(double(k[0])) + l[1] * std::sqrt(double(k[1])) -
                                   l[2] * std::sqrt(double(k[2])) - l[3] * std::sqrt(double(k[3]));
                if (std::fabs(gap) <= win) ++count;
              }
        }
  return count;
}

double g4_fourth_power_by_counting(const SpacingConfig& cfg, const CoefficientGrid& a) {
  const int K = cfg.K, L = cfg.L;
  const double A = 1.0 / (cfg.eta * L * std::sqrt(static_cast<double>(K)));
  std::complex<double> total = 0.0;
  for (int k1 = K; k1 < 2 * K; ++k1)
    for (int k2 = K; k2 < 2 * K; ++k2)
      for (int k3 = K; k3 < 2 * K; ++k3)
        for (int k4 = K; k4 < 2 * K; ++k4)
          for (int l1 = L; l1 < 2 * L; ++l1)
            for (int l2 = L; l2 < 2 * L; ++l2)
              for (int l3 = L; l3 < 2 * L; ++l3) {
                const int l4 = l1 + l2 - l3;
                if (l4 < L || l4 >= 2 * L || k1 * l1 + k2 * l2 != k3 * l3 + k4 * l4) continue;
                const double delta = l1 * std::sqrt(double(k1)) + l2 * std::sqrt(double(k2)) -
                                     l3 * std::sqrt(double(k3)) - l4 * std::sqrt(double(k4));
                const double arg = 2.0 * M_PI * delta * A;
                const double sinc = std::fabs(arg) < 1e-300 ? 1.0 : std::sin(arg) / arg;
                total += a(k1 - K, l1 - L) * a(k2 - K, l2 - L) * std::conj(a(k3 - K, l3 - L)) *
                         std::conj(a(k4 - K, l4 - L)) * sinc;
              }
  return total.real();
}

std::optional<UnimodMatrix> pair_matrix_search(std::int64_t a, std::int64_t r, std::int64_t a1, std::int64_t r1) {
  const std::int64_t n = r * r1;
  for (std::int64_t g = -n; g <= n; ++g) {
    if (!(2 * g > -n && 2 * g <= n)) continue;
    if ((r1 - g * a) % r != 0) continue;
    const std::int64_t d = (r1 - g * a) / r;
    if ((a1 * g + r) % r1 != 0 || (d * a1 - a) % r1 != 0) continue;
    const std::int64_t al = (a1 * g + r) / r1, be = (d * a1 - a) / r1;
    if (al * d - be * g != 1 || al * a + be * r != a1) continue;
    UnimodMatrix M;
    M << al, be, g, d;
    return M;
  }
  return std::nullopt;
}

Eigen::Vector4d x_vector_recompute(std::int64_t a, std::int64_t r, std::int64_t m, const PhaseFamily& F, double M,
                                   double T) {
  std::int64_t abar = 0;
  const std::int64_t ar = ((a % r) + r) % r;
  while (abar < r && (ar * abar) % r != 1 % r) ++abar;
  const long double z = static_cast<long double>(m) / M;
  const long double LT = T, LM = M;
  const long double mu = 0.5L * LT / (LM * LM * LM) * F.derivative(2, static_cast<double>(z));
  const long double slope = LT / (LM * LM) * F.derivative(1, static_cast<double>(z));
  const long double nu = (slope - static_cast<long double>(a) / r) / (2.0L * mu);
  const long double val = r * LT / LM * F(static_cast<double>(z)) - mu * nu * nu;
  const long double c = std::floor(val);
  const long double kappa = val - c;
  const long double root = std::sqrt(mu * r * r * r);
  Eigen::Vector4d x;
  x << static_cast<double>(static_cast<long double>(abar) / r), static_cast<double>(abar * c / r),
      static_cast<double>(1.0L / root), static_cast<double>(kappa / root);
  return x;
}

std::complex<double> exp_sum_direct(double H, double M, double T, const PhaseFamily& F) {
  std::complex<long double> s = 0.0L;
  for (auto h = static_cast<std::int64_t>(std::ceil(H)); h <= static_cast<std::int64_t>(std::floor(2 * H)); ++h)
    for (auto m = static_cast<std::int64_t>(std::ceil(M)); m <= static_cast<std::int64_t>(std::floor(2 * M)); ++m) {
      const long double ph = static_cast<long double>(h) * T / M * F(static_cast<double>(m) / M);
      const long double ang = 2.0L * M_PI * (ph - std::floor(ph));
      s += std::complex<long double>(std::cos(ang), std::sin(ang));
    }
  return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
}

}  // namespace circdiv::oracle
