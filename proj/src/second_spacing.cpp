#include "circdiv/second_spacing.hpp"

#include <cmath>
#include <numeric>

namespace circdiv {

namespace {

// distance to the nearest integer of p/q, exact, as a numerator over q
std::int64_t circle_gap(std::int64_t p, std::int64_t q) {
  const std::int64_t rem = mod_floor(p, q);
  return std::min(rem, q - rem);
}

}  // namespace

ExtGcd ext_gcd(std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t r) {
  if (r < 1) throw DomainError("mod_inverse: need r >= 1");
  const auto e = ext_gcd(mod_floor(a, r), r);
  if (e.g != 1) throw DomainError("mod_inverse: a is not invertible modulo r");
  return mod_floor(e.x, r);
}

double phase_slope(const PhaseFamily& F, double M, double T, double m) {
  return T / (M * M) * F.derivative(1, m / M);
}

std::pair<double, double> slope_range(const PhaseFamily& F, double M, double T) {
  const double s1 = phase_slope(F, M, T, M);
  const double s2 = phase_slope(F, M, T, 2.0 * M);
  return {std::min(s1, s2), std::max(s1, s2)};
}

MinorArcData arc_data(std::int64_t a, std::int64_t r, const PhaseFamily& F, double M, double T) {
  if (r < 1) throw DomainError("arc_data: need r >= 1");
  if (std::gcd(a, r) != 1) throw DomainError("arc_data: a/r must be reduced");
  if (!(M >= 1.0) || !(T > 0.0)) throw DomainError("arc_data: need M >= 1 and T > 0");
  const double target = static_cast<double>(a) / static_cast<double>(r);
  const auto [lo_s, hi_s] = slope_range(F, M, T);
  if (target < lo_s || target > hi_s) throw DomainError("arc_data: a/r lies outside the range of phi'");

  // phi' is monotone on [M, 2M] for every family
  double lo = M, hi = 2.0 * M;
  const bool increasing = phase_slope(F, M, T, hi) >= phase_slope(F, M, T, lo);
  for (int i = 0; i < 200 && hi - lo > 1e-9 * M * 1e-3; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((phase_slope(F, M, T, mid) < target) == increasing)
      lo = mid;
    else
      hi = mid;
  }
  MinorArcData d;
  d.a = a;
  d.r = r;
  d.m = static_cast<std::int64_t>(std::nearbyint(0.5 * (lo + hi)));
  const double z = static_cast<double>(d.m) / M;
  d.mu = 0.5 * T / (M * M * M) * F.derivative(2, z);
  d.negative_mu = d.mu < 0.0;
  if (d.mu == 0.0) throw DomainError("arc_data: mu vanishes");
  d.nu = (phase_slope(F, M, T, static_cast<double>(d.m)) - target) / (2.0 * d.mu);
  d.boundary = std::fabs(d.nu) > 1.0;
  const long double val = static_cast<long double>(r) * T / M * F(z) - static_cast<long double>(d.mu) * d.nu * d.nu;
  const long double fl = std::floor(val);
  d.c = static_cast<std::int64_t>(fl);
  d.kappa = static_cast<double>(val - fl);
  if (d.kappa >= 1.0) {
    d.kappa = 0.0;
    ++d.c;
  }
  d.value = static_cast<double>(val);
  d.abar = mod_inverse(a, r);
  return d;
}

std::vector<MinorArcData> enumerate_arcs(const PhaseFamily& F, double M, double T, std::int64_t r_max,
                                         std::int64_t r_min) {
  if (r_min < 1 || r_max < r_min) throw DomainError("enumerate_arcs: need 1 <= r_min <= r_max");
  const auto [lo, hi] = slope_range(F, M, T);
  std::vector<MinorArcData> out;
  for (std::int64_t r = r_min; r <= r_max; ++r) {
    const auto a0 = static_cast<std::int64_t>(std::ceil(lo * r));
    const auto a1 = static_cast<std::int64_t>(std::floor(hi * r));
    for (std::int64_t a = a0; a <= a1; ++a)
      if (std::gcd(a, r) == 1) out.push_back(arc_data(a, r, F, M, T));
  }
  return out;
}

XVector x_vector(const MinorArcData& d) {
  const double mr3 = d.mu * static_cast<double>(d.r) * d.r * d.r;
  if (!(mr3 > 0.0)) throw DomainError("x_vector: mu r^3 must be positive");
  const double root = std::sqrt(mr3);
  const double r = static_cast<double>(d.r);
  XVector x;
  x.raw << static_cast<double>(d.abar) / r, static_cast<double>(d.abar) * static_cast<double>(d.c) / r, 1.0 / root,
      d.kappa / root;
  x.reduced << static_cast<double>(d.abar % d.r) / r, static_cast<double>(mod_floor(d.abar * d.c, d.r)) / r;
  return x;
}

bool gamma_in_window(std::int64_t gamma, std::int64_t r, std::int64_t r1) {
  const std::int64_t n = r * r1;
  return -n < 2 * gamma && 2 * gamma <= n;
}

UnimodMatrix pair_matrix(std::int64_t a, std::int64_t r, std::int64_t a1, std::int64_t r1) {
  if (r < 1 || r1 < 1) throw DomainError("pair_matrix: need r, r1 >= 1");
  // B = [[a, x], [r, y]] with a y - x r = 1
  const auto e = ext_gcd(a, r);
  const auto e1 = ext_gcd(a1, r1);
  if (e.g != 1 || e1.g != 1) throw DomainError("pair_matrix: fractions must be reduced");
  const std::int64_t y = e.x, x = -e.y;
  const std::int64_t y1 = e1.x, x1 = -e1.y;
  const std::int64_t rr = r * r1;
  // gamma(n) = r1 y - r y1 - n r r1; pick n so gamma lands in (-rr/2, rr/2]
  const std::int64_t g0 = r1 * y - r * y1;
  std::int64_t gamma = mod_floor(g0, rr);
  if (2 * gamma > rr) gamma -= rr;
  const std::int64_t n = (g0 - gamma) / rr;
  UnimodMatrix M;
  M(0, 0) = a1 * y - r * (a1 * n + x1);
  M(0, 1) = -a1 * x + (a1 * n + x1) * a;
  M(1, 0) = gamma;
  M(1, 1) = -r1 * x + (r1 * n + y1) * a;
  if (M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0) != 1 || M(0, 0) * a + M(0, 1) * r != a1 || M(1, 0) * a + M(1, 1) * r != r1)
    throw DomainError("pair_matrix: internal construction failed");
  return M;
}

void PairWindow::validate() const {
  if (!(d1 > 0.0 && d2 > 0.0 && d3 > 0.0 && d4 > 0.0)) throw DomainError("PairWindow: all windows must be positive");
  if (!(d1 <= 0.5)) throw DomainError("PairWindow: d1 must be <= 1/2");
}

PairWindow PairWindow::from_spacing(int K, int L) {
  PairWindow w;
  const double k = K, l = L;
  w.d1 = std::min(0.5, 1.0 / (k * l));
  w.d2 = 1.0 / l;
  w.d3 = 1.0 / (l * std::sqrt(k));
  w.d4 = std::sqrt(k) / l;
  return w;
}

bool pair_is_close(const MinorArcData& x, const MinorArcData& y, const PairWindow& w) {
  const double rr = static_cast<double>(x.r) * static_cast<double>(y.r);
  if (static_cast<double>(circle_gap(x.abar * y.r - y.abar * x.r, x.r * y.r)) > w.d1 * rr) return false;
  const std::int64_t u = mod_floor(x.abar * x.c, x.r), v = mod_floor(y.abar * y.c, y.r);
  if (static_cast<double>(circle_gap(u * y.r - v * x.r, x.r * y.r)) > w.d2 * rr) return false;
  const double ratio = (y.mu * static_cast<double>(y.r) * y.r * y.r) / (x.mu * static_cast<double>(x.r) * x.r * x.r);
  if (!(std::fabs(ratio - 1.0) <= w.d3)) return false;
  double dk = std::fabs(x.kappa - y.kappa);
  if (w.kappa_mod1) dk = std::min(dk, 1.0 - dk);
  return dk <= w.d4;
}

ClosePairReport count_close_pairs(const std::vector<MinorArcData>& arcs, const PairWindow& w, bool with_histogram) {
  w.validate();
  ClosePairReport rep;
  for (const auto& x : arcs)
    for (const auto& y : arcs) {
      if (!pair_is_close(x, y, w)) continue;
      ++rep.count;
      const auto M = pair_matrix(x.a, x.r, y.a, y.r);
      if (static_cast<double>(std::llabs(M(1, 0))) > w.d1 * static_cast<double>(x.r) * static_cast<double>(y.r) &&
          rep.violations.size() < 100)
        rep.violations.push_back(std::to_string(x.a) + "/" + std::to_string(x.r) + " -> " + std::to_string(y.a) + "/" +
                                 std::to_string(y.r) + ": gamma=" + std::to_string(M(1, 0)));
      if (with_histogram) ++rep.histogram[{M(0, 0), M(0, 1), M(1, 0), M(1, 1)}];
    }
  return rep;
}

}  // namespace circdiv
