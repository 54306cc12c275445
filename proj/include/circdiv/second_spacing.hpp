#pragma once

// Minor-arc data a/r -> (m, mu, nu, c, kappa, abar), the vector x_{a/r}, the
// determinant-one matrix linking two arcs, and brute-force close-pair counts.

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "circdiv/numeric.hpp"
#include "circdiv/phase_family.hpp"

namespace circdiv {

struct SpacingConfig;

/// abar in [0, r) with a * abar = 1 (mod r). Throws DomainError when gcd(a, r) != 1.
std::int64_t mod_inverse(std::int64_t a, std::int64_t r);

/// g = gcd(a, b) >= 0 and a x + b y = g.
struct ExtGcd {
  std::int64_t g = 0, x = 0, y = 0;
};
ExtGcd ext_gcd(std::int64_t a, std::int64_t b);

struct MinorArcData {
  std::int64_t a = 0;
  std::int64_t r = 1;
  std::int64_t m = 0;
  double mu = 0.0;
  double nu = 0.0;
  std::int64_t c = 0;
  double kappa = 0.0;
  std::int64_t abar = 0;
  double value = 0.0;        // r (T/M) F(m/M) - mu nu^2, so value = c + kappa
  bool boundary = false;     // |nu| > 1 after rounding m
  bool negative_mu = false;
};

/// phi'(m) = (T/M^2) F'(m/M) for real m.
double phase_slope(const PhaseFamily& F, double M, double T, double m);

/// Closed range of phi' over [M, 2M], as (lo, hi).
std::pair<double, double> slope_range(const PhaseFamily& F, double M, double T);

MinorArcData arc_data(std::int64_t a, std::int64_t r, const PhaseFamily& F, double M, double T);

/// Every reduced a/r with r in [r_min, r_max] inside the slope range.
std::vector<MinorArcData> enumerate_arcs(const PhaseFamily& F, double M, double T, std::int64_t r_max,
                                         std::int64_t r_min = 1);

struct XVector {
  Eigen::Vector4d raw = Eigen::Vector4d::Zero();
  Eigen::Vector2d reduced = Eigen::Vector2d::Zero();  // first two components mod 1
};

/// (abar/r, abar c/r, 1/sqrt(mu r^3), kappa/sqrt(mu r^3)). Throws if mu r^3 <= 0.
XVector x_vector(const MinorArcData& d);

using UnimodMatrix = Eigen::Matrix<std::int64_t, 2, 2>;

/// The unique M with (a1, r1)^T = M (a, r)^T, det M = 1, -r r1/2 < gamma <= r r1/2.
UnimodMatrix pair_matrix(std::int64_t a, std::int64_t r, std::int64_t a1, std::int64_t r1);

/// gamma in the window (-r r1/2, r r1/2].
bool gamma_in_window(std::int64_t gamma, std::int64_t r, std::int64_t r1);

struct PairWindow {
  double d1 = 0.25;
  double d2 = 0.25;
  double d3 = 0.25;
  double d4 = 0.25;
  bool kappa_mod1 = false;  // compare kappa as a circle distance
  /// All positive and d1 <= 1/2.
  void validate() const;
  /// 1/(KL), 1/L, 1/(L sqrt K), sqrt(K)/L.
  static PairWindow from_spacing(int K, int L);
};

using MatrixKey = std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>;

struct ClosePairReport {
  std::int64_t count = 0;  // ordered pairs, including (i, i)
  std::map<MatrixKey, std::int64_t> histogram;
  std::vector<std::string> violations;  // pairs with |gamma| > d1 r r1
};

/// The four closeness conditions on one ordered pair.
bool pair_is_close(const MinorArcData& x, const MinorArcData& y, const PairWindow& w);

ClosePairReport count_close_pairs(const std::vector<MinorArcData>& arcs, const PairWindow& w,
                                  bool with_histogram = true);

}  // namespace circdiv
