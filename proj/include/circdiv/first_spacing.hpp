#pragma once

// The first spacing problem: the mean value G_q by quadrature, near-solution
// counts of the Diophantine system (with and without localization), the cone
// parametrisation and plate partition, and the bound formulas built on them.
//
// Range convention everywhere: k in [K, 2K), l in [L, 2L).

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "circdiv/numeric.hpp"

namespace circdiv {

struct SpacingConfig {
  int K = 2;
  int L = 1;
  double eta = 0.5;
  double q = 4.0;
  /// 1 <= L < K <= 1/eta <= KL and 4 <= q <= 4.5.
  void validate() const;
};

/// a_{kl} stored at (k - K, l - L).
using CoefficientGrid = Eigen::MatrixXcd;

CoefficientGrid ones_grid(int K, int L);
/// Unit-modulus coefficients with uniformly random phases.
CoefficientGrid random_phase_grid(int K, int L, std::mt19937_64& rng);

/// Largest frequency on each axis: 2L, 4KL, 2L sqrt(2K).
Eigen::Vector3d max_frequencies(int K, int L);

struct GqQuadrature {
  double value = 0.0;
  std::int64_t n1 = 0, n2 = 0, n3 = 0;
};

/// Averaged L^q norm over |x1| <= 1, |x2| <= 1, |x3| <= 1/(eta L sqrt K).
/// `points_per_oscillation` is the number of grid points per period of the
/// largest frequency on each axis; below 8 the call is refused.
GqQuadrature gq_norm(const SpacingConfig& cfg, const CoefficientGrid& a, double points_per_oscillation = 8.0);

struct GqConvergence {
  double coarse = 0.0;
  double fine = 0.0;  // at twice the resolution
  double relative_change = 0.0;
};

GqConvergence gq_norm_doubling(const SpacingConfig& cfg, const CoefficientGrid& a, double points_per_oscillation = 8.0);

struct SystemStarSpec {
  int n = 2;
  int K = 2;
  int L = 1;
  double eta = 0.5;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double w = 1.0;           // multiplies eta L sqrt(K) in the near-equality window
  bool swap_roles = false;  // diam(k) <= eta^{beta2} K, diam(l) <= eta^{beta1} L
};

/// Tuples (k1..k4, l1..l4) with l1+l2 = l3+l4, k1l1+k2l2 = k3l3+k4l4 and
/// |l1 sqrt k1 + l2 sqrt k2 - l3 sqrt k3 - l4 sqrt k4| <= w eta L sqrt K.
std::int64_t count_unlocalized(int n, int K, int L, double eta, double w = 1.0);

/// The same count with diam(k_i) <= eta^{beta1} K and diam(l_i) <= eta^{beta2} L.
std::int64_t count_system_star(const SystemStarSpec& spec);

struct StarQuery {
  double eta = 0.5;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double w = 1.0;
};

/// Counts for several (eta, beta1, beta2, w) at one (K, L) in a single pass.
std::vector<std::int64_t> count_system_star_batch(int K, int L, const std::vector<StarQuery>& queries,
                                                  bool swap_roles = false);

struct ConePoint {
  Eigen::Vector3d xi = Eigen::Vector3d::Zero();
  int k = 0;
  int l = 0;
};

ConePoint cone_map(int k, int l, int K, int L);

/// xi3^2 - xi2^2 == xi1^2 in exact rational arithmetic (xi1^2 is rational).
bool cone_identity_exact(int k, int l, int K, int L);

/// Angle of (xi1, xi2); depends on k/K only.
double circular_parameter(const ConePoint& p);

struct ConeSeparation {
  double min_circular_times_K = 0.0;  // adjacent k, same l
  double max_circular_times_K = 0.0;
  double min_null_times_L = 0.0;      // adjacent l, same k, measured in xi3
  double max_null_times_L = 0.0;
};

ConeSeparation cone_grid_separations(int K, int L);

struct Plate {
  int index = 0;
  std::vector<std::pair<int, int>> members;  // (k, l)
  int k_lo = 0, k_hi = 0, l_lo = 0, l_hi = 0;  // bounding rectangle, inclusive
  double null_extent = 0.0;      // spread of xi3 over the members
  double circular_extent = 0.0;  // spread of the circular angle times mean xi3
};

/// Cells of width eta^{beta1} in k/K and eta^{beta2} in l/L.
std::vector<Plate> plate_partition(int K, int L, double eta, double beta1, double beta2, bool swap_roles = false);

struct DecouplingConstant {
  double term1 = 0.0;  // eta^{-b(1/2-1/q)}
  double term2 = 0.0;  // eta^{-b(1-2/q)+1/q}
  double term3 = 0.0;  // eta^{-(b-1/2)(1-2/q)}
  double full() const { return term1 + term2 + term3; }
  double simplified() const { return term1 + term2; }
};

DecouplingConstant decoupling_D(double beta1, double beta2, double q, double eta);

struct Betas {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double beta = 0.0;
};

Betas betas_solve(double K, double L, double eta, double q);

/// A bound with its eps-power reported separately: bound = base * eps_factor.
struct ExplicitBound {
  double base = 0.0;
  double eps_factor = 1.0;
  double value() const { return base * eps_factor; }
};

ExplicitBound e4_bound(double K, double L, double eta, double beta1, double beta2, double eps = 0.05);

/// 100 K^{1.05} L (eta^{2(b1+b2)} K^2 L + eta^{2 b1} K^2 + eta^{2 b2} L^2).
double e4_count_cap(double K, double L, double eta, double beta1, double beta2);

/// eta^{(q-4)/(q(q-2))} (KL)^{1-2/q} (1 + eta^{2/(q-2)} K)^{1/q}, no assumption checks.
double gq_upper_formula(double K, double L, double eta, double q);

ExplicitBound gq_upper_bound(double K, double L, double eta, double q, double eps = 0.05);

/// D (eta^b KL)^{1-4/q} E4^{4/q} at the betas_solve choice.
double interpolation_replay(double K, double L, double eta, double q);

}  // namespace circdiv
