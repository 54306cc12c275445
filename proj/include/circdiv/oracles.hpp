#pragma once

// Brute-force reference implementations. Each one shares no code path with
// the routine it checks.

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "circdiv/first_spacing.hpp"
#include "circdiv/phase_family.hpp"
#include "circdiv/second_spacing.hpp"

namespace circdiv::oracle {

/// sum_{n<=X} d(n) for every X <= Xmax, from a divisor sieve.
std::vector<std::int64_t> divisor_sums_sieve(std::uint64_t Xmax);

/// Lattice counts for every X <= Xmax by scanning the full square.
std::vector<std::int64_t> lattice_counts_exhaustive(std::uint64_t Xmax);

/// System (*) for n = 2 by looping over all eight variables.
std::int64_t star_count_bruteforce(int K, int L, double eta, double beta1, double beta2, double w = 1.0);

/// G_4^4 = sum over tuples with equal l-sum and kl-sum of a1 a2 conj(a3 a4) sinc(2 pi delta A).
double g4_fourth_power_by_counting(const SpacingConfig& cfg, const CoefficientGrid& a);

/// The matrix found by scanning every gamma in the window; nullopt if none fits.
std::optional<UnimodMatrix> pair_matrix_search(std::int64_t a, std::int64_t r, std::int64_t a1, std::int64_t r1);

/// x_{a/r} rebuilt from (a, r, m) with a direct inverse search.
Eigen::Vector4d x_vector_recompute(std::int64_t a, std::int64_t r, std::int64_t m, const PhaseFamily& F, double M,
                                   double T);

/// Direct double sum with long double phases, h outer.
std::complex<double> exp_sum_direct(double H, double M, double T, const PhaseFamily& F);

}  // namespace circdiv::oracle
