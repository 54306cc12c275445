#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <set>

#include "circdiv/first_spacing.hpp"
#include "circdiv/oracles.hpp"

using namespace circdiv;

TEST_SUITE("first_spacing") {
  TEST_CASE("config assumptions") {
    CHECK_NOTHROW(SpacingConfig{2, 1, 0.5, 4.0}.validate());
    CHECK_THROWS_AS((SpacingConfig{2, 2, 0.5, 4.0}.validate()), DomainError);
    CHECK_THROWS_AS((SpacingConfig{4, 1, 0.5, 4.0}.validate()), DomainError);   // 1/eta < K
    CHECK_THROWS_AS((SpacingConfig{4, 1, 0.125, 4.0}.validate()), DomainError);  // KL < 1/eta
    CHECK_THROWS_AS((SpacingConfig{2, 1, 0.5, 4.6}.validate()), DomainError);
  }

  TEST_CASE("count K=2, L=1 in a tiny window") {
    // only multiset-equal tuples over k in {2, 3} survive
    CHECK(count_unlocalized(2, 2, 1, 1e-6) == 6);
    CHECK(oracle::star_count_bruteforce(2, 1, 1e-6, 0, 0) == 6);
    CHECK_THROWS_AS(count_unlocalized(3, 4, 2, 0.25), DomainError);
  }

  TEST_CASE("unlocalized and localized counts agree with brute force") {
    for (int K : {4, 8})
      for (int L : {1, 2, 3}) {
        if (L >= K) continue;
        for (double eta : {1.0 / K, 2.0 / K}) {
          if (eta * K * L < 1.0) continue;
          CHECK(count_unlocalized(2, K, L, eta) == oracle::star_count_bruteforce(K, L, eta, 0, 0));
          for (double b : {0.5, 1.0}) {
            const SystemStarSpec s{2, K, L, eta, b, b};
            CHECK(count_system_star(s) == oracle::star_count_bruteforce(K, L, eta, b, b));
          }
        }
      }
  }

  TEST_CASE("diagonal floor, vacuous localization and monotonicity") {
    const int K = 8, L = 3;
    const double eta = 1.0 / 8;
    const auto un = count_unlocalized(2, K, L, eta);
    CHECK(un >= std::int64_t(K) * K * L * L);
    CHECK(count_system_star({2, K, L, eta, 0, 0}) == un);
    for (double b1 : {0.0, 0.5, 1.0})
      for (double b2 : {0.0, 0.5, 1.0}) CHECK(count_system_star({2, K, L, eta, b1, b2}) <= un);
    // a huge window leaves the two equalities alone
    CHECK(count_unlocalized(2, K, L, eta, 1e9) >= un);
  }

  TEST_CASE("batch counts equal single counts") {
    const std::vector<StarQuery> qs = {{0.125, 0, 0, 1}, {0.125, 0.5, 1, 1}, {0.25, 1, 0.5, 2}};
    const auto batch = count_system_star_batch(8, 2, qs);
    for (std::size_t i = 0; i < qs.size(); ++i)
      CHECK(batch[i] == count_system_star({2, 8, 2, qs[i].eta, qs[i].beta1, qs[i].beta2, qs[i].w}));
  }

  TEST_CASE("a diameter below one forces equal k") {
    // eta^{beta1} K < 1: every k_i equals k_1
    const int K = 4, L = 2;
    const double eta = 0.25;
    const auto c = count_system_star({2, K, L, eta, 1.5, 0});
    std::int64_t constant_k = 0;
    // with k fixed, l1 + l2 = l3 + l4 forces both equalities; the window is then |k|-free
    for (int k = K; k < 2 * K; ++k)
      for (int l1 = L; l1 < 2 * L; ++l1)
        for (int l2 = L; l2 < 2 * L; ++l2)
          for (int l3 = L; l3 < 2 * L; ++l3) {
            const int l4 = l1 + l2 - l3;
            if (l4 >= L && l4 < 2 * L) ++constant_k;
          }
    CHECK(c == constant_k);
  }

  TEST_CASE("counts stay under the explicit cap") {
    for (int K : {4, 8, 16})
      for (int L = 1; L < K; L *= 2)
        for (double eta : {1.0 / K, 2.0 / K})
          for (double b1 : {0.0, 0.5, 1.0})
            for (double b2 : {0.0, 0.5, 1.0})
              CHECK(double(count_system_star({2, K, L, eta, b1, b2})) <= e4_count_cap(K, L, eta, b1, b2));
  }

  TEST_CASE("gq_norm: zero, refusal and the counting identity") {
    const SpacingConfig c{2, 1, 0.5, 4.0};
    CHECK(gq_norm(c, CoefficientGrid::Zero(2, 1)).value == 0.0);
    CHECK_THROWS_AS(gq_norm(c, ones_grid(2, 1), 7.9), DomainError);
    CHECK_THROWS_AS(gq_norm(c, ones_grid(3, 1)), DomainError);
    const double g = gq_norm(c, ones_grid(2, 1)).value;
    CHECK(std::pow(g, 4) == doctest::Approx(oracle::g4_fourth_power_by_counting(c, ones_grid(2, 1))).epsilon(1e-9));
    CHECK(g == doctest::Approx(1.565085).epsilon(1e-6));
  }

  TEST_CASE("gq_norm matches the counting identity for random phases") {
    std::mt19937_64 rng(3);
    for (const auto& c : {SpacingConfig{4, 1, 0.25, 4.0}, SpacingConfig{4, 2, 0.25, 4.0}, SpacingConfig{8, 2, 0.125, 4.0}}) {
      const auto a = random_phase_grid(c.K, c.L, rng);
      const double ref = oracle::g4_fourth_power_by_counting(c, a);
      // the sqrt(k) frequencies are not grid-aligned in x3: second-order convergence
      const double e8 = std::fabs(std::pow(gq_norm(c, a, 8).value, 4) / ref - 1);
      const double e16 = std::fabs(std::pow(gq_norm(c, a, 16).value, 4) / ref - 1);
      CHECK(e8 < 1e-6);
      CHECK(e16 < e8 / 3);
    }
  }

  TEST_CASE("gq_norm is invariant under a global phase") {
    std::mt19937_64 rng(5);
    const SpacingConfig c{4, 2, 0.25, 4.25};
    const auto a = random_phase_grid(4, 2, rng);
    const CoefficientGrid b = a * std::polar(1.0, 0.7);
    CHECK(gq_norm(c, a).value == doctest::Approx(gq_norm(c, b).value).epsilon(1e-12));
  }

  TEST_CASE("gq_norm resolution doubling converges") {
    const auto r = gq_norm_doubling({4, 2, 0.25, 4.5}, ones_grid(4, 2));
    CHECK(r.relative_change < 0.01);
    const auto m = max_frequencies(4, 2);
    CHECK(m[0] == 4.0);
    CHECK(m[1] == 32.0);
    CHECK(m[2] == doctest::Approx(4.0 * std::sqrt(8.0)));
  }

  TEST_CASE("cone map") {
    const auto p = cone_map(4, 2, 4, 2);
    CHECK(p.xi[0] == doctest::Approx(1.0));
    CHECK(p.xi[1] == doctest::Approx(0.0));
    CHECK(p.xi[2] == doctest::Approx(1.0));
    const auto e = cone_map(8, 2, 4, 2);
    CHECK(e.xi[0] == doctest::Approx(std::sqrt(2.0)));
    CHECK(e.xi[1] == doctest::Approx(0.5));
    CHECK(e.xi[2] == doctest::Approx(1.5));
    for (int K : {4, 16})
      for (int L : {1, 3}) {
        std::set<std::tuple<long long, long long, long long>> seen;
        for (int k = K; k < 2 * K; ++k)
          for (int l = L; l < 2 * L; ++l) {
            REQUIRE(cone_identity_exact(k, l, K, L));
            const auto c = cone_map(k, l, K, L);
            CHECK(std::fabs(c.xi[2] * c.xi[2] - c.xi[1] * c.xi[1] - c.xi[0] * c.xi[0]) < 1e-12);
            seen.insert({std::llround(c.xi[0] * 1e9), std::llround(c.xi[1] * 1e9), std::llround(c.xi[2] * 1e9)});
          }
        CHECK(seen.size() == std::size_t(K * L));
      }
  }

  TEST_CASE("cone grid separations scale like 1/K and 1/L") {
    for (auto [K, L] : {std::pair{16, 4}, std::pair{64, 8}}) {
      const auto s = cone_grid_separations(K, L);
      CHECK(s.min_circular_times_K > 0.2);
      CHECK(s.max_circular_times_K < 1.0);
      CHECK(s.min_null_times_L >= 0.9);
      CHECK(s.max_null_times_L < 2.0);
    }
  }

  TEST_CASE("plate partition") {
    const auto one = plate_partition(8, 2, 0.125, 0, 0);
    REQUIRE(one.size() == 1);
    CHECK(one[0].members.size() == 16);
    // beta2 = 1 always fails eta^{beta2} L >= 1, since eta L < eta K <= 1
    CHECK_THROWS_AS(plate_partition(16, 4, 1.0 / 16, 1, 1), DomainError);
    for (auto [b1, b2] : {std::pair{1.0, 0.0}, std::pair{0.5, 0.5}, std::pair{0.75, 0.25}}) {
      const int K = 16, L = 4;
      const double eta = 1.0 / 16;
      const auto plates = plate_partition(K, L, eta, b1, b2);
      std::set<std::pair<int, int>> all;
      std::size_t total = 0;
      for (const auto& p : plates) {
        total += p.members.size();
        for (const auto& m : p.members) all.insert(m);
        CHECK(p.k_hi - p.k_lo + 1 <= 4.0 * (1.0 + std::pow(eta, b1) * K));
        CHECK(p.l_hi - p.l_lo + 1 <= 4.0 * (1.0 + std::pow(eta, b2) * L));
      }
      CHECK(total == std::size_t(K * L));
      CHECK(all.size() == std::size_t(K * L));
    }
  }

  TEST_CASE("decoupling constant") {
    const double eta = 0.01;
    const auto d = decoupling_D(0.7, 0.3, 4.0, eta);
    CHECK(d.simplified() == doctest::Approx(2.0 * std::pow(eta, -0.25)));
    for (double b1 = 0.5; b1 <= 1.0; b1 += 0.05)
      for (double b2 = 0.0; b2 <= 1.0; b2 += 0.05) {
        const auto t = decoupling_D(b1, b2, 4.5, 1e-3);
        CHECK(t.term2 >= t.term3 * (1 - 1e-12));
      }
    const auto flat = decoupling_D(0.6, 0.3, 4.25, 1.0 - 1e-9);
    CHECK(flat.term1 == doctest::Approx(1.0));
    CHECK(flat.term2 == doctest::Approx(1.0));
    CHECK(flat.term3 == doctest::Approx(1.0));
    CHECK_THROWS_AS(decoupling_D(0.6, 0.3, 4.25, 1.0), DomainError);
    CHECK_THROWS_AS(decoupling_D(0.4, 0.3, 4.0, eta), DomainError);
  }

  TEST_CASE("betas_solve") {
    const auto b = betas_solve(16, 2, 1.0 / 16, 4.0);
    CHECK(b.beta == doctest::Approx(1.0));
    CHECK(std::pow(1.0 / 16, b.beta1) * 16 == doctest::Approx(std::sqrt(2.0)));
    CHECK(std::pow(1.0 / 16, b.beta2) * 2 == doctest::Approx(std::sqrt(2.0)));
    const double eta = 1.0 / 32;
    const auto c = betas_solve(32, 4, eta, 4.0);
    CHECK(c.beta1 == doctest::Approx(0.5 + std::log(4.0 / 32.0) / (2.0 * std::log(eta))));
    CHECK(c.beta1 >= 0.5);
    for (double q : {4.1, 4.3, 4.5}) {
      const double K = 64, L = 16, et = 1.0 / 64;
      const auto r = betas_solve(K, L, et, q);
      CHECK(r.beta == doctest::Approx(2.0 / (q - 2.0)));
      const double target = std::sqrt(std::pow(et, r.beta) * K * L);
      CHECK(std::pow(et, r.beta1) * K == doctest::Approx(target));
      CHECK(std::pow(et, r.beta2) * L == doctest::Approx(target));
      CHECK(target >= 1.0);
    }
    // on the boundary eta KL = 1 with q > 4 the null exponent goes negative
    CHECK(betas_solve(4, 1, 0.25, 4.5).beta2 == doctest::Approx(-0.1));
    // (L/K)^{(q-2)/(q-4)} <= eta fails once L/K is close to 1
    CHECK_THROWS_AS(betas_solve(64, 48, 1.0 / 64, 4.5), DomainError);
  }

  TEST_CASE("e4 bound") {
    const double K = 8, L = 2;
    const auto e = e4_bound(K, L, 0.125, 0, 0);
    CHECK(e.base == doctest::Approx(std::pow(K * L, 0.25) * std::pow(K * K * L + K * K + L * L, 0.25)));
    CHECK(e.eps_factor == doctest::Approx(std::pow(K, 0.05)));
    // at eta = 1/K and beta1 = beta2 = 1/2 the middle term K dominates once L^2 <= K
    const double Kb = 64, Lb = 4, eta = 1.0 / 64;
    const double t1 = eta * Kb * Kb * Lb * eta, t2 = eta * Kb * Kb, t3 = eta * Lb * Lb;
    CHECK(t2 == doctest::Approx(Kb));
    CHECK(t2 > t1);
    CHECK(t2 > t3);
    for (int Ks : {4, 8})
      for (int Ls = 1; Ls < Ks; ++Ls)
        for (double b : {0.0, 0.5, 1.0}) {
          const double et = 1.0 / Ks;
          if (et * Ks * Ls < 1.0) continue;
          const double n = double(count_system_star({2, Ks, Ls, et, b, b}));
          CHECK(std::pow(n, 0.25) <= 100.0 * e4_bound(Ks, Ls, et, b, b).value());
        }
  }

  TEST_CASE("gq upper bound") {
    const double K = 16, L = 4, eta = 1.0 / 16;
    CHECK(gq_upper_formula(K, L, eta, 4.0) == doctest::Approx(std::sqrt(K * L) * std::pow(1 + eta * K, 0.25)));
    CHECK(gq_upper_formula(K, L, eta, 4.0) <= std::pow(2.0, 0.25) * std::sqrt(K * L) * (1 + 1e-12));
    for (double q : {4.0, 4.25, 4.5}) {
      // largest eta with eta^{2/(q-2)} K <= 1
      const double et = std::pow(K, -(q - 2) / 2);
      const double last = std::pow(1 + std::pow(et, 2 / (q - 2)) * K, 1 / q);
      CHECK(last >= 1.0);
      CHECK(last <= std::pow(2.0, 1 / q) * (1 + 1e-12));
    }
    CHECK(gq_upper_bound(K, L, eta, 4.0).eps_factor == doctest::Approx(std::pow(eta, -0.05)));
  }

  TEST_CASE("interpolation replay reproduces the upper bound") {
    // at q = 4: D E4 = 2 (KL)^{1/2} (2 + eta K)^{1/4}, the bound times 2 ((2+eta K)/(1+eta K))^{1/4}
    for (auto [K, L, eta] : {std::tuple{16.0, 2.0, 1.0 / 16}, std::tuple{64.0, 8.0, 1.0 / 32}, std::tuple{32.0, 4.0, 1.0 / 32}}) {
      const double ratio = interpolation_replay(K, L, eta, 4.0) / gq_upper_formula(K, L, eta, 4.0);
      CHECK(ratio == doctest::Approx(2.0 * std::pow((2 + eta * K) / (1 + eta * K), 0.25)));
    }
    for (double q : {4.1, 4.25, 4.5}) {
      const double ratio = interpolation_replay(64, 16, 1.0 / 64, q) / gq_upper_formula(64, 16, 1.0 / 64, q);
      CHECK(ratio >= 1.0);
      CHECK(ratio <= 4.0);
    }
  }

  TEST_CASE("all-ones gq_norm sits in the expected band") {
    for (auto [K, L] : {std::pair{4, 1}, std::pair{4, 2}, std::pair{8, 2}}) {
      const double eta = 1.0 / K;
      const double g = gq_norm({K, L, eta, 4.0}, ones_grid(K, L)).value;
      CHECK(g >= 0.1 * std::sqrt(double(K * L)));
      CHECK(g <= 10.0 * std::pow(K, 0.55) * std::sqrt(double(L)));
    }
  }
}
