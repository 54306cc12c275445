#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "circdiv/numeric.hpp"
#include "circdiv/oracles.hpp"
#include "circdiv/second_spacing.hpp"

using namespace circdiv;

namespace {

const std::vector<MinorArcData>& sample_arcs() {
  static const auto arcs = enumerate_arcs(PhaseFamily::reciprocal(), 32.0, 1e4, 16, 8);
  return arcs;
}

}  // namespace

TEST_SUITE("second_spacing") {
  TEST_CASE("mod_inverse") {
    CHECK(mod_inverse(1, 9) == 1);
    CHECK(mod_inverse(3, 7) == 5);
    CHECK(mod_inverse(-1, 7) == 6);
    CHECK(mod_inverse(5, 1) == 0);
    CHECK_THROWS_AS(mod_inverse(4, 6), DomainError);
    CHECK_THROWS_AS(mod_inverse(2, 0), DomainError);
    for (std::int64_t r = 2; r <= 100; ++r)
      for (std::int64_t a = 1; a < r; ++a) {
        if (std::gcd(a, r) != 1) continue;
        const auto inv = mod_inverse(a, r);
        REQUIRE(inv >= 0);
        REQUIRE(inv < r);
        REQUIRE((a * inv) % r == 1);
      }
  }

  TEST_CASE("arc data for 1/z at T = 100, M = 10") {
    const auto F = PhaseFamily::reciprocal();
    const auto d = arc_data(-1, 2, F, 10, 100);
    CHECK(d.m == 14);
    CHECK(d.mu == doctest::Approx(0.5 * 100.0 / 1000.0 * F.derivative(2, 1.4)));
    CHECK(std::fabs(d.nu) <= 1.0);
    CHECK(d.abar == 1);
    CHECK(d.kappa >= 0.0);
    CHECK(d.kappa < 1.0);
    CHECK(double(d.c) + d.kappa == doctest::Approx(d.value).epsilon(1e-12));
    CHECK(phase_slope(F, 10, 100, double(d.m)) - (-0.5) == doctest::Approx(2.0 * d.mu * d.nu));
    CHECK_THROWS_AS(arc_data(-2, 1, F, 10, 100), DomainError);  // below the slope range
    CHECK_THROWS_AS(arc_data(-2, 4, F, 10, 100), DomainError);  // not reduced
  }

  TEST_CASE("exact hit gives nu = 0") {
    // phi'(20) = -100/400 = -1/4 for 1/z, T = 100, M = 10
    const auto d = arc_data(-1, 4, PhaseFamily::reciprocal(), 10, 100);
    CHECK(d.m == 20);
    CHECK(std::fabs(d.nu) < 1e-12);
  }

  TEST_CASE("enumeration audit") {
    const auto arcs = enumerate_arcs(PhaseFamily::reciprocal(), 32.0, 1e5, 40);
    REQUIRE(!arcs.empty());
    const auto [lo, hi] = slope_range(PhaseFamily::reciprocal(), 32.0, 1e5);
    for (const auto& d : arcs) {
      REQUIRE(std::gcd(d.a, d.r) == 1);
      const double ar = double(d.a) / double(d.r);
      CHECK(ar >= lo);
      CHECK(ar <= hi);
      CHECK(d.m >= 32);
      CHECK(d.m <= 64);
      CHECK(((d.a % d.r + d.r) % d.r * d.abar) % d.r == 1 % d.r);
      CHECK(d.kappa >= 0.0);
      CHECK(d.kappa < 1.0);
      if (!d.boundary) CHECK(std::fabs(d.nu) <= 1.0);
      CHECK_FALSE(d.negative_mu);
      // recomputing phi' at m lands on a/r + 2 mu nu
      CHECK(std::fabs(phase_slope(PhaseFamily::reciprocal(), 32, 1e5, double(d.m)) - ar - 2 * d.mu * d.nu) <=
            1e-9 * std::max(1.0, std::fabs(ar)));
    }
  }

  TEST_CASE("x vector") {
    const auto F = PhaseFamily::reciprocal();
    for (const auto& d : enumerate_arcs(F, 32.0, 1e5, 12)) {
      const auto x = x_vector(d);
      const auto ref = oracle::x_vector_recompute(d.a, d.r, d.m, F, 32.0, 1e5);
      for (int i = 0; i < 3; ++i) CHECK(x.raw[i] == doctest::Approx(ref[i]).epsilon(1e-12));
      CHECK(std::fabs(x.raw[3] - ref[3]) <= 1e-12 * std::max(std::fabs(ref[3]), ref[2]));
      CHECK(x.reduced[0] >= 0.0);
      CHECK(x.reduced[0] < 1.0);
      CHECK(x.reduced[1] >= 0.0);
      CHECK(x.reduced[1] < 1.0);
    }
    MinorArcData d;
    d.r = 5;
    d.abar = 1;
    d.c = 0;
    d.mu = 2.0;
    d.kappa = 0.0;
    const auto x = x_vector(d);
    CHECK(x.raw[0] == doctest::Approx(0.2));
    CHECK(x.raw[1] == 0.0);
    CHECK(x.raw[2] == doctest::Approx(1.0 / std::sqrt(250.0)));
    CHECK(x.raw[3] == 0.0);
    d.mu = -1.0;
    CHECK_THROWS_AS(x_vector(d), DomainError);
  }

  TEST_CASE("pair matrix examples") {
    UnimodMatrix id = UnimodMatrix::Identity();
    CHECK(pair_matrix(3, 7, 3, 7) == id);
    UnimodMatrix m;
    m << 1, 0, 1, 1;
    CHECK(pair_matrix(1, 2, 1, 3) == m);
    CHECK(gamma_in_window(3, 2, 3));
    CHECK_FALSE(gamma_in_window(-3, 2, 3));
    CHECK_THROWS_AS(pair_matrix(2, 4, 1, 3), DomainError);
  }

  TEST_CASE("pair matrix agrees with exhaustive search") {
    // reduced residues for every r, plus one shifted representative on each side
    for (std::int64_t r = 1; r <= 20; ++r)
      for (std::int64_t a = -1; a <= r; ++a) {
        if (std::gcd(a, r) != 1) continue;
        for (std::int64_t r1 = 1; r1 <= 20; ++r1)
          for (std::int64_t a1 = 0; a1 < r1; ++a1) {
            if (std::gcd(a1, r1) != 1) continue;
            const auto M = pair_matrix(a, r, a1, r1);
            REQUIRE(M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0) == 1);
            REQUIRE(M(0, 0) * a + M(0, 1) * r == a1);
            REQUIRE(M(1, 0) * a + M(1, 1) * r == r1);
            REQUIRE(gamma_in_window(M(1, 0), r, r1));
            const auto ref = oracle::pair_matrix_search(a, r, a1, r1);
            REQUIRE(ref.has_value());
            REQUIRE(*ref == M);
          }
      }
  }

  TEST_CASE("window validation and presets") {
    PairWindow w;
    CHECK_NOTHROW(w.validate());
    w.d1 = 0.5;
    CHECK_NOTHROW(w.validate());
    w.d1 = 0.51;
    CHECK_THROWS_AS(w.validate(), DomainError);
    w.d1 = 0.1;
    w.d3 = 0.0;
    CHECK_THROWS_AS(w.validate(), DomainError);
    const auto p = PairWindow::from_spacing(16, 4);
    CHECK(p.d1 == doctest::Approx(1.0 / 64));
    CHECK(p.d2 == doctest::Approx(0.25));
    CHECK(p.d3 == doctest::Approx(1.0 / 16));
    CHECK(p.d4 == doctest::Approx(1.0));
  }

  TEST_CASE("vacuous and tiny windows") {
    const auto& arcs = sample_arcs();
    const auto n = std::int64_t(arcs.size());
    REQUIRE(n > 10);
    const PairWindow all{0.5, 0.5, 1e300, 1.0};
    CHECK(count_close_pairs(arcs, all).count == n * n);
    const PairWindow tiny{1e-12, 1e-12, 1e-12, 1e-12};
    const auto rep = count_close_pairs(arcs, tiny);
    CHECK(rep.count == n);
    CHECK(rep.histogram.size() == 1);
    CHECK(rep.histogram.begin()->first == MatrixKey{1, 0, 0, 1});
  }

  TEST_CASE("double-loop count, gamma implication and permutation stability") {
    auto arcs = sample_arcs();
    const auto w = PairWindow::from_spacing(8, 2);
    std::int64_t direct = 0;
    for (const auto& x : arcs)
      for (const auto& y : arcs) direct += pair_is_close(x, y, w) ? 1 : 0;
    const auto rep = count_close_pairs(arcs, w);
    CHECK(rep.count == direct);
    CHECK(rep.count > std::int64_t(arcs.size()));  // more than the diagonal
    CHECK(rep.violations.empty());
    std::int64_t hist_total = 0;
    for (const auto& [k, v] : rep.histogram) hist_total += v;
    CHECK(hist_total == rep.count);
    std::mt19937_64 rng(9);
    std::shuffle(arcs.begin(), arcs.end(), rng);
    const auto again = count_close_pairs(arcs, w);
    CHECK(again.count == rep.count);
    CHECK(again.histogram == rep.histogram);
  }

  TEST_CASE("pair relation is symmetric when the ratio window is vacuous") {
    // the ratio condition |mu1 r1^3 / (mu r^3) - 1| <= d3 is not symmetric for finite d3
    const auto& arcs = sample_arcs();
    const PairWindow w{0.05, 0.3, 1e300, 0.5};
    for (const auto& x : arcs)
      for (const auto& y : arcs) REQUIRE(pair_is_close(x, y, w) == pair_is_close(y, x, w));
  }

  TEST_CASE("kappa as a circle distance") {
    MinorArcData x, y;
    x.a = 1;
    x.r = 3;
    x.abar = 1;
    x.mu = 1;
    x.kappa = 0.02;
    y = x;
    y.kappa = 0.97;
    PairWindow w{0.5, 0.5, 1.0, 0.1};
    CHECK_FALSE(pair_is_close(x, y, w));
    w.kappa_mod1 = true;
    CHECK(pair_is_close(x, y, w));
  }
}
