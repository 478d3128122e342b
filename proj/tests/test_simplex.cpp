#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "ovr/errors.hpp"
#include "ovr/rng.hpp"
#include "ovr/simplex.hpp"

using ovr::Vec;

TEST_CASE("uniform distribution") {
  const Vec u = ovr::uniform_distribution(4);
  CHECK(u.size() == 4);
  CHECK(u[0] == 0.25);
  CHECK(ovr::is_distribution(u));
  CHECK_FALSE(ovr::is_distribution(Vec::Constant(3, 0.5)));
  Vec negative(2);
  negative << 1.5, -0.5;
  CHECK_FALSE(ovr::is_distribution(negative));
}

TEST_CASE("second moment cost on fixed points") {
  Vec p(2), losses(2);
  p << 0.5, 0.5;
  losses << 1.0, 1.0;
  CHECK(ovr::second_moment_cost(p, losses) == doctest::Approx(1.0));

  p << 1.0, 0.0;
  losses << 1.0, 0.0;
  CHECK(ovr::second_moment_cost(p, losses) == doctest::Approx(0.25));

  p << 1.0 / 3.0, 2.0 / 3.0;
  losses << 1.0, 1.0;
  CHECK(ovr::second_moment_cost(p, losses) == doctest::Approx(9.0 / 8.0));
}

TEST_CASE("zero probability is allowed only on zero loss") {
  Vec p(2), losses(2);
  p << 1.0, 0.0;
  losses << 0.5, 0.0;
  CHECK(ovr::second_moment_cost(p, losses) == doctest::Approx(0.0625));
  losses << 0.5, 0.1;
  CHECK_THROWS_AS(ovr::second_moment_cost(p, losses), ovr::PositiveLossZeroProb);
}

TEST_CASE("dimension mismatch is rejected") {
  CHECK_THROWS_AS(ovr::second_moment_cost(ovr::uniform_distribution(2), Vec::Zero(3)),
                  ovr::DimensionMismatch);
}

TEST_CASE("hindsight optimum on a fixed instance") {
  Vec totals(2);
  totals << 1.0, 4.0;
  CHECK(ovr::best_fixed_value(totals) == doctest::Approx(9.0));
  const Vec p = ovr::best_fixed_distribution(totals);
  CHECK(p[0] == doctest::Approx(1.0 / 3.0));
  CHECK(p[1] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("hindsight optimum degenerate cases") {
  CHECK(ovr::best_fixed_value(Vec::Zero(3)) == 0.0);
  const Vec p = ovr::best_fixed_distribution(Vec::Zero(3));
  CHECK(p[0] == doctest::Approx(1.0 / 3.0));
  Vec one(1);
  one << 5.0;
  CHECK(ovr::best_fixed_value(one) == doctest::Approx(5.0));
  CHECK(ovr::best_fixed_distribution(one)[0] == doctest::Approx(1.0));
  Vec bad(2);
  bad << 1.0, -1.0;
  CHECK_THROWS_AS(ovr::best_fixed_value(bad), ovr::OutOfRange);
}

TEST_CASE("restricted optimum on a fixed instance") {
  Vec totals(2);
  totals << 4.0, 0.0;
  const auto opt = ovr::restricted_best_fixed(totals, 0.25);
  CHECK(opt.distribution[0] == doctest::Approx(0.75));
  CHECK(opt.distribution[1] == doctest::Approx(0.25));
  CHECK(opt.value == doctest::Approx(16.0 / 3.0));
}

TEST_CASE("restricted optimum boundary floors") {
  Vec totals(2);
  totals << 1.0, 4.0;
  SUBCASE("floor zero reduces to the unrestricted optimum") {
    const auto opt = ovr::restricted_best_fixed(totals, 0.0);
    CHECK(opt.value == doctest::Approx(9.0));
    CHECK(opt.distribution[1] == doctest::Approx(2.0 / 3.0));
  }
  SUBCASE("floor 1/n forces uniform") {
    const auto opt = ovr::restricted_best_fixed(totals, 0.5);
    CHECK(opt.distribution[0] == doctest::Approx(0.5));
    CHECK(opt.distribution[1] == doctest::Approx(0.5));
    CHECK(opt.value == doctest::Approx(10.0));
  }
  SUBCASE("equal weights on the clamp boundary stay unclamped") {
    Vec equal(2);
    equal << 1.0, 1.0;
    const auto opt = ovr::restricted_best_fixed(equal, 0.5);
    CHECK(opt.distribution[0] == 0.5);
    CHECK(opt.distribution[1] == 0.5);
    CHECK(opt.value == doctest::Approx(4.0));
  }
  SUBCASE("invalid floors throw") {
    CHECK_THROWS_AS(ovr::restricted_best_fixed(totals, 0.51), ovr::InvalidPMin);
    CHECK_THROWS_AS(ovr::restricted_best_fixed(totals, -0.1), ovr::InvalidPMin);
  }
}

TEST_CASE("restricted optimum with all-zero totals") {
  const auto opt = ovr::restricted_best_fixed(Vec::Zero(4), 0.1);
  CHECK(opt.value == 0.0);
  CHECK(ovr::is_distribution(opt.distribution));
}

TEST_CASE("restricted optimum matches clamp-set enumeration on random instances") {
  ovr::RngStream rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.below(5));
    Vec a(n);
    for (Eigen::Index i = 0; i < n; ++i) a[i] = rng.uniform(0.01, 10.0);
    const double floor = rng.uniform(0.0, 0.9) / static_cast<double>(n);

    const auto lib = ovr::restricted_best_fixed(a, floor);
    const auto ref = oracle::floor_simplex_minimum(a, floor);
    CHECK(lib.value == doctest::Approx(ref.value).epsilon(1e-9));
    for (Eigen::Index i = 0; i < n; ++i)
      CHECK(lib.distribution[i] == doctest::Approx(ref.p[i]).epsilon(1e-9));
    CHECK(ovr::is_distribution(lib.distribution));
    CHECK((lib.distribution >= floor - 1e-12).all());

    const double pgd = oracle::floor_simplex_minimum_pgd(a, floor, 4000);
    CHECK(lib.value <= pgd * (1.0 + 1e-7) + 1e-9);
  }
}

TEST_CASE("restricted optimum stays within the stated gap of the unrestricted one") {
  ovr::RngStream rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.below(7));
    Vec a(n);
    for (Eigen::Index i = 0; i < n; ++i) a[i] = rng.uniform(0.0, 5.0);
    const double floor = rng.uniform(0.0, 1.0) / static_cast<double>(n);

    const double restricted = ovr::restricted_best_fixed(a, floor).value;
    const double best = ovr::best_fixed_value(a);
    CHECK(restricted >= best - 1e-9);
    const double cap = 6.0 * static_cast<double>(n) * floor * best;
    CHECK(restricted - best <= cap + 1e-9);
  }
}
