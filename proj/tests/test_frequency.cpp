#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mulab/frequency_set.hpp"

using mulab::freq::FrequencySet;

TEST_CASE("describe / parse round trips") {
    const auto f = FrequencySet::finite({0.25, 0.75, 1.0 / 3.0});
    const auto f2 = FrequencySet::parse(f.describe());
    CHECK(f2.points() == f.points());

    const auto c = FrequencySet::cantor(0.1, 6);
    const auto c2 = FrequencySet::parse(c.describe());
    CHECK(c2.kind() == mulab::freq::Kind::cantor);
    CHECK(c2.ratio() == 0.1);
    CHECK(c2.level() == 6);

    const auto g = FrequencySet::grid(0.125);
    const auto g2 = FrequencySet::parse(g.describe());
    CHECK(g2.step() == 0.125);

    CHECK_THROWS(FrequencySet::parse("octopus:1"));
    CHECK_THROWS(FrequencySet::cantor(0.5, 3));
    CHECK_THROWS(FrequencySet::cantor(0.0, 3));
}

TEST_CASE("cantor intervals: 2^level blocks of length ratio^level") {
    const auto c = FrequencySet::cantor(1.0 / 3.0, 4);
    const auto iv = c.intervals();
    REQUIRE(iv.size() == 16);
    for (const auto& i : iv) CHECK(i.b - i.a == doctest::Approx(std::pow(1.0 / 3.0, 4)));
    CHECK(iv.front().a == 0.0);
    CHECK(iv.back().b == doctest::Approx(1.0));
    for (std::size_t k = 1; k < iv.size(); ++k) CHECK(iv[k].a > iv[k - 1].b);
}

TEST_CASE("distance_to is zero on the set and positive off it") {
    const auto c = FrequencySet::cantor(1.0 / 3.0, 2);
    CHECK(c.distance_to(0.0) == 0.0);
    CHECK(c.distance_to(1.0) == 0.0);
    CHECK(c.distance_to(1.0 / 9.0) == 0.0);
    // dead middle of the removed middle third
    CHECK(c.distance_to(0.5) == doctest::Approx(0.5 - 1.0 / 3.0));

    const auto f = FrequencySet::finite({0.2, 0.8});
    CHECK(f.distance_to(0.2) == 0.0);
    CHECK(f.distance_to(0.5) == doctest::Approx(0.3));
}

TEST_CASE("refine covers the set within eta") {
    const auto c = FrequencySet::cantor(0.1, 3);
    const auto r = c.refine(1e-4);
    CHECK(r.max_gap <= 1e-4);
    // every refinement point lies in the set
    for (double p : r.points) CHECK(c.distance_to(p) <= 1e-12);
    // determinism
    const auto r2 = c.refine(1e-4);
    CHECK(r.points == r2.points);

    const auto f = FrequencySet::finite({0.4});
    const auto rf = f.refine(0.5);
    CHECK(rf.points == std::vector<double>{0.4});
    CHECK(rf.max_gap == 0.0);
}

TEST_CASE("analytic dimension") {
    CHECK(FrequencySet::cantor(1.0 / 3.0, 8).analytic_dimension() ==
          doctest::Approx(std::log(2.0) / std::log(3.0)));
    CHECK(FrequencySet::cantor(0.1, 6).analytic_dimension() ==
          doctest::Approx(std::log(2.0) / std::log(10.0)));
    CHECK(FrequencySet::finite({0.1}).analytic_dimension() == 0.0);
    CHECK(FrequencySet::grid(0.01).analytic_dimension() == 1.0);
}

TEST_CASE("samples land in the set") {
    const auto c = FrequencySet::cantor(0.2, 5);
    std::uint64_t st = 42;
    for (int i = 0; i < 500; ++i) {
        const double x = c.sample(st);
        CHECK(c.distance_to(x) <= 1e-12);
    }
    const auto f = FrequencySet::finite({0.3, 0.6});
    for (int i = 0; i < 50; ++i) {
        const double x = f.sample(st);
        CHECK((x == 0.3 || x == 0.6));
    }
}
