#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>

#include "doctest.h"
#include "mulab/coding.hpp"
#include "mulab/complexity.hpp"

using namespace mulab;
using namespace mulab::systems;
using namespace mulab::coding;

TEST_CASE("arc membership and signed boundary distance") {
    const auto u = CodableSet::arc(0.9, 0.3);  // wraps: [0.9, 1) u [0, 0.2)
    CHECK(contains(u, Point::circle(0.95)));
    CHECK(contains(u, Point::circle(0.1)));
    // membership is the open interior: both endpoints are boundary
    CHECK_FALSE(contains(u, Point::circle(0.9)));
    CHECK_FALSE(contains(u, Point::circle(0.2)));
    CHECK_FALSE(contains(u, Point::circle(0.5)));

    CHECK(dist_to_boundary(u, Point::circle(0.0)) == doctest::Approx(0.1));
    CHECK(dist_to_boundary(u, Point::circle(0.5)) == doctest::Approx(-0.3));
    CHECK(in_boundary_collar(u, Point::circle(0.21), 0.02));
    CHECK_FALSE(in_boundary_collar(u, Point::circle(0.0), 0.05));

    const auto whole = CodableSet::arc(0.0, 1.0);
    CHECK(contains(whole, Point::circle(0.37)));
    CHECK(dist_to_boundary(whole, Point::circle(0.37)) ==
          std::numeric_limits<double>::infinity());
}

TEST_CASE("rectangle: sup-metric signed distance over factors") {
    const auto u = CodableSet::rectangle({{0.0, 0.5}, {0.25, 0.5}});
    const auto in = Point{ProductPoint{{Point::circle(0.2), Point::circle(0.5)}}};
    const auto out = Point{ProductPoint{{Point::circle(0.6), Point::circle(0.1)}}};
    CHECK(contains(u, in));
    CHECK_FALSE(contains(u, out));
    // inside: min over factors of the factor margin
    CHECK(dist_to_boundary(u, in) == doctest::Approx(0.2));
    // outside: factor 1 violated by 0.1, factor 2 by 0.15 -> sup distance 0.15
    CHECK(dist_to_boundary(u, out) == doctest::Approx(-0.15));
}

TEST_CASE("cylinder: clopen, infinite boundary distance") {
    const auto u = CodableSet::cylinder(Symbol::bin(1));
    SequenceSpec s;
    s.lo = 0;
    s.symbols = {Symbol::bin(1), Symbol::bin(0)};
    CHECK(contains(u, Point::window(s.window(0))));
    CHECK_FALSE(contains(u, Point::window(s.window(1))));
    CHECK(dist_to_boundary(u, Point::window(s.window(0))) ==
          std::numeric_limits<double>::infinity());
    CHECK(dist_to_boundary(u, Point::window(s.window(1))) ==
          -std::numeric_limits<double>::infinity());
}

TEST_CASE("smallness: rotation collar frequency approaches 4 eps0") {
    const double eps0 = 0.01;
    const auto sys = SystemSpec::rotation(std::sqrt(2.0) - 1.0);
    const auto u = CodableSet::arc(0.0, 0.5);
    std::vector<Point> trial = {Point::circle(0.0), Point::circle(0.31), Point::circle(0.77)};
    const auto rep = smallness_test(sys, u, eps0, 200000, trial);
    // two boundary points, each inflated to an open 2*eps0 arc
    CHECK(rep.max_frequency == doctest::Approx(4.0 * eps0).epsilon(0.08));
    CHECK(rep.max_log_frequency < 8.0 * eps0);
    CHECK(rep.per_point.size() == 3);

    // independent count at one point
    double cnt = 0.0;
    double t = 0.0;
    const double alpha = std::sqrt(2.0) - 1.0;
    for (int k = 0; k < 200000; ++k) {
        if (in_boundary_collar(u, Point::circle(t), eps0)) cnt += 1.0;
        t = wrap01(t + alpha);
    }
    CHECK(rep.per_point[0] == doctest::Approx(cnt / 200000.0));
}

TEST_CASE("coding an irrational rotation gives ones density about 1/2") {
    const auto sys = SystemSpec::rotation(std::sqrt(2.0) - 1.0);
    const auto u = CodableSet::arc(0.0, 0.5);
    const auto seq = code_point(sys, u, Point::circle(0.0), 0, 100000 - 1);
    REQUIRE(seq.symbols.size() == 100000);
    double ones = 0.0;
    for (const auto& s : seq.symbols) ones += s.value;
    CHECK(ones / 100000.0 == doctest::Approx(0.5).epsilon(0.02));
    CHECK(seq.alphabet == Alphabet::binary);
    CHECK(seq.lo == 0);
}

TEST_CASE("coded bits equal pointwise membership along the orbit, negative lo too") {
    const auto sys = SystemSpec::rotation(0.37);
    const auto u = CodableSet::arc(0.2, 0.3);
    const auto seq = code_point(sys, u, Point::circle(0.05), -7, 9);
    CHECK(seq.lo == -7);
    for (std::int64_t k = -7; k <= 9; ++k) {
        const bool direct = contains(u, apply_pow(sys, Point::circle(0.05), k));
        CHECK(double(direct) == seq.symbols[std::size_t(k + 7)].value);
    }
}

TEST_CASE("mollified indicator: values and slope") {
    const auto sys = SystemSpec::rotation(0.1);
    const auto u = CodableSet::arc(0.0, 0.5);
    const double eps0 = 0.05;
    const auto f = mollify_indicator(sys, u, eps0);
    CHECK(f.eval(Point::circle(0.25)).real() == 1.0);   // deep inside
    CHECK(f.eval(Point::circle(0.75)).real() == 0.0);   // deep outside
    CHECK(f.eval(Point::circle(0.0)).real() == doctest::Approx(0.5));  // on the boundary
    CHECK(f.eval(Point::circle(0.02)).real() == doctest::Approx(0.7));
    CHECK(f.lipschitz == doctest::Approx(0.5 / eps0));
    CHECK(f.sup_norm == 1.0);
}

TEST_CASE("stability: rotation with an arc passes at delta = 0.1, N = 2000") {
    const auto sys = SystemSpec::rotation(std::sqrt(2.0) - 1.0);
    const auto u = CodableSet::arc(0.0, 0.5);
    const auto rep = verify_coding_stability(sys, u, 0.1, 2000, 24, 9);
    CHECK(rep.pass);
    CHECK(rep.conclusive);
    CHECK_FALSE(rep.vacuous);
    CHECK(rep.epsilon > 0.0);
    CHECK(rep.epsilon < 0.1 * 0.1);
    CHECK(rep.pairs_found == 24);
    CHECK(rep.max_density <= 2 * 0.1);
}

TEST_CASE("stability is vacuous once 2 delta reaches 1") {
    const auto sys = SystemSpec::rotation(0.3);
    const auto u = CodableSet::arc(0.1, 0.4);
    const auto rep = verify_coding_stability(sys, u, 0.5, 500, 8, 4);
    CHECK(rep.vacuous);
    CHECK(rep.pass);
}

TEST_CASE("transfer: coded covering stays below the original") {
    const auto sys = SystemSpec::rotation(std::sqrt(2.0) - 1.0);
    const auto u = CodableSet::arc(0.0, 0.5);
    const auto rep = complexity_transfer_check(sys, u, 0.1, 256, 512, 1);
    CHECK(rep.holds);
    CHECK(rep.margin > 0.0);
    CHECK(rep.window == 6);  // ceil(log2(4 / 0.1))
    CHECK(rep.delta_prime == doctest::Approx(0.1 / (16 * 6)));
    CHECK(rep.coded_cardinality <= rep.original_cardinality);
    CHECK(rep.coded_cardinality >= 1);
}
