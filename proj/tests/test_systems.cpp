#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "mulab/systems.hpp"

using namespace mulab;
using namespace mulab::systems;

TEST_CASE("circle metrics") {
    CHECK(circle_distance(CircleMetric::arc, 0.1, 0.9) == doctest::Approx(0.2));
    CHECK(circle_distance(CircleMetric::arc, 0.25, 0.75) == doctest::Approx(0.5));
    // chord |e(s)-e(t)| at antipodes is 2
    CHECK(circle_distance(CircleMetric::chord, 0.0, 0.5) == doctest::Approx(2.0));
    CHECK(circle_distance(CircleMetric::chord, 0.0, 0.25) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("symbol metric: anchor sits at distance 1 from every angle") {
    const auto a = Symbol::anchor();
    for (double t : {0.0, 0.3, 0.77}) {
        CHECK(symbol_distance(Alphabet::torus_anchor, CircleMetric::arc, a, Symbol::angle(t)) ==
              1.0);
        CHECK(symbol_distance(Alphabet::torus_anchor, CircleMetric::chord, a, Symbol::angle(t)) ==
              1.0);
    }
    CHECK(symbol_distance(Alphabet::torus_anchor, CircleMetric::arc, a, a) == 0.0);
    CHECK(symbol_distance(Alphabet::binary, CircleMetric::arc, Symbol::bin(0), Symbol::bin(1)) ==
          1.0);
    CHECK(symbol_diameter(Alphabet::binary, CircleMetric::arc) == 1.0);
    CHECK(symbol_diameter(Alphabet::torus_anchor, CircleMetric::chord) == 2.0);
}

TEST_CASE("rotation apply and closed-form powers, both signs") {
    const double a = std::sqrt(2.0) - 1.0;
    const auto sys = SystemSpec::rotation(a);
    auto x = Point::circle(0.2);
    auto y = x;
    for (int i = 0; i < 57; ++i) y = apply(sys, y);
    const auto z = apply_pow(sys, x, 57);
    CHECK(std::get<CirclePoint>(z.v).t ==
          doctest::Approx(std::get<CirclePoint>(y.v).t).epsilon(1e-12));

    const auto back = apply_pow(sys, z, -57);
    CHECK(std::get<CirclePoint>(back.v).t == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(sys.isometric());
}

TEST_CASE("rotation metric is invariant under the dynamics") {
    const auto sys = SystemSpec::rotation(0.123456789);
    const auto x = Point::circle(0.15);
    const auto y = Point::circle(0.4);
    const auto d0 = distance(sys, x, y);
    const auto d1 = distance(sys, apply(sys, x), apply(sys, y));
    CHECK(d0.value == doctest::Approx(d1.value).epsilon(1e-15));
    CHECK(d0.tail_bound == 0.0);
}

TEST_CASE("skew product: base frozen, fiber advances by the base frequency") {
    const auto c = freq::FrequencySet::finite({0.25});
    const auto sys = SystemSpec::skew(c);
    auto p = Point::skew(0.25, 0.1);
    p = apply(sys, p);
    CHECK(std::get<SkewPoint>(p.v).x == 0.25);
    CHECK(std::get<SkewPoint>(p.v).z == doctest::Approx(0.35));
    const auto q = apply_pow(sys, Point::skew(0.25, 0.1), 10);
    CHECK(std::get<SkewPoint>(q.v).z == doctest::Approx(std::fmod(0.1 + 2.5, 1.0)));
    // not an isometry: for distinct base points the fiber gap drifts by n*(x1-x2)
    CHECK_FALSE(sys.isometric());

    const auto anchored = SystemSpec::skew(c, true);
    const auto pa = apply(anchored, Point::skew_anchor());
    CHECK(std::get<SkewPoint>(pa.v).is_anchor);
}

TEST_CASE("skew distance: distinct base points are far, anchor is at 1") {
    const auto c = freq::FrequencySet::finite({0.2, 0.8});
    const auto sys = SystemSpec::skew(c, true);
    // same base, fiber a quarter turn apart: chord |1 - e(1/4)| = sqrt(2)
    const auto d = distance(sys, Point::skew(0.2, 0.0), Point::skew(0.2, 0.25));
    CHECK(d.value == doctest::Approx(std::sqrt(2.0)));
    const auto far = distance(sys, Point::skew(0.2, 0.0), Point::skew(0.8, 0.0));
    CHECK(far.value >= 0.4 - 1e-15);
    const auto anc = distance(sys, Point::skew_anchor(), Point::skew(0.2, 0.3));
    CHECK(anc.value == 1.0);
}

TEST_CASE("sequence save / load round trip") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "mulab_systems_test";
    fs::create_directories(dir);

    SequenceSpec s;
    s.alphabet = Alphabet::torus_anchor;
    s.lo = -3;
    s.symbols = {Symbol::anchor(), Symbol::angle(0.1), Symbol::angle(0.99), Symbol::anchor(),
                 Symbol::angle(0.5)};
    s.save(dir / "seq.bin");
    const auto t = SequenceSpec::load(dir / "seq.bin");
    CHECK(t.alphabet == Alphabet::torus_anchor);
    CHECK(t.lo == -3);
    CHECK(t.hi() == 1);
    REQUIRE(t.symbols.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(t.symbols[i].is_anchor == s.symbols[i].is_anchor);
        CHECK(t.symbols[i].value == s.symbols[i].value);
    }
    fs::remove_all(dir);
}

TEST_CASE("window shifting under the full shift") {
    SequenceSpec s;
    s.lo = 0;
    for (int b : {1, 0, 0, 1, 1, 0, 1, 0}) s.symbols.push_back(Symbol::bin(b));
    const auto sys = SystemSpec::shift(Alphabet::binary);
    auto w = Point::window(s.window(2));
    CHECK(std::get<SymbolWindow>(w.v).at_rel(0).value == 0.0);
    w = apply(sys, w);
    CHECK(std::get<SymbolWindow>(w.v).at_rel(0).value == 1.0);
    CHECK(std::get<SymbolWindow>(w.v).radius_right() == 4);

    // shifting past the stored support must throw
    auto edge = Point::window(s.window(7));
    CHECK_THROWS(apply(sys, edge));
}

TEST_CASE("shift metric decays with agreement length and reports its tail") {
    SequenceSpec a, b;
    a.lo = b.lo = -8;
    for (int i = 0; i < 17; ++i) {
        a.symbols.push_back(Symbol::bin(0));
        b.symbols.push_back(Symbol::bin(i == 12 ? 1 : 0));  // differ at abs +4
    }
    const auto sys = SystemSpec::shift(Alphabet::binary);
    const auto d = distance(sys, Point::window(a.window(0)), Point::window(b.window(0)));
    // weight of position +4 under the 2^-|k| profile
    CHECK(d.value > 0.0);
    CHECK(d.value < 0.1);
    CHECK(d.tail_bound > 0.0);

    const auto same = distance(sys, Point::window(a.window(0)), Point::window(a.window(0)));
    CHECK(same.value == 0.0);
}

TEST_CASE("product distance is the max over coordinates") {
    const auto sys =
        SystemSpec::product({SystemSpec::rotation(0.1), SystemSpec::rotation(0.25)});
    const auto x = Point{ProductPoint{{Point::circle(0.0), Point::circle(0.0)}}};
    const auto y = Point{ProductPoint{{Point::circle(0.1), Point::circle(0.3)}}};
    CHECK(distance(sys, x, y).value == doctest::Approx(0.3));
    const auto z = apply(sys, x);
    const auto& parts = std::get<ProductPoint>(z.v).parts;
    CHECK(std::get<CirclePoint>(parts[0].v).t == doctest::Approx(0.1));
    CHECK(std::get<CirclePoint>(parts[1].v).t == doctest::Approx(0.25));

    CHECK_THROWS((void)distance(sys, x, Point{ProductPoint{{Point::circle(0.0)}}}));
}

TEST_CASE("observables") {
    const auto f = obs_exponential();
    const auto v = f.eval(Point::circle(0.25));
    CHECK(v.real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(v.imag() == doctest::Approx(1.0));
    CHECK(f.sup_norm == 1.0);

    SequenceSpec s;
    s.alphabet = Alphabet::torus_anchor;
    s.lo = 0;
    s.symbols = {Symbol::angle(0.5), Symbol::anchor()};
    const auto g = obs_symbol_eval();
    const auto w0 = g.eval(Point::window(s.window(0)));
    CHECK(w0.real() == doctest::Approx(-1.0));
    const auto w1 = g.eval(Point::window(s.window(1)));
    CHECK(w1 == cplx(0.0, 0.0));
}

TEST_CASE("orbit_observable equals manual iteration") {
    const auto sys = SystemSpec::rotation(0.3);
    const auto f = obs_exponential();
    const auto vals = orbit_observable(sys, Point::circle(0.05), f, -2, 5);
    REQUIRE(vals.size() == 8);
    for (int k = -2; k <= 5; ++k) {
        const auto direct = f.eval(apply_pow(sys, Point::circle(0.05), k));
        CHECK(std::abs(vals[std::size_t(k + 2)] - direct) < 1e-12);
    }
}
