#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mulab/nil.hpp"
#include "mulab/util.hpp"

using namespace mulab;
using namespace mulab::nil;

namespace {

Elt rand_elt(const NilGroup& g, std::uint64_t& st, double scale = 4.0) {
    Elt x(std::size_t(g.dim));
    for (auto& c : x) c = scale * (2.0 * double(splitmix64(st) >> 11) * 0x1.0p-53 - 1.0);
    return x;
}

double max_abs_diff(const Elt& a, const Elt& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("group axioms on random triples") {
    const auto g = NilGroup::heisenberg();
    std::uint64_t st = 1;
    const auto e = identity(g);
    for (int trial = 0; trial < 10000; ++trial) {
        const auto x = rand_elt(g, st), y = rand_elt(g, st), z = rand_elt(g, st);
        // associativity
        const auto l = mult(g, mult(g, x, y), z);
        const auto r = mult(g, x, mult(g, y, z));
        CHECK(max_abs_diff(l, r) <= 1e-12);
        // identity and inverse
        CHECK(max_abs_diff(mult(g, x, e), x) <= 1e-12);
        CHECK(max_abs_diff(mult(g, e, x), x) <= 1e-12);
        CHECK(max_abs_diff(mult(g, x, inverse(g, x)), e) <= 1e-12);
    }
}

TEST_CASE("heisenberg multiplication is not abelian but the center is central") {
    const auto g = NilGroup::heisenberg();
    const Elt x = {1.0, 0.0, 0.0}, y = {0.0, 1.0, 0.0}, z = {0.0, 0.0, 1.0};
    const auto xy = mult(g, x, y);
    const auto yx = mult(g, y, x);
    CHECK(max_abs_diff(xy, yx) > 0.5);  // commutator is a full central generator
    CHECK(max_abs_diff(mult(g, x, z), mult(g, z, x)) <= 1e-15);
    CHECK(in_subgroup(g, mult(g, mult(g, x, y), mult(g, inverse(g, x), inverse(g, y))), 2,
                      1e-12));
}

TEST_CASE("power agrees with repeated multiplication at integer times") {
    const auto g = NilGroup::heisenberg();
    std::uint64_t st = 5;
    for (int trial = 0; trial < 40; ++trial) {
        const auto x = rand_elt(g, st, 1.5);
        Elt acc = identity(g);
        for (int n = 0; n <= 13; ++n) {
            CHECK(max_abs_diff(power(g, x, double(n)), acc) <= 1e-10);
            acc = mult(g, acc, x);
        }
        CHECK(max_abs_diff(power(g, x, -3.0), inverse(g, power(g, x, 3.0))) <= 1e-10);
    }
}

TEST_CASE("reduce splits into box times lattice") {
    const auto g = NilGroup::heisenberg();
    std::uint64_t st = 11;
    for (int trial = 0; trial < 2000; ++trial) {
        const auto x = rand_elt(g, st, 20.0);
        const auto [k, gam] = reduce(g, x);
        for (double c : k) {
            CHECK(c >= 0.0);
            CHECK(c < 1.0);
        }
        for (double c : gam) CHECK(c == std::round(c));
        CHECK(max_abs_diff(mult(g, k, gam), x) <= 1e-9 * (1.0 + psi_norm(g, x)));
    }
}

TEST_CASE("metric surrogate depends on the difference element alone") {
    const auto g = NilGroup::heisenberg();
    std::uint64_t st = 17;
    for (int trial = 0; trial < 300; ++trial) {
        const auto x = rand_elt(g, st), y = rand_elt(g, st), h = rand_elt(g, st);
        const double d = group_metric(g, x, y, 6);
        // bitwise: every chain is built from w = x*y^-1, so d(x,y) = d(w, e)
        const auto w = mult(g, x, inverse(g, y));
        CHECK(d == group_metric(g, w, identity(g), 6));
        // common right translation cancels only up to fp residue in w
        const double dh = group_metric(g, mult(g, x, h), mult(g, y, h), 6);
        CHECK(dh == doctest::Approx(d).epsilon(1e-9));
    }
}

TEST_CASE("metric surrogate: symmetry, identity, monotone in depth") {
    const auto g = NilGroup::heisenberg();
    std::uint64_t st = 23;
    for (int trial = 0; trial < 300; ++trial) {
        const auto x = rand_elt(g, st), y = rand_elt(g, st);
        CHECK(group_metric(g, x, x, 6) <= 1e-12);  // x*x^-1 carries fp residue
        CHECK(group_metric(g, x, y, 6) == doctest::Approx(group_metric(g, y, x, 6)));
        CHECK(group_metric(g, x, y, 6) <= group_metric(g, x, y, 1) + 1e-15);
    }
}

TEST_CASE("from_linear reproduces g^n h") {
    const auto g = NilGroup::heisenberg();
    std::uint64_t st = 31;
    for (int trial = 0; trial < 50; ++trial) {
        const auto ge = rand_elt(g, st, 1.0), h = rand_elt(g, st, 1.0);
        const auto p = from_linear(g, ge, h);
        CHECK(poly_valid(g, p, 1e-12));
        for (std::int64_t n = 0; n <= 100; ++n) {
            const auto direct = mult(g, power(g, ge, double(n)), h);
            CHECK(max_abs_diff(poly_eval(g, p, n), direct) <= 1e-9);
        }
    }
}

TEST_CASE("adaptedness: double derivative of a polynomial lands in G2") {
    const auto g = NilGroup::heisenberg();
    std::uint64_t st = 37;
    for (int trial = 0; trial < 60; ++trial) {
        PolySeq p = sample_poly(g, st);
        auto f = [&](std::int64_t n) { return poly_eval(g, p, n); };
        const std::int64_t h1 = 1 + std::int64_t(splitmix64(st) % 10);
        const std::int64_t h2 = 1 + std::int64_t(splitmix64(st) % 10);
        const std::int64_t n = std::int64_t(splitmix64(st) % 20);
        auto d1 = [&](std::int64_t m) { return discrete_derivative(g, f, h1, m); };
        const auto dd = discrete_derivative(g, d1, h2, n);
        CHECK(in_subgroup(g, dd, 2, 1e-9));
    }
}

TEST_CASE("factorization: poly_eval(p) = poly_eval(k) * poly_eval(gamma)") {
    const auto g = NilGroup::heisenberg();
    std::uint64_t st = 43;
    for (int trial = 0; trial < 25; ++trial) {
        PolySeq p = sample_poly(g, st);
        // blow coefficients out of the box so the factorization has work to do
        for (auto& c : p.coeff)
            for (auto& v : c) v *= 7.0;
        if (!poly_valid(g, p, 1e-12)) continue;
        const auto [k, gam] = factorize(g, p);
        CHECK(poly_valid(g, k, 1e-9));
        CHECK(poly_valid(g, gam, 1e-9));
        for (const auto& c : k.coeff)
            for (double v : c) {
                CHECK(v >= 0.0);
                CHECK(v < 1.0);
            }
        for (const auto& c : gam.coeff)
            for (double v : c) CHECK(v == std::round(v));
        for (std::int64_t n = -50; n <= 50; ++n) {
            const auto lhs = poly_eval(g, p, n);
            const auto rhs = mult(g, poly_eval(g, k, n), poly_eval(g, gam, n));
            CHECK(max_abs_diff(lhs, rhs) <= 1e-9 * (1.0 + psi_norm(g, lhs)));
        }
    }
}

TEST_CASE("quotient metric vanishes across the lattice and detects separation") {
    const auto g = NilGroup::heisenberg();
    const Elt x = {0.3, 0.4, 0.9};
    Elt shifted = mult(g, x, Elt{1.0, 2.0, -1.0});
    const auto zero = quotient_metric(g, x, shifted, 2);
    CHECK(zero.value <= 1e-12);
    const auto far = quotient_metric(g, Elt{0.5, 0.5, 0.5}, identity(g), 1);
    CHECK(far.value > 0.1);
}

TEST_CASE("abelian circle: degree-1 net grows about linearly in n") {
    const auto g = NilGroup::abelian(1);
    // oracle: strings (n alpha + beta mod 1) at sup distance need ~n/(2 eps)
    // arcs in alpha for fixed beta; the explicit grid count scales the same way
    const auto r8 = poly_covering_number(g, 8, 0.2, 400, 3);
    const auto r16 = poly_covering_number(g, 16, 0.2, 400, 3);
    const auto r32 = poly_covering_number(g, 32, 0.2, 400, 3);
    const double g8 = r8.grid_count, g16 = r16.grid_count, g32 = r32.grid_count;
    CHECK(g16 / g8 == doctest::Approx(2.0).epsilon(0.35));
    CHECK(g32 / g16 == doctest::Approx(2.0).epsilon(0.35));
    CHECK(r8.net.cardinality <= r16.net.cardinality);
}

TEST_CASE("group save / load round trip") {
    const auto g = NilGroup::heisenberg();
    const auto path = std::string("/tmp/mulab_nil_group.json");
    g.save(path);
    const auto h = NilGroup::load(path);
    CHECK(h.step == g.step);
    CHECK(h.dim == g.dim);
    CHECK(h.filtration == g.filtration);
    REQUIRE(h.brackets.size() == g.brackets.size());
    CHECK(h.brackets[0].k == g.brackets[0].k);
}
