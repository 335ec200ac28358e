#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mulab/construct.hpp"
#include "oracles.hpp"

using namespace mulab;
using namespace mulab::construct;

namespace {

std::vector<std::int8_t> ones_signal(std::int64_t len) {
    return std::vector<std::int8_t>(std::size_t(len), 1);
}

}  // namespace

TEST_CASE("synthetic spec passes structural checks; ladder is annotated as out of reach") {
    const auto spec = make_synthetic_spec(0.5, {{4, 10000}, {8, 100000}}, 0.2, Variant::fourier);
    const auto rep = spec.check();
    CHECK(rep.pass);
    CHECK(rep.violations.empty());
    CHECK_FALSE(rep.ladder_feasible);
    CHECK(rep.ladder_note.find("log10") != std::string::npos);
    CHECK(spec.sigma == doctest::Approx(0.5 * 0.5 / 200.0));

    // exclusion rule: every start clears the previous scale's extent
    const std::int64_t prev_end = 10000 + 4;
    for (const auto& b : spec.blocks[1]) CHECK(b.start >= std::max<std::int64_t>(prev_end, 256 * 8));
}

TEST_CASE("structural violations are reported by name") {
    auto spec = make_synthetic_spec(0.5, {{4, 10000}}, 0.2, Variant::fourier);

    SUBCASE("gap violation") {
        auto bad = spec;
        Block b = bad.blocks[0][0];
        b.start += 3;  // closer than 2H = 8
        bad.blocks[0].insert(bad.blocks[0].begin() + 1, b);
        const auto rep = bad.check();
        CHECK_FALSE(rep.pass);
        REQUIRE(!rep.violations.empty());
        bool mentions_gap = false;
        for (const auto& v : rep.violations) mentions_gap |= v.find("gap") != std::string::npos;
        CHECK(mentions_gap);
    }
    SUBCASE("exclusion violation") {
        auto bad = spec;
        bad.blocks[0].insert(bad.blocks[0].begin(), Block{1, 0.2, 0.0, {}});
        const auto rep = bad.check();
        CHECK_FALSE(rep.pass);
    }
    SUBCASE("descending starts") {
        auto bad = spec;
        std::swap(bad.blocks[0][0], bad.blocks[0][1]);
        CHECK_FALSE(bad.check().pass);
    }
    SUBCASE("cross-scale collision") {
        auto bad = make_synthetic_spec(0.5, {{4, 10000}, {8, 100000}}, 0.2, Variant::fourier);
        Block clash = bad.blocks[1][0];
        clash.start = bad.blocks[0].back().start + 1;  // overlaps a scale-0 block
        bad.blocks[1].insert(bad.blocks[1].begin(), clash);
        // re-sorting may still be violated; either way check() must fail and
        // assembly must throw
        CHECK_FALSE(bad.check().pass);
        CHECK_THROWS_AS((void)assemble_sequence(bad), std::invalid_argument);
    }
}

TEST_CASE("gapped subset: hand case and DP oracle") {
    const std::vector<std::int64_t> s = {10, 12, 14, 16, 18};
    const auto g = select_gapped_subset(s, 4, 0.0);
    CHECK(g.subset == std::vector<std::int64_t>{10, 14, 18});
    CHECK(g.harmonic_mass == doctest::Approx(1.0 / 10 + 1.0 / 14 + 1.0 / 18));
    CHECK(g.target_met);

    std::uint64_t st = 64;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::int64_t> r;
        std::int64_t cur = 5;
        const std::size_t count = 2 + splitmix64(st) % 28;
        for (std::size_t i = 0; i < count; ++i) {
            cur += 1 + std::int64_t(splitmix64(st) % 40);
            r.push_back(cur);
        }
        const std::int64_t gap = 1 + std::int64_t(splitmix64(st) % 60);
        const auto mine = select_gapped_subset(r, gap, 0.0);
        CHECK(mine.harmonic_mass ==
              doctest::Approx(oracle::gapped_mass_dp(r, gap)).epsilon(1e-13));
    }
}

TEST_CASE("gapped subset keeps a 1/(2 gap) share of a dense set's harmonic mass") {
    std::uint64_t st = 1234;
    std::vector<std::int64_t> s;
    for (std::int64_t n = 1000; n <= 100000; ++n)
        if (splitmix64(st) & 1) s.push_back(n);
    double total = 0.0;
    for (auto n : s) total += 1.0 / double(n);
    const std::int64_t gap = 100;
    const auto g = select_gapped_subset(s, gap, total / (2.0 * double(gap)));
    CHECK(g.target_met);
    CHECK(g.harmonic_mass >= total / (2.0 * double(gap)) - 1e-3);
    for (std::size_t i = 1; i < g.subset.size(); ++i)
        CHECK(g.subset[i] - g.subset[i - 1] >= gap);
}

TEST_CASE("assembly fills blocks with linear phases and anchors elsewhere") {
    BlockSpec spec;
    spec.tau = 0.5;
    spec.sigma = 0.00125;
    spec.freqs = freq::FrequencySet::finite({0.15});
    spec.scales = {{3, 1000}};
    spec.blocks = {{Block{100, 0.15, 0.4, {}}, Block{200, 0.15, 0.9, {}}}};
    const auto y = assemble_sequence(spec);
    CHECK(y.lo() == 1);
    CHECK(y.hi() == 1003);
    // inside the first block
    for (int k = 1; k <= 3; ++k) {
        const auto sym = y.at(100 + k);
        CHECK_FALSE(sym.is_anchor);
        CHECK(sym.value == doctest::Approx(wrap01(0.4 + k * 0.15)));
    }
    CHECK(y.at(100).is_anchor);
    CHECK(y.at(104).is_anchor);
    REQUIRE(y.ledger.size() == 2);
    CHECK(y.ledger[0].p_run == 100);  // anchors 1..100
    CHECK(y.ledger[1].p_run == 97);   // anchors 104..200
}

TEST_CASE("assemble then re-derive: property check round trips") {
    const auto spec = make_synthetic_spec(0.5, {{4, 10000}, {8, 100000}}, 0.37, Variant::fourier);
    const auto y = assemble_sequence(spec);
    const auto star = check_property_star(y, spec.freqs, 1e-9);
    CHECK(star.pass);
    CHECK(star.lengths_unbounded);
    std::size_t scheduled = spec.blocks[0].size() + spec.blocks[1].size();
    CHECK(star.blocks.size() == scheduled);
    for (const auto& b : star.blocks) {
        CHECK(b.symbols_ok);
        CHECK(b.freq_ok);
        CHECK(b.max_err <= 1e-9);
        CHECK(b.freq_dist <= 1e-9);
    }
}

TEST_CASE("a corrupted symbol defeats the star check") {
    auto spec = make_synthetic_spec(0.5, {{4, 10000}}, 0.37, Variant::fourier);
    auto y = assemble_sequence(spec);
    // bend the third symbol of the first block off the line
    const auto row = y.ledger.at(0);
    auto& sym = y.sym.symbols[std::size_t(row.start + 3 - y.lo())];
    sym.value = wrap01(sym.value + 0.05);
    const auto star = check_property_star(y, spec.freqs, 1e-9);
    CHECK_FALSE(star.pass);
}

TEST_CASE("nil variant: torus projection of g^h x0 obeys the progression law") {
    const auto spec = make_synthetic_spec(0.5, {{4, 10000}}, 0.29, Variant::nil);
    const auto y = assemble_sequence(spec);
    CHECK(y.variant == Variant::nil);
    const auto star = check_property_star(y, spec.freqs, 1e-9);
    CHECK(star.pass);
}

TEST_CASE("support frequency decreases along the ledger") {
    const auto spec = make_synthetic_spec(0.5, {{4, 10000}, {8, 100000}}, 0.2, Variant::fourier);
    const auto y = assemble_sequence(spec);
    const auto rep = gen_measure_support_check(
        y, {{1, 10000}, {10000, 40000}, {40000, 100000}});
    REQUIRE(rep.windows.size() == 3);
    CHECK(rep.decreasing);
    CHECK(rep.windows[0].frequency > rep.windows[2].frequency);
    // transitions = number of blocks fully inside each window (every block
    // opens with an anchor-to-torus boundary)
    std::int64_t first = 0;
    for (const auto& row : y.ledger)
        if (row.start + 1 > 1 && row.start + 1 <= 10000) ++first;
    CHECK(rep.windows[0].transitions == first);
}

TEST_CASE("window classification against the anchor pattern") {
    BlockSpec spec;
    spec.tau = 0.5;
    spec.sigma = 0.00125;
    spec.freqs = freq::FrequencySet::finite({0.1});
    spec.scales = {{3, 1000}};
    spec.blocks = {{Block{500, 0.1, 0.0, {}}}};
    const auto y = assemble_sequence(spec);

    const auto blk = xnq_classify(y, 502, 4);
    CHECK(blk.kind == XnqClass::Kind::block);
    const auto star = xnq_classify(y, 499, 4);
    CHECK(star.kind == XnqClass::Kind::star);
    CHECK(star.q == 2);  // first torus symbol sits 2 to the right
    const auto none = xnq_classify(y, 50, 4);
    CHECK(none.kind == XnqClass::Kind::none);
}

TEST_CASE("chain: perfectly correlated signal passes, zero signal fails at the gate") {
    const auto spec = make_synthetic_spec(0.5, {{4, 10000}}, 0.0, Variant::fourier);
    const auto good = verify_lower_bound_chain(spec, ones_signal(10004));
    CHECK(good.chain_pass);
    CHECK(good.fail_link.empty());
    CHECK(good.final_value >= 0.5 * 0.5 / 100.0);
    REQUIRE(good.per_scale.size() == 1);
    for (const auto& l : good.per_scale[0].links) CHECK(l.pass);

    std::vector<std::int8_t> zeros(10004, 0);
    const auto bad = verify_lower_bound_chain(spec, zeros);
    CHECK_FALSE(bad.chain_pass);
    CHECK(bad.fail_link == "getau");
}

TEST_CASE("chain rejects malformed signals") {
    const auto spec = make_synthetic_spec(0.5, {{4, 10000}}, 0.0, Variant::fourier);
    CHECK_THROWS_AS((void)verify_lower_bound_chain(spec, ones_signal(100)),
                    std::invalid_argument);
    auto bad = ones_signal(10004);
    bad[5] = 3;
    CHECK_THROWS_AS((void)verify_lower_bound_chain(spec, bad), std::invalid_argument);
}
