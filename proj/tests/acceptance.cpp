// End-to-end acceptance run: one line per criterion, exit 0 only if all pass.
// Every threshold is written out literally next to the measurement it gates.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mulab/arith.hpp"
#include "mulab/coding.hpp"
#include "mulab/complexity.hpp"
#include "mulab/construct.hpp"
#include "mulab/fourier.hpp"
#include "mulab/nil.hpp"
#include "mulab/systems.hpp"
#include "oracles.hpp"

using namespace mulab;
using namespace mulab::systems;

namespace {

constexpr double kGolden = 0.61803398874989479;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// shared mu table, sieved once; covers every table-consuming criterion
const arith::MobiusTable& mob() {
    static const auto t = arith::sieve_mobius(1, 1'000'000 + 65536);
    return t;
}

Outcome c1_sieve_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto& t = mob();
    std::int64_t mismatches = 0;
    for (std::int64_t n = 1; n <= 1'000'000; ++n)
        if (t.value(n) != oracle::mu_trial(n)) ++mismatches;
    const double el = seconds_since(t0);
    return {mismatches == 0 && el <= 5.0,
            fmt("mismatches=%lld on [1,1e6], %.2fs <= 5s", (long long)mismatches, el)};
}

Outcome c2_chowla_trend() {
    const auto a = arith::chowla_log_sum(mob(), 0, 1, 1'000);
    const auto b = arith::chowla_log_sum(mob(), 0, 1, 1'000'000);
    const double v3 = std::abs(a.log_normalized), v6 = std::abs(b.log_normalized);
    // the raw sum is nearly static (~-0.80) between 1e3 and 1e6, so the decay
    // comes from the 1/ln N factor alone; 0.05 is first reachable near N~9e6
    return {v6 < v3 && v6 <= 0.05,
            fmt("trend %.4f < %.4f holds; threshold %.4f <= 0.05 %s (raw sum %.3f)", v6, v3, v6,
                v6 <= 0.05 ? "holds" : "misses",
                b.log_normalized * std::log(1.0e6))};
}

Outcome c3_davenport_decay() {
    const double alpha = std::sqrt(2.0) - 1.0;
    const double v4 = arith::exponential_sum_abs(mob(), alpha, 10'000, arith::AverageKind::cesaro);
    const double v6 =
        arith::exponential_sum_abs(mob(), alpha, 1'000'000, arith::AverageKind::cesaro);
    return {v6 < v4 && v6 <= 0.02,
            fmt("|E(1e6)|=%.5f < |E(1e4)|=%.5f and <= 0.02", v6, v4)};
}

Outcome c4_rotation_bounded() {
    const auto sys = SystemSpec::rotation(kGolden);
    complexity::SamplerConfig sc;
    sc.kind = complexity::SamplerConfig::Kind::orbit;
    sc.count = 512;
    sc.seed = 1;
    const auto pts = complexity::sample_points(sys, sc);
    std::size_t counts[3] = {};
    const std::int64_t grid[3] = {16, 256, 4096};
    for (int i = 0; i < 3; ++i)
        counts[i] = complexity::covering_number(sys, pts, grid[i], 0.1).cardinality;
    const bool same = counts[0] == counts[1] && counts[1] == counts[2];
    return {same, fmt("covering at eps=0.1: n=16 -> %zu, n=256 -> %zu, n=4096 -> %zu (+-0)",
                      counts[0], counts[1], counts[2])};
}

Outcome c5_skew_slope() {
    const auto sys = SystemSpec::skew(freq::FrequencySet::cantor(0.1, 6));
    complexity::SamplerConfig sc;
    sc.count = 512;
    sc.seed = 1;
    const auto pts = complexity::sample_points(sys, sc);
    const std::vector<double> w(pts.size(), 1.0 / double(pts.size()));
    std::vector<double> lx, ly;
    for (std::int64_t n = 16; n <= 1024; n *= 2) {
        const auto rep = complexity::measure_covering_number(sys, pts, w, n, 0.2);
        lx.push_back(std::log(double(n)));
        ly.push_back(std::log(double(rep.cardinality)));
    }
    const auto fit = fit_line(lx, ly);
    return {fit.slope <= 0.5,
            fmt("measure-cover slope %.3f <= 0.5 over n in {2^4..2^10} at eps=0.2", fit.slope)};
}

Outcome c6_shift_superpolynomial() {
    const auto sys = SystemSpec::shift(Alphabet::binary);
    complexity::SamplerConfig sc;
    sc.kind = complexity::SamplerConfig::Kind::windows;
    sc.count = 4096;  // 2^12 sampled windows
    sc.seed = 1;
    sc.window_radius = 32;
    const auto pts = complexity::sample_points(sys, sc);
    std::vector<std::vector<int>> words;
    for (const auto& p : pts) {
        const auto& win = std::get<SymbolWindow>(p.v);
        std::vector<int> bits;
        for (std::int64_t k = 0; k < 12; ++k) bits.push_back(int(win.at_rel(k).value));
        words.push_back(std::move(bits));
    }
    bool growth = true;
    double worst_ratio = 1e9;
    for (std::size_t n = 1; n <= 12; ++n) {
        const double have = double(oracle::distinct_prefixes(words, n));
        const double want = std::pow(2.0, 0.9 * double(n));
        growth = growth && have >= want;
        worst_ratio = std::min(worst_ratio, have / want);
    }
    const auto prof = complexity::complexity_profile(sys, sc, 0.1, {2, 4, 6, 8, 10, 12});
    return {growth && prof.classification == "superpolynomial",
            fmt("distinct prefixes >= 2^{0.9n} for n <= 12 (min ratio %.2f); classified %s",
                worst_ratio, prof.classification.c_str())};
}

Outcome c7_nil_suite() {
    const auto g = nil::NilGroup::heisenberg();
    std::uint64_t st = 1;
    auto rnd = [&](double scale) {
        nil::Elt x(3);
        for (auto& c : x) c = scale * (2.0 * double(splitmix64(st) >> 11) * 0x1.0p-53 - 1.0);
        return x;
    };
    auto maxdiff = [](const nil::Elt& a, const nil::Elt& b) {
        double m = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
        return m;
    };
    const auto e = nil::identity(g);
    double worst_axiom = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const auto x = rnd(4.0), y = rnd(4.0), z = rnd(4.0);
        worst_axiom = std::max(worst_axiom, maxdiff(mult(g, mult(g, x, y), z),
                                                    mult(g, x, mult(g, y, z))));
        worst_axiom = std::max(worst_axiom, maxdiff(mult(g, x, inverse(g, x)), e));
        worst_axiom = std::max(worst_axiom, maxdiff(mult(g, x, e), x));
    }
    bool invariant = true;
    for (int i = 0; i < 200; ++i) {
        // the metric is a function of the difference element alone, bitwise
        const auto x = rnd(4.0), y = rnd(4.0);
        const auto w = mult(g, x, inverse(g, y));
        invariant = invariant && nil::group_metric(g, x, y, 6) ==
                                     nil::group_metric(g, w, e, 6);
    }
    double worst_linear = 0.0;
    for (int i = 0; i < 20; ++i) {
        const auto ge = rnd(1.0), h = rnd(1.0);
        const auto p = nil::from_linear(g, ge, h);
        for (std::int64_t n = 0; n <= 100; ++n)
            worst_linear = std::max(
                worst_linear, maxdiff(nil::poly_eval(g, p, n),
                                      mult(g, nil::power(g, ge, double(n)), h)));
    }
    double worst_adapted = 0.0;
    for (int i = 0; i < 50; ++i) {
        auto p = nil::sample_poly(g, st);
        auto f = [&](std::int64_t n) { return nil::poly_eval(g, p, n); };
        const std::int64_t h1 = 1 + std::int64_t(splitmix64(st) % 10);
        const std::int64_t h2 = 1 + std::int64_t(splitmix64(st) % 10);
        auto d1 = [&](std::int64_t m) { return nil::discrete_derivative(g, f, h1, m); };
        const auto dd = nil::discrete_derivative(g, d1, h2, 5);
        worst_adapted = std::max(worst_adapted, std::max(std::abs(dd[0]), std::abs(dd[1])));
    }
    const bool pass = worst_axiom <= 1e-12 && invariant && worst_linear <= 1e-9 &&
                      worst_adapted <= 1e-9;
    return {pass, fmt("axioms %.1e <= 1e-12 (1e4 triples); difference-element invariance exact; "
                      "linear %.1e <= 1e-9; adapted %.1e <= 1e-9",
                      worst_axiom, worst_linear, worst_adapted)};
}

Outcome c8_heisenberg_cover() {
    const auto g = nil::NilGroup::heisenberg();
    std::vector<double> lx, ly;
    for (std::int64_t n : {8, 16, 32, 64}) {
        const auto rep = nil::poly_covering_number(g, n, 0.25, 10000, 1);
        lx.push_back(std::log(double(n)));
        ly.push_back(rep.grid_log10 * std::log(10.0));  // certified cover cardinality
    }
    const auto fit = fit_line(lx, ly);
    return {fit.slope <= 8.0 && fit.r2 >= 0.9,
            fmt("certified-cover slope %.2f <= 8, R^2 %.4f >= 0.9 (eps=0.25, 1e4 samples)",
                fit.slope, fit.r2)};
}

Outcome c9_coding_stability() {
    const auto sys = SystemSpec::rotation(kGolden);
    const auto u = coding::CodableSet::arc(0.0, 0.5);
    const auto rep = coding::verify_coding_stability(sys, u, 0.05, 10000, 100, 1);
    return {rep.pass && rep.conclusive && rep.pairs_found == 100 && rep.max_density <= 0.1,
            fmt("max Hamming density %.4f <= 0.1 over %zu close pairs (delta=0.05, N=1e4)",
                rep.max_density, rep.pairs_found)};
}

Outcome c10_transfer() {
    const auto sys = SystemSpec::rotation(kGolden);
    const auto u = coding::CodableSet::arc(0.0, 0.5);
    const auto rep = coding::complexity_transfer_check(sys, u, 0.1, 256, 512, 1);
    return {rep.holds,
            fmt("coded cover %zu <= original cover %zu (delta=0.1, N=2^8)",
                rep.coded_cardinality, rep.original_cardinality)};
}

Outcome c11_construct_chain() {
    const std::vector<construct::Scale> scales = {{4, 10'000}, {8, 100'000}, {16, 1'000'000}};
    const auto spec = construct::make_synthetic_spec(0.5, scales, 0.0,
                                                     construct::Variant::fourier);
    const std::vector<std::int8_t> ones(std::size_t(1'000'000 + 16), 1);
    const auto rep = construct::verify_lower_bound_chain(spec, ones);

    std::vector<std::int8_t> zeros(ones.size(), 0);
    const auto gate = construct::verify_lower_bound_chain(spec, zeros);

    const bool pass = rep.chain_pass && rep.final_value >= 0.5 * 0.5 / 100.0 &&
                      !gate.chain_pass && gate.fail_link == "getau";
    return {pass,
            fmt("all links pass at 3 scales, final %.4f >= 0.0025; zero signal fails at getau; "
                "caveat: the scale-separation ladder needs log10(N_1) > 2.8e3, out of reach "
                "for any finite run (annotated, not gated)",
                rep.final_value)};
}

Outcome c12_certificate() {
    const auto sys = SystemSpec::rotation(kGolden);
    complexity::CertificateOptions opt;
    opt.seed = 1;
    const auto rec = complexity::disjointness_certificate(
        sys, Point::circle(0.0), obs_exponential(), 0.1, {1'000'000}, mob(), opt);
    bool bounds = rec.admissible && rec.all_bounds_hold && rec.rows.size() == 1;
    double qd = 0, qc = 0, qw = 0;
    if (!rec.rows.empty()) {
        qd = rec.rows[0].q_direct;
        qc = rec.rows[0].q_coupling;
        qw = rec.rows[0].q_window;
        bounds = bounds && qd <= 7 * 0.1 && qc <= 5 * 0.1 && qw <= 2 * 0.1;
    }
    return {bounds, fmt("L=%lld admissible; %.3f <= 7eps, %.3f <= 5eps, %.4f <= 2eps",
                        (long long)rec.window_length, qd, qc, qw)};
}

Outcome c13_restricted_trend() {
    const auto c = freq::FrequencySet::cantor(0.1, 6);
    const auto h5 = fourier::restricted_uniformity_average(mob(), 1'000'000, 5, c,
                                                           arith::AverageKind::cesaro);
    const auto h50 = fourier::restricted_uniformity_average(mob(), 1'000'000, 50, c,
                                                            arith::AverageKind::cesaro);
    const bool ces = h50.cesaro_upper < h5.cesaro_lower;
    const bool log = h50.log_upper < h5.log_lower;

    const auto sf = fourier::restricted_uniformity_average(
        mob(), 1'000'000, 1, freq::FrequencySet::finite({0.0}), arith::AverageKind::cesaro);
    KahanSum direct;
    for (std::int64_t n = 1; n <= 1'000'000; ++n)
        direct.add(mob().value(n + 1) != 0 ? 1.0 : 0.0);
    const double want = direct.value() / 1e6;
    const bool square = std::abs(sf.cesaro_lower - want) <= 1e-12;
    return {ces && log && square,
            fmt("H=50 enclosure [%.4f,%.4f] below H=5 [%.4f,%.4f], both kinds; "
                "squarefree avg |%.6f - %.6f| <= 1e-12",
                h50.cesaro_lower, h50.cesaro_upper, h5.cesaro_lower, h5.cesaro_upper,
                sf.cesaro_lower, want)};
}

Outcome c14_box_dimension() {
    const auto c = freq::FrequencySet::cantor(1.0 / 3.0, 10);
    std::vector<double> grid;
    for (int k = 2; k <= 8; ++k) grid.push_back(std::pow(3.0, -k));
    const auto rep = fourier::box_dimension_estimate(c, grid);
    bool counts_exact = true;
    for (std::size_t i = 0; i < rep.counts.size(); ++i)
        counts_exact = counts_exact && rep.counts[i] == (std::size_t(1) << (i + 2));
    const double target = std::log(2.0) / std::log(3.0);
    return {std::abs(rep.slope - target) <= 0.05 && counts_exact,
            fmt("slope %.4f within 0.05 of log2/log3=%.4f; counts = 2^k at 3^-k exactly",
                rep.slope, target)};
}

}  // namespace

int main() {
    struct Row {
        int id;
        const char* title;
        std::function<Outcome()> run;
    };
    const std::vector<Row> rows = {
        {1, "sieve equals trial division", c1_sieve_oracle},
        {2, "two-term correlation trend", c2_chowla_trend},
        {3, "twisted-sum decay", c3_davenport_decay},
        {4, "rotation covering is n-independent", c4_rotation_bounded},
        {5, "skew measure-complexity slope", c5_skew_slope},
        {6, "full shift is superpolynomial", c6_shift_superpolynomial},
        {7, "nilpotent group property suite", c7_nil_suite},
        {8, "polynomial-orbit cover fit", c8_heisenberg_cover},
        {9, "coding stability", c9_coding_stability},
        {10, "covering transfer inequality", c10_transfer},
        {11, "lower-bound construction chain", c11_construct_chain},
        {12, "orthogonality certificate", c12_certificate},
        {13, "restricted uniformity trend", c13_restricted_trend},
        {14, "box dimension estimator", c14_box_dimension},
    };

    int failures = 0;
    for (const auto& r : rows) {
        Outcome o;
        try {
            o = r.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("[%2d] %s  %s (%s)\n", r.id, o.pass ? "PASS" : "FAIL", r.title,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/14 criteria passed\n", 14 - failures);
    return failures == 0 ? 0 : 1;
}
