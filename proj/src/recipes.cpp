#include "mulab/recipes.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>

#include "mulab/arith.hpp"
#include "mulab/coding.hpp"
#include "mulab/complexity.hpp"
#include "mulab/construct.hpp"
#include "mulab/fourier.hpp"
#include "mulab/frequency_set.hpp"
#include "mulab/nil.hpp"
#include "mulab/systems.hpp"
#include "mulab/util.hpp"

namespace mulab::recipes {

using report::Config;
using report::Table;
using report::UsageError;

namespace {

constexpr double kGolden = 0.61803398874989479;

// reads a value and writes the effective choice back, so the manifest records
// the full parameter set even when defaults were used
std::int64_t eff_int(Config& c, const std::string& k, std::int64_t d) {
    const auto v = c.int_or(k, d);
    c.set(k, Table::integer(v));
    return v;
}

double eff_num(Config& c, const std::string& k, double d) {
    const auto v = c.num_or(k, d);
    c.set(k, Table::num(v));
    return v;
}

std::string eff_str(Config& c, const std::string& k, const std::string& d) {
    const auto v = c.str_or(k, d);
    c.set(k, v);
    return v;
}

bool eff_flag(Config& c, const std::string& k, bool d) {
    const auto v = c.flag_or(k, d);
    c.set(k, Table::boolean(v));
    return v;
}

std::vector<std::int64_t> eff_intlist(Config& c, const std::string& k,
                                      std::vector<std::int64_t> d) {
    auto v = c.intlist_or(k, std::move(d));
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + Table::integer(v[i]);
    c.set(k, s);
    return v;
}

std::vector<std::string> eff_strlist(Config& c, const std::string& k,
                                     std::vector<std::string> d) {
    auto v = c.strlist_or(k, std::move(d));
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    c.set(k, s);
    return v;
}

struct Emitter {
    std::filesystem::path dir;
    char sep = ',';
    std::vector<report::TableInfo> done;

    Table make(const std::string& name) const { return Table(dir, name, sep); }
    void commit(Table& t) {
        t.commit();
        done.push_back({t.name(), t.path().filename().string(), t.rows(), t.digest()});
    }
};

arith::AverageKind parse_kind(const std::string& key, const std::string& s) {
    try {
        return arith::average_kind_from_string(s);
    } catch (const std::exception& e) {
        throw UsageError(key, e.what());
    }
}

freq::FrequencySet parse_freq(const std::string& key, const std::string& s) {
    try {
        return freq::FrequencySet::parse(s);
    } catch (const std::exception& e) {
        throw UsageError(key, e.what());
    }
}

// --------------------------------------------------------------------- sieve
int r_sieve(Config& cfg, Emitter& em, std::uint64_t) {
    const auto n = eff_int(cfg, "sieve.n", 1'000'000);
    const auto block = eff_int(cfg, "sieve.block", 1 << 20);
    if (n < 1) throw UsageError("sieve.n", "must be >= 1");
    if (block < 64) throw UsageError("sieve.block", "must be >= 64");
    const auto mob = arith::sieve_mobius(1, n, std::size_t(block));

    Table t = em.make("mobius");
    for (std::int64_t k = 1; k <= n; ++k)
        t.row({Table::integer(k), Table::integer(mob.value(k))});
    em.commit(t);

    Table m = em.make("mertens");
    std::int64_t run = 0, next = 1;
    for (std::int64_t k = 1; k <= n; ++k) {
        run += mob.value(k);
        if (k == next || k == n) {
            m.row({Table::integer(k), Table::integer(run)});
            while (next <= k) next *= 10;
        }
    }
    em.commit(m);
    return 0;
}

// -------------------------------------------------------------------- chowla
int r_chowla(Config& cfg, Emitter& em, std::uint64_t) {
    const auto h1 = eff_int(cfg, "chowla.h1", 0);
    const auto h2 = eff_int(cfg, "chowla.h2", 1);
    const auto grid = eff_intlist(cfg, "chowla.n_grid", {1000, 10000, 100000, 1'000'000});
    if (grid.empty()) throw UsageError("chowla.n_grid", "empty grid");
    const auto n_max = *std::max_element(grid.begin(), grid.end());
    const auto mob = arith::sieve_mobius(1, n_max + std::max(h1, h2));

    Table t = em.make("chowla");
    for (const auto n : grid) {
        const auto s = arith::chowla_log_sum(mob, h1, h2, n);
        t.row({Table::integer(n), Table::integer(h1), Table::integer(h2),
               Table::num(s.log_normalized), Table::num(s.harmonic_normalized)});
    }
    em.commit(t);
    return 0;
}

// ----------------------------------------------------------------- davenport
int r_davenport(Config& cfg, Emitter& em, std::uint64_t) {
    const auto alpha = eff_num(cfg, "davenport.alpha", std::sqrt(2.0) - 1.0);
    const auto kinds = eff_strlist(cfg, "davenport.kinds", {"cesaro", "logarithmic"});
    const auto grid = eff_intlist(cfg, "davenport.n_grid", {10'000, 100'000, 1'000'000});
    if (grid.empty()) throw UsageError("davenport.n_grid", "empty grid");
    const auto mob = arith::sieve_mobius(1, *std::max_element(grid.begin(), grid.end()));

    Table t = em.make("davenport");
    for (const auto& ks : kinds) {
        const auto kind = parse_kind("davenport.kinds", ks);
        for (const auto n : grid)
            t.row({Table::integer(n), Table::num(alpha), arith::to_string(kind),
                   Table::num(arith::exponential_sum_abs(mob, alpha, n, kind))});
    }
    em.commit(t);
    return 0;
}

// -------------------------------------------------------- complexity-profile
systems::SystemSpec profile_system(Config& cfg) {
    const auto name = eff_str(cfg, "profile.system", "rotation");
    if (name == "rotation")
        return systems::SystemSpec::rotation(eff_num(cfg, "profile.alpha", kGolden));
    if (name == "skew")
        return systems::SystemSpec::skew(
            parse_freq("profile.freq", eff_str(cfg, "profile.freq", "cantor:0.1:6")),
            eff_flag(cfg, "profile.anchor", false));
    if (name == "shift") return systems::SystemSpec::shift(systems::Alphabet::binary);
    if (name == "orbit") {
        const auto p = cfg.get("profile.sequence");
        if (!p) throw UsageError("profile.sequence", "required for system = orbit");
        return systems::SystemSpec::orbit_closure(systems::SequenceSpec::load(*p));
    }
    throw UsageError("profile.system", "unknown system '" + name + "'");
}

int r_profile(Config& cfg, Emitter& em, std::uint64_t seed) {
    const auto sys = profile_system(cfg);
    const bool symbolic = cfg.str_or("profile.system", "") == "shift" ||
                          cfg.str_or("profile.system", "") == "orbit";

    complexity::SamplerConfig sc;
    const auto sk = eff_str(cfg, "profile.sampler", symbolic ? "windows" : "uniform");
    if (sk == "orbit") sc.kind = complexity::SamplerConfig::Kind::orbit;
    else if (sk == "uniform") sc.kind = complexity::SamplerConfig::Kind::uniform;
    else if (sk == "windows") sc.kind = complexity::SamplerConfig::Kind::windows;
    else throw UsageError("profile.sampler", "unknown sampler '" + sk + "'");
    sc.count = std::size_t(eff_int(cfg, "profile.samples", 512));
    sc.window_radius = eff_int(cfg, "profile.window_radius", 64);
    sc.seed = seed;

    const auto eps = eff_num(cfg, "profile.epsilon", 0.1);
    const auto grid = eff_intlist(cfg, "profile.n_grid", {16, 64, 256, 1024, 4096});
    if (grid.empty()) throw UsageError("profile.n_grid", "empty grid");

    const auto prof = complexity::complexity_profile(sys, sc, eps, grid);
    // short name only: the full spec (alpha, freq, ...) lives in the manifest,
    // and describe() output contains the csv separator
    const auto desc = cfg.str_or("profile.system", "rotation");

    Table t = em.make("profile");
    for (std::size_t i = 0; i < prof.n_grid.size(); ++i)
        t.row({desc, Table::num(eps), Table::integer(prof.n_grid[i]),
               Table::integer(std::int64_t(prof.counts[i])), Table::num(prof.tail_bounds[i])});
    em.commit(t);

    Table s = em.make("profile_summary");
    s.row({desc, Table::num(eps), Table::integer(std::int64_t(prof.sample_size)),
           Table::num(prof.fitted_exponent), Table::num(prof.r2_loglog),
           Table::num(prof.r2_semilog), Table::num(prof.loglog_curvature),
           Table::boolean(prof.counts_monotone), prof.classification});
    em.commit(s);
    return 0;
}

// ------------------------------------------------------------- nil-poly-cover
int r_nil_cover(Config& cfg, Emitter& em, std::uint64_t seed) {
    const auto gname = eff_str(cfg, "nil.group", "heisenberg");
    nil::NilGroup g;
    if (gname == "heisenberg") {
        g = nil::NilGroup::heisenberg();
    } else if (gname.rfind("abelian:", 0) == 0) {
        const int m = std::atoi(gname.c_str() + 8);
        if (m < 1) throw UsageError("nil.group", "abelian rank must be >= 1");
        g = nil::NilGroup::abelian(m);
    } else {
        throw UsageError("nil.group", "unknown group '" + gname + "'");
    }
    const auto degrees = eff_intlist(cfg, "nil.degrees", {8, 16, 32, 64});
    if (degrees.empty()) throw UsageError("nil.degrees", "empty degree list");
    const auto eps = eff_num(cfg, "nil.epsilon", 0.25);
    const auto samples = eff_int(cfg, "nil.samples", 10'000);

    Table t = em.make("nil_cover");
    std::vector<double> xs, ys;
    double snap = 0.0;
    int depth = 0, radius = 0;
    for (const auto n : degrees) {
        const auto rep = nil::poly_covering_number(g, int(n), eps, std::size_t(samples), seed);
        xs.push_back(std::log(double(n)));
        ys.push_back(rep.grid_log10 * std::log(10.0));
        snap = rep.snap_constant;
        depth = rep.chain_depth;
        radius = rep.lattice_radius;
        t.row({Table::integer(n), Table::num(eps), Table::integer(samples),
               Table::integer(std::int64_t(rep.net.cardinality)),
               Table::boolean(rep.net.degenerate), Table::boolean(rep.net.packing_certified),
               Table::num(rep.grid_count), Table::num(rep.grid_log10)});
    }
    em.commit(t);

    Table f = em.make("nil_cover_fit");
    const auto fit = fit_line(xs, ys);
    f.row({Table::num(eps), Table::integer(samples), Table::num(fit.slope), Table::num(fit.r2),
           Table::num(snap), Table::integer(depth), Table::integer(radius)});
    em.commit(f);

    if (g.dim == 3) {
        std::uint64_t st = mix_seed(seed, 77);
        Table coef = em.make("nil_coefficients");
        for (int p = 0; p < 4; ++p) {
            const auto poly = nil::sample_poly(g, st);
            for (std::size_t c = 0; c < poly.coeff.size(); ++c)
                coef.row({Table::integer(p), Table::integer(std::int64_t(c)),
                          Table::num(poly.coeff[c][0]), Table::num(poly.coeff[c][1]),
                          Table::num(poly.coeff[c][2])});
        }
        em.commit(coef);
    }
    return 0;
}

// ------------------------------------------------------------ coding-transfer
int r_coding(Config& cfg, Emitter& em, std::uint64_t seed) {
    const auto alpha = eff_num(cfg, "coding.alpha", kGolden);
    const auto sys = systems::SystemSpec::rotation(alpha);
    const auto u = coding::CodableSet::arc(eff_num(cfg, "coding.arc_start", 0.0),
                                           eff_num(cfg, "coding.arc_len", 0.5));

    const auto eps0 = eff_num(cfg, "coding.eps0", 0.01);
    const auto small_n = eff_int(cfg, "coding.smallness_n", 20'000);
    complexity::SamplerConfig sc;
    sc.count = 8;
    sc.seed = mix_seed(seed, 11);
    const auto trial = complexity::sample_points(sys, sc);
    const auto sm = coding::smallness_test(sys, u, eps0, small_n, trial);
    Table ts = em.make("coding_smallness");
    ts.row({Table::num(sm.eps0), Table::integer(sm.n),
            Table::integer(std::int64_t(sm.per_point.size())), Table::num(sm.max_frequency),
            Table::num(sm.max_log_frequency)});
    em.commit(ts);

    const auto sdelta = eff_num(cfg, "coding.stability_delta", 0.05);
    const auto sn = eff_int(cfg, "coding.stability_n", 10'000);
    const auto pairs = eff_int(cfg, "coding.pairs", 100);
    const auto st = coding::verify_coding_stability(sys, u, sdelta, sn, std::size_t(pairs),
                                                    mix_seed(seed, 12));
    Table tt = em.make("coding_stability");
    tt.row({Table::num(st.delta), Table::integer(st.n), Table::num(st.epsilon),
            Table::num(st.collar_frequency), Table::integer(std::int64_t(st.pairs_requested)),
            Table::integer(std::int64_t(st.pairs_found)), Table::num(st.max_density),
            Table::boolean(st.vacuous), Table::boolean(st.conclusive), Table::boolean(st.pass)});
    em.commit(tt);

    const auto delta = eff_num(cfg, "coding.delta", 0.1);
    const auto n = eff_int(cfg, "coding.n", 256);
    const auto samples = eff_int(cfg, "coding.samples", 512);
    const auto tr = coding::complexity_transfer_check(sys, u, delta, n, std::size_t(samples),
                                                      mix_seed(seed, 13));
    Table tc = em.make("coding_transfer");
    tc.row({Table::num(tr.delta), Table::integer(tr.n), Table::integer(tr.window),
            Table::num(tr.delta_prime), Table::num(tr.margin), Table::num(tr.epsilon),
            Table::integer(std::int64_t(tr.sample_count)),
            Table::integer(std::int64_t(tr.original_cardinality)),
            Table::integer(std::int64_t(tr.coded_cardinality)), Table::boolean(tr.holds)});
    em.commit(tc);

    return (tr.holds && st.pass) ? 0 : 3;
}

// --------------------------------------------------------- fourier-restricted
int r_fourier(Config& cfg, Emitter& em, std::uint64_t) {
    const auto set = parse_freq("fourier.c", eff_str(cfg, "fourier.c", "cantor:0.1:6"));
    const auto h_grid = eff_intlist(cfg, "fourier.h_grid", {5, 50});
    const auto n = eff_int(cfg, "fourier.n", 1'000'000);
    const auto kinds = eff_strlist(cfg, "fourier.kinds", {"cesaro", "logarithmic"});
    const auto refinement = eff_num(cfg, "fourier.refinement", 0.0);
    if (h_grid.empty()) throw UsageError("fourier.h_grid", "empty grid");
    const auto h_max = *std::max_element(h_grid.begin(), h_grid.end());
    const auto mob = arith::sieve_mobius(1, n + h_max);

    std::vector<arith::AverageKind> want;
    for (const auto& ks : kinds) want.push_back(parse_kind("fourier.kinds", ks));

    Table t = em.make("fourier_restricted");
    for (const auto h : h_grid) {
        const auto avg = fourier::restricted_uniformity_average(
            mob, n, h, set, arith::AverageKind::cesaro, refinement);
        for (const auto kind : want) {
            const bool ces = kind == arith::AverageKind::cesaro;
            t.row({Table::integer(h), Table::integer(n),
                   arith::to_string(kind), avg.set_descriptor,
                   Table::num(ces ? avg.cesaro_lower : avg.log_lower),
                   Table::num(ces ? avg.cesaro_upper : avg.log_upper)});
        }
    }
    em.commit(t);
    return 0;
}

// ------------------------------------------------------------ construct-chain
int r_construct(Config& cfg, Emitter& em, std::uint64_t) {
    const auto tau = eff_num(cfg, "chain.tau", 0.5);
    const auto alpha0 = eff_num(cfg, "chain.alpha0", 0.0);
    const auto vname = eff_str(cfg, "chain.variant", "fourier");
    construct::Variant variant;
    if (vname == "fourier") variant = construct::Variant::fourier;
    else if (vname == "nil") variant = construct::Variant::nil;
    else throw UsageError("chain.variant", "unknown variant '" + vname + "'");

    const auto stext = eff_str(cfg, "chain.scales", "4:10000,8:100000,16:1000000");
    std::vector<construct::Scale> scales;
    for (const auto& part : cfg.strlist_or("chain.scales", {})) {
        const auto colon = part.find(':');
        if (colon == std::string::npos)
            throw UsageError("chain.scales", "expected H:N pairs, got '" + stext + "'");
        try {
            scales.push_back({std::stoll(part.substr(0, colon)),
                              std::stoll(part.substr(colon + 1))});
        } catch (const std::exception&) {
            throw UsageError("chain.scales", "bad pair '" + part + "'");
        }
    }

    construct::BlockSpec spec;
    try {
        spec = construct::make_synthetic_spec(tau, scales, alpha0, variant);
    } catch (const std::exception& e) {
        throw UsageError("chain.scales", e.what());
    }

    const auto y = construct::assemble_sequence(spec);
    const auto star =
        construct::check_property_star(y, spec.freqs, eff_num(cfg, "chain.tol", 1e-9));
    std::vector<std::pair<std::int64_t, std::int64_t>> windows;
    for (const auto& s : scales) windows.push_back({2, s.n});
    const auto support = construct::gen_measure_support_check(y, windows);

    const auto signal_kind = eff_str(cfg, "chain.signal", "ones");
    std::vector<std::int8_t> signal(std::size_t(y.hi()), 0);
    if (signal_kind == "ones") {
        std::fill(signal.begin(), signal.end(), std::int8_t(1));
    } else if (signal_kind == "zeros") {
        // already zero
    } else if (signal_kind == "mobius") {
        const auto mob = arith::sieve_mobius(1, y.hi());
        for (std::int64_t k = 1; k <= y.hi(); ++k)
            signal[std::size_t(k - 1)] = std::int8_t(mob.value(k));
    } else {
        throw UsageError("chain.signal", "unknown signal '" + signal_kind + "'");
    }
    const auto rep = construct::verify_lower_bound_chain(spec, signal);

    Table tc = em.make("construct_chain");
    for (const auto& sc : rep.per_scale)
        for (const auto& l : sc.links)
            tc.row({Table::integer(std::int64_t(sc.index)), Table::integer(sc.scale.h),
                    Table::integer(sc.scale.n), Table::num(sc.m_i), l.id, Table::num(l.measured),
                    Table::num(l.bound), l.geq ? ">=" : "<=", Table::num(l.margin),
                    Table::boolean(l.pass)});
    em.commit(tc);

    Table tb = em.make("construct_blocks");
    for (const auto& row : y.ledger)
        tb.row({Table::integer(std::int64_t(row.scale)), Table::integer(row.start),
                Table::integer(row.len), Table::num(row.theta), Table::num(row.phi),
                Table::integer(row.p_run)});
    em.commit(tb);

    Table sum = em.make("construct_summary");
    sum.row({Table::num(rep.tau), Table::num(rep.sigma), Table::num(rep.beta),
             Table::boolean(rep.ladder_feasible), Table::boolean(star.pass),
             Table::boolean(support.decreasing), Table::num(rep.final_value),
             Table::boolean(rep.chain_pass), rep.fail_link.empty() ? "-" : rep.fail_link});
    em.commit(sum);

    return rep.chain_pass ? 0 : 3;
}

// ----------------------------------------------------------------- certificate
int r_certificate(Config& cfg, Emitter& em, std::uint64_t seed) {
    const auto alpha = eff_num(cfg, "cert.alpha", kGolden);
    const auto eps = eff_num(cfg, "cert.epsilon", 0.1);
    const auto n_grid = eff_intlist(cfg, "cert.n_grid", {1'000'000});
    const auto samples = eff_int(cfg, "cert.samples", 4096);
    const auto l_grid = eff_intlist(cfg, "cert.l_grid", {});
    const auto x0 = eff_num(cfg, "cert.x", 0.0);
    if (n_grid.empty()) throw UsageError("cert.n_grid", "empty grid");

    const auto sys = systems::SystemSpec::rotation(alpha);
    // window sums read mu up to N + L for the longest candidate window
    const std::int64_t max_l =
        l_grid.empty() ? 65536 : *std::max_element(l_grid.begin(), l_grid.end());
    const auto mob =
        arith::sieve_mobius(1, *std::max_element(n_grid.begin(), n_grid.end()) + max_l);
    complexity::CertificateOptions opt;
    opt.l_grid = l_grid;
    opt.sample_count = std::size_t(samples);
    opt.seed = seed;
    const auto rec = complexity::disjointness_certificate(
        sys, systems::Point::circle(x0), systems::obs_exponential(), eps, n_grid, mob, opt);

    Table t = em.make("certificate");
    for (const auto& r : rec.rows)
        t.row({Table::integer(r.n_max), Table::num(r.q_direct), Table::num(r.q_coupling),
               Table::num(r.q_window), Table::num(r.visit_mass), Table::boolean(r.pass_direct),
               Table::boolean(r.pass_coupling), Table::boolean(r.pass_window)});
    em.commit(t);

    Table s = em.make("certificate_summary");
    s.row({Table::num(rec.eps), Table::num(rec.eps1), Table::num(rec.modulus_lipschitz),
           Table::integer(rec.window_length), Table::integer(std::int64_t(rec.cover_size)),
           Table::integer(std::int64_t(rec.sample_size)), Table::boolean(rec.admissible),
           Table::boolean(rec.all_bounds_hold)});
    em.commit(s);

    return (rec.admissible && rec.all_bounds_hold) ? 0 : 3;
}

using RecipeFn = int (*)(Config&, Emitter&, std::uint64_t);

const std::vector<std::pair<std::string, RecipeFn>>& registry() {
    static const std::vector<std::pair<std::string, RecipeFn>> r{
        {"sieve", r_sieve},
        {"chowla", r_chowla},
        {"davenport", r_davenport},
        {"complexity-profile", r_profile},
        {"nil-poly-cover", r_nil_cover},
        {"coding-transfer", r_coding},
        {"fourier-restricted", r_fourier},
        {"construct-chain", r_construct},
        {"certificate", r_certificate},
    };
    return r;
}

}  // namespace

std::vector<std::string> names() {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
}

RunOutcome run(const std::string& recipe, Config cfg) {
    RunOutcome out;
    RecipeFn fn = nullptr;
    for (const auto& [name, f] : registry())
        if (name == recipe) fn = f;
    if (!fn) {
        out.exit_code = 2;
        out.message = "unknown recipe '" + recipe + "'";
        return out;
    }

    try {
        Emitter em;
        em.dir = eff_str(cfg, "out", "out");
        const auto format = eff_str(cfg, "format", "csv");
        if (format == "csv") em.sep = ',';
        else if (format == "tsv") em.sep = '\t';
        else throw UsageError("format", "expected csv or tsv, got '" + format + "'");
        const auto seed = std::uint64_t(eff_int(cfg, "seed", 1));
        const auto threads = eff_int(cfg, "threads", 0);
        if (threads < 0) throw UsageError("threads", "must be >= 0");
        if (threads > 0) set_parallel_threads(int(threads));

        const auto t0 = std::chrono::steady_clock::now();
        out.exit_code = fn(cfg, em, seed);
        const double wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        report::write_manifest(em.dir, recipe, kVersion, cfg, em.done, wall_ms);
        out.tables = std::move(em.done);
        if (out.exit_code == 3) out.message = "embedded acceptance check failed";
    } catch (const UsageError& e) {
        out.exit_code = 2;
        out.message = e.what();
    } catch (const std::exception& e) {
        out.exit_code = 2;
        out.message = e.what();
    }
    return out;
}

}  // namespace mulab::recipes
