#include "mulab/construct.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "mulab/arith.hpp"
#include "mulab/util.hpp"

namespace mulab::construct {

using systems::Symbol;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(const char* f, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

cplx symbol_value(const Symbol& s) { return s.is_anchor ? cplx{0.0, 0.0} : unit(s.value); }

}  // namespace

BlockSpec::CheckReport BlockSpec::check() const {
    CheckReport rep;
    auto bad = [&](std::string s) { rep.violations.push_back(std::move(s)); };

    if (!(tau > 0.0) || tau >= 1.0) bad("tau outside (0,1)");
    if (!(sigma > 0.0)) bad("sigma must be positive");
    if (scales.empty()) bad("no scales");
    if (blocks.size() != scales.size()) bad("blocks/scales arity mismatch");
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (scales[i].h < 1 || scales[i].n < scales[i].h)
            bad(fmt("scale %zu: need 1 <= H <= N", i));
        if (i > 0 && scales[i].n <= scales[i - 1].n) bad(fmt("scale %zu: N not increasing", i));
    }
    if (!rep.violations.empty()) return rep;

    struct Extent {
        std::int64_t lo, hi;
        std::size_t scale;
        std::int64_t start;
    };
    std::vector<Extent> ext;
    for (std::size_t i = 0; i < scales.size(); ++i) {
        const auto [h, n] = scales[i];
        const double floor_i = std::pow(double(n), sigma);
        std::int64_t prev = std::numeric_limits<std::int64_t>::min();
        for (const Block& b : blocks[i]) {
            if (b.start < 1 || b.start > n)
                bad(fmt("scale %zu: start %lld outside [1, N]", i, (long long)b.start));
            if (double(b.start) <= floor_i)
                bad(fmt("scale %zu: start %lld inside the excluded range [1, N^sigma]", i,
                        (long long)b.start));
            if (prev != std::numeric_limits<std::int64_t>::min() && b.start - prev < 2 * h)
                bad(fmt("scale %zu: gap %lld < 2H at start %lld", i, (long long)(b.start - prev),
                        (long long)b.start));
            if (b.start <= prev) bad(fmt("scale %zu: starts not ascending", i));
            prev = b.start;
            ext.push_back({b.start + 1, b.start + h, i, b.start});
        }
    }
    std::sort(ext.begin(), ext.end(), [](const Extent& a, const Extent& b) { return a.lo < b.lo; });
    for (std::size_t k = 1; k < ext.size(); ++k)
        if (ext[k].lo <= ext[k - 1].hi)
            bad(fmt("blocks collide: scale %zu start %lld overlaps scale %zu start %lld",
                    ext[k - 1].scale, (long long)ext[k - 1].start, ext[k].scale,
                    (long long)ext[k].start));

    // separation ladder H_i < sig N_i^sig < (sig/10) H_{i+1}^sig, in log space
    rep.ladder_feasible = true;
    const double ls = std::log(sigma);
    for (std::size_t i = 0; i < scales.size(); ++i) {
        const double lhs = std::log(double(scales[i].h));
        const double mid = ls + sigma * std::log(double(scales[i].n));
        if (!(lhs < mid)) rep.ladder_feasible = false;
        if (i + 1 < scales.size()) {
            const double rhs = ls - std::log(10.0) + sigma * std::log(double(scales[i + 1].h));
            if (!(mid < rhs)) rep.ladder_feasible = false;
        }
    }
    if (!rep.ladder_feasible && !scales.empty()) {
        const double need = std::log10(double(scales[0].h) / sigma) / sigma;
        rep.ladder_note = fmt(
            "separation ladder fails at these magnitudes: the first link alone "
            "needs log10(N_1) > %.1f; every inequality is reported per scale instead",
            need);
    }
    rep.pass = rep.violations.empty();
    return rep;
}

Symbol AssembledSequence::at(std::int64_t j) const {
    if (j < lo() || j > hi()) throw std::out_of_range("index outside the assembled window");
    return sym.symbols[std::size_t(j - lo())];
}

GappedSubset select_gapped_subset(const std::vector<std::int64_t>& s, std::int64_t gap,
                                  double target) {
    if (gap < 1) throw std::invalid_argument("gap >= 1 required");
    GappedSubset out;
    KahanSum mass;
    std::int64_t last = std::numeric_limits<std::int64_t>::min();
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (k > 0 && s[k] <= s[k - 1]) throw std::invalid_argument("input not sorted ascending");
        if (s[k] < 1) throw std::invalid_argument("elements must be >= 1");
        if (last != std::numeric_limits<std::int64_t>::min() && s[k] - last < gap) continue;
        out.subset.push_back(s[k]);
        mass.add(1.0 / double(s[k]));
        last = s[k];
    }
    out.harmonic_mass = mass.value();
    out.target_met = out.harmonic_mass > target;
    return out;
}

AssembledSequence assemble_sequence(const BlockSpec& spec) {
    const auto chk = spec.check();
    if (!chk.pass) throw std::invalid_argument("invalid block spec: " + chk.violations.front());
    if (spec.variant == Variant::nil && spec.x0.size() != std::size_t(spec.group.dim))
        throw std::invalid_argument("base point dimension mismatch");

    AssembledSequence y;
    y.variant = spec.variant;
    y.sym.alphabet = systems::Alphabet::torus_anchor;
    y.sym.lo = 1;
    const std::int64_t last = spec.scales.back().n + spec.scales.back().h;
    y.sym.symbols.assign(std::size_t(last), Symbol::anchor());

    for (std::size_t i = 0; i < spec.scales.size(); ++i) {
        const std::int64_t h = spec.scales[i].h;
        for (const Block& b : spec.blocks[i]) {
            LedgerRow row;
            row.scale = i;
            row.start = b.start;
            row.len = h;
            if (spec.variant == Variant::fourier) {
                row.theta = wrap01(b.theta);
                row.phi = wrap01(b.phi);
                for (std::int64_t k = 1; k <= h; ++k)
                    y.sym.symbols[std::size_t(b.start + k - 1)] =
                        Symbol::angle(b.phi + double(k) * b.theta);
            } else {
                if (b.gen.size() != std::size_t(spec.group.dim))
                    throw std::invalid_argument("generator dimension mismatch");
                row.theta = wrap01(b.gen[0]);
                row.phi = wrap01(spec.x0[0]);
                for (std::int64_t k = 1; k <= h; ++k) {
                    const auto z = nil::mult(spec.group, nil::power(spec.group, b.gen, double(k)),
                                             spec.x0);
                    y.sym.symbols[std::size_t(b.start + k - 1)] =
                        Symbol::angle(nil::reduce(spec.group, z).first[0]);
                }
            }
            y.ledger.push_back(row);
        }
    }
    std::sort(y.ledger.begin(), y.ledger.end(),
              [](const LedgerRow& a, const LedgerRow& b) { return a.start < b.start; });
    std::int64_t prev_end = 0;
    for (auto& row : y.ledger) {
        row.p_run = row.start - prev_end;
        prev_end = row.start + row.len;
    }
    return y;
}

StarReport check_property_star(const AssembledSequence& y, const freq::FrequencySet& c,
                               double tol) {
    StarReport rep;
    rep.tol = tol;
    const std::int64_t lo = y.lo(), hi = y.hi();
    std::int64_t j = lo;
    while (j <= hi) {
        if (y.at(j).is_anchor) {
            ++j;
            continue;
        }
        std::int64_t b = j;
        while (b + 1 <= hi && !y.at(b + 1).is_anchor) ++b;

        StarBlockRow row;
        row.start = j - 1;
        row.len = b - j + 1;
        const double v1 = y.at(j).value;
        row.theta = row.len >= 2 ? wrap01(y.at(j + 1).value - v1) : 0.0;
        row.phi = wrap01(v1 - row.theta);
        for (std::int64_t k = 1; k <= row.len; ++k)
            row.max_err = std::max(
                row.max_err,
                circ_dist_arc(y.at(j + k - 1).value, row.phi + double(k) * row.theta));
        row.symbols_ok = row.max_err <= tol;
        row.freq_dist = c.distance_to(row.theta);
        row.freq_ok = row.freq_dist <= tol;
        rep.blocks.push_back(row);
        j = b + 1;
    }

    if (rep.blocks.empty()) {
        rep.lengths_unbounded = true;  // vacuous
    } else {
        std::int64_t best = 0;
        for (const auto& r : rep.blocks) best = std::max(best, r.len);
        const std::size_t tail_from = rep.blocks.size() - (rep.blocks.size() + 2) / 3;
        for (std::size_t k = tail_from; k < rep.blocks.size(); ++k)
            if (rep.blocks[k].len == best) rep.lengths_unbounded = true;
    }
    rep.pass = rep.lengths_unbounded;
    for (const auto& r : rep.blocks) rep.pass = rep.pass && r.symbols_ok && r.freq_ok;
    return rep;
}

SupportReport gen_measure_support_check(
    const AssembledSequence& y, const std::vector<std::pair<std::int64_t, std::int64_t>>& windows) {
    SupportReport rep;
    for (auto [m, n] : windows) {
        if (m >= n || m < y.lo() || n > y.hi())
            throw std::invalid_argument("window outside the assembled support");
        SupportWindow w;
        w.m = m;
        w.n = n;
        for (std::int64_t j = m + 1; j <= n; ++j)
            if (y.at(j - 1).is_anchor && !y.at(j).is_anchor) ++w.transitions;
        w.frequency = double(w.transitions) / double(n - m);
        rep.windows.push_back(w);
    }
    rep.decreasing = true;
    for (std::size_t k = 1; k < rep.windows.size(); ++k)
        if (rep.windows[k].frequency > rep.windows[k - 1].frequency + 1e-15)
            rep.decreasing = false;
    return rep;
}

XnqClass xnq_classify(const AssembledSequence& y, std::int64_t center, std::int64_t t) {
    if (t < 0) throw std::invalid_argument("window radius >= 0 required");
    const auto anchor_at = [&](std::int64_t j) {
        return j < y.lo() || j > y.hi() || y.at(j).is_anchor;
    };
    XnqClass out;
    if (!anchor_at(center)) {
        out.kind = XnqClass::Kind::block;
        std::int64_t q = 0;
        while (q - 1 >= -t && !anchor_at(center + q - 1)) --q;
        out.q = q;
        return out;
    }
    for (std::int64_t q = -t; q <= t; ++q)
        if (!anchor_at(center + q)) {
            out.kind = XnqClass::Kind::star;
            out.q = q;
            return out;
        }
    return out;
}

namespace {

struct ScaleEval {
    ScaleChain chain;
    double final_value = 0.0;
};

void push_link(ScaleChain& sc, std::string id, double measured, double bound, bool geq,
               bool strict) {
    ChainLink l;
    l.id = std::move(id);
    l.measured = measured;
    l.bound = bound;
    l.geq = geq;
    l.margin = geq ? measured - bound : bound - measured;
    l.pass = strict ? l.margin > 0.0 : l.margin >= 0.0;
    sc.links.push_back(l);
}

ScaleEval eval_scale(const BlockSpec& spec, std::span<const std::int8_t> signal,
                     const AssembledSequence& y, const std::vector<double>& grid,
                     std::size_t index, double beta) {
    const auto [h, n] = spec.scales[index];
    const double tau = spec.tau;
    const double m_i = arith::harmonic_sum(n);
    const double floor_i = std::pow(double(n), spec.sigma);
    const cplx rot = unit(beta);

    ScaleEval ev;
    ev.chain.index = index;
    ev.chain.scale = spec.scales[index];
    ev.chain.m_i = m_i;

    // per-frequency prefix sums W(m) = sum_{k<=m} s(k) e(k alpha); the block
    // window at n is e(-n alpha)(W(n+h) - W(n))
    std::vector<double> best_abs(std::size_t(n) + 1, 0.0);
    std::vector<double> best_re(std::size_t(n) + 1, -kInf);
    std::vector<cplx> w(std::size_t(n + h) + 1);
    for (double alpha : grid) {
        w[0] = 0.0;
        double t = 0.0;
        KahanSumC acc;
        for (std::int64_t k = 1; k <= n + h; ++k) {
            t = wrap01(t + alpha);
            const int s = signal[std::size_t(k - 1)];
            if (s != 0) acc.add(double(s) * unit(t));
            w[std::size_t(k)] = acc.value();
        }
        double tb = 0.0;  // running -n alpha
        for (std::int64_t m = 1; m <= n; ++m) {
            tb = wrap01(tb - alpha);
            const cplx z = w[std::size_t(m + h)] - w[std::size_t(m)];
            const double va = std::abs(z) / double(h);
            if (va > best_abs[std::size_t(m)]) best_abs[std::size_t(m)] = va;
            const double vr = (rot * unit(tb) * z).real() / double(h);
            if (vr > best_re[std::size_t(m)]) best_re[std::size_t(m)] = vr;
        }
    }

    KahanSum getau, mass_s, mass_tail;
    for (std::int64_t m = 1; m <= n; ++m) {
        getau.add(best_abs[std::size_t(m)] / double(m));
        if (best_re[std::size_t(m)] > tau / 2.0) {
            mass_s.add(1.0 / double(m));
            if (double(m) > floor_i) mass_tail.add(1.0 / double(m));
        }
    }
    push_link(ev.chain, "getau", getau.value() / m_i, tau, true, true);
    push_link(ev.chain, "eq-31-1", mass_s.value(), tau * m_i / 2.0, true, true);
    push_link(ev.chain, "tail-mass", mass_tail.value(), tau * m_i / 4.0, true, true);

    const auto& blocks = spec.blocks[index];
    double min_gap = kInf, min_start = kInf, in_s = blocks.empty() ? 0.0 : 1.0;
    KahanSum mass_sp;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        if (k > 0) min_gap = std::min(min_gap, double(blocks[k].start - blocks[k - 1].start));
        min_start = std::min(min_start, double(blocks[k].start));
        mass_sp.add(1.0 / double(blocks[k].start));
        if (!(best_re[std::size_t(blocks[k].start)] > tau / 2.0)) in_s = 0.0;
    }
    push_link(ev.chain, "A-3-gaps", min_gap, 2.0 * double(h), true, false);
    push_link(ev.chain, "A-3-exclusion", min_start, floor_i, true, true);
    push_link(ev.chain, "A-3-mass", mass_sp.value(), tau * m_i / (8.0 * double(h)), true, true);
    push_link(ev.chain, "A-3-subset", in_s, 1.0, true, false);

    KahanSum a_sum;
    KahanSumC b_sum;
    for (const Block& b : blocks) {
        KahanSumC inner;
        for (std::int64_t k = 1; k <= h; ++k) {
            const cplx yv = symbol_value(y.at(b.start + k));
            const double s = double(signal[std::size_t(b.start + k - 1)]);
            inner.add(s * yv);
            b_sum.add(s * yv / double(b.start + k));
        }
        a_sum.add((rot * inner.value()).real() / double(b.start));
    }
    const double a_val = a_sum.value();
    const double b_val = (rot * b_sum.value()).real();
    push_link(ev.chain, "eq-17-1", a_val, tau * tau * m_i / 16.0, true, true);
    push_link(ev.chain, "reindex", std::fabs(a_val - b_val), tau * tau * m_i / 32.0, false, false);

    KahanSumC tail_sum, full_sum;
    for (std::int64_t m = 1; m <= n + h; ++m) {
        const int s = signal[std::size_t(m - 1)];
        if (s == 0) continue;
        const cplx term = double(s) * symbol_value(y.at(m)) / double(m);
        full_sum.add(term);
        if (double(m) > floor_i) tail_sum.add(term);
    }
    push_link(ev.chain, "tau", (rot * tail_sum.value()).real(), tau * tau * m_i / 32.0, true,
              false);
    ev.final_value = std::abs(full_sum.value()) / arith::harmonic_sum(n + h);
    push_link(ev.chain, "final", ev.final_value, tau * tau / 100.0, true, false);

    ev.chain.pass = true;
    for (const auto& l : ev.chain.links) ev.chain.pass = ev.chain.pass && l.pass;
    return ev;
}

}  // namespace

ChainReport verify_lower_bound_chain(const BlockSpec& spec, std::span<const std::int8_t> signal) {
    const auto chk = spec.check();
    if (!chk.pass) throw std::invalid_argument("invalid block spec: " + chk.violations.front());
    const std::int64_t need = spec.scales.back().n + spec.scales.back().h;
    if (std::ssize(signal) < need)
        throw std::invalid_argument(fmt("signal too short: %lld < %lld",
                                        (long long)std::ssize(signal), (long long)need));
    for (const std::int8_t v : signal)
        if (v < -1 || v > 1) throw std::invalid_argument("signal values must be in {-1,0,1}");

    const AssembledSequence y = assemble_sequence(spec);
    const std::vector<double> grid =
        spec.freqs.refine(0.01 / (std::numbers::pi * double(spec.scales.back().h + 1))).points;

    ChainReport best;
    bool have = false;
    for (double beta : {0.0, 0.25, 0.5, 0.75}) {
        ChainReport rep;
        rep.tau = spec.tau;
        rep.sigma = spec.sigma;
        rep.beta = beta;
        rep.ladder_feasible = chk.ladder_feasible;
        rep.ladder_note = chk.ladder_note;

        std::vector<ScaleEval> evals(spec.scales.size());
        parallel_for(0, spec.scales.size(), [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i)
                evals[i] = eval_scale(spec, signal, y, grid, i, beta);
        });
        rep.chain_pass = true;
        for (auto& ev : evals) {
            rep.chain_pass = rep.chain_pass && ev.chain.pass;
            if (!ev.chain.pass && rep.fail_link.empty())
                for (const auto& l : ev.chain.links)
                    if (!l.pass) {
                        rep.fail_link = l.id;
                        break;
                    }
            rep.per_scale.push_back(std::move(ev.chain));
        }
        rep.final_value = evals.back().final_value;
        if (!have || (rep.chain_pass && !best.chain_pass) ||
            (rep.chain_pass == best.chain_pass && rep.final_value > best.final_value)) {
            best = std::move(rep);
            have = true;
        }
    }
    return best;
}

BlockSpec make_synthetic_spec(double tau, const std::vector<Scale>& scales, double alpha0,
                              Variant variant) {
    if (!(tau > 0.0) || tau >= 1.0) throw std::invalid_argument("tau outside (0,1)");
    if (scales.empty()) throw std::invalid_argument("no scales");
    BlockSpec spec;
    spec.variant = variant;
    spec.tau = tau;
    spec.sigma = tau * tau / 200.0;
    spec.freqs = freq::FrequencySet::finite({wrap01(alpha0)});
    if (variant == Variant::nil) {
        spec.group = nil::NilGroup::heisenberg();
        spec.x0 = nil::identity(spec.group);
    }
    spec.scales = scales;

    // the ideal scale-separation ladder needs astronomically large N_1; at
    // reachable magnitudes the same effect comes from excluding each scale
    // below the previous scale's end (plus a 256H floor that keeps the
    // reindexing error small)
    std::int64_t prev_end = 0;
    for (const auto [h, n] : scales) {
        const std::int64_t excl = std::max(
            {prev_end, 256 * h, std::int64_t(std::ceil(std::pow(double(n), spec.sigma)))});
        std::vector<std::int64_t> candidates;
        for (std::int64_t m = excl + 1; m <= n; ++m) candidates.push_back(m);
        const double target = tau * arith::harmonic_sum(n) / (8.0 * double(h));
        const auto sel = select_gapped_subset(candidates, 2 * h, target);
        if (!sel.target_met)
            throw std::invalid_argument(
                fmt("scale (H=%lld, N=%lld) cannot reach the harmonic-mass target %.4f "
                    "(got %.4f); widen N",
                    (long long)h, (long long)n, target, sel.harmonic_mass));
        std::vector<Block> bl;
        for (std::int64_t m : sel.subset) {
            Block b;
            b.start = m;
            b.theta = wrap01(alpha0);
            b.phi = 0.0;
            if (variant == Variant::nil) b.gen = nil::Elt{wrap01(alpha0), 0.0, 0.0};
            bl.push_back(b);
        }
        spec.blocks.push_back(std::move(bl));
        prev_end = n + h;
    }
    return spec;
}

}  // namespace mulab::construct
