#include "mulab/coding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "mulab/arith.hpp"
#include "mulab/complexity.hpp"
#include "mulab/util.hpp"

namespace mulab::coding {

using systems::Point;

CodableSet CodableSet::arc(double start, double length) {
    if (!(length > 0.0) || length > 1.0)
        throw std::invalid_argument("arc length must lie in (0, 1]");
    CodableSet u;
    u.kind = Kind::arc;
    u.a = wrap01(start);
    u.len = length;
    return u;
}

CodableSet CodableSet::rectangle(std::vector<std::array<double, 2>> f) {
    if (f.empty()) throw std::invalid_argument("rectangle needs at least one factor");
    CodableSet u;
    u.kind = Kind::rectangle;
    for (auto& [s, l] : f) {
        if (!(l > 0.0) || l > 1.0) throw std::invalid_argument("factor length must lie in (0, 1]");
        s = wrap01(s);
    }
    u.factors = std::move(f);
    return u;
}

CodableSet CodableSet::cylinder(systems::Symbol s) {
    CodableSet u;
    u.kind = Kind::cylinder;
    u.symbol = s;
    return u;
}

std::string CodableSet::describe() const {
    char buf[96];
    switch (kind) {
        case Kind::arc:
            std::snprintf(buf, sizeof buf, "arc:%.17g:%.17g", a, len);
            return buf;
        case Kind::rectangle: {
            std::string s = "rect";
            for (const auto& f : factors) {
                std::snprintf(buf, sizeof buf, ":%.17g:%.17g", f[0], f[1]);
                s += buf;
            }
            return s;
        }
        case Kind::cylinder:
            std::snprintf(buf, sizeof buf, "cyl:%d:%.17g", int(symbol.is_anchor), symbol.value);
            return buf;
    }
    return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// signed arc distance to the boundary of [a, a+len) on the circle
double arc_signed(double a, double len, double t) {
    if (len >= 1.0) return kInf;  // whole circle, empty boundary
    const double u = wrap01(t - a);
    const double d = std::min(circ_dist_arc(t, a), circ_dist_arc(t, a + len));
    return u < len ? d : -d;
}

double signed_dist(const CodableSet& u, const Point& p) {
    switch (u.kind) {
        case CodableSet::Kind::arc: {
            if (const auto* c = std::get_if<systems::CirclePoint>(&p.v))
                return arc_signed(u.a, u.len, c->t);
            if (const auto* c = std::get_if<systems::AnchoredCirclePoint>(&p.v))
                return c->is_anchor ? -1.0 : arc_signed(u.a, u.len, c->t);
            if (const auto* s = std::get_if<systems::SkewPoint>(&p.v))
                return s->is_anchor ? -1.0 : arc_signed(u.a, u.len, s->z);
            throw std::invalid_argument("arc sets apply to circle-valued points");
        }
        case CodableSet::Kind::rectangle: {
            const auto* pp = std::get_if<systems::ProductPoint>(&p.v);
            if (!pp || pp->parts.size() != u.factors.size())
                throw std::invalid_argument("rectangle/product arity mismatch");
            // inside: nearest face; outside: sup-metric distance to the closure
            double inside = kInf, outside = 0.0;
            bool in = true;
            for (std::size_t i = 0; i < u.factors.size(); ++i) {
                const auto* c = std::get_if<systems::CirclePoint>(&pp->parts[i].v);
                if (!c) throw std::invalid_argument("rectangle factors must be circle points");
                const double s = arc_signed(u.factors[i][0], u.factors[i][1], c->t);
                if (s < 0.0) {
                    in = false;
                    outside = std::max(outside, -s);
                }
                inside = std::min(inside, s);
            }
            return in ? inside : -outside;
        }
        case CodableSet::Kind::cylinder: {
            const auto* w = std::get_if<systems::SymbolWindow>(&p.v);
            if (!w) throw std::invalid_argument("cylinder sets apply to symbol windows");
            const systems::Symbol& s = w->at_rel(0);
            const bool eq = s.is_anchor == u.symbol.is_anchor &&
                            (s.is_anchor || s.value == u.symbol.value);
            return eq ? kInf : -kInf;  // cylinders are clopen
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

bool contains(const CodableSet& u, const Point& p) { return signed_dist(u, p) > 0.0; }

double dist_to_boundary(const CodableSet& u, const Point& p) { return signed_dist(u, p); }

bool in_boundary_collar(const CodableSet& u, const Point& p, double eps0) {
    return std::fabs(signed_dist(u, p)) < eps0;
}

SmallnessReport smallness_test(const systems::SystemSpec& sys, const CodableSet& u, double eps0,
                               std::int64_t n, const std::vector<Point>& trial) {
    if (n < 1) throw std::invalid_argument("horizon >= 1 required");
    SmallnessReport rep;
    rep.eps0 = eps0;
    rep.n = n;
    const double m = arith::harmonic_sum(n);
    for (const Point& x0 : trial) {
        Point x = x0;
        std::int64_t hits = 0;
        KahanSum logw;
        for (std::int64_t k = 0; k < n; ++k) {
            if (in_boundary_collar(u, x, eps0)) {
                ++hits;
                if (k >= 1) logw.add(1.0 / double(k));
            }
            x = systems::apply(sys, x);
        }
        if (in_boundary_collar(u, x, eps0)) logw.add(1.0 / double(n));  // log variant runs to n
        rep.per_point.push_back(double(hits) / double(n));
        rep.max_frequency = std::max(rep.max_frequency, rep.per_point.back());
        rep.max_log_frequency = std::max(rep.max_log_frequency, logw.value() / m);
    }
    return rep;
}

systems::SequenceSpec code_point(const systems::SystemSpec& sys, const CodableSet& u,
                                 const Point& x, std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("empty coding range");
    systems::SequenceSpec seq;
    seq.alphabet = systems::Alphabet::binary;
    seq.lo = lo;
    seq.symbols.reserve(std::size_t(hi - lo + 1));
    Point cur = systems::apply_pow(sys, x, lo);
    for (std::int64_t k = lo; k <= hi; ++k) {
        seq.symbols.push_back(systems::Symbol::bin(contains(u, cur) ? 1 : 0));
        if (k < hi) cur = systems::apply(sys, cur);
    }
    return seq;
}

systems::Observable mollify_indicator(const systems::SystemSpec&, const CodableSet& u,
                                      double eps0) {
    if (!(eps0 > 0.0)) throw std::invalid_argument("eps0 > 0 required");
    systems::Observable f;
    f.name = "mollified_indicator";
    f.sup_norm = 1.0;
    f.lipschitz = 0.5 / eps0;
    f.eval = [u, eps0](const Point& p) -> cplx {
        const double s = signed_dist(u, p);
        if (s == kInf) return 1.0;
        if (s == -kInf) return 0.0;
        return std::clamp((s + eps0) / (2.0 * eps0), 0.0, 1.0);
    };
    return f;
}

namespace {

// shrink eps below delta^2 until the sqrt(eps)-collar is visited with
// frequency < delta along every trial orbit
struct CollarSearch {
    double eps = 0.0;
    double freq = 1.0;
    bool ok = false;
};

CollarSearch find_separation(const systems::SystemSpec& sys, const CodableSet& u, double delta,
                             std::int64_t n, const std::vector<Point>& trial) {
    CollarSearch cs;
    cs.eps = 0.99 * delta * delta;
    while (cs.eps > 1e-280) {
        double worst = 0.0;
        for (const Point& x0 : trial) {
            Point x = x0;
            std::int64_t hits = 0;
            for (std::int64_t k = 0; k < n; ++k) {
                if (in_boundary_collar(u, x, std::sqrt(cs.eps))) ++hits;
                x = systems::apply(sys, x);
            }
            worst = std::max(worst, double(hits) / double(n));
        }
        cs.freq = worst;
        if (worst < delta) {
            cs.ok = true;
            return cs;
        }
        cs.eps *= 0.25;
    }
    return cs;
}

// nearby partner with guaranteed mean distance < eps, or nullopt
std::optional<Point> perturb(const systems::SystemSpec& sys, const Point& x, double eps,
                             std::int64_t n, std::uint64_t& st) {
    double mag = 0.9 * eps;
    for (int tries = 0; tries < 48; ++tries, mag *= 0.25) {
        const double off = (2.0 * (double(splitmix64(st) >> 11) * 0x1.0p-53) - 1.0) * mag;
        Point y = x;
        if (auto* c = std::get_if<systems::CirclePoint>(&y.v)) {
            c->t = wrap01(c->t + off);
        } else if (auto* c2 = std::get_if<systems::AnchoredCirclePoint>(&y.v)) {
            if (c2->is_anchor) return std::nullopt;
            c2->t = wrap01(c2->t + off);
        } else if (auto* s = std::get_if<systems::SkewPoint>(&y.v)) {
            if (s->is_anchor) return std::nullopt;
            s->z = wrap01(s->z + off);
        } else {
            return std::nullopt;
        }
        const auto d = complexity::mean_distance(sys, x, y, n);
        if (d.value + d.tail_bound < eps) return y;
    }
    return std::nullopt;
}

}  // namespace

StabilityReport verify_coding_stability(const systems::SystemSpec& sys, const CodableSet& u,
                                        double delta, std::int64_t n, std::size_t pair_count,
                                        std::uint64_t seed) {
    if (!(delta > 0.0) || delta >= 1.0) throw std::invalid_argument("delta in (0,1) required");
    StabilityReport rep;
    rep.delta = delta;
    rep.n = n;
    rep.pairs_requested = pair_count;
    rep.vacuous = 2.0 * delta >= 1.0;

    complexity::SamplerConfig sc;
    sc.kind = complexity::SamplerConfig::Kind::uniform;
    sc.count = std::max<std::size_t>(16, std::min<std::size_t>(pair_count, 64));
    sc.seed = mix_seed(seed, 101);
    const std::vector<Point> trial = complexity::sample_points(sys, sc);

    const CollarSearch cs = find_separation(sys, u, delta, n, trial);
    rep.epsilon = cs.eps;
    rep.collar_frequency = cs.freq;
    if (!cs.ok) {
        rep.conclusive = false;
        return rep;
    }

    std::uint64_t st = mix_seed(seed, 202);
    for (std::size_t i = 0; i < pair_count; ++i) {
        const Point& x = trial[i % trial.size()];
        auto y = perturb(sys, x, cs.eps, n, st);
        if (!y) continue;
        ++rep.pairs_found;
        const auto cx = code_point(sys, u, x, 0, n - 1);
        const auto cy = code_point(sys, u, *y, 0, n - 1);
        std::int64_t diff = 0;
        for (std::size_t k = 0; k < cx.symbols.size(); ++k)
            if (cx.symbols[k].value != cy.symbols[k].value) ++diff;
        rep.max_density = std::max(rep.max_density, double(diff) / double(n));
    }
    rep.conclusive = rep.pairs_found == pair_count;
    rep.pass = rep.vacuous || (rep.conclusive && rep.max_density <= 2.0 * delta);
    return rep;
}

TransferReport complexity_transfer_check(const systems::SystemSpec& sys, const CodableSet& u,
                                         double delta, std::int64_t n, std::size_t sample_count,
                                         std::uint64_t seed) {
    if (!(delta > 0.0) || delta >= 1.0) throw std::invalid_argument("delta in (0,1) required");
    TransferReport rep;
    rep.delta = delta;
    rep.n = n;
    rep.sample_count = sample_count;
    rep.window = int(std::ceil(std::log2(4.0 / delta)));
    rep.delta_prime = delta / (16.0 * rep.window);
    const double lhs = 4.0 * rep.delta_prime * rep.window + std::ldexp(2.0, -rep.window);
    rep.margin = delta - lhs;
    if (rep.margin <= 0.0) throw std::logic_error("window recipe failed to satisfy its bound");

    complexity::SamplerConfig sc;
    sc.kind = complexity::SamplerConfig::Kind::uniform;
    sc.count = sample_count;
    sc.seed = mix_seed(seed, 303);
    std::vector<Point> samples = complexity::sample_points(sys, sc);

    const CollarSearch cs =
        find_separation(sys, u, rep.delta_prime, n,
                        {samples.begin(), samples.begin() + std::min<std::size_t>(16, samples.size())});
    if (!cs.ok) throw std::runtime_error("no separation scale found below delta'^2");
    rep.epsilon = cs.eps;

    rep.original_cardinality =
        complexity::covering_number(sys, samples, n, cs.eps).cardinality;

    const std::int64_t r = 64;  // window margin: kernel tail 2^-(r+1) is negligible
    std::vector<Point> coded;
    coded.reserve(samples.size());
    for (const Point& s : samples)
        coded.push_back(Point::window(code_point(sys, u, s, -r, n - 1 + r).window(0)));
    const auto shift_sys = systems::SystemSpec::shift(systems::Alphabet::binary);
    rep.coded_cardinality =
        complexity::covering_number(shift_sys, coded, n, delta).cardinality;
    rep.holds = rep.coded_cardinality <= rep.original_cardinality;
    return rep;
}

}  // namespace mulab::coding
