#include "mulab/complexity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <variant>

#include "mulab/util.hpp"

namespace mulab::complexity {

using systems::Alphabet;
using systems::SymbolWindow;

systems::DistanceResult mean_distance(const SystemSpec& sys, const Point& x,
                                      const Point& y, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("mean_distance: n must be >= 1");
    // one-step isometries: averaging orbit distances changes nothing
    if (sys.isometric()) return systems::distance(sys, x, y);
    KahanSum val, tail;
    Point px = x, py = y;
    for (std::int64_t i = 0; i < n; ++i) {
        if (i) {
            px = systems::apply(sys, px);
            py = systems::apply(sys, py);
        }
        auto d = systems::distance(sys, px, py);
        val.add(d.value);
        tail.add(d.tail_bound);
    }
    return {val.value() / double(n), tail.value() / double(n)};
}

MeanMetric::MeanMetric(const SystemSpec& sys, std::vector<Point> sample, std::int64_t n)
    : sys_(sys), sample_(std::move(sample)), n_(n) {
    if (n_ < 1) throw std::invalid_argument("MeanMetric: n must be >= 1");
    if (sample_.empty()) throw std::invalid_argument("MeanMetric: empty sample");

    const bool shift_like = std::holds_alternative<systems::Shift>(sys_.v) ||
                            std::holds_alternative<systems::OrbitClosure>(sys_.v);
    bool all_windows = true;
    for (const auto& p : sample_)
        all_windows = all_windows && std::holds_alternative<SymbolWindow>(p.v);

    if (sys_.isometric()) {
        mode_ = Mode::isometry;
        tail_ = 0.0;
        return;
    }
    if (shift_like && all_windows) {
        mode_ = Mode::window_kernel;
        if (const auto* sh = std::get_if<systems::Shift>(&sys_.v)) {
            alpha_ = sh->alphabet;
            circ_ = sh->symbol_metric;
        } else {
            const auto& oc = std::get<systems::OrbitClosure>(sys_.v);
            alpha_ = oc.base->alphabet;
            circ_ = oc.symbol_metric;
        }
        // symmetric truncation radius usable at every step for every window
        std::int64_t r_use = std::numeric_limits<std::int64_t>::max();
        for (const auto& p : sample_) {
            const auto& w = std::get<SymbolWindow>(p.v);
            if (w.alphabet != alpha_)
                throw std::invalid_argument("MeanMetric: window alphabet mismatch");
            r_use = std::min({r_use, w.radius_left(), w.radius_right() - (n_ - 1)});
        }
        if (r_use < 0)
            throw std::invalid_argument("MeanMetric: window support too short for n");
        const double diam = systems::symbol_diameter(alpha_, circ_);
        tail_ = std::ldexp(diam, -int(std::min<std::int64_t>(r_use, 2000)) - 1);
        // offsets beyond ~1100 carry weights that underflow double anyway
        const std::int64_t r = std::min<std::int64_t>(r_use, 1100);
        m_lo_ = -r;
        m_hi_ = n_ - 1 + r;
        // prefix of 2^-(|j|+2) over j in [-r, r]; kernel entry for position m is
        // (1/n) * sum_{j=max(-r,m-n+1)}^{min(r,m)} 2^-(|j|+2)
        std::vector<double> pre(std::size_t(2 * r + 2), 0.0);
        {
            KahanSum acc;
            for (std::int64_t j = -r; j <= r; ++j) {
                acc.add(std::ldexp(1.0, -int(std::llabs(j)) - 2));
                pre[std::size_t(j + r + 1)] = acc.value();
            }
        }
        kernel_.resize(std::size_t(m_hi_ - m_lo_ + 1));
        for (std::int64_t m = m_lo_; m <= m_hi_; ++m) {
            const std::int64_t jlo = std::max(-r, m - n_ + 1);
            const std::int64_t jhi = std::min(r, m);
            const double s = pre[std::size_t(jhi + r + 1)] - pre[std::size_t(jlo + r)];
            kernel_[std::size_t(m - m_lo_)] = s / double(n_);
        }
        win_origin_.resize(sample_.size());
        for (std::size_t i = 0; i < sample_.size(); ++i)
            win_origin_[i] = std::get<SymbolWindow>(sample_[i].v).origin;
        return;
    }

    mode_ = Mode::generic;
    orbits_.resize(sample_.size());
    parallel_for(0, sample_.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            auto& orb = orbits_[i];
            orb.reserve(std::size_t(n_));
            Point p = sample_[i];
            orb.push_back(p);
            for (std::int64_t k = 1; k < n_; ++k) {
                p = systems::apply(sys_, p);
                orb.push_back(p);
            }
        }
    });
    // worst metric truncation error occurs at the last step (self-distance
    // evaluates the tail bound without contributing a value)
    double worst = 0.0;
    for (const auto& orb : orbits_)
        worst = std::max(worst, systems::distance(sys_, orb.back(), orb.back()).tail_bound);
    tail_ = worst;
}

double MeanMetric::dist(std::size_t i, std::size_t j, double cutoff) const {
    if (i == j) return 0.0;
    switch (mode_) {
        case Mode::isometry:
            return systems::distance(sys_, sample_[i], sample_[j]).value;
        case Mode::window_kernel: {
            const auto& wx = std::get<SymbolWindow>(sample_[i].v);
            const auto& wy = std::get<SymbolWindow>(sample_[j].v);
            const std::int64_t ox = win_origin_[i], oy = win_origin_[j];
            double acc = 0.0;
            if (alpha_ == Alphabet::binary) {
                for (std::int64_t m = m_lo_; m <= m_hi_; ++m) {
                    if (wx.at_abs(ox + m).value != wy.at_abs(oy + m).value) {
                        acc += kernel_[std::size_t(m - m_lo_)];
                        if (acc >= cutoff) return cutoff;
                    }
                }
            } else {
                for (std::int64_t m = m_lo_; m <= m_hi_; ++m) {
                    const double d = systems::symbol_distance(alpha_, circ_, wx.at_abs(ox + m),
                                                              wy.at_abs(oy + m));
                    if (d > 0.0) {
                        acc += d * kernel_[std::size_t(m - m_lo_)];
                        if (acc >= cutoff) return cutoff;
                    }
                }
            }
            return acc;
        }
        case Mode::generic: {
            KahanSum acc;
            const auto& ox = orbits_[i];
            const auto& oy = orbits_[j];
            const double lim = cutoff * double(n_);
            for (std::int64_t k = 0; k < n_; ++k) {
                acc.add(systems::distance(sys_, ox[std::size_t(k)], oy[std::size_t(k)]).value);
                if (acc.value() >= lim) return cutoff;
            }
            return acc.value() / double(n_);
        }
    }
    return 0.0;
}

CoveringReport covering_number(const SystemSpec& sys, std::vector<Point> sample,
                               std::int64_t n, double epsilon) {
    if (epsilon <= 0.0) throw std::invalid_argument("covering_number: epsilon must be > 0");
    MeanMetric mm(sys, std::move(sample), n);
    CoveringReport rep;
    rep.n = n;
    rep.epsilon = epsilon;
    rep.sample_size = mm.size();
    rep.tail_bound = mm.tail_bound();
    rep.packing_certified = true;  // sequential centers are pairwise >= epsilon apart

    // Batched variant of the sequential scan: candidates are tested against the
    // pre-batch net in parallel, survivors are admitted serially (re-testing
    // only against centers admitted inside the batch).  Result is identical to
    // the plain one-by-one scan.
    const std::size_t M = mm.size();
    const std::size_t B = 256;
    std::vector<std::uint8_t> covered(B);
    for (std::size_t base = 0; base < M; base += B) {
        const std::size_t end = std::min(M, base + B);
        const std::size_t pre = rep.net.size();
        std::fill(covered.begin(), covered.end(), 0);
        parallel_for(base, end, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                for (std::size_t k = 0; k < pre; ++k) {
                    if (mm.dist(i, rep.net[k], epsilon) < epsilon) {
                        covered[i - base] = 1;
                        break;
                    }
                }
            }
        });
        for (std::size_t i = base; i < end; ++i) {
            if (covered[i - base]) continue;
            bool cov = false;
            for (std::size_t k = pre; k < rep.net.size(); ++k) {
                if (mm.dist(i, rep.net[k], epsilon) < epsilon) {
                    cov = true;
                    break;
                }
            }
            if (!cov) rep.net.push_back(i);
        }
    }
    rep.cardinality = rep.net.size();
    if (rep.cardinality == rep.sample_size && rep.sample_size > 1) {
        rep.degenerate = true;
        rep.note = "net saturated at sample size; counts under-resolve the covering number";
    }
    return rep;
}

CoveringReport measure_covering_number(const SystemSpec& sys, std::vector<Point> sample,
                                       const std::vector<double>& weights, std::int64_t n,
                                       double epsilon) {
    if (epsilon <= 0.0)
        throw std::invalid_argument("measure_covering_number: epsilon must be > 0");
    if (weights.size() != sample.size())
        throw std::invalid_argument("measure_covering_number: weights/sample size mismatch");
    KahanSum tw;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("measure_covering_number: negative weight");
        tw.add(w);
    }
    if (std::abs(tw.value() - 1.0) > 1e-9)
        throw std::invalid_argument("measure_covering_number: weights must sum to 1");

    CoveringReport rep;
    rep.n = n;
    rep.epsilon = epsilon;
    rep.sample_size = sample.size();
    rep.packing_certified = false;
    if (epsilon >= 1.0) {
        rep.net = {0};
        rep.cardinality = 1;
        rep.degenerate = true;
        rep.note = "epsilon >= 1 leaves no mass to cover; a single ball suffices";
        return rep;
    }
    if (sample.size() > 20000)
        throw std::invalid_argument("measure_covering_number: sample too large for ball table");

    MeanMetric mm(sys, std::move(sample), n);
    rep.tail_bound = mm.tail_bound();
    const std::size_t M = mm.size();
    const std::size_t words = (M + 63) / 64;
    std::vector<std::uint64_t> ball(M * words, 0);
    parallel_for(0, M, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            std::uint64_t* row = ball.data() + i * words;
            for (std::size_t j = 0; j < M; ++j)
                if (mm.dist(i, j, epsilon) < epsilon) row[j / 64] |= 1ull << (j % 64);
        }
    });

    std::vector<std::uint64_t> unc(words, ~0ull);
    if (M % 64) unc[words - 1] = (~0ull) >> (64 - M % 64);
    auto gain_of = [&](std::size_t i) {
        // ascending-j accumulation keeps recomputation bit-for-bit reproducible
        double g = 0.0;
        const std::uint64_t* row = ball.data() + i * words;
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t bits = row[w] & unc[w];
            while (bits) {
                const int b = std::countr_zero(bits);
                g += weights[w * 64 + std::size_t(b)];
                bits &= bits - 1;
            }
        }
        return g;
    };

    // exact lazy greedy; ties resolved toward the lowest index
    std::priority_queue<std::tuple<double, std::int64_t, std::size_t>> heap;
    for (std::size_t i = 0; i < M; ++i) heap.push({gain_of(i), -std::int64_t(i), i});
    KahanSum covered;
    const double target = 1.0 - epsilon;
    while (covered.value() <= target) {
        if (heap.empty()) {
            rep.degenerate = true;
            rep.note = "greedy cover stalled before reaching the target mass";
            break;
        }
        auto [key, negi, i] = heap.top();
        heap.pop();
        const double fresh = gain_of(i);
        if (fresh < key) {
            heap.push({fresh, negi, i});
            continue;
        }
        covered.add(fresh);
        rep.net.push_back(i);
        const std::uint64_t* row = ball.data() + i * words;
        for (std::size_t w = 0; w < words; ++w) unc[w] &= ~row[w];
    }
    rep.cardinality = rep.net.size();
    return rep;
}

// ---------------------------------------------------------------------------

std::vector<Point> sample_points(const SystemSpec& sys, const SamplerConfig& cfg) {
    if (cfg.count == 0) throw std::invalid_argument("sample_points: count must be > 0");
    std::vector<Point> out;
    out.reserve(cfg.count);
    std::uint64_t st = mix_seed(cfg.seed, 0x9d2c5680u);
    auto u01 = [&]() { return double(splitmix64(st) >> 11) * 0x1.0p-53; };

    if (std::holds_alternative<systems::Rotation>(sys.v)) {
        if (cfg.kind == SamplerConfig::Kind::orbit) {
            Point p = cfg.base.value_or(Point::circle(0.0));
            for (std::size_t i = 0; i < cfg.count; ++i) {
                out.push_back(p);
                p = systems::apply(sys, p);
            }
        } else {
            for (std::size_t i = 0; i < cfg.count; ++i) out.push_back(Point::circle(u01()));
        }
        return out;
    }
    if (const auto* sk = std::get_if<systems::Skew>(&sys.v)) {
        if (cfg.kind == SamplerConfig::Kind::orbit) {
            Point p = cfg.base.value_or(Point::skew(sk->base.sample(st), 0.0));
            for (std::size_t i = 0; i < cfg.count; ++i) {
                out.push_back(p);
                p = systems::apply(sys, p);
            }
            return out;
        }
        for (std::size_t i = 0; i < cfg.count; ++i) {
            if (sk->with_anchor && i == 0) {
                out.push_back(Point::skew_anchor());
                continue;
            }
            const double x = sk->base.sample(st);
            out.push_back(Point::skew(x, u01()));
        }
        return out;
    }
    if (const auto* sh = std::get_if<systems::Shift>(&sys.v)) {
        const std::int64_t R = cfg.window_radius;
        if (R < 0) throw std::invalid_argument("sample_points: window radius must be >= 0");
        for (std::size_t i = 0; i < cfg.count; ++i) {
            SymbolWindow w;
            w.alphabet = sh->alphabet;
            w.lo = -R;
            w.hi = R;
            w.origin = 0;
            w.symbols.reserve(std::size_t(2 * R + 1));
            for (std::int64_t k = -R; k <= R; ++k) {
                if (sh->alphabet == Alphabet::binary) {
                    w.symbols.push_back(systems::Symbol::bin(int(splitmix64(st) & 1)));
                } else {
                    const bool anc = (splitmix64(st) & 1) != 0;
                    w.symbols.push_back(anc ? systems::Symbol::anchor()
                                            : systems::Symbol::angle(u01()));
                }
            }
            out.push_back(Point::window(std::move(w)));
        }
        return out;
    }
    if (const auto* oc = std::get_if<systems::OrbitClosure>(&sys.v)) {
        const auto& seq = *oc->base;
        const std::int64_t R = cfg.window_radius;
        const std::int64_t olo = seq.lo + R, ohi = seq.hi() - R;
        if (olo > ohi)
            throw std::invalid_argument("sample_points: sequence too short for window radius");
        auto take = [&](std::int64_t origin) {
            SymbolWindow w;
            w.alphabet = seq.alphabet;
            w.lo = origin - R;
            w.hi = origin + R;
            w.origin = origin;
            const auto* s0 = seq.symbols.data() + (w.lo - seq.lo);
            w.symbols.assign(s0, s0 + (2 * R + 1));
            out.push_back(Point::window(std::move(w)));
        };
        if (cfg.kind == SamplerConfig::Kind::uniform) {
            const std::uint64_t span = std::uint64_t(ohi - olo + 1);
            for (std::size_t i = 0; i < cfg.count; ++i)
                take(olo + std::int64_t(splitmix64(st) % span));
        } else {
            if (std::int64_t(cfg.count) > ohi - olo + 1)
                throw std::invalid_argument("sample_points: orbit sample exceeds valid origins");
            for (std::size_t i = 0; i < cfg.count; ++i) take(olo + std::int64_t(i));
        }
        return out;
    }
    const auto& pr = std::get<systems::ProductSystem>(sys.v);
    std::vector<std::vector<Point>> parts;
    for (std::size_t p = 0; p < pr.parts.size(); ++p) {
        SamplerConfig sub = cfg;
        sub.seed = mix_seed(cfg.seed, 0xab0 + p);
        sub.base.reset();
        if (cfg.base) {
            const auto& bp = std::get<systems::ProductPoint>(cfg.base->v);
            sub.base = bp.parts.at(p);
        }
        parts.push_back(sample_points(pr.parts[p], sub));
    }
    for (std::size_t i = 0; i < cfg.count; ++i) {
        systems::ProductPoint pp;
        for (auto& ps : parts) pp.parts.push_back(ps[i]);
        out.push_back(Point{std::move(pp)});
    }
    return out;
}

void classify_profile(ComplexityProfile& p) {
    p.counts_monotone = std::is_sorted(p.counts.begin(), p.counts.end());
    p.classification = "unclassified";
    if (p.counts.size() < 2 || p.counts.size() != p.n_grid.size()) {
        p.degenerate_fit = true;
        return;
    }
    std::vector<double> lx, ly, nx;
    for (std::size_t i = 0; i < p.counts.size(); ++i) {
        if (p.counts[i] == 0) {
            p.degenerate_fit = true;
            return;
        }
        lx.push_back(std::log(double(p.n_grid[i])));
        nx.push_back(double(p.n_grid[i]));
        ly.push_back(std::log(double(p.counts[i])));
    }
    const auto ll = fit_line(lx, ly);
    const auto sl = fit_line(nx, ly);
    p.fitted_exponent = ll.slope;
    p.r2_loglog = ll.r2;
    p.r2_semilog = sl.r2;
    p.loglog_curvature = p.counts.size() >= 3 ? fit_quadratic_coeff(lx, ly) : 0.0;
    if (ll.slope < 0.1) {
        p.classification = "bounded";
    } else if (ll.slope < 0.9) {
        p.classification = "sublinear";
    } else if (p.loglog_curvature > 0.05 && p.r2_semilog > p.r2_loglog) {
        // upward-bending log-log curve that an exponential model fits better
        p.classification = "superpolynomial";
    } else if (p.r2_loglog >= 0.95) {
        p.classification = "polynomial";
    } else {
        p.degenerate_fit = true;
    }
}

ComplexityProfile complexity_profile(const SystemSpec& sys, const SamplerConfig& sampler,
                                     double epsilon,
                                     const std::vector<std::int64_t>& n_grid) {
    if (n_grid.empty() || !std::is_sorted(n_grid.begin(), n_grid.end()) || n_grid.front() < 1)
        throw std::invalid_argument("complexity_profile: n_grid must be ascending and >= 1");
    SamplerConfig cfg = sampler;
    const std::int64_t n_max = n_grid.back();
    if (std::holds_alternative<systems::Shift>(sys.v) ||
        std::holds_alternative<systems::OrbitClosure>(sys.v))
        cfg.window_radius = std::max(cfg.window_radius, n_max + 64);
    const auto sample = sample_points(sys, cfg);

    ComplexityProfile p;
    p.epsilon = epsilon;
    p.n_grid = n_grid;
    p.sample_size = sample.size();
    for (std::int64_t n : n_grid) {
        auto rep = covering_number(sys, sample, n, epsilon);
        p.counts.push_back(rep.cardinality);
        p.tail_bounds.push_back(rep.tail_bound);
        if (rep.degenerate) p.degenerate_fit = true;
    }
    classify_profile(p);
    return p;
}

// ---------------------------------------------------------------------------

namespace {

struct CertChunk {
    KahanSumC q_direct, q_coupling, q_window;
    KahanSum visit, harmonic;
};

}  // namespace

CertificateRecord disjointness_certificate(const SystemSpec& sys, const Point& x,
                                           const systems::Observable& f, double eps,
                                           const std::vector<std::int64_t>& n_list,
                                           const arith::MobiusTable& mob,
                                           const CertificateOptions& opt) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("disjointness_certificate: eps must be in (0,1)");
    if (n_list.empty() || !std::is_sorted(n_list.begin(), n_list.end()) || n_list.front() < 1)
        throw std::invalid_argument("disjointness_certificate: n_list must be ascending, >= 1");

    CertificateRecord rec;
    rec.eps = eps;
    const double lip = opt.modulus_lipschitz > 0.0
                           ? opt.modulus_lipschitz
                           : (f.lipschitz > 0.0 ? f.lipschitz : 1.0);
    rec.modulus_lipschitz = lip;
    const double e_over_l = eps / lip;
    rec.eps1 = 0.99 * std::min(eps * eps, e_over_l * e_over_l);
    const double eps1 = rec.eps1;
    const std::int64_t n_max = n_list.back();

    // Weighted orbit subsample: split [1, n_max] into geometric brackets of
    // equal log-length, one representative orbit point per bracket, weighted
    // by the bracket's share of the harmonic mass.
    std::vector<double> hpre(std::size_t(n_max) + 1, 0.0);
    {
        KahanSum h;
        for (std::int64_t k = 1; k <= n_max; ++k) {
            h.add(1.0 / double(k));
            hpre[std::size_t(k)] = h.value();
        }
    }
    const double h_total = hpre[std::size_t(n_max)];
    std::vector<std::int64_t> reps;
    std::vector<double> weights;
    {
        const std::size_t K = std::max<std::size_t>(1, opt.sample_count);
        std::int64_t prev_hi = 0;
        for (std::size_t k = 1; k <= K; ++k) {
            auto hi = std::int64_t(std::floor(std::pow(double(n_max), double(k) / double(K))));
            hi = std::clamp<std::int64_t>(hi, 1, n_max);
            if (k == K) hi = n_max;
            if (hi <= prev_hi) continue;
            const std::int64_t lo = prev_hi + 1;
            auto r = std::int64_t(std::llround(std::sqrt(double(lo) * double(hi))));
            r = std::clamp(r, lo, hi);
            reps.push_back(r);
            weights.push_back((hpre[std::size_t(hi)] - hpre[std::size_t(lo - 1)]) / h_total);
            prev_hi = hi;
        }
        KahanSum s;
        for (double w : weights) s.add(w);
        for (double& w : weights) w /= s.value();
    }
    std::vector<Point> sample;
    sample.reserve(reps.size());
    for (std::int64_t r : reps) sample.push_back(systems::apply_pow(sys, x, r));
    rec.sample_size = sample.size();

    // window length search: accept the first L whose weighted cover at radius
    // eps1 uses fewer than eps * L balls
    std::vector<std::int64_t> l_grid = opt.l_grid;
    if (l_grid.empty())
        for (std::int64_t L = 256; L <= 65536; L *= 2) l_grid.push_back(L);
    std::vector<std::size_t> net;
    for (std::int64_t L : l_grid) {
        auto cover = measure_covering_number(sys, sample, weights, L, eps1);
        rec.search_trail.push_back({L, cover.cardinality});
        if (double(cover.cardinality) < eps * double(L)) {
            rec.window_length = L;
            rec.cover_size = cover.cardinality;
            net = std::move(cover.net);
            break;
        }
    }
    if (rec.window_length == 0) {
        rec.note = "no window length in the grid admits a small enough cover";
        return rec;
    }
    rec.admissible = true;
    const std::int64_t L = rec.window_length;
    const std::size_t m = net.size();
    if (mob.lo() > 1 || mob.hi() < n_max + L)
        throw std::invalid_argument("disjointness_certificate: mu table must cover [1, N+L]");

    std::vector<Point> centers;
    centers.reserve(m);
    for (std::size_t j : net) centers.push_back(sample[j]);

    // Fast path: rotation with the exponential observable has closed-form
    // window sums via one prefix pass of mu(k) e(k alpha).
    const auto* rot = std::get_if<systems::Rotation>(&sys.v);
    const bool fast = rot != nullptr && f.name.rfind("exp", 0) == 0 &&
                      std::holds_alternative<systems::CirclePoint>(x.v);
    std::vector<cplx> wpre;       // fast path prefix sums
    std::vector<cplx> ftab;       // generic path center tables, row j is f along the orbit
    std::vector<double> cangle;   // fast path center angles
    if (fast) {
        wpre.resize(std::size_t(n_max + L) + 1, cplx{0.0, 0.0});
        double t = 0.0;
        cplx acc{0.0, 0.0};
        const auto mu = mob.values();
        for (std::int64_t k = 1; k <= n_max + L - 1; ++k) {
            t = wrap01(t + rot->alpha);
            const int v = mu[std::size_t(k - mob.lo())];
            if (v) acc += double(v) * unit(t);
            wpre[std::size_t(k)] = acc;
        }
        cangle.reserve(m);
        for (const auto& c : centers) cangle.push_back(std::get<systems::CirclePoint>(c.v).t);
    } else {
        if (m * std::size_t(L) > opt.max_center_table) {
            rec.admissible = false;
            rec.note = "center observable table exceeds the configured memory cap";
            return rec;
        }
        ftab.resize(m * std::size_t(L));
        parallel_for(0, m, [&](std::size_t b, std::size_t e) {
            for (std::size_t j = b; j < e; ++j) {
                auto row = systems::orbit_observable(sys, centers[j], f, 0, L - 1);
                std::copy(row.begin(), row.end(), ftab.begin() + std::int64_t(j) * L);
            }
        });
    }

    // deterministic chunked accumulation: fixed chunk boundaries independent of
    // the thread count, reduced in chunk order
    const std::int64_t chunk = 65536;
    KahanSumC q1, q2, q3;
    KahanSum visit, harm;
    const double x0 = fast ? std::get<systems::CirclePoint>(x.v).t : 0.0;
    const auto mu = mob.values();
    const std::int64_t mu_off = mob.lo();

    std::int64_t seg_lo = 1;
    for (std::int64_t n_stop : n_list) {
        std::vector<std::pair<std::int64_t, std::int64_t>> chunks;
        for (std::int64_t b = seg_lo; b <= n_stop; b += chunk)
            chunks.push_back({b, std::min(n_stop, b + chunk - 1)});
        std::vector<CertChunk> acc(chunks.size());
        parallel_for(0, chunks.size(), [&](std::size_t cb, std::size_t ce) {
            for (std::size_t ci = cb; ci < ce; ++ci) {
                auto [blo, bhi] = chunks[ci];
                CertChunk& out = acc[ci];
                for (std::int64_t n = blo; n <= bhi; ++n) {
                    const double w = 1.0 / double(n);
                    out.harmonic.add(w);
                    const int mun = mu[std::size_t(n - mu_off)];
                    Point pn;
                    double tn = 0.0;
                    if (fast) {
                        tn = wrap01(x0 + wrap01(std::fmod(double(n) * rot->alpha, 1.0)));
                    } else {
                        pn = systems::apply_pow(sys, x, n);
                    }
                    // first center whose mean-window distance is below eps1
                    std::size_t jn = m;
                    if (fast) {
                        for (std::size_t j = 0; j < m; ++j) {
                            if (systems::circle_distance(rot->metric, tn, cangle[j]) < eps1) {
                                jn = j;
                                break;
                            }
                        }
                    } else {
                        for (std::size_t j = 0; j < m; ++j) {
                            if (mean_distance(sys, pn, centers[j], L).value < eps1) {
                                jn = j;
                                break;
                            }
                        }
                    }
                    const cplx fx = fast ? unit(tn) : f.eval(pn);
                    const cplx direct = double(mun) * fx;
                    cplx a{0.0, 0.0};
                    if (jn < m) {
                        if (fast) {
                            const cplx s = wpre[std::size_t(n + L - 1)] - wpre[std::size_t(n - 1)];
                            a = unit(wrap01(cangle[jn] - wrap01(std::fmod(double(n) * rot->alpha, 1.0)))) * s /
                                double(L);
                        } else {
                            const cplx* row = ftab.data() + std::int64_t(jn) * L;
                            cplx s{0.0, 0.0};
                            for (std::int64_t l = 0; l < L; ++l) {
                                const int v = mu[std::size_t(n + l - mu_off)];
                                if (v) s += double(v) * row[l];
                            }
                            a = s / double(L);
                        }
                        out.visit.add(w);
                    }
                    out.q_direct.add(w * direct);
                    out.q_coupling.add(w * (direct - a));
                    out.q_window.add(w * a);
                }
            }
        });
        for (const auto& c : acc) {
            q1.add(c.q_direct.value());
            q2.add(c.q_coupling.value());
            q3.add(c.q_window.value());
            visit.add(c.visit.value());
            harm.add(c.harmonic.value());
        }
        CertificateRow row;
        row.n_max = n_stop;
        const double mn = harm.value();
        row.q_direct = std::abs(q1.value()) / mn;
        row.q_coupling = std::abs(q2.value()) / mn;
        row.q_window = std::abs(q3.value()) / mn;
        row.visit_mass = visit.value() / mn;
        row.pass_direct = row.q_direct < 7.0 * eps;
        row.pass_coupling = row.q_coupling < 5.0 * eps;
        row.pass_window = row.q_window < 2.0 * eps;
        rec.rows.push_back(row);
        seg_lo = n_stop + 1;
    }
    rec.all_bounds_hold = true;
    for (const auto& r : rec.rows)
        rec.all_bounds_hold =
            rec.all_bounds_hold && r.pass_direct && r.pass_coupling && r.pass_window;
    rec.note = fast ? "closed-form exponential window sums" : "tabulated center orbits";
    return rec;
}

}  // namespace mulab::complexity
