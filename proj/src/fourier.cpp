#include "mulab/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "mulab/util.hpp"

namespace mulab::fourier {

namespace {

double lipschitz_bound(std::int64_t h) { return std::numbers::pi * double(h + 1); }

double default_eta(std::int64_t h) { return 0.01 / lipschitz_bound(h); }

}  // namespace

LocalSupResult local_fourier_sup(const arith::MobiusTable& mob, std::int64_t n, std::int64_t h,
                                 const freq::FrequencySet& c, double refinement) {
    if (h < 1) throw std::invalid_argument("window length >= 1 required");
    if (n + 1 < mob.lo() || n + h > mob.hi())
        throw std::out_of_range("mobius table does not cover the window");
    LocalSupResult r;
    r.n = n;
    r.h = h;
    r.eta = refinement > 0.0 ? refinement : default_eta(h);

    const auto ref = c.refine(r.eta);
    if (ref.points.empty()) throw std::invalid_argument("empty frequency set");
    r.max_gap = ref.max_gap;
    r.grid_size = ref.points.size();

    for (double alpha : ref.points) {
        KahanSumC s;
        double t = 0.0;
        for (std::int64_t k = 1; k <= h; ++k) {
            t = wrap01(t + alpha);
            const int mu = mob.value(n + k);
            if (mu != 0) s.add(double(mu) * unit(t));
        }
        const double v = std::abs(s.value()) / double(h);
        if (v > r.grid_lower) {
            r.grid_lower = v;
            r.argmax = alpha;
        }
    }
    r.certified_upper = r.grid_lower + lipschitz_bound(h) * r.max_gap;
    return r;
}

RestrictedAverageResult restricted_uniformity_average(const arith::MobiusTable& mob,
                                                      std::int64_t n_max, std::int64_t h,
                                                      const freq::FrequencySet& c,
                                                      arith::AverageKind kind,
                                                      double refinement) {
    if (n_max < 1) throw std::invalid_argument("n_max >= 1 required");
    if (h < 1) throw std::invalid_argument("window length >= 1 required");
    if (mob.lo() > 1 || mob.hi() < n_max + h)
        throw std::out_of_range("mobius table must cover [1, n_max + h]");

    RestrictedAverageResult r;
    r.n_max = n_max;
    r.h = h;
    r.kind = kind;
    r.eta = refinement > 0.0 ? refinement : default_eta(h);
    r.set_descriptor = c.describe();

    const auto ref = c.refine(r.eta);
    if (ref.points.empty()) throw std::invalid_argument("empty frequency set");
    r.max_gap = ref.max_gap;
    r.grid_size = ref.points.size();

    // per-alpha prefix sums W(m) = sum_{k<=m} mu(k) e(k alpha); the window sum
    // at n is W(n+h) - W(n) up to a phase, so one pass serves every n.
    std::vector<double> best(std::size_t(n_max) + 1, 0.0);
    std::vector<cplx> w(std::size_t(n_max + h) + 1);
    for (double alpha : ref.points) {
        w[0] = 0.0;
        double t = 0.0;
        KahanSumC acc;
        for (std::int64_t k = 1; k <= n_max + h; ++k) {
            t = wrap01(t + alpha);
            const int mu = mob.value(k);
            if (mu != 0) acc.add(double(mu) * unit(t));
            w[std::size_t(k)] = acc.value();
        }
        parallel_for(1, std::size_t(n_max) + 1, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                const double v = std::abs(w[i + std::size_t(h)] - w[i]);
                if (v > best[i]) best[i] = v;
            }
        });
    }

    KahanSum ces, log;
    for (std::int64_t i = 1; i <= n_max; ++i) {
        const double v = best[std::size_t(i)] / double(h);
        ces.add(v);
        log.add(v / double(i));
    }
    const double slack = lipschitz_bound(h) * r.max_gap;
    r.cesaro_lower = ces.value() / double(n_max);
    r.log_lower = log.value() / arith::harmonic_sum(n_max);
    r.cesaro_upper = r.cesaro_lower + slack;
    r.log_upper = r.log_lower + slack;
    return r;
}

std::size_t interval_cover_count(const std::vector<freq::Interval>& parts, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps > 0 required");
    // left-to-right greedy is optimal in one dimension; the slop absorbs
    // accumulated rounding in interval endpoints so exact identities like
    // "level-k block = one eps-interval" survive floating point
    const double slop = 1e-12;
    std::size_t count = 0;
    double cover_end = -std::numeric_limits<double>::infinity();
    for (const auto& p : parts) {
        if (p.b <= cover_end + slop) continue;
        const double start = std::max(p.a, cover_end);
        const double kd = std::ceil((p.b - start - slop) / eps);
        const std::size_t k = kd < 1.0 ? 1 : std::size_t(kd);
        count += k;
        cover_end = start + double(k) * eps;
    }
    return count;
}

namespace {

BoxDimensionReport fit_counts(const std::vector<freq::Interval>& parts,
                              const std::vector<double>& eps_grid) {
    if (eps_grid.size() < 4) throw std::invalid_argument("need at least 4 scales");
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        if (!(eps_grid[i] > 0.0) || eps_grid[i] >= 1.0)
            throw std::invalid_argument("scales must lie in (0,1)");
        if (i > 0 && !(eps_grid[i] < 0.91 * eps_grid[i - 1]))
            throw std::invalid_argument("scales must decrease geometrically");
    }
    BoxDimensionReport rep;
    rep.scales = eps_grid;
    std::vector<double> xs, ys;
    for (double eps : eps_grid) {
        const std::size_t n = interval_cover_count(parts, eps);
        rep.counts.push_back(n);
        xs.push_back(std::log(1.0 / eps));
        ys.push_back(std::log(double(n)));
    }
    rep.degenerate =
        std::all_of(rep.counts.begin(), rep.counts.end(),
                    [&](std::size_t n) { return n == rep.counts.front(); });
    if (rep.degenerate) {
        rep.slope = 0.0;
        rep.r2 = 1.0;
        return rep;
    }
    const LinearFit f = fit_line(xs, ys);
    rep.slope = f.slope;
    rep.r2 = f.r2;
    return rep;
}

}  // namespace

BoxDimensionReport box_dimension_estimate(const freq::FrequencySet& s,
                                          const std::vector<double>& eps_grid) {
    return fit_counts(s.intervals(), eps_grid);
}

BoxDimensionReport box_dimension_estimate(const std::vector<double>& points,
                                          const std::vector<double>& eps_grid) {
    if (points.empty()) throw std::invalid_argument("empty point set");
    std::vector<double> sorted = points;
    std::sort(sorted.begin(), sorted.end());
    std::vector<freq::Interval> parts;
    for (double p : sorted) {
        if (!parts.empty() && p == parts.back().b) continue;
        parts.push_back({p, p});
    }
    return fit_counts(parts, eps_grid);
}

std::vector<std::size_t> vitali_5r_subfamily(const std::vector<Ball>& balls) {
    for (const auto& b : balls)
        if (!(b.radius >= 0.0)) throw std::invalid_argument("negative radius");
    std::vector<std::size_t> order(balls.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return balls[a].radius > balls[b].radius;
    });

    const auto meets = [&](std::size_t i, std::size_t j) {
        return std::fabs(balls[i].center - balls[j].center) <= balls[i].radius + balls[j].radius;
    };

    std::vector<std::size_t> sel;
    for (std::size_t i : order) {
        bool free = true;
        for (std::size_t j : sel)
            if (meets(i, j)) {
                free = false;
                break;
            }
        if (free) sel.push_back(i);
    }

    // postconditions: selection pairwise disjoint; every ball meets a selected
    // ball of >= its radius (hence sits inside that ball's 5r inflation)
    for (std::size_t a = 0; a < sel.size(); ++a)
        for (std::size_t b = a + 1; b < sel.size(); ++b)
            if (meets(sel[a], sel[b])) throw std::logic_error("selection not disjoint");
    for (std::size_t i = 0; i < balls.size(); ++i) {
        bool dominated = false;
        for (std::size_t j : sel) {
            if (balls[j].radius < balls[i].radius || !meets(i, j)) continue;
            const double lo = balls[j].center - 5.0 * balls[j].radius;
            const double hi = balls[j].center + 5.0 * balls[j].radius;
            if (balls[i].center - balls[i].radius >= lo && balls[i].center + balls[i].radius <= hi) {
                dominated = true;
                break;
            }
        }
        if (!dominated) throw std::logic_error("ball escapes every 5r inflation");
    }

    std::sort(sel.begin(), sel.end());
    return sel;
}

}  // namespace mulab::fourier
