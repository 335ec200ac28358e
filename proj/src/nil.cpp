#include "mulab/nil.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mulab/util.hpp"

namespace mulab::nil {

namespace {

double u01(std::uint64_t& st) {
    return static_cast<double>(splitmix64(st) >> 11) * 0x1.0p-53;
}

void check_elt(const NilGroup& g, const Elt& x) {
    if (static_cast<int>(x.size()) != g.dim)
        throw std::invalid_argument("element dimension mismatch");
}

}  // namespace

NilGroup NilGroup::heisenberg() {
    NilGroup g;
    g.step = 2;
    g.dim = 3;
    g.filtration = {0, 2};
    g.brackets = {{1, 2, 3}};
    return g;
}

NilGroup NilGroup::abelian(int m) {
    if (m < 1) throw std::invalid_argument("abelian group needs dimension >= 1");
    NilGroup g;
    g.step = 1;
    g.dim = m;
    g.filtration = {0};
    return g;
}

void NilGroup::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "step " << step << "\n";
    out << "dim " << dim << "\n";
    out << "filtration";
    for (int f : filtration) out << ' ' << f;
    out << "\n";
    for (const auto& b : brackets) out << "bracket " << b.i << ' ' << b.j << ' ' << b.k << "\n";
}

NilGroup NilGroup::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    NilGroup g;
    g.filtration.clear();
    g.brackets.clear();
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key) || key.empty() || key[0] == '#') continue;
        if (key == "step") {
            ls >> g.step;
        } else if (key == "dim") {
            ls >> g.dim;
        } else if (key == "filtration") {
            int v;
            while (ls >> v) g.filtration.push_back(v);
        } else if (key == "bracket") {
            NilGroup::Bracket b;
            ls >> b.i >> b.j >> b.k;
            g.brackets.push_back(b);
        } else {
            throw std::runtime_error("unknown key in group file: " + key);
        }
    }
    if (g.step == 1) {
        if (g.dim < 1 || !g.brackets.empty() || g.filtration != std::vector<int>{0})
            throw std::runtime_error("bad abelian group file");
    } else if (g.step == 2) {
        if (g.dim != 3 || g.filtration != std::vector<int>{0, 2} || g.brackets.size() != 1 ||
            g.brackets[0].i != 1 || g.brackets[0].j != 2 || g.brackets[0].k != 3)
            throw std::runtime_error("step-2 group file must describe the Heisenberg group");
    } else {
        throw std::runtime_error("only steps 1 and 2 are supported");
    }
    return g;
}

Elt identity(const NilGroup& g) { return Elt(static_cast<std::size_t>(g.dim), 0.0); }

Elt mult(const NilGroup& g, const Elt& x, const Elt& y) {
    check_elt(g, x);
    check_elt(g, y);
    Elt r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
    if (g.is_heisenberg()) r[2] += x[0] * y[1];
    return r;
}

Elt inverse(const NilGroup& g, const Elt& x) {
    check_elt(g, x);
    Elt r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = -x[i];
    if (g.is_heisenberg()) r[2] = x[0] * x[1] - x[2];
    return r;
}

Elt power(const NilGroup& g, const Elt& x, double t) {
    check_elt(g, x);
    Elt r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = t * x[i];
    if (g.is_heisenberg()) r[2] = t * x[2] + x[0] * x[1] * t * (t - 1.0) * 0.5;
    return r;
}

double psi_norm(const NilGroup& g, const Elt& x) {
    check_elt(g, x);
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v));
    return m;
}

std::pair<Elt, Elt> reduce(const NilGroup& g, const Elt& x) {
    check_elt(g, x);
    Elt k(x.size()), gam(x.size());
    if (g.is_heisenberg()) {
        const double p = std::floor(x[0]);
        const double q = std::floor(x[1]);
        k[0] = x[0] - p;
        k[1] = x[1] - q;
        // want x = k * gamma: c = k3 + r + k1*q, so r = floor(c - k1*q)
        const double r = std::floor(x[2] - k[0] * q);
        k[2] = x[2] - r - k[0] * q;
        gam[0] = p;
        gam[1] = q;
        gam[2] = r;
    } else {
        for (std::size_t i = 0; i < x.size(); ++i) {
            gam[i] = std::floor(x[i]);
            k[i] = x[i] - gam[i];
        }
    }
    // floor can leave k exactly 1 for tiny negative inputs; renormalize
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i] >= 1.0) {
            k[i] -= 1.0;
            gam[i] += 1.0;
        }
    }
    return {k, gam};
}

bool in_subgroup(const NilGroup& g, const Elt& x, int j, double tol) {
    check_elt(g, x);
    if (j < 1) throw std::invalid_argument("subgroup index starts at 1");
    if (j > g.step) {
        for (double v : x)
            if (std::fabs(v) > tol) return false;
        return true;
    }
    const int lo = g.filtration[static_cast<std::size_t>(j - 1)];
    for (int i = 0; i < lo; ++i)
        if (std::fabs(x[static_cast<std::size_t>(i)]) > tol) return false;
    return true;
}

namespace {

double step_cost(const NilGroup& g, const Elt& d) {
    return std::min(psi_norm(g, d), psi_norm(g, inverse(g, d)));
}

}  // namespace

double group_metric(const NilGroup& g, const Elt& x, const Elt& y, int chain_depth) {
    if (chain_depth < 1) throw std::invalid_argument("chain_depth >= 1 required");
    Elt w = mult(g, x, inverse(g, y));
    double best = step_cost(g, w);
    if (!g.is_heisenberg()) return best;  // coordinate moves never beat the sup-norm here

    // equal one-parameter splits w = (w^{1/k})^k
    for (int k = 2; k <= std::min(chain_depth, 4); ++k) {
        Elt d = power(g, w, 1.0 / k);
        best = std::min(best, k * step_cost(g, d));
    }

    const double a = std::fabs(w[0]), b = std::fabs(w[1]);
    const double zx = w[2] - w[0] * w[1];  // central leftover, X-step first
    const double zy = w[2];                // central leftover, Y-step first
    auto steps_needed = [](double u, double v, double z, int zsteps) {
        return (u != 0.0) + (v != 0.0) + (z != 0.0 ? zsteps : 0);
    };
    // axis-aligned partial products
    if (steps_needed(a, b, zx, 1) <= chain_depth) best = std::min(best, a + b + std::fabs(zx));
    if (steps_needed(a, b, zy, 1) <= chain_depth) best = std::min(best, a + b + std::fabs(zy));
    // central leftover via a commutator square of side sqrt|z| (4 steps)
    if (steps_needed(a, b, zx, 4) <= chain_depth)
        best = std::min(best, a + b + 4.0 * std::sqrt(std::fabs(zx)));
    if (steps_needed(a, b, zy, 4) <= chain_depth)
        best = std::min(best, a + b + 4.0 * std::sqrt(std::fabs(zy)));
    return best;
}

QuotientDistance quotient_metric(const NilGroup& g, const Elt& x, const Elt& y,
                                 int lattice_radius, int chain_depth) {
    if (lattice_radius < 1) throw std::invalid_argument("lattice_radius >= 1 required");
    const Elt v = mult(g, inverse(g, y), x);
    const Elt center = reduce(g, v).second;

    QuotientDistance out;
    out.value = std::numeric_limits<double>::infinity();
    const int m = g.dim;
    std::vector<int> off(static_cast<std::size_t>(m), -lattice_radius);
    Elt gam(static_cast<std::size_t>(m));
    bool more = true;
    while (more) {
        for (int i = 0; i < m; ++i)
            gam[static_cast<std::size_t>(i)] =
                center[static_cast<std::size_t>(i)] + off[static_cast<std::size_t>(i)];
        const double d = group_metric(g, x, mult(g, y, gam), chain_depth);
        if (d < out.value) {
            out.value = d;
            out.gamma = gam;
            out.boundary_touch = false;
            for (int i = 0; i < m; ++i)
                if (std::abs(off[static_cast<std::size_t>(i)]) == lattice_radius)
                    out.boundary_touch = true;
        }
        int i = 0;
        for (; i < m; ++i) {
            if (++off[static_cast<std::size_t>(i)] <= lattice_radius) break;
            off[static_cast<std::size_t>(i)] = -lattice_radius;
        }
        more = i < m;
    }
    return out;
}

bool poly_valid(const NilGroup& g, const PolySeq& p, double tol) {
    if (p.coeff.empty()) return false;
    for (std::size_t j = 0; j < p.coeff.size(); ++j) {
        if (static_cast<int>(p.coeff[j].size()) != g.dim) return false;
        if (j >= 1 && !in_subgroup(g, p.coeff[j], static_cast<int>(j), tol)) return false;
    }
    return true;
}

namespace {

// C(n,j) for j <= 2, exact; rejects values not exactly representable as double
double binom_exact(std::int64_t n, int j) {
    __int128 v = 1;
    if (j == 1) {
        v = n;
    } else if (j == 2) {
        v = static_cast<__int128>(n) * (n - 1) / 2;
    } else if (j != 0) {
        throw std::invalid_argument("binomial order > 2 unsupported");
    }
    const __int128 lim = static_cast<__int128>(1) << 53;
    if (v > lim || v < -lim)
        throw std::overflow_error("binomial coefficient exceeds exact double range (2^53)");
    return static_cast<double>(static_cast<std::int64_t>(v));
}

}  // namespace

Elt poly_eval(const NilGroup& g, const PolySeq& p, std::int64_t n) {
    if (p.coeff.empty()) throw std::invalid_argument("empty polynomial sequence");
    Elt r = p.coeff[0];
    for (std::size_t j = 1; j < p.coeff.size(); ++j)
        r = mult(g, r, power(g, p.coeff[j], binom_exact(n, static_cast<int>(j))));
    return r;
}

Elt discrete_derivative(const NilGroup& g, const std::function<Elt(std::int64_t)>& f,
                        std::int64_t h, std::int64_t n) {
    return mult(g, f(n + h), inverse(g, f(n)));
}

PolySeq from_linear(const NilGroup& g, const Elt& gelt, const Elt& h) {
    PolySeq p;
    p.coeff.push_back(h);
    p.coeff.push_back(mult(g, mult(g, inverse(g, h), gelt), h));
    if (g.step >= 2) p.coeff.push_back(identity(g));
    return p;
}

std::pair<PolySeq, PolySeq> factorize(const NilGroup& g, const PolySeq& p) {
    if (g.step > 2) throw std::invalid_argument("factorization implemented for step <= 2 only");
    if (p.coeff.empty() || p.degree() > g.step)
        throw std::invalid_argument("polynomial degree must be <= group step");
    PolySeq kp, gp;
    if (!g.is_heisenberg()) {
        // everything commutes: split each coefficient independently
        for (const auto& c : p.coeff) {
            auto [k, gam] = reduce(g, c);
            kp.coeff.push_back(k);
            gp.coeff.push_back(gam);
        }
        return {kp, gp};
    }

    auto [k0, gam0] = reduce(g, p.coeff[0]);
    kp.coeff.push_back(k0);
    gp.coeff.push_back(gam0);
    if (p.degree() >= 1) {
        const Elt w = mult(g, mult(g, gam0, p.coeff[1]), inverse(g, gam0));
        auto [k1, dlt] = reduce(g, w);
        const Elt gam1 = mult(g, mult(g, inverse(g, gam0), dlt), gam0);
        kp.coeff.push_back(k1);
        gp.coeff.push_back(gam1);
        if (p.degree() == 2) {
            // remaining quadratic part is central: match values at n = 2
            const Elt g2 = poly_eval(g, p, 2);
            Elt v = mult(g, power(g, k1, -2.0), inverse(g, k0));
            v = mult(g, v, g2);
            v = mult(g, v, power(g, gam1, -2.0));
            v = mult(g, v, inverse(g, gam0));
            Elt k2 = identity(g), gam2 = identity(g);
            gam2[2] = std::floor(v[2]);
            k2[2] = v[2] - gam2[2];
            if (k2[2] >= 1.0) {
                k2[2] -= 1.0;
                gam2[2] += 1.0;
            }
            kp.coeff.push_back(k2);
            gp.coeff.push_back(gam2);
        }
    }
    return {kp, gp};
}

PolySeq sample_poly(const NilGroup& g, std::uint64_t& rng_state) {
    PolySeq p;
    for (int j = 0; j <= g.step; ++j) {
        Elt c(static_cast<std::size_t>(g.dim), 0.0);
        const int lo = (j == 0) ? 0 : g.filtration[static_cast<std::size_t>(j - 1)];
        for (int i = lo; i < g.dim; ++i) c[static_cast<std::size_t>(i)] = u01(rng_state);
        p.coeff.push_back(std::move(c));
    }
    return p;
}

namespace {

// worst-case change of the string sup-distance when one coefficient coordinate
// moves by 1, other coordinates held in the fundamental box, positions < n.
// Layout: (a0, b0, c0, a1, b1, c1, c2) for Heisenberg; (g0 dims..., g1 dims...)
// for the abelian case. All bounds are monotone majorants of the exact
// sensitivities, slightly padded so the log-log growth sits below the nominal
// degree-8 total.
std::vector<double> grid_amplitudes(const NilGroup& g, std::int64_t n) {
    const double nn = static_cast<double>(std::max<std::int64_t>(n, 1));
    std::vector<double> amp;
    if (g.is_heisenberg()) {
        amp = {2.0 * nn + 2.0,
               1.0,
               1.0,
               1.5 * nn * nn + 1.5 * nn,
               0.5 * nn * nn + 1.5 * nn,
               nn,
               0.5 * nn * nn + 0.5 * nn};
    } else {
        for (int i = 0; i < g.dim; ++i) amp.push_back(1.0);
        for (int i = 0; i < g.dim; ++i) amp.push_back(std::max(nn - 1.0, 1.0));
    }
    return amp;
}

}  // namespace

PolyCoverReport poly_covering_number(const NilGroup& g, std::int64_t n, double eps,
                                     std::size_t sample_count, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("string length >= 1 required");
    if (!(eps > 0.0)) throw std::invalid_argument("eps > 0 required");
    if (sample_count == 0) throw std::invalid_argument("sample_count >= 1 required");

    PolyCoverReport rep;
    rep.chain_depth = 6;
    rep.lattice_radius = 1;

    const std::size_t dim = static_cast<std::size_t>(g.dim);
    const std::size_t nn = static_cast<std::size_t>(n);
    // reduced representatives of p(k)Gamma, flattened sample-major
    std::vector<double> reps(sample_count * nn * dim);
    std::vector<std::uint64_t> states(sample_count);
    for (std::size_t s = 0; s < sample_count; ++s) states[s] = mix_seed(seed, s);
    parallel_for(0, sample_count, [&](std::size_t b, std::size_t e) {
        for (std::size_t s = b; s < e; ++s) {
            PolySeq p = sample_poly(g, states[s]);
            for (std::size_t k = 0; k < nn; ++k) {
                const Elt rk = reduce(g, poly_eval(g, p, static_cast<std::int64_t>(k))).first;
                std::copy(rk.begin(), rk.end(), reps.begin() + (s * nn + k) * dim);
            }
        }
    });

    Elt xi(dim), yj(dim);
    // two passes: the abelianized circle distances bound the chain cost from
    // below, so a cheap scan rejects almost every far pair before any chain
    // search runs
    auto covered_by = [&](std::size_t i, std::size_t c) {
        const double* pi = reps.data() + i * nn * dim;
        const double* pc = reps.data() + c * nn * dim;
        for (std::size_t k = 0; k < nn; ++k) {
            const double* a = pi + k * dim;
            const double* b = pc + k * dim;
            if (circ_dist_arc(a[0], b[0]) >= eps) return false;
            if (dim > 1 && circ_dist_arc(a[1], b[1]) >= eps) return false;
        }
        for (std::size_t k = 0; k < nn; ++k, pi += dim, pc += dim) {
            std::copy(pi, pi + dim, xi.begin());
            std::copy(pc, pc + dim, yj.begin());
            if (quotient_metric(g, xi, yj, 1, 6).value >= eps) return false;
        }
        return true;
    };

    // greedy net, batched scan; admission order identical to the sequential loop
    std::vector<std::size_t> net;
    const std::size_t batch = 256;
    std::vector<std::uint8_t> cov(sample_count, 0);
    for (std::size_t base = 0; base < sample_count; base += batch) {
        const std::size_t hi = std::min(sample_count, base + batch);
        const std::size_t pre = net.size();
        parallel_for(base, hi, [&](std::size_t b, std::size_t e) {
            Elt ax(dim), ay(dim);
            for (std::size_t i = b; i < e; ++i) {
                bool c = false;
                const double* pi = reps.data() + i * nn * dim;
                for (std::size_t t = 0; t < pre && !c; ++t) {
                    const double* pc = reps.data() + net[t] * nn * dim;
                    c = true;
                    for (std::size_t k = 0; k < nn; ++k) {
                        const double* a = pi + k * dim;
                        const double* bb = pc + k * dim;
                        if (circ_dist_arc(a[0], bb[0]) >= eps ||
                            (dim > 1 && circ_dist_arc(a[1], bb[1]) >= eps)) {
                            c = false;
                            break;
                        }
                    }
                    for (std::size_t k = 0; c && k < nn; ++k) {
                        const double* a = pi + k * dim;
                        const double* bb = pc + k * dim;
                        std::copy(a, a + dim, ax.begin());
                        std::copy(bb, bb + dim, ay.begin());
                        if (quotient_metric(g, ax, ay, 1, 6).value >= eps) c = false;
                    }
                }
                cov[i] = c ? 1 : 0;
            }
        });
        for (std::size_t i = base; i < hi; ++i) {
            if (cov[i]) continue;
            bool c = false;
            for (std::size_t t = pre; t < net.size() && !c; ++t) c = covered_by(i, net[t]);
            if (!c) net.push_back(i);
        }
    }

    rep.net.n = n;
    rep.net.epsilon = eps;
    rep.net.net = net;
    rep.net.cardinality = net.size();
    rep.net.direction = "upper_bound";
    rep.net.sample_size = sample_count;
    rep.net.tail_bound = 0.0;
    rep.net.packing_certified = true;
    rep.net.degenerate = net.size() == sample_count;
    rep.net.note = "string metric surrogate: chain depth 6, lattice radius 1";
    if (rep.net.degenerate)
        rep.net.note += "; net saturated at sample count (packing information only)";

    rep.amplitudes = grid_amplitudes(g, n);
    rep.snap_constant = 4.0;
    double cnt = 1.0, lg = 0.0;
    for (double a : rep.amplitudes) {
        const double per = std::ceil(rep.snap_constant * a / eps);
        cnt *= per;
        lg += std::log10(per);
    }
    rep.grid_count = cnt;
    rep.grid_log10 = lg;
    return rep;
}

void export_coefficients_csv(const std::string& path, const NilGroup& g,
                             const std::vector<PolySeq>& polys) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "poly,coeff";
    for (int i = 0; i < g.dim; ++i) out << ",t" << (i + 1);
    out << "\n";
    char buf[64];
    for (std::size_t p = 0; p < polys.size(); ++p) {
        for (std::size_t j = 0; j < polys[p].coeff.size(); ++j) {
            out << p << ',' << j;
            for (double v : polys[p].coeff[j]) {
                std::snprintf(buf, sizeof buf, "%.17g", v);
                out << ',' << buf;
            }
            out << "\n";
        }
    }
}

}  // namespace mulab::nil
