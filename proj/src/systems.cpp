#include "mulab/systems.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mulab::systems {

double circle_distance(CircleMetric m, double s, double t) {
    return m == CircleMetric::arc ? circ_dist_arc(s, t) : circ_dist_chord(s, t);
}

double symbol_distance(Alphabet a, CircleMetric m, const Symbol& x, const Symbol& y) {
    if (a == Alphabet::binary) return std::abs(x.value - y.value);
    if (x.is_anchor != y.is_anchor) return 1.0;  // anchor sits at distance 1 from the circle
    if (x.is_anchor) return 0.0;
    return circle_distance(m, x.value, y.value);
}

double symbol_diameter(Alphabet a, CircleMetric m) {
    if (a == Alphabet::binary) return 1.0;
    return std::max(1.0, m == CircleMetric::arc ? 0.5 : 2.0);
}

const Symbol& SymbolWindow::at_abs(std::int64_t m) const {
    if (m < lo || m > hi)
        throw std::out_of_range("SymbolWindow: index " + std::to_string(m) +
                                " outside stored range [" + std::to_string(lo) + "," +
                                std::to_string(hi) + "]");
    return symbols[std::size_t(m - lo)];
}

// --------------------------------------------------------------------------
// sequence container IO

namespace {
constexpr char kMagic[4] = {'M', 'S', 'E', 'Q'};

void write_i64(std::ofstream& out, std::int64_t v) {
    out.write(reinterpret_cast<const char*>(&v), 8);
}
std::int64_t read_i64(std::ifstream& in) {
    std::int64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 8);
    return v;
}
}  // namespace

void SequenceSpec::save(const std::filesystem::path& p) const {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for write: " + p.string());
    out.write(kMagic, 4);
    std::uint8_t tag = std::uint8_t(alphabet);
    out.write(reinterpret_cast<const char*>(&tag), 1);
    write_i64(out, lo);
    write_i64(out, hi());
    for (const auto& s : symbols) {
        if (alphabet == Alphabet::binary) {
            std::uint8_t b = s.value != 0.0 ? 1 : 0;
            out.write(reinterpret_cast<const char*>(&b), 1);
        } else {
            std::uint8_t b = s.is_anchor ? 0 : 1;
            out.write(reinterpret_cast<const char*>(&b), 1);
            double t = s.is_anchor ? 0.0 : s.value;
            out.write(reinterpret_cast<const char*>(&t), 8);
        }
    }
    if (!out) throw std::runtime_error("short write: " + p.string());
}

SequenceSpec SequenceSpec::load(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for read: " + p.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("not a sequence container: " + p.string());
    std::uint8_t tag = 0;
    in.read(reinterpret_cast<char*>(&tag), 1);
    if (tag > 1) throw std::runtime_error("unknown alphabet tag in " + p.string());
    SequenceSpec s;
    s.alphabet = Alphabet(tag);
    s.lo = read_i64(in);
    std::int64_t hi = read_i64(in);
    if (!in || hi < s.lo) throw std::runtime_error("corrupt sequence header: " + p.string());
    const std::size_t n = std::size_t(hi - s.lo + 1);
    s.symbols.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint8_t b = 0;
        in.read(reinterpret_cast<char*>(&b), 1);
        if (s.alphabet == Alphabet::binary) {
            s.symbols.push_back(Symbol::bin(b));
        } else {
            double t = 0.0;
            in.read(reinterpret_cast<char*>(&t), 8);
            s.symbols.push_back(b == 0 ? Symbol::anchor() : Symbol::angle(t));
        }
    }
    if (!in) throw std::runtime_error("truncated sequence payload: " + p.string());
    return s;
}

SymbolWindow SequenceSpec::window(std::int64_t origin) const {
    if (origin < lo || origin > hi())
        throw std::invalid_argument("SequenceSpec::window: origin outside stored range");
    SymbolWindow w;
    w.alphabet = alphabet;
    w.lo = lo;
    w.hi = hi();
    w.origin = origin;
    w.symbols = symbols;
    return w;
}

// --------------------------------------------------------------------------

bool SystemSpec::isometric() const {
    return std::visit(
        [](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Rotation>) {
                return true;
            } else if constexpr (std::is_same_v<T, ProductSystem>) {
                for (const auto& p : s.parts)
                    if (!p.isometric()) return false;
                return true;
            } else {
                return false;
            }
        },
        v);
}

std::string SystemSpec::describe() const {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            std::ostringstream os;
            if constexpr (std::is_same_v<T, Rotation>) {
                os << "rotation(alpha=" << s.alpha
                   << ",metric=" << (s.metric == CircleMetric::arc ? "arc" : "chord") << ")";
            } else if constexpr (std::is_same_v<T, Skew>) {
                os << "skew(base=" << s.base.describe()
                   << (s.with_anchor ? ",anchor" : "") << ")";
            } else if constexpr (std::is_same_v<T, Shift>) {
                os << "shift("
                   << (s.alphabet == Alphabet::binary ? "binary" : "torus_anchor") << ")";
            } else if constexpr (std::is_same_v<T, OrbitClosure>) {
                os << "orbit_closure(len=" << s.base->symbols.size() << ")";
            } else {
                os << "product(";
                for (std::size_t i = 0; i < s.parts.size(); ++i) {
                    if (i) os << ",";
                    os << s.parts[i].describe();
                }
                os << ")";
            }
            return os.str();
        },
        v);
}

namespace {

[[noreturn]] void bad_point(const char* sys) {
    throw std::invalid_argument(std::string("point type does not match system ") + sys);
}

SymbolWindow shifted(const SymbolWindow& w, std::int64_t n) {
    if (w.origin + n > w.hi || w.origin + n < w.lo)
        throw std::invalid_argument(
            "symbol window exhausted: shifting by " + std::to_string(n) +
            " needs stored index " + std::to_string(w.origin + n) + ", have [" +
            std::to_string(w.lo) + "," + std::to_string(w.hi) + "]");
    SymbolWindow r = w;
    r.origin += n;
    return r;
}

}  // namespace

Point apply_pow(const SystemSpec& sys, const Point& x, std::int64_t n) {
    return std::visit(
        [&](const auto& s) -> Point {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Rotation>) {
                const auto* c = std::get_if<CirclePoint>(&x.v);
                if (!c) bad_point("rotation");
                return Point::circle(wrap01(c->t + double(n) * s.alpha));
            } else if constexpr (std::is_same_v<T, Skew>) {
                const auto* p = std::get_if<SkewPoint>(&x.v);
                if (!p) bad_point("skew");
                if (p->is_anchor) return x;
                // fiber advances by n*x (plus the triangular term absent here:
                // z -> z + x each step, base fixed)
                return Point::skew(p->x, wrap01(p->z + double(n) * p->x));
            } else if constexpr (std::is_same_v<T, Shift>) {
                const auto* w = std::get_if<SymbolWindow>(&x.v);
                if (!w) bad_point("shift");
                if (w->alphabet != s.alphabet)
                    throw std::invalid_argument("window alphabet does not match shift");
                return Point::window(shifted(*w, n));
            } else if constexpr (std::is_same_v<T, OrbitClosure>) {
                const auto* w = std::get_if<SymbolWindow>(&x.v);
                if (!w) bad_point("orbit_closure");
                return Point::window(shifted(*w, n));
            } else {
                const auto* pp = std::get_if<ProductPoint>(&x.v);
                if (!pp || pp->parts.size() != s.parts.size()) bad_point("product");
                ProductPoint out;
                out.parts.reserve(pp->parts.size());
                for (std::size_t i = 0; i < s.parts.size(); ++i)
                    out.parts.push_back(apply_pow(s.parts[i], pp->parts[i], n));
                return Point{std::move(out)};
            }
        },
        sys.v);
}

Point apply(const SystemSpec& sys, const Point& x) { return apply_pow(sys, x, 1); }

namespace {

DistanceResult window_distance(const SymbolWindow& a, const SymbolWindow& b,
                               CircleMetric m) {
    if (a.alphabet != b.alphabet)
        throw std::invalid_argument("distance: windows over different alphabets");
    const std::int64_t r = std::min(a.radius(), b.radius());
    if (r < 0) throw std::invalid_argument("distance: window has empty usable radius");
    // sum_{|k|<=r} d(a(k), b(k)) / 2^{|k|+2}, tail bounded by diam * 2^{-(r+1)}
    KahanSum acc;
    for (std::int64_t k = -r; k <= r; ++k) {
        double w = std::ldexp(1.0, -int(std::min<std::int64_t>(std::abs(k) + 2, 1060)));
        acc.add(w * symbol_distance(a.alphabet, m, a.at_rel(k), b.at_rel(k)));
    }
    DistanceResult res;
    res.value = acc.value();
    double diam = symbol_diameter(a.alphabet, m);
    res.tail_bound = (r >= 1020) ? 0.0 : diam * std::ldexp(1.0, -int(r + 1));
    return res;
}

}  // namespace

DistanceResult distance(const SystemSpec& sys, const Point& x, const Point& y) {
    return std::visit(
        [&](const auto& s) -> DistanceResult {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Rotation>) {
                const auto* a = std::get_if<CirclePoint>(&x.v);
                const auto* b = std::get_if<CirclePoint>(&y.v);
                if (!a || !b) bad_point("rotation");
                return {circle_distance(s.metric, a->t, b->t), 0.0};
            } else if constexpr (std::is_same_v<T, Skew>) {
                const auto* a = std::get_if<SkewPoint>(&x.v);
                const auto* b = std::get_if<SkewPoint>(&y.v);
                if (!a || !b) bad_point("skew");
                if (a->is_anchor != b->is_anchor) return {1.0, 0.0};
                if (a->is_anchor) return {0.0, 0.0};
                // max metric on base x fiber, fiber embedded in the plane
                double dbase = std::abs(a->x - b->x);
                double dfib = circ_dist_chord(a->z, b->z);
                return {std::max(dbase, dfib), 0.0};
            } else if constexpr (std::is_same_v<T, Shift>) {
                const auto* a = std::get_if<SymbolWindow>(&x.v);
                const auto* b = std::get_if<SymbolWindow>(&y.v);
                if (!a || !b) bad_point("shift");
                return window_distance(*a, *b, s.symbol_metric);
            } else if constexpr (std::is_same_v<T, OrbitClosure>) {
                const auto* a = std::get_if<SymbolWindow>(&x.v);
                const auto* b = std::get_if<SymbolWindow>(&y.v);
                if (!a || !b) bad_point("orbit_closure");
                return window_distance(*a, *b, s.symbol_metric);
            } else {
                const auto* a = std::get_if<ProductPoint>(&x.v);
                const auto* b = std::get_if<ProductPoint>(&y.v);
                if (!a || !b || a->parts.size() != s.parts.size() ||
                    b->parts.size() != s.parts.size())
                    bad_point("product");
                DistanceResult res{0.0, 0.0};
                for (std::size_t i = 0; i < s.parts.size(); ++i) {
                    auto d = distance(s.parts[i], a->parts[i], b->parts[i]);
                    res.value = std::max(res.value, d.value);
                    res.tail_bound = std::max(res.tail_bound, d.tail_bound);
                }
                return res;
            }
        },
        sys.v);
}

Observable obs_exponential(int part) {
    Observable f;
    f.name = part < 0 ? "exp" : ("exp[" + std::to_string(part) + "]");
    f.sup_norm = 1.0;
    f.lipschitz = 2.0 * std::numbers::pi;  // vs arc metric; 1 vs chord
    f.eval = [part](const Point& x) -> cplx {
        const Point* p = &x;
        if (part >= 0) {
            const auto* pp = std::get_if<ProductPoint>(&x.v);
            if (!pp || std::size_t(part) >= pp->parts.size())
                throw std::invalid_argument("obs_exponential: no such product part");
            p = &pp->parts[std::size_t(part)];
        }
        if (const auto* c = std::get_if<CirclePoint>(&p->v)) return unit(c->t);
        if (const auto* a = std::get_if<AnchoredCirclePoint>(&p->v))
            return a->is_anchor ? cplx{0.0, 0.0} : unit(a->t);
        if (const auto* sk = std::get_if<SkewPoint>(&p->v))
            return sk->is_anchor ? cplx{0.0, 0.0} : unit(sk->z);
        throw std::invalid_argument("obs_exponential: unsupported point type");
    };
    return f;
}

Observable obs_symbol_eval() {
    Observable f;
    f.name = "symbol0";
    f.sup_norm = 1.0;
    f.lipschitz = 0.0;
    f.eval = [](const Point& x) -> cplx {
        const auto* w = std::get_if<SymbolWindow>(&x.v);
        if (!w) throw std::invalid_argument("obs_symbol_eval: expected a symbol window");
        const Symbol& s = w->at_rel(0);
        if (w->alphabet == Alphabet::binary) return {s.value, 0.0};
        return s.is_anchor ? cplx{0.0, 0.0} : unit(s.value);
    };
    return f;
}

std::vector<cplx> orbit_observable(const SystemSpec& sys, const Point& x,
                                   const Observable& f, std::int64_t n_lo,
                                   std::int64_t n_hi) {
    if (n_hi < n_lo) throw std::invalid_argument("orbit_observable: empty range");
    if (const auto* w = std::get_if<SymbolWindow>(&x.v)) {
        // precise support check with a hint
        if (w->origin + n_hi > w->hi || w->origin + n_lo < w->lo)
            throw std::invalid_argument(
                "orbit_observable: window support insufficient; need stored indices [" +
                std::to_string(w->origin + n_lo) + "," + std::to_string(w->origin + n_hi) +
                "]");
    }
    std::vector<cplx> out;
    out.reserve(std::size_t(n_hi - n_lo + 1));
    for (std::int64_t n = n_lo; n <= n_hi; ++n)
        out.push_back(f.eval(apply_pow(sys, x, n)));
    return out;
}

}  // namespace mulab::systems
