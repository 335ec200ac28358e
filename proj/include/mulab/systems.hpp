#pragma once
// Topological systems used in the experiments: circle rotations, the skew
// product over a frequency support, full shifts over {0,1} and over the
// circle-with-anchor alphabet, finite products, and shift-orbit closures of
// stored sequences.  Points are plain data; `apply` advances one step of the
// dynamics and `distance` evaluates the declared metric together with a
// rigorous truncation tail for symbolic windows.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mulab/frequency_set.hpp"
#include "mulab/util.hpp"

namespace mulab::systems {

enum class CircleMetric { arc, chord };
double circle_distance(CircleMetric m, double s, double t);

enum class Alphabet : std::uint8_t { binary = 0, torus_anchor = 1 };

// One letter of a symbolic sequence.  For Alphabet::binary `value` is 0 or 1;
// for Alphabet::torus_anchor either the anchor point p (`is_anchor`) or an
// angle in [0,1).  The anchor is at distance exactly 1 from every circle
// point.
struct Symbol {
    bool is_anchor = false;
    double value = 0.0;

    static Symbol bin(int b) { return Symbol{false, double(b != 0)}; }
    static Symbol angle(double t) { return Symbol{false, wrap01(t)}; }
    static Symbol anchor() { return Symbol{true, 0.0}; }
};

double symbol_distance(Alphabet a, CircleMetric m, const Symbol& x, const Symbol& y);
double symbol_diameter(Alphabet a, CircleMetric m);

// A finite two-sided window of a sequence, with absolute indices in [lo,hi]
// and a current origin (the coordinate read as "position 0").  Shifting moves
// the origin; the usable radius shrinks accordingly and is what the metric
// truncation reports.
struct SymbolWindow {
    Alphabet alphabet = Alphabet::binary;
    std::int64_t lo = 0, hi = -1, origin = 0;
    std::vector<Symbol> symbols;  // index m stored at symbols[m - lo]

    const Symbol& at_abs(std::int64_t m) const;
    const Symbol& at_rel(std::int64_t k) const { return at_abs(origin + k); }
    std::int64_t radius_left() const { return origin - lo; }
    std::int64_t radius_right() const { return hi - origin; }
    std::int64_t radius() const { return std::min(radius_left(), radius_right()); }
};

struct CirclePoint {
    double t = 0.0;
};

// Point of the extended circle (circle plus anchor p); used standalone and in
// products.
struct AnchoredCirclePoint {
    bool is_anchor = false;
    double t = 0.0;
};

/// Point of the skew product on C x circle: base x in C subset [0,1] and fiber
// angle z; an adjoined fixed anchor is representable too.
struct SkewPoint {
    bool is_anchor = false;
    double x = 0.0;
    double z = 0.0;
};

struct Point;
struct ProductPoint {
    std::vector<Point> parts;
};

struct Point {
    std::variant<CirclePoint, AnchoredCirclePoint, SkewPoint, SymbolWindow, ProductPoint> v;

    static Point circle(double t) { return Point{CirclePoint{wrap01(t)}}; }
    static Point skew(double x, double z) { return Point{SkewPoint{false, x, wrap01(z)}}; }
    static Point skew_anchor() { return Point{SkewPoint{true, 0.0, 0.0}}; }
    static Point window(SymbolWindow w) { return Point{std::move(w)}; }
};

// ---------------------------------------------------------------------------
// Stored sequences; the on-disk format is a small binary container
/// ("MSEQ": alphabet tag byte, int64 lo, int64 hi, then per-symbol payload).
struct SequenceSpec {
    Alphabet alphabet = Alphabet::binary;
    std::int64_t lo = 0;
    std::vector<Symbol> symbols;  // index lo..lo+size-1

    std::int64_t hi() const { return lo + std::int64_t(symbols.size()) - 1; }
    void save(const std::filesystem::path& p) const;
    static SequenceSpec load(const std::filesystem::path& p);
    SymbolWindow window(std::int64_t origin) const;
};

// ---------------------------------------------------------------------------
struct Rotation {
    double alpha = 0.0;
    CircleMetric metric = CircleMetric::arc;
};

struct Skew {
    freq::FrequencySet base;       // invariant base set C
    bool with_anchor = false;      // adjoin the fixed anchor point
};

struct Shift {
    Alphabet alphabet = Alphabet::binary;
    CircleMetric symbol_metric = CircleMetric::chord;
};

struct OrbitClosure {
    std::shared_ptr<SequenceSpec> base;
    CircleMetric symbol_metric = CircleMetric::chord;
};

struct SystemSpec;
struct ProductSystem {
    std::vector<SystemSpec> parts;
};

struct SystemSpec {
    std::variant<Rotation, Skew, Shift, OrbitClosure, ProductSystem> v;

    // True when every step of the dynamics preserves the metric exactly, in
    // which case time-averaged orbit distances collapse to the plain distance.
    bool isometric() const;
    std::string describe() const;

    static SystemSpec rotation(double alpha, CircleMetric m = CircleMetric::arc) {
        return SystemSpec{Rotation{wrap01(alpha), m}};
    }
    static SystemSpec skew(freq::FrequencySet c, bool with_anchor = false) {
        return SystemSpec{Skew{std::move(c), with_anchor}};
    }
    static SystemSpec shift(Alphabet a, CircleMetric m = CircleMetric::chord) {
        return SystemSpec{Shift{a, m}};
    }
    static SystemSpec orbit_closure(SequenceSpec s, CircleMetric m = CircleMetric::chord) {
        return SystemSpec{OrbitClosure{std::make_shared<SequenceSpec>(std::move(s)), m}};
    }
    static SystemSpec product(std::vector<SystemSpec> parts) {
        return SystemSpec{ProductSystem{std::move(parts)}};
    }
};

// One forward step.  Windows must have room to shift (origin < hi).
Point apply(const SystemSpec& sys, const Point& x);
// n-fold iterate, n >= 0; closed forms where available.
Point apply_pow(const SystemSpec& sys, const Point& x, std::int64_t n);

struct DistanceResult {
    double value = 0.0;
    double tail_bound = 0.0;  // bound on mass ignored by finite truncation
};

// Metric of the system evaluated at two points; rejects structurally
// incompatible points (different alphabets, mismatched product arity).
DistanceResult distance(const SystemSpec& sys, const Point& x, const Point& y);

// ---------------------------------------------------------------------------
// Built-in observables (bounded, with a recorded Lipschitz constant relative
// to the system metric).
struct Observable {
    std::string name;
    std::function<cplx(const Point&)> eval;
    double sup_norm = 1.0;
    double lipschitz = 0.0;  // 0 = not stated
};

// e(angle) for circle points / first coordinate of skew fiber; coordinate
// evaluation for products (selects part k).
Observable obs_exponential(int part = -1);
/// Reads position 0 of a symbolic window: 0/1 for binary, e(angle) on the
// circle letters, and 0 at the anchor (the bounded extension used when a
// sequence mixes circle letters with the anchor).
Observable obs_symbol_eval();

// f(T^n x) for n = n_lo..n_hi inclusive.  Throws when a window runs out of
// support, reporting the radius that would be required.
std::vector<cplx> orbit_observable(const SystemSpec& sys, const Point& x,
                                   const Observable& f, std::int64_t n_lo,
                                   std::int64_t n_hi);

}  // namespace mulab::systems
