#pragma once
// Small numeric helpers shared across the library: compensated summation,
// least-squares fits, circle geometry, and a deterministic parallel_for.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

namespace mulab {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Compensated (Neumaier) summation.  All long averages in the library are
// accumulated with this and in a fixed ascending order so that reruns --
// including multi-threaded ones -- reproduce byte-identical results.
struct KahanSum {
    double s = 0.0;
    double c = 0.0;

    void add(double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

struct KahanSumC {
    KahanSum re, im;
    void add(cplx z) {
        re.add(z.real());
        im.add(z.imag());
    }
    cplx value() const { return {re.value(), im.value()}; }
};

// ---------------------------------------------------------------------------
// Ordinary least squares y = a + b*x with coefficient of determination.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::size_t points = 0;
};

inline LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need >= 2 paired points");
    const std::size_t n = x.size();
    KahanSum sx, sy;
    for (std::size_t i = 0; i < n; ++i) {
        sx.add(x[i]);
        sy.add(y[i]);
    }
    const double mx = sx.value() / double(n);
    const double my = sy.value() / double(n);
    KahanSum sxx, sxy, syy;
    for (std::size_t i = 0; i < n; ++i) {
        sxx.add((x[i] - mx) * (x[i] - mx));
        sxy.add((x[i] - mx) * (y[i] - my));
        syy.add((y[i] - my) * (y[i] - my));
    }
    LinearFit f;
    f.points = n;
    if (sxx.value() <= 0.0) {
        f.slope = 0.0;
        f.intercept = my;
        f.r2 = 0.0;  // vertical / degenerate
        return f;
    }
    f.slope = sxy.value() / sxx.value();
    f.intercept = my - f.slope * mx;
    if (syy.value() <= 0.0) {
        // all y equal: the constant model is exact
        f.r2 = 1.0;
    } else {
        KahanSum ss_res;
        for (std::size_t i = 0; i < n; ++i) {
            double r = y[i] - (f.intercept + f.slope * x[i]);
            ss_res.add(r * r);
        }
        f.r2 = 1.0 - ss_res.value() / syy.value();
    }
    return f;
}

// Least-squares quadratic coefficient of y over x (curvature sign probe).
inline double fit_quadratic_coeff(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 3)
        throw std::invalid_argument("fit_quadratic_coeff: need >= 3 paired points");
    // Solve the 3x3 normal equations directly.
    double S[5] = {0, 0, 0, 0, 0};
    double T[3] = {0, 0, 0};
    for (std::size_t i = 0; i < n; ++i) {
        double xp = 1.0;
        for (int k = 0; k <= 4; ++k) {
            S[k] += xp;
            if (k <= 2) T[k] += xp * y[i];
            xp *= x[i];
        }
    }
    double A[3][4] = {{S[0], S[1], S[2], T[0]},
                      {S[1], S[2], S[3], T[1]},
                      {S[2], S[3], S[4], T[2]}};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        std::swap(A[piv], A[col]);
        if (std::abs(A[col][col]) < 1e-300)
            throw std::runtime_error("fit_quadratic_coeff: singular system");
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            double f = A[r][col] / A[col][col];
            for (int k = col; k < 4; ++k) A[r][k] -= f * A[col][k];
        }
    }
    return A[2][3] / A[2][2];
}

// ---------------------------------------------------------------------------
// Circle helpers.  Angles live in [0,1); two metrics are supported and the
// active choice is always recorded in reports that depend on it.
inline double wrap01(double t) {
    double f = t - std::floor(t);
    return (f >= 1.0) ? 0.0 : f;  // guard against floor rounding at 1.0-ulp
}

// shortest-arc metric, diameter 1/2
inline double circ_dist_arc(double s, double t) {
    double d = std::abs(wrap01(s) - wrap01(t));
    return std::min(d, 1.0 - d);
}

// chordal metric |e(s)-e(t)| on the unit circle in C, diameter 2
inline double circ_dist_chord(double s, double t) {
    return 2.0 * std::abs(std::sin(std::numbers::pi * (s - t)));
}

inline cplx unit(double t) {  // e(t) = exp(2 pi i t)
    double a = 2.0 * std::numbers::pi * t;
    return {std::cos(a), std::sin(a)};
}

// ---------------------------------------------------------------------------
// Deterministic RNG plumbing: splitmix64 for seeding independent streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    return splitmix64(s);
}

// ---------------------------------------------------------------------------
// Parallelism.  Work is split into fixed chunks; workers write to disjoint
// slots, so results do not depend on the worker count.
int parallel_threads();
void set_parallel_threads(int n);  // 0 = use hardware concurrency

void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t, std::size_t)>& chunk_fn);

}  // namespace mulab
