#pragma once

#include <cstdint>
#include <vector>

#include "mulab/arith.hpp"
#include "mulab/frequency_set.hpp"

namespace mulab::fourier {

// sup_{alpha in C} (1/H)|sum_{h<=H} mu(n+h) e(h alpha)| evaluated on a grid
// refinement of C.  The derivative bound |S'| <= pi(H+1) turns the grid gap
// into a certified two-sided enclosure.
struct LocalSupResult {
    std::int64_t n = 0;
    std::int64_t h = 0;
    double eta = 0.0;          // requested refinement spacing
    double max_gap = 0.0;      // achieved sup distance to the grid
    double grid_lower = 0.0;   // max over the grid (true lower bound)
    double certified_upper = 0.0;  // grid_lower + pi(H+1) * max_gap
    std::size_t grid_size = 0;
    double argmax = 0.0;       // grid frequency attaining the max
};
// refinement <= 0 selects the default spacing 0.01 / (pi (H+1)) so the
// enclosure width stays below 0.01.
LocalSupResult local_fourier_sup(const arith::MobiusTable& mob, std::int64_t n, std::int64_t h,
                                 const freq::FrequencySet& c, double refinement = 0.0);

// Cesaro / harmonic averages over n <= N of the local sup at window H.
struct RestrictedAverageResult {
    std::int64_t n_max = 0;
    std::int64_t h = 0;
    arith::AverageKind kind = arith::AverageKind::cesaro;
    double eta = 0.0;
    double max_gap = 0.0;
    std::size_t grid_size = 0;
    double cesaro_lower = 0.0;
    double cesaro_upper = 0.0;
    double log_lower = 0.0;
    double log_upper = 0.0;
    std::string set_descriptor;

    double lower() const {
        return kind == arith::AverageKind::cesaro ? cesaro_lower : log_lower;
    }
    double upper() const {
        return kind == arith::AverageKind::cesaro ? cesaro_upper : log_upper;
    }
};
RestrictedAverageResult restricted_uniformity_average(const arith::MobiusTable& mob,
                                                      std::int64_t n_max, std::int64_t h,
                                                      const freq::FrequencySet& c,
                                                      arith::AverageKind kind,
                                                      double refinement = 0.0);

// Least-squares slope of log N_eps against log(1/eps); the counts are exact
// minimal covers by length-eps intervals (left-to-right sweep).
struct BoxDimensionReport {
    std::vector<double> scales;
    std::vector<std::size_t> counts;
    double slope = 0.0;
    double r2 = 0.0;
    bool degenerate = false;  // all scales produced the same count
};
BoxDimensionReport box_dimension_estimate(const freq::FrequencySet& s,
                                          const std::vector<double>& eps_grid);
BoxDimensionReport box_dimension_estimate(const std::vector<double>& points,
                                          const std::vector<double>& eps_grid);

// Minimal exact cover count at a single scale.
std::size_t interval_cover_count(const std::vector<freq::Interval>& parts, double eps);

struct Ball {
    double center = 0.0;
    double radius = 0.0;
};
// Greedy disjoint subfamily by decreasing radius; every input ball meets a
// selected ball of at least its radius, so the 5r inflations of the selection
// cover the input union.  Both facts are re-verified before returning.
std::vector<std::size_t> vitali_5r_subfamily(const std::vector<Ball>& balls);

}  // namespace mulab::fourier
