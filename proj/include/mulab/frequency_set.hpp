#pragma once
// Frequency supports on [0,1]: finite lists, middle-interval Cantor
// constructions truncated at a finite level, and uniform grids.  Shared by
// the Fourier module (where sups over the support are taken) and by the
// skew-product base space.

#include <cstdint>
#include <string>
#include <vector>

namespace mulab::freq {

enum class Kind { finite, cantor, grid };

struct Interval {
    double a, b;  // closed [a,b], possibly degenerate
};

class FrequencySet {
  public:
    static FrequencySet finite(std::vector<double> points);
    // Scaled two-piece construction on [0,1]: keep [0,r] and [1-r,1], recurse
    // `level` times.  Requires 0 < r < 1/2.  Analytic box dimension log2/log(1/r).
    static FrequencySet cantor(double ratio, int level);
    static FrequencySet grid(double step);

    Kind kind() const { return kind_; }
    double ratio() const { return ratio_; }
    int level() const { return level_; }
    double step() const { return step_; }
    const std::vector<double>& points() const { return points_; }

    // Closed intervals whose union is the represented set (degenerate for
    // finite/grid kinds), sorted, pairwise disjoint.
    std::vector<Interval> intervals() const;

    // Points covering every element of the set within spacing <= eta plus the
    // actual worst-case distance from the set to the returned points.  Finite
    // sets are returned verbatim with slack 0.
    struct Refinement {
        std::vector<double> points;
        double max_gap;  // sup over the set of the distance to nearest point
    };
    Refinement refine(double eta) const;

    // Distance from theta to the set (0 if inside).
    double distance_to(double theta) const;

    // log 2 / log(1/r) for cantor; 0 for finite; 1 for grid.
    double analytic_dimension() const;

    // Uniform draw from the level-`level` truncation (cantor) / uniform
    // element (finite, grid).  Deterministic in the passed RNG state.
    double sample(std::uint64_t& rng_state) const;

    std::string describe() const;
    static FrequencySet parse(const std::string& text);  // inverse of describe()

  private:
    Kind kind_ = Kind::finite;
    std::vector<double> points_;
    double ratio_ = 0.0;
    int level_ = 0;
    double step_ = 0.0;
};

}  // namespace mulab::freq
