#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mulab/systems.hpp"

namespace mulab::coding {

// Sets whose orbit itineraries we code: circle arcs [a, a+len), rectangles
// (per-factor arcs on product systems), and symbol cylinders {x : x(0) = s}.
// Arcs are closed on the left and open on the right so the indicator is
// defined everywhere, including on the boundary.
struct CodableSet {
    enum class Kind { arc, rectangle, cylinder };
    Kind kind = Kind::arc;
    double a = 0.0;
    double len = 0.0;                               // arc length in (0,1]; 1 = whole circle
    std::vector<std::array<double, 2>> factors;     // rectangle: (start, length) per factor
    systems::Symbol symbol = systems::Symbol::bin(1);  // cylinder target at position 0

    static CodableSet arc(double start, double length);
    static CodableSet rectangle(std::vector<std::array<double, 2>> f);
    static CodableSet cylinder(systems::Symbol s);
    std::string describe() const;
};

bool contains(const CodableSet& u, const systems::Point& p);
// Signed arc distance to the boundary: positive inside, negative outside,
// +/-infinity when the boundary is empty (whole space, cylinders).
double dist_to_boundary(const CodableSet& u, const systems::Point& p);
// Membership in the open collar B(boundary, eps0).
bool in_boundary_collar(const CodableSet& u, const systems::Point& p, double eps0);

struct SmallnessReport {
    double eps0 = 0.0;
    std::int64_t n = 0;
    // collar visit frequencies per trial point, Birkhoff over [0, n)
    std::vector<double> per_point;
    double max_frequency = 0.0;
    // harmonic-weighted variant over [1, n]
    double max_log_frequency = 0.0;
};
SmallnessReport smallness_test(const systems::SystemSpec& sys, const CodableSet& u, double eps0,
                               std::int64_t n, const std::vector<systems::Point>& trial);

// itinerary bits of T^k x for k in [lo, hi]
systems::SequenceSpec code_point(const systems::SystemSpec& sys, const CodableSet& u,
                                 const systems::Point& x, std::int64_t lo, std::int64_t hi);

// continuous surrogate for the indicator: 1 on U away from the boundary, 0
// outside U away from the boundary, linear in the 2*eps0 collar
systems::Observable mollify_indicator(const systems::SystemSpec& sys, const CodableSet& u,
                                      double eps0);

struct StabilityReport {
    double delta = 0.0;
    std::int64_t n = 0;
    double epsilon = 0.0;       // separation scale found below delta^2
    double collar_frequency = 0.0;  // max sqrt(eps)-collar visit frequency at acceptance
    std::size_t pairs_requested = 0;
    std::size_t pairs_found = 0;
    double max_density = 0.0;   // worst Hamming disagreement density over [0, n)
    bool vacuous = false;       // 2*delta >= 1: the bound cannot fail
    bool conclusive = true;     // false when close pairs could not be produced
    bool pass = false;          // max_density <= 2*delta
};
// Searches eps in (0, delta^2) by repeated shrinking until the sqrt(eps)-collar
// visit frequency over the trial points drops below delta, then codes sampled
// pairs at mean distance < eps and measures their disagreement density.
StabilityReport verify_coding_stability(const systems::SystemSpec& sys, const CodableSet& u,
                                        double delta, std::int64_t n, std::size_t pair_count,
                                        std::uint64_t seed);

struct TransferReport {
    double delta = 0.0;
    std::int64_t n = 0;
    int window = 0;             // L
    double delta_prime = 0.0;   // 4*delta_prime*L + 2/2^L < delta
    double margin = 0.0;        // delta - (4*delta_prime*L + 2/2^L)
    double epsilon = 0.0;       // original-side radius from the stability search
    std::size_t sample_count = 0;
    std::size_t original_cardinality = 0;
    std::size_t coded_cardinality = 0;
    bool holds = false;         // coded <= original
};
// Computes greedy covering cardinalities on both sides of the coding at
// matched parameters: radius epsilon(delta) upstairs, radius delta on the
// coded binary sequences.
TransferReport complexity_transfer_check(const systems::SystemSpec& sys, const CodableSet& u,
                                         double delta, std::int64_t n, std::size_t sample_count,
                                         std::uint64_t seed);

}  // namespace mulab::coding
