#pragma once
// Mean (time-averaged) metrics, greedy covering numbers in both the
// topological and measure flavors, growth-rate profiling, and the empirical
// orthogonality certificate built from a mean-metric cover of an orbit's
// weighted closure.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mulab/arith.hpp"
#include "mulab/systems.hpp"

namespace mulab::complexity {

using systems::Point;
using systems::SystemSpec;

// d_n(x,y) = (1/n) sum_{i=0}^{n-1} d(T^i x, T^i y).
systems::DistanceResult mean_distance(const SystemSpec& sys, const Point& x,
                                      const Point& y, std::int64_t n);

// Precomputed pairwise mean-distance evaluator over a fixed sample.  Three
// strategies: exact collapse for isometries, a weight-kernel pass for
// symbolic windows, and cached orbits otherwise.  `dist` returns a value
// certified to be >= cutoff whenever it early-exits.
class MeanMetric {
  public:
    MeanMetric(const SystemSpec& sys, std::vector<Point> sample, std::int64_t n);

    double dist(std::size_t i, std::size_t j, double cutoff) const;
    double tail_bound() const { return tail_; }
    std::size_t size() const { return sample_.size(); }
    const Point& point(std::size_t i) const { return sample_[i]; }
    std::int64_t n() const { return n_; }

  private:
    enum class Mode { isometry, window_kernel, generic };
    Mode mode_;
    SystemSpec sys_;
    std::vector<Point> sample_;
    std::int64_t n_;
    double tail_ = 0.0;
    // window_kernel
    std::vector<double> kernel_;  // weight of absolute offset m - m_lo
    std::int64_t m_lo_ = 0, m_hi_ = 0;
    systems::Alphabet alpha_ = systems::Alphabet::binary;
    systems::CircleMetric circ_ = systems::CircleMetric::chord;
    std::vector<std::int64_t> win_origin_;
    // generic
    std::vector<std::vector<Point>> orbits_;
};

struct CoveringReport {
    std::int64_t n = 1;
    double epsilon = 0.0;
    std::vector<std::size_t> net;  // indices into the sample, selection order
    std::size_t cardinality = 0;
    std::string direction = "upper_bound";
    std::size_t sample_size = 0;
    double tail_bound = 0.0;
    // Sequential greedy nets are pairwise >= epsilon separated, so the same
    // cardinality lower-bounds any covering at radius epsilon/2.
    bool packing_certified = false;
    bool degenerate = false;
    std::string note;
};

// Greedy sequential net: scan the sample in order, open a new center whenever
// a point is >= epsilon from every existing center under the n-step mean
// metric.  Upper bound for the sampled set; centers are epsilon-separated.
CoveringReport covering_number(const SystemSpec& sys, std::vector<Point> sample,
                               std::int64_t n, double epsilon);

// Greedy mass cover: repeatedly add the sample point whose epsilon-ball periods
// covers the largest uncovered weight until covered mass exceeds 1 - epsilon.
// Weights must be nonnegative and sum to 1 (1e-9 slack).  Exact greedy with
// lowest-index tie-breaking.  epsilon >= 1 degenerates to a single ball.
CoveringReport measure_covering_number(const SystemSpec& sys, std::vector<Point> sample,
                                       const std::vector<double>& weights, std::int64_t n,
                                       double epsilon);

// ---------------------------------------------------------------------------
struct SamplerConfig {
    enum class Kind { orbit, uniform, windows } kind = Kind::uniform;
    std::size_t count = 256;
    std::uint64_t seed = 1;
    std::optional<Point> base;    // orbit start (defaults per system)
    std::int64_t window_radius = 64;  // stored radius for symbolic samples
};

std::vector<Point> sample_points(const SystemSpec& sys, const SamplerConfig& cfg);

struct ComplexityProfile {
    double epsilon = 0.0;
    std::vector<std::int64_t> n_grid;
    std::vector<std::size_t> counts;
    std::vector<double> tail_bounds;
    double fitted_exponent = 0.0;  // slope of log counts vs log n
    double r2_loglog = 0.0;
    double r2_semilog = 0.0;       // log counts vs n (exponential model)
    double loglog_curvature = 0.0;
    std::string classification;    // bounded | sublinear | polynomial |
                                   // superpolynomial | unclassified
    bool degenerate_fit = false;
    bool counts_monotone = true;
    std::size_t sample_size = 0;
};

ComplexityProfile complexity_profile(const SystemSpec& sys, const SamplerConfig& sampler,
                                     double epsilon,
                                     const std::vector<std::int64_t>& n_grid);

// classification applied to raw counts (exposed for tests)
void classify_profile(ComplexityProfile& p);

// ---------------------------------------------------------------------------
// Orthogonality certificate.  Searches for a window length L whose weighted
// orbit cover at radius eps1 has fewer than eps*L balls (eps1 < eps^2 refined
// through the observable's modulus of continuity), assigns every time n <= N
// to a ball center when possible, and evaluates the three averaged error
// terms the argument bounds by 7 eps, 5 eps and 2 eps.
struct CertificateOptions {
    std::vector<std::int64_t> l_grid;   // empty = dyadic 256..65536
    std::size_t sample_count = 4096;    // weighted orbit subsample size
    double modulus_lipschitz = 0.0;     // 0 = infer from system/observable
    std::uint64_t seed = 1;
    std::size_t max_center_table = 30000000;  // cap on m*L observable cache
};

struct CertificateRow {
    std::int64_t n_max = 0;
    double q_direct = 0.0;    // |log-avg mu(n) f(T^n x)|          vs 7 eps
    double q_coupling = 0.0;  // |log-avg (direct - window term)|  vs 5 eps
    double q_window = 0.0;    // |log-avg window term|             vs 2 eps
    double visit_mass = 0.0;  // log-measure fraction assigned to a ball
    bool pass_direct = false, pass_coupling = false, pass_window = false;
};

struct CertificateRecord {
    double eps = 0.0, eps1 = 0.0, modulus_lipschitz = 0.0;
    std::int64_t window_length = 0;  // admissible L (0 when search failed)
    std::size_t cover_size = 0;      // m = weighted cover cardinality at L
    std::size_t sample_size = 0;
    std::vector<std::pair<std::int64_t, std::size_t>> search_trail;  // (L, m_L)
    std::vector<CertificateRow> rows;
    bool admissible = false;
    bool all_bounds_hold = false;
    std::string note;
};

CertificateRecord disjointness_certificate(const SystemSpec& sys, const Point& x,
                                           const systems::Observable& f, double eps,
                                           const std::vector<std::int64_t>& n_list,
                                           const arith::MobiusTable& mob,
                                           const CertificateOptions& opt = {});

}  // namespace mulab::complexity
