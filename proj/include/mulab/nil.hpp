#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mulab/complexity.hpp"

namespace mulab::nil {

// Connected simply-connected nilpotent group in coordinates of the second kind.
// Two concrete cases: step 1 (R^m, lattice Z^m) and step 2 (the 3-dimensional
// Heisenberg group with [X1,X2] = X3, lattice = integer coordinates).
struct NilGroup {
    int step = 2;
    int dim = 3;
    // filtration[j-1] = first coordinate index of the subgroup G_j, j = 1..step.
    // Heisenberg: {0, 2} (G_2 = central axis, coordinates (0,0,*)).
    std::vector<int> filtration;
    struct Bracket {
        int i = 0, j = 0, k = 0;  // [X_i, X_j] = X_k, 1-based
    };
    std::vector<Bracket> brackets;

    static NilGroup heisenberg();
    static NilGroup abelian(int m);
    bool is_heisenberg() const { return step == 2; }

    void save(const std::string& path) const;
    static NilGroup load(const std::string& path);
};

// psi(g): coordinate vector of length dim.
using Elt = std::vector<double>;

Elt identity(const NilGroup& g);
Elt mult(const NilGroup& g, const Elt& x, const Elt& y);
Elt inverse(const NilGroup& g, const Elt& x);
// One-parameter subgroup through x evaluated at time t; agrees with repeated
// multiplication at integer t.
Elt power(const NilGroup& g, const Elt& x, double t);
// |psi(x)| = max_i |coordinate_i|.
double psi_norm(const NilGroup& g, const Elt& x);
// Splits x = k * gamma with k in the fundamental box [0,1)^dim and gamma in the
// integer lattice. Returns (k, gamma).
std::pair<Elt, Elt> reduce(const NilGroup& g, const Elt& x);
// Membership in the lower-central subgroup G_j, judged from coordinate support.
bool in_subgroup(const NilGroup& g, const Elt& x, int j, double tol = 0.0);

// Upper bound on the chain metric: minimum over a documented family of chains
// with at most chain_depth steps of the summed one-step costs
// min(|psi(delta)|, |psi(delta^-1)|). Chains are parametrized by relative
// increments of w = x*y^-1 only, so the value is exactly right-invariant, and
// the candidate family grows with chain_depth, so the value is monotone
// non-increasing in depth.
double group_metric(const NilGroup& g, const Elt& x, const Elt& y, int chain_depth);

struct QuotientDistance {
    double value = 0.0;
    bool boundary_touch = false;  // minimizer on the search-box boundary: radius too small
    Elt gamma;                    // minimizing lattice element
};
// min over lattice gamma in an integer box of group_metric(x, y*gamma).
// The box is centered at the integer part of y^-1 x so that nearby cosets are
// always searched regardless of which fundamental-domain translates x and y
// came from; boundary_touch reports when the minimizer hits the box edge.
QuotientDistance quotient_metric(const NilGroup& g, const Elt& x, const Elt& y,
                                 int lattice_radius, int chain_depth = 6);

// Polynomial sequence n -> coeff[0]^C(n,0) * coeff[1]^C(n,1) * ... with
// coeff[j] in G_j (Taylor coefficients).
struct PolySeq {
    std::vector<Elt> coeff;
    int degree() const { return static_cast<int>(coeff.size()) - 1; }
};

bool poly_valid(const NilGroup& g, const PolySeq& p, double tol = 0.0);
Elt poly_eval(const NilGroup& g, const PolySeq& p, std::int64_t n);
// f(n+h) * f(n)^-1
Elt discrete_derivative(const NilGroup& g, const std::function<Elt(std::int64_t)>& f,
                        std::int64_t h, std::int64_t n);
// The linear sequence n -> g^n h written in Taylor form (h, h^-1 g h, e).
PolySeq from_linear(const NilGroup& g, const Elt& gelt, const Elt& h);
// Splits p into (k-part, lattice part) with poly_eval(p,n) =
// poly_eval(k,n) * poly_eval(gamma,n): coefficients of the first factor lie in
// the fundamental box, those of the second in the lattice. Step <= 2 only.
std::pair<PolySeq, PolySeq> factorize(const NilGroup& g, const PolySeq& p);

// Coefficients uniform in box ∩ G_j, degree = step.
PolySeq sample_poly(const NilGroup& g, std::uint64_t& rng_state);

// Covering data for degree-step polynomial orbit strings
// (p(0)Gamma, ..., p(n-1)Gamma) under the sup-over-positions distance.
// Two counts are reported:
//  - net: greedy epsilon-net over sampled strings, distances measured with the
//    chain surrogate (depth 6) and radius-1 lattice search. For fixed sample
//    budgets and small close-pair probability this saturates at the sample
//    count (degenerate flag), in which case it only certifies a packing.
//  - grid_count: cardinality of an explicit coefficient-grid cover whose
//    per-coordinate spacings are derived from the printed sensitivity
//    amplitudes; snap_constant * sum(amplitude * spacing)/2 < epsilon, so this
//    is a certified upper bound for the covering number of the full string
//    family (not just the sample).
struct PolyCoverReport {
    complexity::CoveringReport net;
    double grid_count = 0.0;
    double grid_log10 = 0.0;
    std::vector<double> amplitudes;
    double snap_constant = 4.0;
    int chain_depth = 6;
    int lattice_radius = 1;
};
PolyCoverReport poly_covering_number(const NilGroup& g, std::int64_t n, double eps,
                                     std::size_t sample_count, std::uint64_t seed);

void export_coefficients_csv(const std::string& path, const NilGroup& g,
                             const std::vector<PolySeq>& polys);

}  // namespace mulab::nil
