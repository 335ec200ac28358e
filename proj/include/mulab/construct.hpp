#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mulab/frequency_set.hpp"
#include "mulab/nil.hpp"
#include "mulab/systems.hpp"

namespace mulab::construct {

enum class Variant { fourier, nil };

struct Scale {
    std::int64_t h = 0;  // block length
    std::int64_t n = 0;  // horizon
};

// One scheduled block: symbols at positions start+1 .. start+h of the scale.
struct Block {
    std::int64_t start = 0;
    double theta = 0.0;  // rotation frequency (fourier variant)
    double phi = 0.0;    // initial phase
    nil::Elt gen;        // linear generator (nil variant)
};

// The adversarial construction data: threshold tau, exclusion exponent sigma,
// the (H_i, N_i) ladder, and the selected block starts per scale.
struct BlockSpec {
    Variant variant = Variant::fourier;
    double tau = 0.0;
    double sigma = 0.0;  // tau^2/200 by convention
    freq::FrequencySet freqs = freq::FrequencySet::finite({0.0});  // houses the thetas
    nil::NilGroup group = nil::NilGroup::heisenberg();
    nil::Elt x0;  // nil variant base point
    std::vector<Scale> scales;
    std::vector<std::vector<Block>> blocks;  // per scale, ascending start

    struct CheckReport {
        bool pass = false;  // hard invariants: shape, gaps, exclusion, collisions
        std::vector<std::string> violations;
        bool ladder_feasible = false;  // the separation chain H_i < sig N_i^sig < (sig/10) H_{i+1}^sig
        std::string ladder_note;       // log-space evaluation and required magnitude
    };
    CheckReport check() const;
};

struct LedgerRow {
    std::size_t scale = 0;
    std::int64_t start = 0;   // block occupies start+1 .. start+len
    std::int64_t len = 0;
    double theta = 0.0;
    double phi = 0.0;
    std::int64_t p_run = 0;   // anchor run length preceding the block
};

struct AssembledSequence {
    Variant variant = Variant::fourier;
    systems::SequenceSpec sym;  // torus_anchor alphabet over [lo, hi]
    std::vector<LedgerRow> ledger;

    std::int64_t lo() const { return sym.lo; }
    std::int64_t hi() const { return sym.hi(); }
    systems::Symbol at(std::int64_t j) const;
};

struct GappedSubset {
    std::vector<std::int64_t> subset;
    double harmonic_mass = 0.0;
    bool target_met = false;
};
// Greedy left-to-right selection keeping pairwise gaps >= gap.
GappedSubset select_gapped_subset(const std::vector<std::int64_t>& s, std::int64_t gap,
                                  double target);

// Fills y(start+h) = e(phi + h theta) (fourier) or the torus projection of
// g^h x0 (nil) for each scheduled block; anchor elsewhere.  Colliding blocks
// throw with the offending pair.
AssembledSequence assemble_sequence(const BlockSpec& spec);

struct StarBlockRow {
    std::int64_t start = 0;
    std::int64_t len = 0;
    double theta = 0.0;        // fitted from the first two symbols
    double phi = 0.0;
    double max_err = 0.0;      // worst circle distance over the block
    double freq_dist = 0.0;    // distance of theta to the frequency set
    bool symbols_ok = false;
    bool freq_ok = false;
};
struct StarReport {
    double tol = 0.0;
    std::vector<StarBlockRow> blocks;
    bool lengths_unbounded = false;  // max block length attained by the final third
    bool pass = false;
};
// Re-derives blocks from the raw symbols and verifies the progression law.
StarReport check_property_star(const AssembledSequence& y, const freq::FrequencySet& c,
                               double tol);

struct SupportWindow {
    std::int64_t m = 0;
    std::int64_t n = 0;
    std::int64_t transitions = 0;  // anchor-to-torus boundaries inside (m, n]
    double frequency = 0.0;        // transitions / (n - m)
};
struct SupportReport {
    std::vector<SupportWindow> windows;
    bool decreasing = false;  // frequency trend over the window list
};
SupportReport gen_measure_support_check(const AssembledSequence& y,
                                        const std::vector<std::pair<std::int64_t, std::int64_t>>& windows);

// Window classification against the anchor-prefix pattern: "block" when the
// center carries a torus symbol, "star" when the center is an anchor but the
// window meets a block, "none" on all-anchor windows.  q is the first torus
// offset in [-t, t] ("block": offset of the center's block start + 1).
struct XnqClass {
    enum class Kind { block, star, none } kind = Kind::none;
    std::int64_t q = 0;
};
XnqClass xnq_classify(const AssembledSequence& y, std::int64_t center, std::int64_t t);

struct ChainLink {
    std::string id;
    double measured = 0.0;
    double bound = 0.0;
    bool geq = true;  // false: measured must stay <= bound
    double margin = 0.0;
    bool pass = false;
};
struct ScaleChain {
    std::size_t index = 0;
    Scale scale;
    double m_i = 0.0;  // harmonic normalizer at N_i
    std::vector<ChainLink> links;
    bool pass = false;
};
struct ChainReport {
    double tau = 0.0;
    double sigma = 0.0;
    double beta = 0.0;  // chosen quadrant rotation
    std::vector<ScaleChain> per_scale;
    bool ladder_feasible = false;
    std::string ladder_note;
    double final_value = 0.0;  // last-scale log-average lower bound
    bool chain_pass = false;
    std::string fail_link;  // first failing link id, empty when passing
};
// Evaluates every displayed inequality of the lower-bound chain for the given
// +-1/0 signal (signal[m-1] = s(m)), scanning beta over the four quadrant
// rotations and keeping the best outcome.  Signals shorter than the last
// block's end are rejected.
ChainReport verify_lower_bound_chain(const BlockSpec& spec,
                                     std::span<const std::int8_t> signal);

// Block ladder correlated with the constant signal s = 1: frequencies at
// alpha0, phases 0, block ranges disjoint across scales, each scale's starts
// excluded below max(prev scale end, 256 H_i, N_i^sigma).
BlockSpec make_synthetic_spec(double tau, const std::vector<Scale>& scales, double alpha0,
                              Variant variant);

}  // namespace mulab::construct
