#pragma once
// Mobius function tables and the two averaging operators used throughout:
// the Cesaro mean (1/N) sum_{n<=N} a_n and the logarithmic mean
// (1/M_N) sum_{n<=N} a_n/n with M_N = sum_{n<=N} 1/n.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mulab/util.hpp"

namespace mulab::arith {

enum class AverageKind { cesaro, logarithmic };

std::string to_string(AverageKind k);
AverageKind average_kind_from_string(const std::string& s);

// mu values over an inclusive integer range [lo, hi], 1 <= lo <= hi.
class MobiusTable {
  public:
    MobiusTable(std::int64_t lo, std::int64_t hi, std::vector<std::int8_t> values);

    std::int64_t lo() const { return lo_; }
    std::int64_t hi() const { return hi_; }
    int value(std::int64_t n) const;  // throws std::out_of_range outside [lo,hi]
    std::span<const std::int8_t> values() const { return values_; }

    // Binary layout: 8-byte header = uint32 lo, uint32 hi (little endian),
    // then (hi-lo+1) signed bytes in {-1,0,1}.
    void export_binary(const std::filesystem::path& p) const;
    static MobiusTable import_binary(const std::filesystem::path& p);

    // CSV with columns n,mu.
    void export_csv(const std::filesystem::path& p, char sep = ',') const;

  private:
    std::int64_t lo_, hi_;
    std::vector<std::int8_t> values_;
};

// Segmented sieve; memory stays O(block) + primes up to sqrt(hi).
MobiusTable sieve_mobius(std::int64_t lo, std::int64_t hi,
                         std::size_t block = std::size_t(1) << 20);

// Harmonic sum M_N = sum_{n<=N} 1/n, compensated.
double harmonic_sum(std::int64_t n);

// Average of seq(n) for n = 1..N under the requested kind.  Compensated
// summation in ascending n.  |result| <= max |seq| for either kind.
cplx weighted_average(const std::function<cplx(std::int64_t)>& seq, std::int64_t n_max,
                      AverageKind kind);

// Two-point correlation sum with shifts h1 < h2, reported under both
// normalizations of the logarithmically weighted sum.
struct ChowlaSum {
    double log_normalized;       // (1/ln N)   sum mu(n+h1)mu(n+h2)/n
    double harmonic_normalized;  // (1/M_N)    sum mu(n+h1)mu(n+h2)/n
    std::int64_t n_max;
};

ChowlaSum chowla_log_sum(const MobiusTable& mob, std::int64_t h1, std::int64_t h2,
                         std::int64_t n_max);

// |average of mu(n) e(n alpha)| under the requested averaging.
double exponential_sum_abs(const MobiusTable& mob, double alpha, std::int64_t n_max,
                           AverageKind kind);

}  // namespace mulab::arith
