#include "mulab/arith.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace mulab::arith {

std::string to_string(AverageKind k) {
    return k == AverageKind::cesaro ? "cesaro" : "logarithmic";
}

AverageKind average_kind_from_string(const std::string& s) {
    if (s == "cesaro") return AverageKind::cesaro;
    if (s == "logarithmic" || s == "log") return AverageKind::logarithmic;
    throw std::invalid_argument("unknown average kind: " + s);
}

MobiusTable::MobiusTable(std::int64_t lo, std::int64_t hi, std::vector<std::int8_t> values)
    : lo_(lo), hi_(hi), values_(std::move(values)) {
    if (lo < 1 || hi < lo)
        throw std::invalid_argument("MobiusTable: need 1 <= lo <= hi");
    if (values_.size() != std::size_t(hi - lo + 1))
        throw std::invalid_argument("MobiusTable: value count does not match range");
}

int MobiusTable::value(std::int64_t n) const {
    if (n < lo_ || n > hi_)
        throw std::out_of_range("MobiusTable: index " + std::to_string(n) + " outside [" +
                                std::to_string(lo_) + "," + std::to_string(hi_) + "]");
    return values_[std::size_t(n - lo_)];
}

void MobiusTable::export_binary(const std::filesystem::path& p) const {
    if (lo_ > 0xffffffffLL || hi_ > 0xffffffffLL)
        throw std::invalid_argument("mobius binary export: range exceeds uint32 header");
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for write: " + p.string());
    std::uint32_t header[2] = {std::uint32_t(lo_), std::uint32_t(hi_)};
    // little-endian on all supported targets
    out.write(reinterpret_cast<const char*>(header), 8);
    out.write(reinterpret_cast<const char*>(values_.data()),
              std::streamsize(values_.size()));
    if (!out) throw std::runtime_error("short write: " + p.string());
}

MobiusTable MobiusTable::import_binary(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for read: " + p.string());
    std::uint32_t header[2];
    in.read(reinterpret_cast<char*>(header), 8);
    if (!in) throw std::runtime_error("truncated mobius table header: " + p.string());
    std::int64_t lo = header[0], hi = header[1];
    if (lo < 1 || hi < lo) throw std::runtime_error("corrupt mobius table header");
    std::vector<std::int8_t> v(std::size_t(hi - lo + 1));
    in.read(reinterpret_cast<char*>(v.data()), std::streamsize(v.size()));
    if (!in) throw std::runtime_error("truncated mobius table payload: " + p.string());
    return MobiusTable(lo, hi, std::move(v));
}

void MobiusTable::export_csv(const std::filesystem::path& p, char sep) const {
    std::FILE* f = std::fopen(p.string().c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open for write: " + p.string());
    std::fprintf(f, "n%cmu\n", sep);
    for (std::int64_t n = lo_; n <= hi_; ++n)
        std::fprintf(f, "%lld%c%d\n", static_cast<long long>(n), sep,
                     int(values_[std::size_t(n - lo_)]));
    std::fclose(f);
}

namespace {

std::vector<std::int64_t> primes_up_to(std::int64_t n) {
    std::vector<std::int64_t> primes;
    if (n < 2) return primes;
    std::vector<bool> comp(std::size_t(n + 1), false);
    for (std::int64_t i = 2; i <= n; ++i) {
        if (!comp[std::size_t(i)]) {
            primes.push_back(i);
            for (std::int64_t j = i * i; j <= n; j += i) comp[std::size_t(j)] = true;
        }
    }
    return primes;
}

}  // namespace

MobiusTable sieve_mobius(std::int64_t lo, std::int64_t hi, std::size_t block) {
    if (lo < 1 || hi < lo) throw std::invalid_argument("sieve_mobius: need 1 <= lo <= hi");
    if (block == 0) throw std::invalid_argument("sieve_mobius: block must be positive");

    const std::int64_t root = std::int64_t(std::sqrt(double(hi))) + 1;
    const auto primes = primes_up_to(root);

    std::vector<std::int8_t> out(std::size_t(hi - lo + 1));
    std::vector<std::int8_t> sign;
    std::vector<std::int64_t> rem;

    for (std::int64_t a = lo; a <= hi; a += std::int64_t(block)) {
        const std::int64_t b = std::min(hi, a + std::int64_t(block) - 1);
        const std::size_t len = std::size_t(b - a + 1);
        sign.assign(len, 1);
        rem.resize(len);
        for (std::size_t i = 0; i < len; ++i) rem[i] = a + std::int64_t(i);

        for (std::int64_t p : primes) {
            if (p * p > b) break;
            // one factor of p flips the sign and divides the residual
            std::int64_t first = ((a + p - 1) / p) * p;
            for (std::int64_t m = first; m <= b; m += p) {
                std::size_t i = std::size_t(m - a);
                sign[i] = std::int8_t(-sign[i]);
                rem[i] /= p;
            }
            // square divisor kills the value
            const std::int64_t p2 = p * p;
            first = ((a + p2 - 1) / p2) * p2;
            for (std::int64_t m = first; m <= b; m += p2) sign[std::size_t(m - a)] = 0;
        }
        for (std::size_t i = 0; i < len; ++i) {
            std::int8_t s = sign[i];
            if (s != 0 && rem[i] > 1) s = std::int8_t(-s);  // leftover prime > sqrt(hi)
            out[std::size_t(a - lo) + i] = s;
        }
    }
    return MobiusTable(lo, hi, std::move(out));
}

double harmonic_sum(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("harmonic_sum: n >= 1 required");
    KahanSum s;
    for (std::int64_t k = 1; k <= n; ++k) s.add(1.0 / double(k));
    return s.value();
}

cplx weighted_average(const std::function<cplx(std::int64_t)>& seq, std::int64_t n_max,
                      AverageKind kind) {
    if (n_max < 1) throw std::invalid_argument("weighted_average: N >= 1 required");
    KahanSumC acc;
    if (kind == AverageKind::cesaro) {
        for (std::int64_t n = 1; n <= n_max; ++n) acc.add(seq(n));
        return acc.value() / double(n_max);
    }
    KahanSum mass;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        const double w = 1.0 / double(n);
        acc.add(seq(n) * w);
        mass.add(w);
    }
    return acc.value() / mass.value();
}

ChowlaSum chowla_log_sum(const MobiusTable& mob, std::int64_t h1, std::int64_t h2,
                         std::int64_t n_max) {
    if (h1 < 0 || h1 >= h2)
        throw std::invalid_argument("chowla_log_sum: need 0 <= h1 < h2");
    if (n_max < 1) throw std::invalid_argument("chowla_log_sum: N >= 1 required");
    if (mob.lo() > 1 + h1 || mob.hi() < n_max + h2)
        throw std::invalid_argument("chowla_log_sum: table must cover [1+h1, N+h2]");

    KahanSum acc, mass;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        const double w = 1.0 / double(n);
        acc.add(double(mob.value(n + h1) * mob.value(n + h2)) * w);
        mass.add(w);
    }
    ChowlaSum r;
    r.n_max = n_max;
    const double s = acc.value();
    r.log_normalized = (n_max == 1) ? s : s / std::log(double(n_max));
    r.harmonic_normalized = s / mass.value();
    return r;
}

double exponential_sum_abs(const MobiusTable& mob, double alpha, std::int64_t n_max,
                           AverageKind kind) {
    if (mob.lo() > 1 || mob.hi() < n_max)
        throw std::invalid_argument("exponential_sum_abs: table must cover [1, N]");
    cplx avg = weighted_average(
        [&](std::int64_t n) { return double(mob.value(n)) * unit(alpha * double(n)); },
        n_max, kind);
    return std::abs(avg);
}

}  // namespace mulab::arith
