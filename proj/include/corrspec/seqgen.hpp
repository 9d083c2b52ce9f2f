#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "corrspec/common.hpp"
#include "corrspec/cyclotomic.hpp"
#include "corrspec/ffield.hpp"

namespace corrspec {

/// Validated parameter set for the decimation family d = (p^m+1)^2/(2(p^e+1))
/// with p = 1 (mod 4), m odd, e | m, n = 2m.
struct SeqParams {
    std::uint32_t p = 0;
    unsigned m = 0;
    unsigned e = 0;
    unsigned n = 0;            // 2m
    std::uint64_t d = 0;       // (p^m+1)^2 / (2(p^e+1)), always an odd integer
    std::uint64_t period = 0;  // p^n - 1
    std::uint64_t gcd_dn = 0;  // gcd(d, p^n - 1) = (p^m+1)/2, odd

    std::uint64_t p_pow(unsigned k) const; // p^k as u64
};

/// Checks every constraint and identity the construction relies on; throws
/// ParamError naming the violated one.
SeqParams validate_params(std::uint64_t p, unsigned m, unsigned e);

/// The m-sequence s_t = Tr^n_1(alpha^t), one full period.
struct MSeq {
    std::vector<std::uint32_t> values;
};

MSeq m_sequence(const SeqParams& params, const Field& field);

/// t -> s_{(d t) mod period}, one full period of the underlying index range.
std::vector<std::uint32_t> decimated_sequence(const MSeq& seq, std::uint64_t d);

/// Smallest q >= 1 with v[t] == v[(t+q) mod len] for all t (q divides len).
std::uint64_t least_period(std::span<const std::uint32_t> values);

/// Owns one period of {s_t} and {s_dt} plus the complex omega table for the
/// float route. Immutable after construction; shift evaluations are pure.
class CrossCorrelator {
public:
    CrossCorrelator(const Field& field, const SeqParams& params);

    const SeqParams& params() const { return params_; }
    const MSeq& sequence() const { return seq_; }
    std::span<const std::uint32_t> decimated() const { return dec_; }

    /// Histogram over t of (s_{t+tau} - s_{dt}) mod p.
    std::vector<std::int64_t> exponent_histogram(std::uint64_t tau) const;
    /// C_d(tau) as an exact cyclotomic integer.
    CycInt direct(std::uint64_t tau) const;
    /// Float route through a precomputed table of the p complex roots of
    /// unity; the performance baseline the exact path is checked against.
    std::complex<double> direct_float(std::uint64_t tau) const;

private:
    SeqParams params_;
    MSeq seq_;
    std::vector<std::uint32_t> dec_;
    std::vector<std::complex<double>> omega_;
};

/// Writes "# p m e n d period" then one residue per line.
std::string sequence_export_text(const SeqParams& params, std::span<const std::uint32_t> values);

} // namespace corrspec
