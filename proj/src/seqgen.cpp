#include "corrspec/seqgen.hpp"

#include <limits>
#include <numeric>
#include <sstream>

namespace corrspec {

namespace {

bool is_prime_u64(std::uint64_t v) {
    if (v < 2) return false;
    for (std::uint64_t d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

} // namespace

std::uint64_t SeqParams::p_pow(unsigned k) const {
    std::uint64_t out = 1;
    for (unsigned i = 0; i < k; ++i) out *= p;
    return out;
}

SeqParams validate_params(std::uint64_t p, unsigned m, unsigned e) {
    if (!is_prime_u64(p)) throw ParamError("p must be prime (got " + std::to_string(p) + ")");
    if (p % 4 != 1)
        throw ParamError("p = 1 (mod 4) is required (got p = " + std::to_string(p) + " = " +
                         std::to_string(p % 4) + " mod 4)");
    if (m == 0 || m % 2 == 0) throw ParamError("m must be a positive odd integer (got " +
                                               std::to_string(m) + ")");
    if (e == 0 || m % e != 0)
        throw ParamError("e must be a positive divisor of m (got e = " + std::to_string(e) +
                         ", m = " + std::to_string(m) + ")");

    const unsigned n = 2 * m;
    BigInt pm = 1, pe = 1, pn = 1;
    for (unsigned i = 0; i < m; ++i) pm *= p;
    for (unsigned i = 0; i < e; ++i) pe *= p;
    for (unsigned i = 0; i < n; ++i) pn *= p;

    const BigInt num = (pm + 1) * (pm + 1);
    const BigInt den = 2 * (pe + 1);
    if (num % den != 0)
        throw ParamError("decimation d = (p^m+1)^2 / (2(p^e+1)) is not an integer for these parameters");
    const BigInt d_big = num / den;
    const BigInt period_big = pn - 1;
    if (period_big > std::numeric_limits<std::uint64_t>::max() ||
        d_big > std::numeric_limits<std::uint64_t>::max())
        throw ParamError("parameters overflow the supported desk-scale range");

    SeqParams out;
    out.p = static_cast<std::uint32_t>(p);
    out.m = m;
    out.e = e;
    out.n = n;
    out.d = d_big.convert_to<std::uint64_t>();
    out.period = period_big.convert_to<std::uint64_t>();
    out.gcd_dn = std::gcd(out.d, out.period);

    // identities this whole construction stands on; violations would mean a
    // broken derivation, not bad user input
    const BigInt expected_gcd = (pm + 1) / 2;
    if (BigInt(out.gcd_dn) != expected_gcd)
        throw std::logic_error("gcd(d, p^n-1) != (p^m+1)/2");
    if (out.d % 2 == 0 || out.gcd_dn % 2 == 0)
        throw std::logic_error("d and (p^m+1)/2 must both be odd for p = 1 (mod 4)");
    BigInt pme = 1;
    for (unsigned i = 0; i < m + e; ++i) pme *= p;
    if ((d_big * (pme + 1)) % period_big != (pm + 1) % period_big)
        throw std::logic_error("congruence d(p^{m+e}+1) = p^m+1 (mod p^n-1) failed");
    return out;
}

MSeq m_sequence(const SeqParams& params, const Field& field) {
    if (field.p() != params.p || field.n() != params.n)
        throw std::invalid_argument("field does not match parameters (need GF(p^{2m}))");
    MSeq out;
    out.values.resize(params.period);
    if (!field.trace_table().empty()) {
        const auto tr = field.trace_table();
        std::copy(tr.begin(), tr.end(), out.values.begin());
    } else {
        for (std::uint64_t t = 0; t < params.period; ++t)
            out.values[t] = field.trace_to_prime(field.alpha_pow(t));
    }
    return out;
}

std::vector<std::uint32_t> decimated_sequence(const MSeq& seq, std::uint64_t d) {
    const std::uint64_t N = seq.values.size();
    std::vector<std::uint32_t> out(N);
    const std::uint64_t dr = d % N;
    std::uint64_t idx = 0;
    for (std::uint64_t t = 0; t < N; ++t) {
        out[t] = seq.values[idx];
        idx += dr;
        if (idx >= N) idx -= N;
    }
    return out;
}

std::uint64_t least_period(std::span<const std::uint32_t> values) {
    const std::uint64_t N = values.size();
    for (std::uint64_t q = 1; q <= N; ++q) {
        if (N % q != 0) continue;
        bool ok = true;
        for (std::uint64_t t = 0; t + q < N && ok; ++t)
            if (values[t] != values[t + q]) ok = false;
        if (ok) return q;
    }
    return N;
}

CrossCorrelator::CrossCorrelator(const Field& field, const SeqParams& params)
    : params_(params), seq_(m_sequence(params, field)), dec_(decimated_sequence(seq_, params.d)) {
    omega_.resize(params_.p);
    const double two_pi = 6.283185307179586;
    for (std::uint32_t j = 0; j < params_.p; ++j)
        omega_[j] = std::polar(1.0, two_pi * j / params_.p);
}

std::vector<std::int64_t> CrossCorrelator::exponent_histogram(std::uint64_t tau) const {
    const std::uint64_t N = params_.period;
    if (tau >= N) throw std::out_of_range("shift tau must lie in [0, p^n - 2]");
    const std::uint32_t p = params_.p;
    std::vector<std::int64_t> counts(p, 0);
    const std::uint32_t* s = seq_.values.data();
    const std::uint32_t* sd = dec_.data();
    std::uint64_t idx = tau;
    for (std::uint64_t t = 0; t < N; ++t) {
        std::uint32_t diff = s[idx] + p - sd[t];
        if (diff >= p) diff -= p;
        ++counts[diff];
        if (++idx == N) idx = 0;
    }
    return counts;
}

CycInt CrossCorrelator::direct(std::uint64_t tau) const {
    return CycInt::from_counts(params_.p, exponent_histogram(tau));
}

std::complex<double> CrossCorrelator::direct_float(std::uint64_t tau) const {
    const auto counts = exponent_histogram(tau);
    std::complex<double> acc{0.0, 0.0};
    for (std::uint32_t j = 0; j < params_.p; ++j)
        acc += static_cast<double>(counts[j]) * omega_[j];
    return acc;
}

std::string sequence_export_text(const SeqParams& params, std::span<const std::uint32_t> values) {
    std::ostringstream os;
    os << "# " << params.p << " " << params.m << " " << params.e << " " << params.n << " "
       << params.d << " " << params.period << "\n";
    for (auto v : values) os << v << "\n";
    return os.str();
}

} // namespace corrspec
