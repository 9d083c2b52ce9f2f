#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "corrspec/common.hpp"

namespace corrspec {

/// Exact element of Z[omega], omega a primitive complex p-th root of unity,
/// in the power basis omega^0 .. omega^{p-2} reduced mod the p-th cyclotomic
/// polynomial 1 + x + ... + x^{p-1}. The representation is unique, so
/// equality is coefficient equality. Immutable value type.
class CycInt {
public:
    explicit CycInt(std::uint32_t p) : p_(p), coeffs_(p - 1) {}

    static CycInt omega_pow(std::uint32_t p, std::uint32_t k);
    static CycInt from_integer(std::uint32_t p, BigInt value);
    /// Already-reduced coefficients of omega^0 .. omega^{p-2}.
    static CycInt from_coeffs(std::uint32_t p, std::vector<BigInt> coeffs);
    /// sum over j of counts[j] * omega^j for a length-p histogram.
    static CycInt from_counts(std::uint32_t p, std::span<const std::int64_t> counts);

    std::uint32_t p() const { return p_; }
    const std::vector<BigInt>& coeffs() const { return coeffs_; }

    CycInt operator+(const CycInt& rhs) const;
    CycInt operator-(const CycInt& rhs) const;
    CycInt operator-() const;
    CycInt operator*(const CycInt& rhs) const;
    bool operator==(const CycInt& rhs) const { return p_ == rhs.p_ && coeffs_ == rhs.coeffs_; }
    bool operator!=(const CycInt& rhs) const { return !(*this == rhs); }

    /// Image under omega -> omega^{-1} (complex conjugation).
    CycInt conjugate() const;
    /// Fixed by conjugation, i.e. a real number.
    bool is_real() const { return conjugate() == *this; }
    bool is_zero() const;

    /// Divides all coefficients by 2; throws std::domain_error if any is odd.
    CycInt half() const;

    /// Numeric evaluation sum coeffs[k] e^{2 pi i k / p}. precision_bits >= 53
    /// is required; accumulation runs in long double, so the honored precision
    /// tops out at the 64-bit significand.
    std::complex<double> to_complex(unsigned precision_bits = 53) const;

private:
    std::uint32_t p_;
    std::vector<BigInt> coeffs_; // length p-1
};

/// The real number u + v*sqrt(p); exact rational components. Every value the
/// pipeline produces has u, v with denominator dividing 2.
struct QuadValue {
    Rational u;
    Rational v;

    bool operator==(const QuadValue&) const = default;
    QuadValue operator+(const QuadValue& r) const { return {u + r.u, v + r.v}; }
    QuadValue operator-(const QuadValue& r) const { return {u - r.u, v - r.v}; }
    QuadValue operator-() const { return {-u, -v}; }

    double to_double(std::uint32_t p) const;
    std::string str() const; // "u v" with exact rationals
};

/// (u1 + v1 sqrt p)(u2 + v2 sqrt p)
QuadValue qv_mul(const QuadValue& a, const QuadValue& b, std::uint32_t p);

/// The quadratic Gauss sum g = sum eta_p(t) omega^t over t in [1, p); for
/// p = 1 (mod 4) this is the positive square root of p, and g*g == p is
/// checked on every construction.
CycInt sqrt_p_element(std::uint32_t p);

/// Writes x as u + v*g exactly (g = sqrt_p_element); solves two coefficient
/// positions and verifies every coordinate. Throws NotInQuadraticField when
/// x does not lie in Q(sqrt p).
QuadValue recognize_quadratic(const CycInt& x);

/// Reconstructs the CycInt u + v*g; throws std::domain_error when the
/// resulting coefficients are not integers (value outside Z[omega]).
CycInt quadvalue_to_cyc(std::uint32_t p, const QuadValue& value);

} // namespace corrspec
