#include "corrspec/cyclotomic.hpp"

#include <cmath>
#include <sstream>

namespace corrspec {

namespace {

// reduce a length-p exponent vector mod Phi_p: omega^{p-1} = -(1 + ... + omega^{p-2})
std::vector<BigInt> reduce_mod_phi(std::uint32_t p, std::vector<BigInt> full) {
    std::vector<BigInt> out(p - 1);
    for (std::uint32_t k = 0; k + 1 < p; ++k) out[k] = full[k] - full[p - 1];
    return out;
}

int legendre(std::uint64_t a, std::uint64_t p) {
    a %= p;
    if (a == 0) return 0;
    std::uint64_t r = 1, b = a, e = (p - 1) / 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r == 1 ? 1 : -1;
}

} // namespace

CycInt CycInt::omega_pow(std::uint32_t p, std::uint32_t k) {
    if (k >= p) throw std::out_of_range("omega exponent must satisfy 0 <= k < p");
    CycInt out(p);
    if (k + 1 < p) {
        out.coeffs_[k] = 1;
    } else {
        for (auto& c : out.coeffs_) c = -1;
    }
    return out;
}

CycInt CycInt::from_integer(std::uint32_t p, BigInt value) {
    CycInt out(p);
    out.coeffs_[0] = std::move(value);
    return out;
}

CycInt CycInt::from_coeffs(std::uint32_t p, std::vector<BigInt> coeffs) {
    if (coeffs.size() != std::size_t(p) - 1)
        throw std::invalid_argument("reduced coefficient vector must have length p-1");
    CycInt out(p);
    out.coeffs_ = std::move(coeffs);
    return out;
}

CycInt CycInt::from_counts(std::uint32_t p, std::span<const std::int64_t> counts) {
    if (counts.size() != p) throw std::invalid_argument("histogram must have p buckets");
    CycInt out(p);
    for (std::uint32_t k = 0; k + 1 < p; ++k) out.coeffs_[k] = counts[k] - counts[p - 1];
    return out;
}

bool CycInt::is_zero() const {
    for (const auto& c : coeffs_)
        if (c != 0) return false;
    return true;
}

CycInt CycInt::operator+(const CycInt& rhs) const {
    if (p_ != rhs.p_) throw std::invalid_argument("mismatched cyclotomic orders");
    CycInt out(p_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] = coeffs_[i] + rhs.coeffs_[i];
    return out;
}

CycInt CycInt::operator-(const CycInt& rhs) const {
    if (p_ != rhs.p_) throw std::invalid_argument("mismatched cyclotomic orders");
    CycInt out(p_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] = coeffs_[i] - rhs.coeffs_[i];
    return out;
}

CycInt CycInt::operator-() const {
    CycInt out(p_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] = -coeffs_[i];
    return out;
}

CycInt CycInt::operator*(const CycInt& rhs) const {
    if (p_ != rhs.p_) throw std::invalid_argument("mismatched cyclotomic orders");
    // convolve, folding exponents mod p (omega^p = 1), then reduce mod Phi_p
    std::vector<BigInt> folded(p_);
    for (std::uint32_t i = 0; i + 1 < p_; ++i) {
        if (coeffs_[i] == 0) continue;
        for (std::uint32_t j = 0; j + 1 < p_; ++j) {
            if (rhs.coeffs_[j] == 0) continue;
            folded[(i + j) % p_] += coeffs_[i] * rhs.coeffs_[j];
        }
    }
    CycInt out(p_);
    out.coeffs_ = reduce_mod_phi(p_, std::move(folded));
    return out;
}

CycInt CycInt::conjugate() const {
    std::vector<BigInt> full(p_);
    for (std::uint32_t k = 0; k + 1 < p_; ++k) full[(p_ - k) % p_] += coeffs_[k];
    CycInt out(p_);
    out.coeffs_ = reduce_mod_phi(p_, std::move(full));
    return out;
}

CycInt CycInt::half() const {
    CycInt out(p_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] % 2 != 0) throw std::domain_error("cyclotomic halving of odd coefficient");
        out.coeffs_[i] = coeffs_[i] / 2;
    }
    return out;
}

std::complex<double> CycInt::to_complex(unsigned precision_bits) const {
    if (precision_bits < 53)
        throw std::invalid_argument("to_complex requires at least 53 precision bits");
    const long double two_pi = 6.283185307179586476925286766559L;
    long double re = 0, im = 0;
    for (std::uint32_t k = 0; k + 1 < p_; ++k) {
        if (coeffs_[k] == 0) continue;
        const long double c = coeffs_[k].convert_to<long double>();
        const long double ang = two_pi * k / p_;
        re += c * std::cos(ang);
        im += c * std::sin(ang);
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

double QuadValue::to_double(std::uint32_t p) const {
    return u.convert_to<double>() + v.convert_to<double>() * std::sqrt(double(p));
}

std::string QuadValue::str() const {
    return rational_to_string(u) + " " + rational_to_string(v);
}

QuadValue qv_mul(const QuadValue& a, const QuadValue& b, std::uint32_t p) {
    return {a.u * b.u + Rational(p) * a.v * b.v, a.u * b.v + a.v * b.u};
}

CycInt sqrt_p_element(std::uint32_t p) {
    if (p % 4 != 1) throw ParamError("sqrt_p_element requires p = 1 (mod 4)");
    std::vector<BigInt> full(p);
    for (std::uint32_t t = 1; t < p; ++t) full[t] = legendre(t, p);
    const CycInt g = CycInt::from_coeffs(p, reduce_mod_phi(p, std::move(full)));
    if (g * g != CycInt::from_integer(p, p))
        throw std::logic_error("Gauss sum sanity check failed: g*g != p");
    return g;
}

QuadValue recognize_quadratic(const CycInt& x) {
    const std::uint32_t p = x.p();
    if (p % 4 != 1) throw ParamError("recognition is defined for p = 1 (mod 4)");
    const CycInt g = sqrt_p_element(p);
    // x = u*1 + v*g: coefficient 0 is u + v g_0, coefficient k >= 1 is v g_k.
    std::uint32_t pivot = 0;
    for (std::uint32_t k = 1; k + 1 < p; ++k) {
        if (g.coeffs()[k] != 0) {
            pivot = k;
            break;
        }
    }
    if (pivot == 0) throw std::logic_error("degenerate Gauss sum coefficients");
    const Rational v(x.coeffs()[pivot], g.coeffs()[pivot]);
    const Rational u = Rational(x.coeffs()[0]) - v * Rational(g.coeffs()[0]);
    for (std::uint32_t k = 0; k + 1 < p; ++k) {
        Rational expect = v * Rational(g.coeffs()[k]);
        if (k == 0) expect += u;
        if (Rational(x.coeffs()[k]) != expect)
            throw NotInQuadraticField("cyclotomic value is not in Q(sqrt p)");
    }
    if (denominator(u) > 2 || denominator(v) > 2)
        throw std::logic_error("quadratic value with denominator beyond 2");
    return {u, v};
}

CycInt quadvalue_to_cyc(std::uint32_t p, const QuadValue& value) {
    const CycInt g = sqrt_p_element(p);
    std::vector<BigInt> coeffs(p - 1);
    for (std::uint32_t k = 0; k + 1 < p; ++k) {
        Rational c = value.v * Rational(g.coeffs()[k]);
        if (k == 0) c += value.u;
        if (denominator(c) != 1)
            throw std::domain_error("quadratic value is not a cyclotomic integer");
        coeffs[k] = numerator(c);
    }
    return CycInt::from_coeffs(p, std::move(coeffs));
}

std::string rational_to_string(const Rational& r) {
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1) os << "/" << denominator(r);
    return os.str();
}

Rational rational_from_string(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

} // namespace corrspec
