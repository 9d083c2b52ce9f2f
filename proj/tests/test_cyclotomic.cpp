#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "corrspec/cyclotomic.hpp"

using namespace corrspec;

namespace {

CycInt random_cyc(std::uint32_t p, std::mt19937_64& rng, int span = 20) {
    std::vector<BigInt> coeffs(p - 1);
    for (auto& c : coeffs) c = BigInt(static_cast<long>(rng() % (2 * span + 1)) - span);
    return CycInt::from_coeffs(p, std::move(coeffs));
}

} // namespace

TEST_CASE("omega powers and the full character sum") {
    const CycInt w0 = CycInt::omega_pow(5, 0);
    CHECK(w0.coeffs() == std::vector<BigInt>{1, 0, 0, 0});
    const CycInt w4 = CycInt::omega_pow(5, 4);
    CHECK(w4.coeffs() == std::vector<BigInt>{-1, -1, -1, -1});

    CycInt sum(5);
    for (std::uint32_t k = 0; k < 5; ++k) sum = sum + CycInt::omega_pow(5, k);
    CHECK(sum.is_zero());

    CHECK_THROWS_AS(CycInt::omega_pow(5, 5), std::out_of_range);
}

TEST_CASE("ring identities") {
    const CycInt w = CycInt::omega_pow(5, 1);
    const CycInt w4 = CycInt::omega_pow(5, 4);
    CHECK(w * w4 == CycInt::from_integer(5, 1)); // omega^5 = 1

    const CycInt zero(5);
    const CycInt one = CycInt::from_integer(5, 1);
    CHECK((one + w) * zero == zero);

    std::mt19937_64 rng(42);
    for (std::uint32_t p : {5u, 13u}) {
        for (int i = 0; i < 50; ++i) {
            const CycInt a = random_cyc(p, rng), b = random_cyc(p, rng), c = random_cyc(p, rng);
            CHECK(a * b == b * a);
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
        }
    }
    CHECK_THROWS_AS((void)(CycInt(5) + CycInt(13)), std::invalid_argument);
}

TEST_CASE("reduction is numerically sound") {
    std::mt19937_64 rng(4242);
    for (int i = 0; i < 100; ++i) {
        const CycInt a = random_cyc(13, rng), b = random_cyc(13, rng);
        const auto prod = (a * b).to_complex();
        const auto direct = a.to_complex() * b.to_complex();
        CHECK(std::abs(prod - direct) <= 1e-9 * (1.0 + std::abs(direct)));
    }
}

TEST_CASE("conjugation and reality") {
    const CycInt w = CycInt::omega_pow(5, 1);
    CHECK_FALSE(w.is_real());
    CHECK(w.conjugate() == CycInt::omega_pow(5, 4));
    // omega + omega^4 = golden-ratio-like real number
    const CycInt real = w + CycInt::omega_pow(5, 4);
    CHECK(real.is_real());
    const auto z = real.to_complex();
    CHECK(std::abs(z.imag()) < 1e-12);
    CHECK(z.real() == doctest::Approx(0.6180339887498949).epsilon(1e-12));
}

TEST_CASE("Gauss sum sqrt(p)") {
    const CycInt g5 = sqrt_p_element(5);
    CHECK(g5.coeffs() == std::vector<BigInt>{-1, 0, -2, -2});
    CHECK(g5 * g5 == CycInt::from_integer(5, 5));
    const auto z = g5.to_complex();
    CHECK(z.real() == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
    CHECK(std::abs(z.imag()) < 1e-12);

    for (std::uint32_t p : {13u, 17u, 29u}) {
        const CycInt g = sqrt_p_element(p);
        CHECK(g * g == CycInt::from_integer(p, p));
    }
    CHECK_THROWS_AS(sqrt_p_element(7), ParamError);
}

TEST_CASE("recognition into Q(sqrt p)") {
    const CycInt five = CycInt::from_integer(5, 5);
    CHECK(recognize_quadratic(five) == QuadValue{Rational(5), Rational(0)});
    CHECK(recognize_quadratic(sqrt_p_element(5)) == QuadValue{Rational(0), Rational(1)});
    CHECK_THROWS_AS(recognize_quadratic(CycInt::omega_pow(5, 1)), NotInQuadraticField);
    CHECK_THROWS_AS(recognize_quadratic(CycInt::omega_pow(13, 3)), NotInQuadraticField);
}

TEST_CASE("recognize is a left inverse of reconstruction on half-integers") {
    std::mt19937_64 rng(99);
    for (std::uint32_t p : {5u, 13u}) {
        for (int i = 0; i < 200; ++i) {
            // u, v with denominator 1 or 2 and matching parity so that
            // u + v g stays integral: numerators congruent mod 2
            const long un = static_cast<long>(rng() % 41) - 20;
            long vn = static_cast<long>(rng() % 41) - 20;
            if (((un ^ vn) & 1) != 0) ++vn; // same parity
            const QuadValue q{Rational(un, 2), Rational(vn, 2)};
            const CycInt x = quadvalue_to_cyc(p, q);
            CHECK(recognize_quadratic(x) == q);
        }
    }
    // a value outside Z[omega] is rejected: u = 1/2, v = 0
    CHECK_THROWS_AS(quadvalue_to_cyc(5, QuadValue{Rational(1, 2), Rational(0)}),
                    std::domain_error);
}

TEST_CASE("half") {
    const CycInt two = CycInt::from_integer(5, 2);
    CHECK(two.half() == CycInt::from_integer(5, 1));
    CHECK_THROWS_AS(CycInt::from_integer(5, 3).half(), std::domain_error);
}

TEST_CASE("to_complex guards and quadvalue evaluation") {
    CHECK_THROWS_AS(CycInt::from_integer(5, 1).to_complex(32), std::invalid_argument);
    const auto one = CycInt::from_integer(5, 1).to_complex();
    CHECK(one.real() == doctest::Approx(1.0));
    CHECK(one.imag() == doctest::Approx(0.0));

    const QuadValue q{Rational(3, 2), Rational(5, 2)};
    CHECK(q.to_double(5) == doctest::Approx(1.5 + 2.5 * std::sqrt(5.0)).epsilon(1e-14));
    CHECK(qv_mul(q, q, 5) == QuadValue{Rational(9, 4) + Rational(125, 4), Rational(15, 2)});
}
