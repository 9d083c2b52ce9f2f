#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "corrspec/ffield.hpp"

using namespace corrspec;

namespace {

const Field& gf25() {
    static Field f = Field::build(5, 2);
    return f;
}

const Field& gf5_6() {
    static Field f = Field::build(5, 6);
    return f;
}

} // namespace

TEST_CASE("canonical modulus search") {
    // first primitive polynomial of degree 2 over F_5 in the coefficient
    // ordering: x^2 + x + 2 (x^2+1 .. x^2+x+1 all fail)
    CHECK(gf25().modulus() == std::vector<std::uint32_t>{2, 1, 1});
    CHECK(gf25().modulus_string() == "x^2 + x + 2");
    CHECK(gf25().order() == 24);

    // GF(5^6): x^6 + x + 2
    CHECK(gf5_6().modulus() == std::vector<std::uint32_t>{2, 1, 0, 0, 0, 0, 1});

    // GF(13^2): x^2 + x + 2 as well
    Field f13 = Field::build(13, 2);
    CHECK(f13.modulus() == std::vector<std::uint32_t>{2, 1, 1});
}

TEST_CASE("prime field generator is the least primitive root") {
    Field f = Field::build(5, 1);
    CHECK(f.generator().coords()[0] == 2);
    Field f13 = Field::build(13, 1);
    CHECK(f13.generator().coords()[0] == 2);
    Field f17 = Field::build(17, 1);
    CHECK(f17.generator().coords()[0] == 3); // 2 has order 8 mod 17
}

TEST_CASE("build rejects bad inputs") {
    CHECK_THROWS_AS(Field::build(4, 2), ParamError);
    CHECK_THROWS_AS(Field::build(5, 0), ParamError);
    CHECK_THROWS_AS(Field::build(5, 30), CapError); // 5^30 over any sane cap
    FieldBuildOptions small;
    small.cap = 10;
    CHECK_THROWS_AS(Field::build(5, 2, small), CapError);
}

TEST_CASE("determinism") {
    Field a = Field::build(5, 2);
    Field b = Field::build(5, 2);
    CHECK(a.modulus() == b.modulus());
    for (std::uint64_t k = 0; k < a.order(); ++k)
        CHECK(a.encode(a.alpha_pow(k)) == b.encode(b.alpha_pow(k)));
}

TEST_CASE("GF(25) arithmetic facts") {
    const Field& f = gf25();
    const FieldElem a = f.generator();
    // alpha^2 = -alpha - 2 = 4 alpha + 3
    CHECK((a * a).coords() == std::vector<std::uint32_t>{3, 4});
    // alpha^6 = 2
    CHECK(a.pow(6) == f.from_residue(2));
    CHECK(f.dlog(f.from_residue(2)) == 6);
    CHECK(f.dlog(f.one()) == 0);
}

TEST_CASE("inverses and field errors") {
    const Field& f = gf25();
    for (std::uint64_t k = 0; k < f.order(); ++k) {
        const FieldElem x = f.alpha_pow(k);
        CHECK(x * x.inv() == f.one());
    }
    CHECK_THROWS_AS(f.zero().inv(), std::domain_error);
    CHECK_THROWS_AS(f.dlog(f.zero()), std::domain_error);

    Field other = Field::build(5, 2);
    CHECK_THROWS_AS((void)(f.one() + other.one()), std::invalid_argument);
}

TEST_CASE("dlog round-trip") {
    const Field& f = gf25();
    for (std::uint64_t k = 0; k < f.order(); ++k) CHECK(f.dlog(f.alpha_pow(k)) == k);
    const Field& big = gf5_6();
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        const std::uint64_t k = rng() % big.order();
        CHECK(big.dlog(big.alpha_pow(k)) == k);
    }
}

TEST_CASE("table multiplication matches polynomial multiplication") {
    const Field& f = gf5_6();
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        const FieldElem x = f.alpha_pow(rng() % f.order());
        const FieldElem y = f.alpha_pow(rng() % f.order());
        CHECK((x * y).coords() == f.poly_mul(x.coords(), y.coords()));
        const std::uint64_t e = rng() % 100000;
        CHECK(x.pow(e).coords() == f.poly_pow(x.coords(), e));
    }
}

TEST_CASE("trace values and linearity") {
    const Field& f = gf25();
    // Tr^2_1(alpha) = alpha + alpha^5 = 4 (negative of the linear coefficient)
    CHECK(f.trace_to_prime(f.generator()) == 4);
    CHECK(f.trace_to_prime(f.zero()) == 0);
    // Tr^2_1(1) = 2
    CHECK(f.trace_to_prime(f.one()) == 2);

    const Field& big = gf5_6();
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
        const FieldElem x = big.alpha_pow(rng() % big.order());
        const FieldElem y = big.alpha_pow(rng() % big.order());
        const std::uint32_t ca = static_cast<std::uint32_t>(rng() % 5);
        const std::uint32_t cb = static_cast<std::uint32_t>(rng() % 5);
        const FieldElem lhs = big.from_residue(ca) * x + big.from_residue(cb) * y;
        const std::uint32_t want =
            (ca * big.trace_to_prime(x) + cb * big.trace_to_prime(y)) % 5;
        CHECK(big.trace_to_prime(lhs) == want);
    }
}

TEST_CASE("trace transitivity over every divisor chain of GF(5^6)") {
    const Field& f = gf5_6();
    const unsigned n = 6;
    std::vector<std::pair<unsigned, unsigned>> chains; // (e, m) with e | m | n
    for (unsigned m = 1; m <= n; ++m) {
        if (n % m) continue;
        for (unsigned e = 1; e <= m; ++e)
            if (m % e == 0) chains.push_back({e, m});
    }
    for (std::uint64_t idx = 0; idx < f.size(); ++idx) {
        const FieldElem x = f.decode(idx);
        const FieldElem full = f.trace(x, 1);
        for (auto [e, m] : chains) {
            const FieldElem stepped = f.trace(f.trace(f.trace(x, m), e), 1);
            CHECK(stepped == full);
        }
    }
}

TEST_CASE("trace lands in the subfield") {
    const Field& f = gf5_6();
    std::mt19937_64 rng(17);
    for (int i = 0; i < 100; ++i) {
        const FieldElem x = f.alpha_pow(rng() % f.order());
        for (unsigned m : {1u, 2u, 3u}) {
            const FieldElem t = f.trace(x, m);
            CHECK(f.in_subfield(t, m));
        }
    }
    CHECK_THROWS_AS(f.trace(f.one(), 4), std::invalid_argument);
}

TEST_CASE("quadratic character") {
    const Field& f = gf25();
    CHECK(f.quad_char(f.zero()) == 0);
    CHECK(f.quad_char(f.generator()) == -1);
    CHECK(f.quad_char(f.generator() * f.generator()) == 1);

    // multiplicativity and square count, exhaustively on GF(25) and GF(169)
    auto check_field = [](const Field& g) {
        int plus = 0;
        for (std::uint64_t k = 0; k < g.order(); ++k)
            if (g.quad_char(g.alpha_pow(k)) == 1) ++plus;
        CHECK(plus == static_cast<int>(g.order() / 2));
        std::mt19937_64 rng(19);
        for (int i = 0; i < 100; ++i) {
            const FieldElem x = g.alpha_pow(rng() % g.order());
            const FieldElem y = g.alpha_pow(rng() % g.order());
            CHECK(g.quad_char(x * y) == g.quad_char(x) * g.quad_char(y));
        }
    };
    check_field(gf25());
    const Field f169 = Field::build(13, 2);
    check_field(f169);
}

TEST_CASE("frobenius fixes the prime field and iterates") {
    const Field& f = gf5_6();
    std::mt19937_64 rng(23);
    for (int i = 0; i < 50; ++i) {
        const FieldElem x = f.alpha_pow(rng() % f.order());
        CHECK(x.frobenius(6) == x);                       // full Frobenius orbit
        CHECK(x.frobenius(1).frobenius(2) == x.frobenius(3));
    }
    for (std::uint32_t r = 0; r < 5; ++r) {
        const FieldElem c = f.from_residue(r);
        CHECK(c.frobenius(1) == c);
    }
}

TEST_CASE("no-dlog mode still does arithmetic") {
    FieldBuildOptions opts;
    opts.with_dlog = false;
    Field f = Field::build(5, 2, opts);
    CHECK_FALSE(f.has_dlog());
    CHECK_THROWS_AS(f.dlog(f.one()), std::runtime_error);
    const FieldElem a = f.generator();
    CHECK(a.pow(6) == f.from_residue(2));
    CHECK(a * a.inv() == f.one());
    CHECK(f.quad_char(a) == -1); // Euler fallback
    CHECK(f.trace_to_prime(a) == 4);
}

TEST_CASE("alternative primitive modulus exists and differs") {
    const auto alt = Field::find_primitive_modulus(5, 2, 1);
    CHECK(alt != Field::find_primitive_modulus(5, 2, 0));
    Field f = Field::build_with_modulus(5, 2, alt);
    CHECK(f.order() == 24);
    for (std::uint64_t k = 0; k < f.order(); ++k) CHECK(f.dlog(f.alpha_pow(k)) == k);
    // a non-primitive modulus is rejected: x^2 + 1 is reducible over F_5
    CHECK_THROWS_AS(Field::build_with_modulus(5, 2, {1, 0, 1}), ParamError);
}

TEST_CASE("dlog cache round-trip, corruption, and version checks") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "corrspec_cache_test";
    fs::remove_all(dir);
    FieldBuildOptions opts;
    opts.cache_dir = dir;

    Field first = Field::build(5, 6, opts);
    CHECK(first.cache_status() == CacheStatus::miss);
    fs::path file;
    for (const auto& entry : fs::directory_iterator(dir)) file = entry.path();
    CHECK(!file.empty());

    Field second = Field::build(5, 6, opts);
    CHECK(second.cache_status() == CacheStatus::hit);
    for (std::uint64_t k = 0; k < 200; ++k)
        CHECK(second.alpha_pow(k) == second.decode(first.encode(first.alpha_pow(k))));

    SUBCASE("bit flip rebuilds silently") {
        std::fstream io(file, std::ios::in | std::ios::out | std::ios::binary);
        io.seekp(200);
        char c;
        io.seekg(200);
        io.get(c);
        io.seekp(200);
        io.put(static_cast<char>(c ^ 0x5a));
        io.close();
        Field third = Field::build(5, 6, opts);
        CHECK(third.cache_status() == CacheStatus::miss); // rebuilt
        for (std::uint64_t k = 0; k < 200; ++k)
            CHECK(third.encode(third.alpha_pow(k)) == first.encode(first.alpha_pow(k)));
    }

    SUBCASE("truncated file rebuilds silently") {
        fs::resize_file(file, fs::file_size(file) / 2);
        Field third = Field::build(5, 6, opts);
        CHECK(third.cache_status() == CacheStatus::miss);
    }

    SUBCASE("version mismatch rebuilds silently") {
        std::ifstream in(file, std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        std::string data = buf.str();
        in.close();
        const auto pos = data.find("\"format_version\":1");
        REQUIRE(pos != std::string::npos);
        data.replace(pos, 18, "\"format_version\":9");
        std::ofstream out(file, std::ios::binary | std::ios::trunc);
        out << data;
        out.close();
        Field third = Field::build(5, 6, opts);
        CHECK(third.cache_status() == CacheStatus::miss);
    }

    fs::remove_all(dir);
}
