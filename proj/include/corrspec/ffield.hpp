#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "corrspec/common.hpp"

namespace corrspec {

class Field;

/// Element of a Field: dense coefficient vector over the power basis
/// {1, alpha, ..., alpha^{n-1}}, each coordinate in [0, p). Zero is the
/// all-zero vector. Value type; the owning Field must outlive it.
class FieldElem {
public:
    FieldElem() = default;
    FieldElem(const Field* field, std::vector<std::uint32_t> coords);

    const Field& field() const { return *field_; }
    const std::vector<std::uint32_t>& coords() const { return coords_; }
    bool is_zero() const;

    FieldElem operator+(const FieldElem& rhs) const;
    FieldElem operator-(const FieldElem& rhs) const;
    FieldElem operator-() const;
    FieldElem operator*(const FieldElem& rhs) const;
    FieldElem inv() const;
    FieldElem pow(std::uint64_t exponent) const;
    /// Frobenius iterate x -> x^{p^k}.
    FieldElem frobenius(unsigned k) const;

    bool operator==(const FieldElem& rhs) const;
    bool operator!=(const FieldElem& rhs) const { return !(*this == rhs); }

private:
    const Field* field_ = nullptr;
    std::vector<std::uint32_t> coords_;
};

struct FieldBuildOptions {
    /// Maximum p^n for which the eager dlog/power tables are built.
    std::uint64_t cap = std::uint64_t{1} << 24;
    /// no-dlog mode: skip all tables; arithmetic falls back to polynomial
    /// multiplication and discrete logs are unavailable.
    bool with_dlog = true;
    /// When set, the dlog table is persisted here and reloaded on rebuild.
    std::filesystem::path cache_dir;
};

enum class CacheStatus { disabled, miss, hit };

/// GF(p^n) with a canonical primitive modulus: monic polynomials are
/// enumerated by ascending coefficient tuple (c_{n-1}, ..., c_1, c_0) and the
/// first one whose root alpha has multiplicative order exactly p^n - 1 is
/// taken (such a root makes the polynomial irreducible automatically, so one
/// order test decides both properties). For n = 1 the generator is the least
/// primitive root g and the modulus is x - g.
///
/// Immutable after construction; all element operations are pure, so shared
/// concurrent readers are safe.
class Field {
public:
    static Field build(std::uint64_t p, unsigned n, const FieldBuildOptions& opts = {});
    /// Same construction but with a caller-chosen modulus (must be primitive);
    /// used to confirm that canonical-basis choices do not affect spectra.
    static Field build_with_modulus(std::uint64_t p, unsigned n,
                                    std::vector<std::uint32_t> modulus,
                                    const FieldBuildOptions& opts = {});
    /// index-th primitive modulus in the canonical enumeration (index 0 is
    /// the one build() picks).
    static std::vector<std::uint32_t> find_primitive_modulus(std::uint64_t p, unsigned n,
                                                             unsigned index = 0);

    std::uint32_t p() const { return p_; }
    unsigned n() const { return n_; }
    /// p^n
    std::uint64_t size() const { return size_; }
    /// p^n - 1
    std::uint64_t order() const { return order_; }
    /// Monic modulus, coefficients of 1, x, ..., x^{n-1}, x^n (last is 1).
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }
    std::string modulus_string() const;
    bool has_dlog() const { return !pow_.empty(); }
    CacheStatus cache_status() const { return cache_status_; }

    FieldElem zero() const;
    FieldElem one() const;
    /// The canonical primitive element alpha (residue of the indeterminate).
    FieldElem generator() const;
    /// Embeds a residue of F_p.
    FieldElem from_residue(std::uint64_t value) const;
    FieldElem from_coords(std::vector<std::uint32_t> coords) const;
    /// alpha^k for 0 <= k < order (table lookup when available).
    FieldElem alpha_pow(std::uint64_t k) const;

    /// Discrete log base alpha; throws on zero or in no-dlog mode.
    std::uint64_t dlog(const FieldElem& x) const;
    /// Tr^n_m(x) = sum of x^{p^{i m}}, i < n/m; requires m | n. The result
    /// lies in the subfield of size p^m (represented inside this field).
    FieldElem trace(const FieldElem& x, unsigned target_degree) const;
    /// Tr^n_1 as a residue in [0, p).
    std::uint32_t trace_to_prime(const FieldElem& x) const;
    /// Quadratic character: 0 for zero, +1 for nonzero squares, -1 otherwise.
    int quad_char(const FieldElem& x) const;
    /// Membership test for the subfield of size p^m (x^{p^m} == x).
    bool in_subfield(const FieldElem& x, unsigned m) const;

    /// Dense-index encoding idx = sum coords[i] * p^i, in [0, p^n).
    std::uint64_t encode(const FieldElem& x) const;
    FieldElem decode(std::uint64_t index) const;

    // Read-only table views for the sweep kernels. Empty in no-dlog mode.
    // pow_table[k] = encode(alpha^k); dlog_table[encode(x)] = k (zero slot =
    // UINT32_MAX); trace_table[k] = Tr^n_1(alpha^k).
    std::span<const std::uint32_t> pow_table() const { return pow_; }
    std::span<const std::uint32_t> dlog_table() const { return dlog_; }
    std::span<const std::uint32_t> trace_table() const { return trpow_; }

    // Polynomial-arithmetic routes; independent of the tables (used for
    // construction, no-dlog mode, and as cross-check oracles in tests).
    std::vector<std::uint32_t> poly_mul(const std::vector<std::uint32_t>& a,
                                        const std::vector<std::uint32_t>& b) const;
    std::vector<std::uint32_t> poly_pow(const std::vector<std::uint32_t>& a,
                                        std::uint64_t exponent) const;

private:
    friend class FieldElem;
    Field() = default;
    void build_tables();
    bool try_load_cache(const std::filesystem::path& file);
    void write_cache(const std::filesystem::path& file) const;
    std::filesystem::path cache_file_name() const;

    std::uint32_t p_ = 0;
    unsigned n_ = 0;
    std::uint64_t size_ = 0;
    std::uint64_t order_ = 0;
    std::vector<std::uint32_t> modulus_;
    std::vector<std::uint32_t> pow_;
    std::vector<std::uint32_t> dlog_;
    std::vector<std::uint32_t> trpow_;
    CacheStatus cache_status_ = CacheStatus::disabled;
};

} // namespace corrspec
