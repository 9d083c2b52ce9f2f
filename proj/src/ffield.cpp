#include "corrspec/ffield.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace corrspec {

namespace {

bool is_prime_u64(std::uint64_t v) {
    if (v < 2) return false;
    for (std::uint64_t d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t v) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= v; ++d) {
        if (v % d == 0) {
            out.push_back(d);
            while (v % d == 0) v /= d;
        }
    }
    if (v > 1) out.push_back(v);
    return out;
}

constexpr std::uint32_t kZeroSentinel = UINT32_MAX;
constexpr const char* kDlogConvention = "dlog(alpha)=1";

} // namespace

// ---------------------------------------------------------------------------
// FieldElem
// ---------------------------------------------------------------------------

FieldElem::FieldElem(const Field* field, std::vector<std::uint32_t> coords)
    : field_(field), coords_(std::move(coords)) {}

bool FieldElem::is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](std::uint32_t c) { return c == 0; });
}

static void check_same_field(const FieldElem& a, const FieldElem& b) {
    if (&a.field() != &b.field())
        throw std::invalid_argument("field elements belong to different fields");
}

FieldElem FieldElem::operator+(const FieldElem& rhs) const {
    check_same_field(*this, rhs);
    const std::uint32_t p = field_->p();
    std::vector<std::uint32_t> out(coords_.size());
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        std::uint32_t s = coords_[i] + rhs.coords_[i];
        out[i] = s >= p ? s - p : s;
    }
    return FieldElem(field_, std::move(out));
}

FieldElem FieldElem::operator-(const FieldElem& rhs) const {
    check_same_field(*this, rhs);
    const std::uint32_t p = field_->p();
    std::vector<std::uint32_t> out(coords_.size());
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        std::uint32_t s = coords_[i] + p - rhs.coords_[i];
        out[i] = s >= p ? s - p : s;
    }
    return FieldElem(field_, std::move(out));
}

FieldElem FieldElem::operator-() const {
    const std::uint32_t p = field_->p();
    std::vector<std::uint32_t> out(coords_.size());
    for (std::size_t i = 0; i < coords_.size(); ++i)
        out[i] = coords_[i] ? p - coords_[i] : 0;
    return FieldElem(field_, std::move(out));
}

FieldElem FieldElem::operator*(const FieldElem& rhs) const {
    check_same_field(*this, rhs);
    if (is_zero() || rhs.is_zero()) return field_->zero();
    if (field_->has_dlog()) {
        const std::uint64_t k =
            (field_->dlog(*this) + field_->dlog(rhs)) % field_->order();
        return field_->alpha_pow(k);
    }
    return FieldElem(field_, field_->poly_mul(coords_, rhs.coords_));
}

FieldElem FieldElem::pow(std::uint64_t exponent) const {
    if (is_zero()) {
        if (exponent == 0) return field_->one();
        return field_->zero();
    }
    if (field_->has_dlog()) {
        const std::uint64_t k = field_->dlog(*this) % field_->order();
        const std::uint64_t e = exponent % field_->order();
        return field_->alpha_pow(k * e % field_->order());
    }
    return FieldElem(field_, field_->poly_pow(coords_, exponent));
}

FieldElem FieldElem::inv() const {
    if (is_zero()) throw std::domain_error("inversion of zero field element");
    return pow(field_->order() - 1);
}

FieldElem FieldElem::frobenius(unsigned k) const {
    FieldElem out = *this;
    // p^k mod order, then one pow; exponents stay in range via the dlog path,
    // and the poly path reduces internally.
    std::uint64_t e = 1;
    const std::uint64_t mod = field_->order();
    for (unsigned i = 0; i < k; ++i) e = e * (field_->p() % mod) % mod;
    if (is_zero()) return field_->zero();
    return pow(e == 0 ? mod : e);
}

bool FieldElem::operator==(const FieldElem& rhs) const {
    return field_ == rhs.field_ && coords_ == rhs.coords_;
}

// ---------------------------------------------------------------------------
// Field construction
// ---------------------------------------------------------------------------

std::vector<std::uint32_t> Field::poly_mul(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b) const {
    const std::uint64_t p = p_;
    std::vector<std::uint64_t> prod(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            prod[i + j] = (prod[i + j] + std::uint64_t(a[i]) * b[j]) % p;
    }
    // reduce by the monic modulus of degree n
    for (std::size_t d = prod.size(); d-- > n_;) {
        if (!prod[d]) continue;
        const std::uint64_t c = prod[d];
        for (unsigned k = 0; k < n_; ++k)
            prod[d - n_ + k] = (prod[d - n_ + k] + (p - std::uint64_t(modulus_[k]) % p) * c) % p;
        prod[d] = 0;
    }
    std::vector<std::uint32_t> out(n_, 0);
    for (unsigned i = 0; i < n_ && i < prod.size(); ++i)
        out[i] = static_cast<std::uint32_t>(prod[i]);
    return out;
}

std::vector<std::uint32_t> Field::poly_pow(const std::vector<std::uint32_t>& a,
                                           std::uint64_t exponent) const {
    std::vector<std::uint32_t> acc(n_, 0);
    acc[0] = 1;
    std::vector<std::uint32_t> base = a;
    while (exponent) {
        if (exponent & 1) acc = poly_mul(acc, base);
        base = poly_mul(base, base);
        exponent >>= 1;
    }
    return acc;
}

namespace {

// Order-of-x test against a candidate modulus, using standalone poly
// arithmetic (the Field isn't constructed yet). ord(x) == p^n - 1 certifies
// both primitivity and irreducibility in one shot: the cyclic group generated
// by x then exhausts all nonzero residues, forcing the quotient to be a field.
struct CandidateRing {
    std::uint64_t p;
    unsigned n;
    const std::vector<std::uint32_t>& mod;

    std::vector<std::uint32_t> mul(const std::vector<std::uint32_t>& a,
                                   const std::vector<std::uint32_t>& b) const {
        std::vector<std::uint64_t> prod(2 * n - 1, 0);
        for (unsigned i = 0; i < n; ++i) {
            if (!a[i]) continue;
            for (unsigned j = 0; j < n; ++j)
                prod[i + j] = (prod[i + j] + std::uint64_t(a[i]) * b[j]) % p;
        }
        for (std::size_t d = prod.size(); d-- > n;) {
            if (!prod[d]) continue;
            const std::uint64_t c = prod[d];
            for (unsigned k = 0; k < n; ++k)
                prod[d - n + k] = (prod[d - n + k] + (p - mod[k]) % p * c) % p;
        }
        std::vector<std::uint32_t> out(n, 0);
        for (unsigned i = 0; i < n; ++i) out[i] = static_cast<std::uint32_t>(prod[i]);
        return out;
    }

    std::vector<std::uint32_t> pow_x(std::uint64_t e) const {
        std::vector<std::uint32_t> acc(n, 0), base(n, 0);
        acc[0] = 1;
        if (n == 1)
            base[0] = static_cast<std::uint32_t>((p - mod[0]) % p);
        else
            base[1] = 1;
        while (e) {
            if (e & 1) acc = mul(acc, base);
            base = mul(base, base);
            e >>= 1;
        }
        return acc;
    }

    bool x_has_full_order(std::uint64_t N, const std::vector<std::uint64_t>& factors) const {
        std::vector<std::uint32_t> one(n, 0);
        one[0] = 1;
        if (pow_x(N) != one) return false;
        for (std::uint64_t q : factors)
            if (pow_x(N / q) == one) return false;
        return true;
    }
};

} // namespace

std::vector<std::uint32_t> Field::find_primitive_modulus(std::uint64_t p, unsigned n,
                                                         unsigned index) {
    if (!is_prime_u64(p)) throw ParamError("p must be prime (got " + std::to_string(p) + ")");
    if (p == 2) throw ParamError("p must be an odd prime (got 2)");
    if (n < 1) throw ParamError("extension degree n must be >= 1");

    if (n == 1) {
        // least primitive roots, ascending; modulus x - g
        unsigned seen = 0;
        for (std::uint64_t g = 2; g < p; ++g) {
            std::uint64_t x = g, ord = 1;
            while (x != 1) {
                x = x * g % p;
                ++ord;
            }
            if (ord == p - 1) {
                if (seen++ == index)
                    return {static_cast<std::uint32_t>((p - g) % p), 1};
            }
        }
        throw std::logic_error("no primitive root found");
    }

    std::uint64_t N = 1;
    for (unsigned i = 0; i < n; ++i) {
        if (N > (std::uint64_t{1} << 62) / p)
            throw CapError("p^n too large for modulus search");
        N *= p;
    }
    N -= 1;
    const auto factors = prime_factors(N);

    // ascending (c_{n-1}, ..., c_1, c_0); tuple == digits of t base p
    std::vector<std::uint32_t> mod(n + 1, 0);
    mod[n] = 1;
    unsigned seen = 0;
    std::uint64_t total = 1;
    for (unsigned i = 0; i < n; ++i) total *= p;
    for (std::uint64_t t = 0; t < total; ++t) {
        std::uint64_t rest = t;
        for (unsigned i = 0; i < n; ++i) { // least significant digit = c_0
            mod[i] = static_cast<std::uint32_t>(rest % p);
            rest /= p;
        }
        if (mod[0] == 0) continue; // x divides: x is a zero divisor
        CandidateRing ring{p, n, mod};
        if (ring.x_has_full_order(N, factors)) {
            if (seen++ == index) return mod;
        }
    }
    throw std::logic_error("no primitive polynomial found");
}

Field Field::build(std::uint64_t p, unsigned n, const FieldBuildOptions& opts) {
    return build_with_modulus(p, n, find_primitive_modulus(p, n, 0), opts);
}

Field Field::build_with_modulus(std::uint64_t p, unsigned n, std::vector<std::uint32_t> modulus,
                                const FieldBuildOptions& opts) {
    if (!is_prime_u64(p)) throw ParamError("p must be prime (got " + std::to_string(p) + ")");
    if (p == 2) throw ParamError("p must be an odd prime (got 2)");
    if (n < 1) throw ParamError("extension degree n must be >= 1");
    if (modulus.size() != n + 1 || modulus[n] != 1)
        throw ParamError("modulus must be monic of degree n");

    Field f;
    f.p_ = static_cast<std::uint32_t>(p);
    f.n_ = n;
    f.modulus_ = std::move(modulus);
    BigInt sz = 1;
    for (unsigned i = 0; i < n; ++i) sz *= p;
    if (opts.with_dlog && sz > opts.cap)
        throw CapError("p^n = " + sz.str() + " exceeds the table cap " +
                       std::to_string(opts.cap) + "; use no-dlog mode or raise the cap");
    if (sz > (BigInt(1) << 62)) throw CapError("p^n too large even for no-dlog mode");
    f.size_ = sz.convert_to<std::uint64_t>();
    f.order_ = f.size_ - 1;

    // primitivity of the supplied modulus (build() candidates already passed)
    CandidateRing ring{p, n, f.modulus_};
    if (!ring.x_has_full_order(f.order_, prime_factors(f.order_)))
        throw ParamError("modulus is not primitive (root of x does not have order p^n - 1)");

    if (opts.with_dlog) {
        f.cache_status_ = CacheStatus::disabled;
        bool loaded = false;
        std::filesystem::path file;
        if (!opts.cache_dir.empty()) {
            file = opts.cache_dir / f.cache_file_name();
            loaded = f.try_load_cache(file);
            f.cache_status_ = loaded ? CacheStatus::hit : CacheStatus::miss;
        }
        if (!loaded) {
            f.build_tables();
            if (!opts.cache_dir.empty()) f.write_cache(file);
        }
    }
    return f;
}

void Field::build_tables() {
    pow_.assign(order_, 0);
    dlog_.assign(size_, kZeroSentinel);

    // step alpha: multiply the running element by x and reduce
    std::vector<std::uint32_t> cur(n_, 0);
    cur[0] = 1;
    for (std::uint64_t k = 0; k < order_; ++k) {
        std::uint64_t idx = 0;
        for (unsigned i = n_; i-- > 0;) idx = idx * p_ + cur[i];
        pow_[k] = static_cast<std::uint32_t>(idx);
        if (dlog_[idx] != kZeroSentinel)
            throw std::logic_error("modulus not primitive: power table collision");
        dlog_[idx] = static_cast<std::uint32_t>(k);
        // cur *= x
        std::uint32_t carry = cur[n_ - 1];
        for (unsigned i = n_; i-- > 1;) cur[i] = cur[i - 1];
        cur[0] = 0;
        if (carry) {
            for (unsigned i = 0; i < n_; ++i) {
                std::uint64_t v = cur[i] + std::uint64_t(p_ - modulus_[i] % p_) * carry % p_;
                cur[i] = static_cast<std::uint32_t>(v % p_);
            }
        }
    }

    // Tr(alpha^k) = sum over conjugates alpha^{k p^i}
    trpow_.assign(order_, 0);
    for (std::uint64_t k = 0; k < order_; ++k) {
        std::uint64_t acc = 0;
        std::uint64_t e = k;
        for (unsigned i = 0; i < n_; ++i) {
            acc += pow_[e] % p_; // coordinate 0 contribution handled below
            e = e * (p_ % order_) % order_;
        }
        // The conjugate sum lies in F_p, so only coordinate 0 survives; summing
        // the full decoded coordinates is equivalent but wasteful. pow_[e] % p_
        // is exactly coordinate 0 of the encoding.
        trpow_[k] = static_cast<std::uint32_t>(acc % p_);
    }
#ifndef NDEBUG
    // spot-check that upper coordinates of the conjugate sums really vanish
    for (std::uint64_t k = 0; k < std::min<std::uint64_t>(order_, 64); ++k) {
        FieldElem s = zero();
        FieldElem x = alpha_pow(k);
        for (unsigned i = 0; i < n_; ++i) s = s + x.frobenius(i);
        for (unsigned i = 1; i < n_; ++i)
            if (s.coords()[i] != 0) throw std::logic_error("trace left the prime field");
        if (s.coords()[0] != trpow_[k]) throw std::logic_error("trace table mismatch");
    }
#endif
}

// ---------------------------------------------------------------------------
// element factories and maps
// ---------------------------------------------------------------------------

FieldElem Field::zero() const { return FieldElem(this, std::vector<std::uint32_t>(n_, 0)); }

FieldElem Field::one() const {
    std::vector<std::uint32_t> c(n_, 0);
    c[0] = 1;
    return FieldElem(this, std::move(c));
}

FieldElem Field::generator() const {
    if (n_ == 1) return from_residue((p_ - modulus_[0]) % p_);
    std::vector<std::uint32_t> c(n_, 0);
    c[1] = 1;
    return FieldElem(this, std::move(c));
}

FieldElem Field::from_residue(std::uint64_t value) const {
    std::vector<std::uint32_t> c(n_, 0);
    c[0] = static_cast<std::uint32_t>(value % p_);
    return FieldElem(this, std::move(c));
}

FieldElem Field::from_coords(std::vector<std::uint32_t> coords) const {
    if (coords.size() != n_) throw std::invalid_argument("coordinate vector has wrong length");
    for (auto c : coords)
        if (c >= p_) throw std::invalid_argument("coordinate out of range [0, p)");
    return FieldElem(this, std::move(coords));
}

FieldElem Field::alpha_pow(std::uint64_t k) const {
    if (!pow_.empty()) return decode(pow_[k % order_]);
    return FieldElem(this, poly_pow(generator().coords(), k % order_));
}

std::uint64_t Field::encode(const FieldElem& x) const {
    std::uint64_t idx = 0;
    for (unsigned i = n_; i-- > 0;) idx = idx * p_ + x.coords()[i];
    return idx;
}

FieldElem Field::decode(std::uint64_t index) const {
    std::vector<std::uint32_t> c(n_);
    for (unsigned i = 0; i < n_; ++i) {
        c[i] = static_cast<std::uint32_t>(index % p_);
        index /= p_;
    }
    return FieldElem(this, std::move(c));
}

std::uint64_t Field::dlog(const FieldElem& x) const {
    if (x.is_zero()) throw std::domain_error("dlog of zero");
    if (pow_.empty()) throw std::runtime_error("dlog table absent (no-dlog mode)");
    return dlog_[encode(x)];
}

FieldElem Field::trace(const FieldElem& x, unsigned target_degree) const {
    if (target_degree == 0 || n_ % target_degree != 0)
        throw std::invalid_argument("trace target degree must divide n");
    const unsigned h = n_ / target_degree;
    FieldElem acc = zero();
    for (unsigned i = 0; i < h; ++i) acc = acc + x.frobenius(i * target_degree);
    return acc;
}

std::uint32_t Field::trace_to_prime(const FieldElem& x) const {
    if (x.is_zero()) return 0;
    if (!trpow_.empty()) return trpow_[dlog_[encode(x)]];
    return trace(x, 1).coords()[0];
}

int Field::quad_char(const FieldElem& x) const {
    if (x.is_zero()) return 0;
    if (!pow_.empty()) return dlog(x) % 2 == 0 ? 1 : -1;
    // Euler's criterion
    FieldElem e = x.pow(order_ / 2);
    if (e == one()) return 1;
    return -1;
}

bool Field::in_subfield(const FieldElem& x, unsigned m) const {
    return x.frobenius(m) == x;
}

std::string Field::modulus_string() const {
    std::ostringstream os;
    bool first = true;
    for (unsigned i = n_ + 1; i-- > 0;) {
        const std::uint32_t c = modulus_[i];
        if (!c) continue;
        if (!first) os << " + ";
        first = false;
        if (i == 0)
            os << c;
        else {
            if (c != 1) os << c << "*";
            os << "x";
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// dlog cache: one JSON header line, then the table for element indices
// 1..p^n-1 as little-endian unsigned integers of the minimal width w with
// 256^w >= p^n. Anything that fails validation is rebuilt silently.
// ---------------------------------------------------------------------------

namespace {

unsigned minimal_byte_width(std::uint64_t size) {
    unsigned w = 1;
    while (w < 8 && (std::uint64_t{1} << (8 * w)) < size) ++w;
    return w;
}

} // namespace

std::filesystem::path Field::cache_file_name() const {
    std::ostringstream os;
    os << "dlog_p" << p_ << "_n" << n_ << "_m";
    for (unsigned i = 0; i < modulus_.size(); ++i) {
        if (i) os << "-";
        os << modulus_[i];
    }
    os << ".v1.bin";
    return os.str();
}

bool Field::try_load_cache(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) return false;
    std::string header;
    if (!std::getline(in, header)) return false;
    nlohmann::json j = nlohmann::json::parse(header, nullptr, false);
    if (j.is_discarded()) return false;
    if (j.value("format_version", 0) != 1) return false;
    if (j.value("p", std::uint64_t{0}) != p_ || j.value("n", 0u) != n_) return false;
    if (j.value("generator_convention", std::string()) != kDlogConvention) return false;
    std::vector<std::uint32_t> mod = j.value("modulus", std::vector<std::uint32_t>{});
    if (mod != modulus_) return false;

    const unsigned w = minimal_byte_width(size_);
    std::vector<unsigned char> raw(w * (size_ - 1));
    if (!in.read(reinterpret_cast<char*>(raw.data()), raw.size())) return false;
    in.get();
    if (!in.eof()) return false; // trailing garbage

    std::vector<std::uint32_t> dl(size_, kZeroSentinel);
    std::vector<std::uint32_t> pw(order_, kZeroSentinel);
    for (std::uint64_t idx = 1; idx < size_; ++idx) {
        std::uint64_t v = 0;
        for (unsigned b = 0; b < w; ++b)
            v |= std::uint64_t(raw[(idx - 1) * w + b]) << (8 * b);
        if (v >= order_) return false;
        if (pw[v] != kZeroSentinel) return false; // not a bijection
        dl[idx] = static_cast<std::uint32_t>(v);
        pw[v] = static_cast<std::uint32_t>(idx);
    }
    if (dl[1] != 0) return false; // dlog(1) = 0

    // algebraic spot checks against the table-free polynomial route
    std::uint64_t probe = 1;
    for (int i = 0; i < 16; ++i) {
        probe = (probe * 2862933555777941757ull + 3037000493ull) % order_;
        const std::uint64_t k1 = probe, k2 = (probe * 7 + 1) % order_;
        const auto prod = poly_mul(decode(pw[k1]).coords(), decode(pw[k2]).coords());
        std::uint64_t idx = 0;
        for (unsigned i2 = n_; i2-- > 0;) idx = idx * p_ + prod[i2];
        if (idx != pw[(k1 + k2) % order_]) return false;
    }

    dlog_ = std::move(dl);
    pow_ = std::move(pw);

    // trace table is cheap; always derived, never cached
    trpow_.assign(order_, 0);
    for (std::uint64_t k = 0; k < order_; ++k) {
        std::uint64_t acc = 0, e = k;
        for (unsigned i = 0; i < n_; ++i) {
            acc += pow_[e] % p_;
            e = e * (p_ % order_) % order_;
        }
        trpow_[k] = static_cast<std::uint32_t>(acc % p_);
    }
    return true;
}

void Field::write_cache(const std::filesystem::path& file) const {
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) return; // cache is best-effort
    nlohmann::json j;
    j["format_version"] = 1;
    j["p"] = p_;
    j["n"] = n_;
    j["modulus"] = modulus_;
    j["generator_convention"] = kDlogConvention;
    out << j.dump() << "\n";
    const unsigned w = minimal_byte_width(size_);
    std::vector<unsigned char> raw(w * (size_ - 1));
    for (std::uint64_t idx = 1; idx < size_; ++idx) {
        std::uint64_t v = dlog_[idx];
        for (unsigned b = 0; b < w; ++b) raw[(idx - 1) * w + b] = (v >> (8 * b)) & 0xff;
    }
    out.write(reinterpret_cast<const char*>(raw.data()), raw.size());
}

} // namespace corrspec
