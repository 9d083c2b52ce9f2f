#include "corrspec/qform.hpp"

#include <algorithm>
#include <sstream>

namespace corrspec {

namespace {

int legendre_mod_p(std::uint64_t a, std::uint64_t p) {
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

std::uint64_t mod_pow_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = (unsigned __int128)r * b % m;
        b = (unsigned __int128)b * b % m;
        e >>= 1;
    }
    return r;
}

} // namespace

QFormSolver::QFormSolver(const Field& field, const SeqParams& params)
    : field_(&field), params_(params) {
    if (field.p() != params.p || field.n() != params.n)
        throw std::invalid_argument("field does not match parameters");
    if (!field.has_dlog())
        throw std::invalid_argument("qform machinery needs the dlog tables");
    const std::uint64_t N = field.order();
    neg_one_exp_ = N / 2;
    exp_a_ = params.p_pow(params.m) + 1;
    exp_b_ = params.p_pow(params.m + params.e) + 1;
    subfield_dim_ = params.n / params.e;
    gamma_exp_ = N / (params.p_pow(params.e) - 1);

    // F_p basis {alpha^i gamma^j : i < n/e, j < e} of F_{p^n}; invert its
    // coordinate matrix once so elements can be re-expressed over F_{p^e}.
    const unsigned n = params.n;
    const std::uint32_t p = params.p;
    std::vector<std::uint32_t> aug(n * 2 * n, 0);
    for (unsigned col = 0; col < n; ++col) {
        const unsigned i = col / params.e, j = col % params.e;
        const FieldElem el = field.alpha_pow((i + std::uint64_t(j) * gamma_exp_) % N);
        for (unsigned row = 0; row < n; ++row) aug[row * 2 * n + col] = el.coords()[row];
    }
    for (unsigned row = 0; row < n; ++row) aug[row * 2 * n + n + row] = 1;
    for (unsigned col = 0; col < n; ++col) {
        unsigned piv = col;
        while (piv < n && aug[piv * 2 * n + col] == 0) ++piv;
        if (piv == n) throw std::logic_error("basis matrix is singular");
        if (piv != col)
            for (unsigned c = 0; c < 2 * n; ++c) std::swap(aug[col * 2 * n + c], aug[piv * 2 * n + c]);
        const std::uint64_t inv = mod_pow_u64(aug[col * 2 * n + col], p - 2, p);
        for (unsigned c = 0; c < 2 * n; ++c)
            aug[col * 2 * n + c] = static_cast<std::uint32_t>(aug[col * 2 * n + c] * inv % p);
        for (unsigned r = 0; r < n; ++r) {
            if (r == col || aug[r * 2 * n + col] == 0) continue;
            const std::uint64_t f = aug[r * 2 * n + col];
            for (unsigned c = 0; c < 2 * n; ++c)
                aug[r * 2 * n + c] = static_cast<std::uint32_t>(
                    (aug[r * 2 * n + c] + (p - f % p) * aug[col * 2 * n + c]) % p);
        }
    }
    minv_.assign(n * n, 0);
    for (unsigned r = 0; r < n; ++r)
        for (unsigned c = 0; c < n; ++c) minv_[r * n + c] = aug[r * 2 * n + n + c];
}

std::uint32_t QFormSolver::eval_qform(const FieldElem& a, const FieldElem& b,
                                      const FieldElem& x) const {
    if (x.is_zero()) return 0;
    const FieldElem t = a * x.pow(exp_a_) + b * x.pow(exp_b_);
    return field_->trace_to_prime(t);
}

std::vector<FieldElem> QFormSolver::subfield_coords(const FieldElem& x) const {
    const unsigned n = params_.n, e = params_.e;
    const std::uint32_t p = params_.p;
    const std::uint64_t N = field_->order();
    // mu = Minv * coords(x); lambda_i = sum_j mu[i e + j] gamma^j in F_{p^e}
    std::vector<std::uint32_t> mu(n, 0);
    for (unsigned r = 0; r < n; ++r) {
        std::uint64_t acc = 0;
        for (unsigned c = 0; c < n; ++c) acc += std::uint64_t(minv_[r * n + c]) * x.coords()[c];
        mu[r] = static_cast<std::uint32_t>(acc % p);
    }
    std::vector<FieldElem> out;
    out.reserve(subfield_dim_);
    for (unsigned i = 0; i < subfield_dim_; ++i) {
        FieldElem acc = field_->zero();
        for (unsigned j = 0; j < e; ++j) {
            if (!mu[i * e + j]) continue;
            acc = acc + field_->from_residue(mu[i * e + j]) *
                            field_->alpha_pow(std::uint64_t(j) * gamma_exp_ % N);
        }
        out.push_back(acc);
    }
    return out;
}

std::uint64_t QFormSolver::kernel_dim(const FieldElem& a, const FieldElem& b) const {
    if (a.is_zero() && b.is_zero())
        throw std::invalid_argument("kernel of the zero pair (a, b) = (0, 0) is undefined");
    const unsigned ne = subfield_dim_;
    const std::uint64_t pe = params_.p_pow(params_.e);
    const std::uint64_t p2e = params_.p_pow(2 * params_.e);
    const std::uint64_t pme = params_.p_pow(params_.m + params_.e);

    const FieldElem c2 = b.pow(pme);
    const FieldElem c1 = a.pow(pme) + a.pow(pe);
    const FieldElem& c0 = b;

    // rows of the map's matrix over F_{p^e}: image of each basis vector alpha^i
    std::vector<std::vector<FieldElem>> rows(ne);
    for (unsigned i = 0; i < ne; ++i) {
        const FieldElem y = field_->alpha_pow(i);
        const FieldElem Ly = c2 * y.pow(p2e) + c1 * y.pow(pe) + c0 * y;
        rows[i] = subfield_coords(Ly);
    }
    // transpose so columns index the basis vectors, then eliminate
    std::vector<std::vector<FieldElem>> m(ne, std::vector<FieldElem>());
    for (unsigned r = 0; r < ne; ++r) {
        m[r].reserve(ne);
        for (unsigned c = 0; c < ne; ++c) m[r].push_back(rows[c][r]);
    }
    unsigned rank = 0;
    for (unsigned col = 0; col < ne && rank < ne; ++col) {
        unsigned piv = rank;
        while (piv < ne && m[piv][col].is_zero()) ++piv;
        if (piv == ne) continue;
        std::swap(m[rank], m[piv]);
        const FieldElem inv = m[rank][col].inv(); // big-field inversion
        for (unsigned c = 0; c < ne; ++c) m[rank][c] = m[rank][c] * inv;
        for (unsigned r = 0; r < ne; ++r) {
            if (r == rank || m[r][col].is_zero()) continue;
            const FieldElem f = m[r][col];
            for (unsigned c = 0; c < ne; ++c) m[r][c] = m[r][c] - f * m[rank][c];
        }
        ++rank;
    }
    return ne - rank;
}

std::uint64_t QFormSolver::kernel_size(const FieldElem& a, const FieldElem& b) const {
    return params_.p_pow(static_cast<unsigned>(kernel_dim(a, b)) * params_.e);
}

std::uint64_t QFormSolver::kernel_size_bruteforce(const FieldElem& a, const FieldElem& b) const {
    if (a.is_zero() && b.is_zero())
        throw std::invalid_argument("kernel of the zero pair (a, b) = (0, 0) is undefined");
    const std::uint64_t pe = params_.p_pow(params_.e);
    const std::uint64_t p2e = params_.p_pow(2 * params_.e);
    const std::uint64_t pme = params_.p_pow(params_.m + params_.e);
    const FieldElem c2 = b.pow(pme);
    const FieldElem c1 = a.pow(pme) + a.pow(pe);
    const FieldElem& c0 = b;
    std::uint64_t count = 1; // y = 0
    for (std::uint64_t k = 0; k < field_->order(); ++k) {
        const FieldElem y = field_->alpha_pow(k);
        if ((c2 * y.pow(p2e) + c1 * y.pow(pe) + c0 * y).is_zero()) ++count;
    }
    return count;
}

FpMatrix QFormSolver::gram_matrix(const FieldElem& a, const FieldElem& b) const {
    const unsigned n = params_.n;
    const std::uint32_t p = params_.p;
    FpMatrix A{n, p, std::vector<std::uint32_t>(std::size_t(n) * n, 0)};
    std::vector<FieldElem> basis;
    basis.reserve(n);
    for (unsigned i = 0; i < n; ++i) basis.push_back(field_->alpha_pow(i));
    std::vector<std::uint32_t> qb(n);
    for (unsigned i = 0; i < n; ++i) qb[i] = eval_qform(a, b, basis[i]);
    const std::uint64_t inv2 = mod_pow_u64(2, p - 2, p);
    for (unsigned i = 0; i < n; ++i) {
        A.at(i, i) = qb[i];
        for (unsigned j = i + 1; j < n; ++j) {
            const std::uint32_t qij = eval_qform(a, b, basis[i] + basis[j]);
            const std::uint64_t v = (std::uint64_t(qij) + 2 * p - qb[i] - qb[j]) % p * inv2 % p;
            A.at(i, j) = A.at(j, i) = static_cast<std::uint32_t>(v);
        }
    }
    return A;
}

std::pair<unsigned, int> QFormSolver::rank_and_sign(FpMatrix A) {
    const unsigned n = A.n;
    const std::uint64_t p = A.p;
    unsigned rank = 0;
    std::uint64_t det_product = 1;
    for (unsigned i = 0; i < n; ++i) {
        if (A.at(i, i) == 0) {
            // prefer a later nonzero diagonal entry (congruence swap)
            unsigned swap_j = n;
            for (unsigned j = i + 1; j < n; ++j)
                if (A.at(j, j) != 0) {
                    swap_j = j;
                    break;
                }
            if (swap_j < n) {
                for (unsigned c = 0; c < n; ++c) std::swap(A.at(i, c), A.at(swap_j, c));
                for (unsigned r = 0; r < n; ++r) std::swap(A.at(r, i), A.at(r, swap_j));
            } else {
                // all remaining diagonal entries vanish; use the odd-characteristic
                // move row_i += row_j, col_i += col_j, which lands 2*A[i][j] on
                // the diagonal
                unsigned j = n;
                for (unsigned c = i + 1; c < n; ++c)
                    if (A.at(i, c) != 0) {
                        j = c;
                        break;
                    }
                if (j == n) continue; // row (and column) already clear
                for (unsigned c = 0; c < n; ++c)
                    A.at(i, c) = static_cast<std::uint32_t>((A.at(i, c) + A.at(j, c)) % p);
                for (unsigned r = 0; r < n; ++r)
                    A.at(r, i) = static_cast<std::uint32_t>((A.at(r, i) + A.at(r, j)) % p);
            }
        }
        if (A.at(i, i) == 0) continue;
        ++rank;
        const std::uint64_t pivot = A.at(i, i);
        det_product = det_product * pivot % p;
        const std::uint64_t pivot_inv = mod_pow_u64(pivot, p - 2, p);
        for (unsigned r = i + 1; r < n; ++r) {
            if (A.at(r, i) == 0) continue;
            const std::uint64_t f = std::uint64_t(A.at(r, i)) * pivot_inv % p;
            // row_r -= f * row_i, then col_r -= f * col_i (congruence step)
            for (unsigned c = 0; c < n; ++c)
                A.at(r, c) = static_cast<std::uint32_t>((A.at(r, c) + (p - f) * A.at(i, c)) % p);
            for (unsigned r2 = 0; r2 < n; ++r2)
                A.at(r2, r) = static_cast<std::uint32_t>((A.at(r2, r) + (p - f) * A.at(r2, i)) % p);
        }
    }
    return {rank, legendre_mod_p(det_product, p)};
}

std::vector<std::int64_t> QFormSolver::exp_sum_histogram(std::optional<std::uint64_t> ja,
                                                         std::optional<std::uint64_t> jb) const {
    const std::uint64_t N = field_->order();
    const std::uint32_t p = params_.p;
    const std::uint32_t* tr = field_->trace_table().data();
    std::vector<std::int64_t> counts(p, 0);
    counts[0] += 1; // x = 0 contributes chi(0) = omega^0
    // walk the exponents of a x^{p^m+1} and b x^{p^{m+e}+1} incrementally
    const std::uint64_t step_a = exp_a_ % N;
    const std::uint64_t step_b = exp_b_ % N;
    std::uint64_t ea = ja.value_or(0) % N;
    std::uint64_t eb = jb.value_or(0) % N;
    if (ja && jb) {
        for (std::uint64_t k = 0; k < N; ++k) {
            std::uint32_t q = tr[ea] + tr[eb];
            if (q >= p) q -= p;
            ++counts[q];
            ea += step_a;
            if (ea >= N) ea -= N;
            eb += step_b;
            if (eb >= N) eb -= N;
        }
    } else if (ja) {
        for (std::uint64_t k = 0; k < N; ++k) {
            ++counts[tr[ea]];
            ea += step_a;
            if (ea >= N) ea -= N;
        }
    } else if (jb) {
        for (std::uint64_t k = 0; k < N; ++k) {
            ++counts[tr[eb]];
            eb += step_b;
            if (eb >= N) eb -= N;
        }
    } else {
        counts[0] += static_cast<std::int64_t>(N);
    }
    return counts;
}

CycInt QFormSolver::exp_sum_cyc(const FieldElem& a, const FieldElem& b) const {
    std::optional<std::uint64_t> ja, jb;
    if (!a.is_zero()) ja = field_->dlog(a);
    if (!b.is_zero()) jb = field_->dlog(b);
    return CycInt::from_counts(params_.p, exp_sum_histogram(ja, jb));
}

QuadValue QFormSolver::exp_sum(const FieldElem& a, const FieldElem& b,
                               ExpSumMethod method) const {
    if (method == ExpSumMethod::direct) return recognize_quadratic(exp_sum_cyc(a, b));
    // rank/sign route: E = eta(delta) p^{n - r/2}
    unsigned rank;
    int sign;
    if (a.is_zero() && b.is_zero()) {
        rank = 0;
        sign = 1;
    } else {
        const std::uint64_t ks = kernel_size(a, b);
        unsigned klog = 0;
        for (std::uint64_t v = ks; v > 1; v /= params_.p) ++klog;
        rank = params_.n - klog;
        auto rs = rank_and_sign(gram_matrix(a, b));
        if (rs.first != rank)
            throw std::logic_error("Gram rank disagrees with the kernel rank");
        sign = rs.second;
    }
    QuadValue out{Rational(0), Rational(0)};
    if (rank % 2 == 0) {
        BigInt mag = 1;
        for (unsigned i = 0; i < params_.n - rank / 2; ++i) mag *= params_.p;
        out.u = Rational(sign * mag);
    } else {
        BigInt mag = 1;
        for (unsigned i = 0; i < params_.n - (rank + 1) / 2; ++i) mag *= params_.p;
        out.v = Rational(sign * mag);
    }
    return out;
}

QFormAnalysis QFormSolver::analyze(const FieldElem& a, const FieldElem& b) const {
    QFormAnalysis out{a, b, 0, 0, 0, {Rational(0), Rational(0)}};
    out.kernel_size = kernel_size(a, b);
    unsigned klog = 0;
    for (std::uint64_t v = out.kernel_size; v > 1; v /= params_.p) ++klog;
    out.rank = params_.n - klog;
    const auto rs = rank_and_sign(gram_matrix(a, b));
    if (rs.first != out.rank)
        throw std::logic_error("Gram rank disagrees with the kernel rank");
    out.det_class = rs.second;
    out.sum_value = exp_sum(a, b, ExpSumMethod::rank_sign);
    return out;
}

std::vector<AuditCheck> QFormSolver::gauss_sum_audit(const GaussAuditOptions& opts) const {
    std::vector<AuditCheck> checks;
    const std::uint64_t N = field_->order();
    const std::uint32_t p = params_.p;
    const auto tr = field_->trace_table();
    const BigInt neg_pm = -BigInt(params_.p_pow(params_.m));

    // G(eta, chi) over F_{p^n} by direct summation; Lemma on Gauss sums says
    // -p^m here because (p^m+1)/2 is odd for p = 1 (mod 4).
    {
        std::vector<BigInt> coeffs_full(p, 0);
        for (std::uint64_t k = 0; k < N; ++k) coeffs_full[tr[k]] += (k % 2 == 0) ? 1 : -1;
        std::vector<BigInt> reduced(p - 1);
        for (std::uint32_t j = 0; j + 1 < p; ++j) reduced[j] = coeffs_full[j] - coeffs_full[p - 1];
        const CycInt G = CycInt::from_coeffs(p, std::move(reduced));
        const CycInt want = CycInt::from_integer(p, neg_pm);
        const QuadValue got = recognize_quadratic(G);
        checks.push_back({"gauss_sum_value", G == want, got.str(), QuadValue{Rational(neg_pm), Rational(0)}.str()});
    }

    // sum_x chi(a x^2) == -eta(a) p^m on sampled nonzero a
    {
        std::uint64_t failures = 0, tested = 0;
        std::string first_failure;
        const std::uint64_t stride = N <= opts.sample_limit ? 1 : N / opts.sample_limit;
        for (std::uint64_t ja = 0; ja < N; ja += stride) {
            std::vector<std::int64_t> counts(p, 0);
            counts[0] += 1;
            for (std::uint64_t k = 0; k < N; ++k) counts[tr[(ja + 2 * k) % N]] += 1;
            const CycInt got = CycInt::from_counts(p, counts);
            const int eta_a = (ja % 2 == 0) ? 1 : -1;
            const CycInt want = CycInt::from_integer(p, eta_a == 1 ? neg_pm : -neg_pm);
            ++tested;
            if (got != want) {
                ++failures;
                if (first_failure.empty())
                    first_failure = "a = alpha^" + std::to_string(ja);
            }
        }
        std::ostringstream obs;
        obs << failures << " failures out of " << tested << " sampled a";
        if (failures) obs << " (first: " << first_failure << ")";
        checks.push_back({"chi_a_x_squared", failures == 0, obs.str(), "0 failures"});
    }
    return checks;
}

std::uint64_t QFormSolver::g_upsilon_root_count(const FieldElem& upsilon) const {
    if (upsilon.is_zero()) throw std::invalid_argument("upsilon must be nonzero");
    const std::uint64_t N = field_->order();
    const std::uint64_t pe1 = params_.p_pow(params_.e) + 1;
    const FieldElem one = field_->one();
    std::uint64_t count = 0;
    std::uint64_t single_root_exp = 0;
    // z = 0 gives g(0) = upsilon != 0; only nonzero z can be roots
    for (std::uint64_t zk = 0; zk < N; ++zk) {
        const FieldElem z = field_->alpha_pow(zk);
        const FieldElem val =
            field_->alpha_pow(zk % N * (pe1 % N) % N) - upsilon * z + upsilon;
        if (val.is_zero()) {
            ++count;
            single_root_exp = zk;
        }
    }
    if (count == 1) {
        const FieldElem z0 = field_->alpha_pow(single_root_exp);
        const FieldElem zm1 = z0 - one; // z0 = 1 is never a root (g(1) = 1)
        const std::uint64_t q = N / (params_.p_pow(params_.e) - 1);
        if (field_->dlog(zm1) * (q % N) % N != 0)
            throw std::logic_error("single root violates the (p^e-1)th power condition");
    }
    return count;
}

UpsilonCensus QFormSolver::g_upsilon_census() const {
    const std::uint64_t N = field_->order();
    const std::uint64_t pe = params_.p_pow(params_.e);
    const std::uint64_t pe1 = pe + 1;
    const auto pow_tab = field_->pow_table();
    const auto dlog_tab = field_->dlog_table();
    const std::uint32_t p = params_.p;

    // census by inversion: every z outside {0, 1} is a root of g_v for exactly
    // v = z^{p^e+1}/(z-1); count arrivals per v
    std::vector<std::uint32_t> counts(N, 0);
    std::vector<std::uint32_t> a_root(N, 0);
    for (std::uint64_t zk = 1; zk < N; ++zk) { // zk = 0 is z = 1
        const std::uint64_t t1 = zk * (pe1 % N) % N;
        // z - 1 as an index: decrement coordinate 0 of the encoding
        const std::uint64_t zidx = pow_tab[zk];
        const std::uint64_t low = zidx % p;
        const std::uint64_t zm1_idx = zidx - low + (low + p - 1) % p;
        const std::uint64_t vk = (t1 + N - dlog_tab[zm1_idx]) % N;
        ++counts[vk];
        a_root[vk] = static_cast<std::uint32_t>(zk);
    }

    UpsilonCensus out;
    const std::uint64_t power_q = N / (pe - 1);
    for (std::uint64_t vk = 0; vk < N; ++vk) {
        ++out.count_histogram[counts[vk]];
        if (counts[vk] == 1) {
            ++out.single_root_upsilons;
            const std::uint64_t zk = a_root[vk];
            const std::uint64_t zidx = pow_tab[zk];
            const std::uint64_t low = zidx % p;
            const std::uint64_t zm1_idx = zidx - low + (low + p - 1) % p;
            if (dlog_tab[zm1_idx] * (power_q % N) % N != 0) out.power_condition_ok = false;
        }
        if (!(counts[vk] == 0 || counts[vk] == 1 || counts[vk] == 2 || counts[vk] == pe1))
            out.counts_in_allowed_set = false;
    }
    return out;
}

} // namespace corrspec
