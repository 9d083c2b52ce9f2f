#include "corrspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace corrspec {

namespace {

BigInt big_pow(std::uint64_t p, unsigned k) {
    BigInt out = 1;
    for (unsigned i = 0; i < k; ++i) out *= p;
    return out;
}

BigInt exact_div(const BigInt& num, const BigInt& den, const char* what) {
    if (num % den != 0)
        throw std::logic_error(std::string("non-integral count for ") + what +
                               " (transcription error in a closed form)");
    return num / den;
}

std::string count_str(const BigInt& v) { return v.str(); }

} // namespace

const char* to_string(CorrClass c) {
    switch (c) {
        case CorrClass::MINUS_ONE: return "MINUS_ONE";
        case CorrClass::PLUS_PM: return "PLUS_PM";
        case CorrClass::MINUS_PM: return "MINUS_PM";
        case CorrClass::HALF_PLUS: return "HALF_PLUS";
        case CorrClass::HALF_MINUS: return "HALF_MINUS";
        case CorrClass::E_NEG: return "E_NEG";
    }
    return "?";
}

std::optional<CorrClass> corr_class_from_string(const std::string& s) {
    for (CorrClass c : kAllCorrClasses)
        if (s == to_string(c)) return c;
    return std::nullopt;
}

const char* to_string(Method m) {
    switch (m) {
        case Method::direct: return "direct";
        case Method::sums: return "sums";
        case Method::rank_fast: return "rank_fast";
    }
    return "?";
}

std::optional<Method> method_from_string(const std::string& s) {
    if (s == "direct") return Method::direct;
    if (s == "sums") return Method::sums;
    if (s == "rank_fast") return Method::rank_fast;
    return std::nullopt;
}

QuadValue class_value(CorrClass c, const SeqParams& params) {
    const BigInt pm = big_pow(params.p, params.m);
    const BigInt pe = big_pow(params.p, params.e);
    // e odd throughout this family, so p^{e/2} = p^{(e-1)/2} sqrt(p)
    const BigInt pe_half = big_pow(params.p, (params.e - 1) / 2);
    switch (c) {
        case CorrClass::MINUS_ONE: return {Rational(-1), Rational(0)};
        case CorrClass::PLUS_PM: return {Rational(pm - 1), Rational(0)};
        case CorrClass::MINUS_PM: return {Rational(-pm - 1), Rational(0)};
        case CorrClass::HALF_PLUS: return {Rational(pm, 2) - 1, Rational(pe_half * pm, 2)};
        case CorrClass::HALF_MINUS: return {Rational(pm, 2) - 1, -Rational(pe_half * pm, 2)};
        case CorrClass::E_NEG: return {Rational((1 - pe) * pm, 2) - 1, Rational(0)};
    }
    throw std::logic_error("unknown class");
}

std::vector<QuadValue> excluded_values(const SeqParams& params) {
    const BigInt pm = big_pow(params.p, params.m);
    const BigInt pe = big_pow(params.p, params.e);
    const BigInt pe_half = big_pow(params.p, (params.e - 1) / 2);
    return {
        {-Rational(pm, 2) - 1, Rational(pe_half * pm, 2)},  // (-1 + p^{e/2})/2 p^m - 1
        {-Rational(pm, 2) - 1, -Rational(pe_half * pm, 2)}, // (-1 - p^{e/2})/2 p^m - 1
        {Rational((1 + pe) * pm, 2) - 1, Rational(0)},      // (1 + p^e)/2 p^m - 1
        {-Rational((1 + pe) * pm, 2) - 1, Rational(0)},     // -(1 + p^e)/2 p^m - 1
    };
}

bool SpectrumReport::operator==(const SpectrumReport& o) const {
    return params.p == o.params.p && params.m == o.params.m && params.e == o.params.e &&
           params.n == o.params.n && params.d == o.params.d && params.period == o.params.period &&
           params.gcd_dn == o.params.gcd_dn && method == o.method && counts == o.counts &&
           audits == o.audits;
}

SpectrumReport theorem1_table(const SeqParams& params) {
    const std::uint64_t p = params.p;
    const unsigned m = params.m, e = params.e;
    const BigInt pm = big_pow(p, m), pe = big_pow(p, e);
    const BigInt pme = big_pow(p, m + e), p2e = big_pow(p, 2 * e), pme_minus = big_pow(p, m - e);

    std::array<BigInt, 6> c{};
    c[0] = exact_div((pme - 2 * pm - 2 * pe + 3) * (pm + 1), 2 * (pe - 1), "MINUS_ONE");
    c[1] = exact_div((pe - 1) * (pm + 1) * (pm + 1), 4 * (pe + 1), "PLUS_PM");
    c[2] = exact_div(pm * pm - 1, 4, "MINUS_PM");
    c[3] = exact_div(pme_minus * (pm + 1), 2, "HALF_PLUS");
    c[4] = c[3];
    c[5] = exact_div((pme_minus - 1) * (pm + 1), p2e - 1, "E_NEG");

    SpectrumReport rep;
    rep.params = params;
    rep.method = "theorem1";
    BigInt total = 0;
    bool nonneg = true;
    for (std::size_t i = 0; i < 6; ++i) {
        if (c[i] < 0) nonneg = false;
        total += c[i];
        rep.counts[i] = c[i].convert_to<std::uint64_t>();
    }
    rep.audits.push_back({"counts_nonnegative", nonneg, nonneg ? "all >= 0" : "negative count",
                          "all >= 0"});
    rep.audits.push_back({"sum_counts", total == BigInt(params.period), count_str(total),
                          std::to_string(params.period)});
    return rep;
}

// ---------------------------------------------------------------------------
// engine
// ---------------------------------------------------------------------------

SpectrumEngine::SpectrumEngine(const Field& field, const SeqParams& params, const WorkerPool& pool,
                               int sign_convention)
    : field_(&field), params_(params), pool_(&pool), sign_convention_(sign_convention),
      corr_(field, params), qf_(field, params) {
    if (sign_convention != 1 && sign_convention != -1)
        throw std::invalid_argument("sign_convention must be +1 or -1");
}

CycInt SpectrumEngine::correlation_via_sums(std::uint64_t tau) const {
    const std::uint64_t N = params_.period;
    if (tau >= N) throw std::out_of_range("shift tau must lie in [0, p^n - 2]");
    const std::uint64_t half = N / 2;
    const CycInt e1 = CycInt::from_counts(params_.p, qf_.exp_sum_histogram(half, tau));
    const CycInt e2 = CycInt::from_counts(
        params_.p, qf_.exp_sum_histogram((half + params_.d % N) % N, (tau + 1) % N));
    return (e1 + e2).half() - CycInt::from_integer(params_.p, 1);
}

CorrClass SpectrumEngine::classify(const QuadValue& value) const {
    for (CorrClass c : kAllCorrClasses)
        if (class_value(c, params_) == value) return c;
    for (const QuadValue& bad : excluded_values(params_))
        if (bad == value)
            throw ClassifyError("excluded Corollary-2 value appeared in the spectrum: " +
                                value.str());
    throw ClassifyError("correlation value outside the six classes: " + value.str());
}

CorrClass SpectrumEngine::classify(const CycInt& value) const {
    return classify(recognize_quadratic(value));
}

QuadValue SpectrumEngine::rank_route_E1(std::uint64_t tau) const {
    const PerC& pc = per_c()[tau];
    const unsigned rank = params_.n - pc.rank_defect;
    const int sign = int(pc.sign) * sign_convention_;
    QuadValue out{Rational(0), Rational(0)};
    if (rank % 2 == 0)
        out.u = Rational(sign * big_pow(params_.p, params_.n - rank / 2));
    else
        out.v = Rational(sign * big_pow(params_.p, params_.n - (rank + 1) / 2));
    return out;
}

QuadValue SpectrumEngine::parity_route_E2(std::uint64_t tau) const {
    const int eta_c = (tau % 2 == 0) ? 1 : -1;
    return {Rational(eta_c * big_pow(params_.p, params_.m)), Rational(0)};
}

const std::vector<SpectrumEngine::PerC>& SpectrumEngine::per_c() const {
    std::call_once(per_c_once_, [this] {
        const std::uint64_t N = params_.period;
        per_c_.resize(N);
        const FieldElem minus_one = -field_->one();
        pool_->parallel_for(0, N, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t tau = lo; tau < hi; ++tau) {
                const FieldElem c = field_->alpha_pow(tau);
                const std::uint64_t ks = qf_.kernel_size(minus_one, c);
                unsigned klog = 0;
                for (std::uint64_t v = ks; v > 1; v /= params_.p) ++klog;
                const auto rs = QFormSolver::rank_and_sign(qf_.gram_matrix(minus_one, c));
                if (rs.first != params_.n - klog)
                    throw std::logic_error("Gram rank disagrees with the kernel rank");
                per_c_[tau] = {static_cast<std::uint8_t>(klog), static_cast<std::int8_t>(rs.second)};
            }
        });
    });
    return per_c_;
}

std::vector<QuadValue> SpectrumEngine::spectrum_values(Method method) const {
    const std::uint64_t N = params_.period;
    std::vector<QuadValue> values(N);
    pool_->parallel_for(0, N, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t tau = lo; tau < hi; ++tau) {
            switch (method) {
                case Method::direct:
                    values[tau] = recognize_quadratic(corr_.direct(tau));
                    break;
                case Method::sums:
                    values[tau] = recognize_quadratic(correlation_via_sums(tau));
                    break;
                case Method::rank_fast: {
                    const QuadValue e1 = rank_route_E1(tau);
                    const QuadValue e2 = parity_route_E2(tau);
                    const QuadValue sum = e1 + e2;
                    values[tau] = QuadValue{sum.u / 2 - 1, sum.v / 2};
                    break;
                }
            }
        }
    });
    return values;
}

SpectrumReport SpectrumEngine::full_spectrum(Method method) const {
    const std::uint64_t N = params_.period;
    SpectrumReport rep;
    rep.params = params_;
    rep.method = to_string(method);

    // per-tau outcomes, then one deterministic aggregation pass in tau order
    enum : std::uint8_t { OK = 0, EXCLUDED = 1, UNKNOWN = 2 };
    std::vector<std::uint8_t> status(N, OK);
    std::vector<std::uint8_t> cls(N, 0);
    std::vector<std::uint8_t> real_ok(N, 1);
    std::vector<QuadValue> values(N);

    std::array<QuadValue, 6> class_vals;
    for (CorrClass c : kAllCorrClasses)
        class_vals[static_cast<unsigned>(c)] = class_value(c, params_);
    const std::vector<QuadValue> excluded = excluded_values(params_);

    pool_->parallel_for(0, N, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t tau = lo; tau < hi; ++tau) {
            QuadValue v;
            if (method == Method::rank_fast) {
                const QuadValue sum = rank_route_E1(tau) + parity_route_E2(tau);
                v = QuadValue{sum.u / 2 - 1, sum.v / 2};
            } else {
                const CycInt c =
                    method == Method::direct ? corr_.direct(tau) : correlation_via_sums(tau);
                real_ok[tau] = c.is_real() ? 1 : 0;
                v = recognize_quadratic(c);
            }
            values[tau] = v;
            status[tau] = UNKNOWN;
            for (unsigned i = 0; i < 6; ++i) {
                if (class_vals[i] == v) {
                    cls[tau] = static_cast<std::uint8_t>(i);
                    status[tau] = OK;
                    break;
                }
            }
            if (status[tau] == UNKNOWN)
                for (const QuadValue& bad : excluded)
                    if (bad == v) status[tau] = EXCLUDED;
        }
    });

    std::uint64_t excluded_hits = 0, unknown_hits = 0, not_real = 0, total = 0;
    std::string first_bad;
    double max_abs = 0.0;
    for (std::uint64_t tau = 0; tau < N; ++tau) {
        max_abs = std::max(max_abs, std::fabs(values[tau].to_double(params_.p)));
        if (!real_ok[tau]) ++not_real;
        if (status[tau] == OK) {
            ++rep.counts[cls[tau]];
            ++total;
        } else {
            if (status[tau] == EXCLUDED)
                ++excluded_hits;
            else
                ++unknown_hits;
            if (first_bad.empty())
                first_bad = "tau = " + std::to_string(tau) + ", value = " + values[tau].str();
        }
    }

    rep.audits.push_back({"all_values_classified", excluded_hits + unknown_hits == 0,
                          excluded_hits + unknown_hits == 0
                              ? "all " + std::to_string(N) + " shifts classified"
                              : std::to_string(unknown_hits) + " unknown + " +
                                    std::to_string(excluded_hits) + " excluded (" + first_bad + ")",
                          "all shifts classified"});
    rep.audits.push_back({"excluded_values_absent", excluded_hits == 0,
                          std::to_string(excluded_hits) + " occurrences", "0 occurrences"});
    if (method != Method::rank_fast)
        rep.audits.push_back({"values_conjugation_fixed", not_real == 0,
                              std::to_string(not_real) + " non-real values", "0 non-real values"});
    rep.audits.push_back({"sum_counts", total == N && excluded_hits + unknown_hits == 0,
                          std::to_string(total), std::to_string(N)});

    std::ostringstream maxs;
    maxs.precision(17);
    maxs << max_abs;
    if (params_.p == 5 && params_.e == 1) {
        const double bound = 2.0 * std::sqrt(double(params_.period + 1)) + 1.0;
        std::ostringstream bs;
        bs.precision(17);
        bs << "<= " << bound;
        rep.audits.push_back({"remark1_bound", max_abs <= bound, maxs.str(), bs.str()});
    } else {
        rep.audits.push_back(
            {"max_abs_correlation", true, maxs.str(), "informational (no bound claimed)"});
    }
    return rep;
}

// ---------------------------------------------------------------------------
// audits
// ---------------------------------------------------------------------------

CycInt SpectrumEngine::c_corr_at_zero_direct() const {
    const std::uint64_t N = params_.period;
    const std::uint32_t p = params_.p;
    const std::uint32_t* tr = field_->trace_table().data();
    std::vector<std::int64_t> counts(p, 0);
    counts[0] += 1; // x = 0
    const std::uint64_t step = params_.d % N;
    std::uint64_t e = N / 2; // exponent of -x^d starts at dlog(-1)
    for (std::uint64_t k = 0; k < N; ++k) {
        ++counts[tr[e]];
        e += step;
        if (e >= N) e -= N;
    }
    return CycInt::from_counts(p, counts);
}

std::vector<AuditCheck> SpectrumEngine::moment_audit() const {
    const std::uint64_t N = params_.period;
    const unsigned m = params_.m, e = params_.e;
    const std::uint32_t p = params_.p;

    struct Sums {
        QuadValue E1{Rational(0), Rational(0)}, E2{Rational(0), Rational(0)},
            E3{Rational(0), Rational(0)};
        QuadValue C1{Rational(0), Rational(0)}, C2{Rational(0), Rational(0)},
            C3{Rational(0), Rational(0)};
    };
    const unsigned workers = pool_->thread_count();
    std::vector<Sums> partial(workers ? workers : 1);
    const std::uint64_t chunk = (N + partial.size() - 1) / partial.size();
    pool_->parallel_for(0, partial.size(), [&](std::size_t wlo, std::size_t whi) {
        for (std::size_t w = wlo; w < whi; ++w) {
            Sums s;
            const std::uint64_t lo = w * chunk, hi = std::min<std::uint64_t>(N, lo + chunk);
            for (std::uint64_t tau = lo; tau < hi; ++tau) {
                const QuadValue E = rank_route_E1(tau);
                const QuadValue sum = E + parity_route_E2(tau);
                const QuadValue C{sum.u / 2, sum.v / 2};
                const QuadValue E2v = qv_mul(E, E, p), C2v = qv_mul(C, C, p);
                s.E1 = s.E1 + E;
                s.E2 = s.E2 + E2v;
                s.E3 = s.E3 + qv_mul(E2v, E, p);
                s.C1 = s.C1 + C;
                s.C2 = s.C2 + C2v;
                s.C3 = s.C3 + qv_mul(C2v, C, p);
            }
            partial[w] = s;
        }
    });
    Sums t;
    for (const auto& s : partial) {
        t.E1 = t.E1 + s.E1;
        t.E2 = t.E2 + s.E2;
        t.E3 = t.E3 + s.E3;
        t.C1 = t.C1 + s.C1;
        t.C2 = t.C2 + s.C2;
        t.C3 = t.C3 + s.C3;
    }
    // stated c = 0 boundary terms (verified independently below)
    const BigInt pm = big_pow(p, m);
    const QuadValue E0{Rational(-pm), Rational(0)};
    const QuadValue C0{Rational((pm - 1) * pm, 2), Rational(0)};
    t.E1 = t.E1 + E0;
    t.E2 = t.E2 + qv_mul(E0, E0, p);
    t.E3 = t.E3 + qv_mul(qv_mul(E0, E0, p), E0, p);
    t.C1 = t.C1 + C0;
    t.C2 = t.C2 + qv_mul(C0, C0, p);
    t.C3 = t.C3 + qv_mul(qv_mul(C0, C0, p), C0, p);

    const BigInt p2m = big_pow(p, 2 * m), p3m = big_pow(p, 3 * m), p4m = big_pow(p, 4 * m);
    const BigInt pe = big_pow(p, e), pme = big_pow(p, m + e);
    const QuadValue want_E1{Rational(p2m), Rational(0)};
    const QuadValue want_E2{Rational((2 * p2m - 1) * p2m), Rational(0)};
    const QuadValue want_E3{Rational((-p2m + pme + pe) * p3m), Rational(0)};
    const QuadValue want_C1{Rational(p2m), Rational(0)};
    const QuadValue want_C2{Rational(p4m), Rational(0)};
    const QuadValue want_C3{Rational(p3m * (p3m - p2m + pme + 6 * pm + pe), 8), Rational(0)};

    std::vector<AuditCheck> checks;
    auto push = [&checks](const char* name, const QuadValue& got, const QuadValue& want) {
        checks.push_back({name, got == want, got.str(), want.str()});
    };
    push("lemma10_sum_E", t.E1, want_E1);
    push("lemma10_sum_E_squared", t.E2, want_E2);
    push("lemma10_sum_C", t.C1, want_C1);
    push("lemma10_sum_C_squared", t.C2, want_C2);
    push("lemma11_sum_E_cubed", t.E3, want_E3);
    push("lemma11_sum_C_cubed", t.C3, want_C3);

    // boundary values by direct summation
    const QuadValue E0_direct =
        qf_.exp_sum(-field_->one(), field_->zero(), ExpSumMethod::direct);
    checks.push_back({"boundary_E_minus1_0", E0_direct == E0, E0_direct.str(), E0.str()});
    const QuadValue C0_direct = recognize_quadratic(c_corr_at_zero_direct());
    checks.push_back({"boundary_C_minus1_0", C0_direct == C0, C0_direct.str(), C0.str()});
    return checks;
}

std::vector<AuditCheck> SpectrumEngine::rank_census() const {
    const std::uint64_t N = params_.period;
    const unsigned e = params_.e;
    const auto& pc = per_c();

    std::uint64_t n0 = 0, ne = 0, n2e = 0, other_rank = 0;
    std::uint64_t n01 = 0, n0m1 = 0, ne1 = 0, nem1 = 0, n2e1 = 0, n2em1 = 0;
    std::uint64_t rank_ne_nonsquare = 0;
    for (std::uint64_t tau = 0; tau < N; ++tau) {
        const unsigned defect = pc[tau].rank_defect;
        const int sign = int(pc[tau].sign) * sign_convention_;
        if (defect == 0) {
            ++n0;
            (sign > 0 ? n01 : n0m1)++;
        } else if (defect == e) {
            ++ne;
            (sign > 0 ? ne1 : nem1)++;
            if (tau % 2 != 0) ++rank_ne_nonsquare; // eta(alpha^tau) = -1
        } else if (defect == 2 * e) {
            ++n2e;
            (sign > 0 ? n2e1 : n2em1)++;
        } else {
            ++other_rank;
        }
    }

    const unsigned m = params_.m;
    const BigInt pm = big_pow(params_.p, m), pe = big_pow(params_.p, e),
                 pme = big_pow(params_.p, m + e), p2e = big_pow(params_.p, 2 * e),
                 pm2e = big_pow(params_.p, m + 2 * e), pmme = big_pow(params_.p, m - e);
    const BigInt want_n0 = exact_div((pm2e - pme - pm - p2e + 2) * (pm + 1), p2e - 1, "N_0");
    const BigInt want_ne = pmme * (pm + 1);
    const BigInt want_n2e = exact_div((pmme - 1) * (pm + 1), p2e - 1, "N_2e");
    const BigInt want_n01 = exact_div((pme - 1) * (pm + 1), 2 * (pe + 1), "N_{0,1}");
    const BigInt want_n0m1 =
        exact_div((pme - 2 * pm - 2 * pe + 3) * (pm + 1), 2 * (pe - 1), "N_{0,-1}");
    const BigInt want_nepm = exact_div(pmme * (pm + 1), 2, "N_{e,+-1}");
    const BigInt want_n2em1 = want_n2e;

    std::vector<AuditCheck> checks;
    auto push = [&checks](const std::string& name, std::uint64_t got, const BigInt& want) {
        checks.push_back({name, BigInt(got) == want, std::to_string(got), count_str(want)});
    };
    checks.push_back({"lemma4_rank_set", other_rank == 0,
                      std::to_string(other_rank) + " ranks outside {n, n-e, n-2e}",
                      "0 ranks outside {n, n-e, n-2e}"});
    push("corollary3_N0", n0, want_n0);
    push("corollary3_Ne", ne, want_ne);
    push("corollary3_N2e", n2e, want_n2e);
    push("corollary4_N0_plus", n01, want_n01);
    push("corollary4_N0_minus", n0m1, want_n0m1);
    push("corollary4_Ne_plus", ne1, want_nepm);
    push("corollary4_Ne_minus", nem1, want_nepm);
    push("corollary4_N2e_plus", n2e1, BigInt(0));
    push("corollary4_N2e_minus", n2em1, want_n2em1);
    checks.push_back({"lemma9_rank_ne_implies_square", rank_ne_nonsquare == 0,
                      std::to_string(rank_ne_nonsquare) + " nonsquare c with rank n-e",
                      "0 nonsquare c with rank n-e"});
    return checks;
}

std::vector<AuditCheck> SpectrumEngine::lemma7_audit() const {
    const std::uint64_t N = params_.period;
    const std::uint32_t p = params_.p;
    const BigInt pm = big_pow(p, params_.m);
    const std::uint64_t ja = (N / 2 + params_.d % N) % N; // dlog(-alpha^d)

    std::vector<std::uint8_t> value_ok(N, 0), rank_ok(N, 0);
    const FieldElem neg_alpha_d = field_->alpha_pow(ja);
    pool_->parallel_for(0, N, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t tau = lo; tau < hi; ++tau) {
            const std::uint64_t jb = (tau + 1) % N; // dlog(c alpha)
            const CycInt got = CycInt::from_counts(p, qf_.exp_sum_histogram(ja, jb));
            const int eta_c = (tau % 2 == 0) ? 1 : -1;
            const CycInt want = CycInt::from_integer(p, eta_c > 0 ? pm : -pm);
            value_ok[tau] = got == want;
            rank_ok[tau] = qf_.kernel_size(neg_alpha_d, field_->alpha_pow(jb)) == 1;
        }
    });
    std::uint64_t value_fail = 0, rank_fail = 0;
    for (std::uint64_t tau = 0; tau < N; ++tau) {
        if (!value_ok[tau]) ++value_fail;
        if (!rank_ok[tau]) ++rank_fail;
    }
    return {
        {"lemma7_value", value_fail == 0,
         std::to_string(value_fail) + " of " + std::to_string(N) + " shifts off eta(c) p^m",
         "E(-alpha^d, c alpha) = eta(c) p^m for all c"},
        {"lemma7_rank_n", rank_fail == 0,
         std::to_string(rank_fail) + " shifts with rank < n", "rank n for all c"},
    };
}

std::vector<AuditCheck> SpectrumEngine::upsilon_audit() const {
    const UpsilonCensus census = qf_.g_upsilon_census();
    const std::uint64_t want_n1 = params_.p_pow(params_.n - params_.e);

    std::ostringstream hist;
    for (auto [count, times] : census.count_histogram) hist << count << ":" << times << " ";

    std::vector<AuditCheck> checks;
    checks.push_back({"lemma8_count_set", census.counts_in_allowed_set, hist.str(),
                      "all counts in {0, 1, 2, p^e+1}"});
    checks.push_back({"lemma8_single_root_count", census.single_root_upsilons == want_n1,
                      std::to_string(census.single_root_upsilons), std::to_string(want_n1)});
    checks.push_back({"lemma8_power_condition", census.power_condition_ok,
                      census.power_condition_ok ? "holds at every single root" : "violated",
                      "(z0 - 1)^{(p^n-1)/(p^e-1)} = 1 at every single root"});

    // the census comes from the inverse z-sweep; spot-check it against literal
    // per-upsilon root counting
    const std::uint64_t N = params_.period;
    const std::uint64_t stride = std::max<std::uint64_t>(1, N / 16);
    bool spot_ok = true;
    for (std::uint64_t vk = 0; vk < N && spot_ok; vk += stride) {
        const std::uint64_t direct = qf_.g_upsilon_root_count(field_->alpha_pow(vk));
        // recount from the census histogram is not keyed per upsilon, so redo
        // the sweep arithmetic for this one exponent
        std::uint64_t swept = 0;
        const std::uint64_t pe1 = params_.p_pow(params_.e) + 1;
        for (std::uint64_t zk = 1; zk < N; ++zk) {
            const FieldElem z = field_->alpha_pow(zk);
            const FieldElem zm1 = z - field_->one();
            const std::uint64_t t1 = zk * (pe1 % N) % N;
            if ((t1 + N - field_->dlog(zm1)) % N == vk) ++swept;
        }
        if (direct != swept) spot_ok = false;
    }
    checks.push_back({"lemma8_census_spotcheck", spot_ok,
                      spot_ok ? "sweep matches literal counting on sampled upsilon"
                              : "sweep disagrees with literal counting",
                      "agreement on sampled upsilon"});
    return checks;
}

std::string SpectrumEngine::analyze_dump() const {
    const std::uint64_t N = params_.period;
    const auto& pc = per_c();
    std::ostringstream os;
    os << "dlog\tkernel_size\trank\tdet_class\tE_u\tE_v\n";
    for (std::uint64_t tau = 0; tau < N; ++tau) {
        const unsigned rank = params_.n - pc[tau].rank_defect;
        const QuadValue E = rank_route_E1(tau);
        os << tau << "\t" << params_.p_pow(pc[tau].rank_defect) << "\t" << rank << "\t"
           << int(pc[tau].sign) * sign_convention_ << "\t" << rational_to_string(E.u) << "\t"
           << rational_to_string(E.v) << "\n";
    }
    return os.str();
}

} // namespace corrspec
