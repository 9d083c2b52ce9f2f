#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "corrspec/common.hpp"
#include "corrspec/cyclotomic.hpp"
#include "corrspec/qform.hpp"
#include "corrspec/seqgen.hpp"
#include "corrspec/worker_pool.hpp"

namespace corrspec {

/// The six value classes of the correlation distribution, in report order.
enum class CorrClass : unsigned {
    MINUS_ONE = 0, // -1
    PLUS_PM,       // p^m - 1
    MINUS_PM,      // -p^m - 1
    HALF_PLUS,     // (1 + p^{e/2})/2 * p^m - 1
    HALF_MINUS,    // (1 - p^{e/2})/2 * p^m - 1
    E_NEG,         // (1 - p^e)/2 * p^m - 1
};

inline constexpr std::array<CorrClass, 6> kAllCorrClasses = {
    CorrClass::MINUS_ONE, CorrClass::PLUS_PM,    CorrClass::MINUS_PM,
    CorrClass::HALF_PLUS, CorrClass::HALF_MINUS, CorrClass::E_NEG,
};

const char* to_string(CorrClass c);
std::optional<CorrClass> corr_class_from_string(const std::string& s);

/// Exact value of a class as u + v*sqrt(p). e is always odd here (e | m with
/// m odd), so the HALF classes carry a sqrt(p) part: p^{e/2} = p^{(e-1)/2} sqrt(p).
QuadValue class_value(CorrClass c, const SeqParams& params);

/// Corollary-2 candidates that the theorem excludes from the spectrum:
/// (-1 +- p^{e/2})/2 * p^m - 1 and +-(1 + p^e)/2 * p^m - 1. Meeting one of
/// these is a loud failure distinct from "unrecognized".
std::vector<QuadValue> excluded_values(const SeqParams& params);

enum class Method { direct, sums, rank_fast };
const char* to_string(Method m);
std::optional<Method> method_from_string(const std::string& s);

struct SpectrumReport {
    SeqParams params;
    std::string method; // direct | sums | rank_fast | all | theorem1
    std::array<std::uint64_t, 6> counts{};
    std::vector<AuditCheck> audits;

    bool all_audits_pass() const { return all_pass(audits); }
    bool operator==(const SpectrumReport& o) const;
};

/// Closed-form distribution; pure arithmetic in the parameters. Throws
/// std::logic_error if any count were non-integral (a transcription error).
SpectrumReport theorem1_table(const SeqParams& params);

/// Drives the three computation routes over one (field, params) pair and runs
/// the verification battery. sign_convention is a diagnostic hook: -1 negates
/// the rank/sign route so the audit self-tests can prove the censuses catch a
/// tampered build. Production code always uses +1.
class SpectrumEngine {
public:
    SpectrumEngine(const Field& field, const SeqParams& params, const WorkerPool& pool,
                   int sign_convention = +1);

    const SeqParams& params() const { return params_; }
    const CrossCorrelator& correlator() const { return corr_; }
    const QFormSolver& qform() const { return qf_; }

    /// C_d(tau) = -1 + (E(-1,c) + E(-alpha^d, c alpha))/2 with both E sums
    /// taken by exact summation; equals the definitional route exactly.
    CycInt correlation_via_sums(std::uint64_t tau) const;

    CorrClass classify(const QuadValue& value) const;
    CorrClass classify(const CycInt& value) const;

    std::vector<QuadValue> spectrum_values(Method method) const;
    SpectrumReport full_spectrum(Method method) const;

    std::vector<AuditCheck> moment_audit() const;
    std::vector<AuditCheck> rank_census() const;
    std::vector<AuditCheck> lemma7_audit() const;
    std::vector<AuditCheck> upsilon_audit() const;

    /// One line per c: dlog, kernel size, rank, det class, E(-1,c).
    std::string analyze_dump() const;

    /// C(-1, 0) = sum over x of chi(-x^d), by direct summation.
    CycInt c_corr_at_zero_direct() const;

private:
    struct PerC {
        std::uint8_t rank_defect; // {0, e, 2e} scaled: rank = n - rank_defect
        std::int8_t sign;         // eta(delta) from the Gram route
    };
    const std::vector<PerC>& per_c() const; // lazy, built once under a mutex

    QuadValue rank_route_E1(std::uint64_t tau) const;
    QuadValue parity_route_E2(std::uint64_t tau) const;

    const Field* field_;
    SeqParams params_;
    const WorkerPool* pool_;
    int sign_convention_;
    CrossCorrelator corr_;
    QFormSolver qf_;

    mutable std::once_flag per_c_once_;
    mutable std::vector<PerC> per_c_;
};

} // namespace corrspec
