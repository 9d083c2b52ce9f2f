#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "corrspec/common.hpp"
#include "corrspec/cyclotomic.hpp"
#include "corrspec/ffield.hpp"
#include "corrspec/seqgen.hpp"

namespace corrspec {

/// Dense symmetric n x n matrix over F_p.
struct FpMatrix {
    unsigned n = 0;
    std::uint32_t p = 0;
    std::vector<std::uint32_t> data; // row-major

    std::uint32_t& at(unsigned i, unsigned j) { return data[i * n + j]; }
    std::uint32_t at(unsigned i, unsigned j) const { return data[i * n + j]; }
};

/// Everything known about one form q_{a,b}(x) = Tr(a x^{p^m+1} + b x^{p^{m+e}+1}).
struct QFormAnalysis {
    FieldElem a;
    FieldElem b;
    std::uint64_t kernel_size = 0; // p^{e * kernel_dim}
    unsigned rank = 0;             // n - log_p(kernel_size)
    int det_class = 0;             // eta_p(diagonal product), +1 for rank 0
    QuadValue sum_value;           // E(a,b)
};

enum class ExpSumMethod { direct, rank_sign };

struct GaussAuditOptions {
    std::size_t sample_limit = 256; // exhaustive below this, strided sample above
};

struct UpsilonCensus {
    std::map<std::uint64_t, std::uint64_t> count_histogram; // #roots -> #upsilons
    std::uint64_t single_root_upsilons = 0;
    bool counts_in_allowed_set = true;  // {0, 1, 2, p^e+1}
    bool power_condition_ok = true;     // (z0-1)^{(p^n-1)/(p^e-1)} = 1 at single roots
};

/// Per-(field, params) solver for the two exponential-sum routes and the
/// kernel/rank machinery. All per-(a, b) queries are pure; censuses take a
/// WorkerPool and merge deterministically.
class QFormSolver {
public:
    QFormSolver(const Field& field, const SeqParams& params);

    const Field& field() const { return *field_; }
    const SeqParams& params() const { return params_; }

    /// q_{a,b}(x) as a residue mod p.
    std::uint32_t eval_qform(const FieldElem& a, const FieldElem& b, const FieldElem& x) const;

    /// Number of y with b^{p^{m+e}} y^{p^{2e}} + (a^{p^{m+e}} + a^{p^e}) y^{p^e} + b y = 0,
    /// via the kernel of the F_{p^e}-linear map (matrix over F_{p^e} of
    /// dimension n/e, Gaussian elimination with subfield pivots inverted in
    /// the big field). (0,0) is rejected.
    std::uint64_t kernel_size(const FieldElem& a, const FieldElem& b) const;
    /// Literal root count over all of F_{p^n}; the independent oracle for
    /// kernel_size.
    std::uint64_t kernel_size_bruteforce(const FieldElem& a, const FieldElem& b) const;

    /// Coefficient matrix of q_{a,b} over the power basis {alpha^i}.
    FpMatrix gram_matrix(const FieldElem& a, const FieldElem& b) const;
    /// Congruence diagonalization: returns (rank, eta_p(product of pivots)).
    /// Deterministic pivot policy: prefer the lowest nonzero diagonal entry,
    /// else add row+column of the lowest j with A[i][j] != 0 (valid in odd
    /// characteristic), lowest index first.
    static std::pair<unsigned, int> rank_and_sign(FpMatrix A);

    /// E(a,b) by the requested route. direct sums p^n roots of unity exactly
    /// and recognizes the value; rank_sign returns eta(delta) * p^{n - r/2}.
    QuadValue exp_sum(const FieldElem& a, const FieldElem& b, ExpSumMethod method) const;
    /// Exact CycInt of the direct summation (before recognition).
    CycInt exp_sum_cyc(const FieldElem& a, const FieldElem& b) const;

    /// Kernel size, rank, Gram sign and E(a,b) in one consistent record;
    /// throws std::logic_error if the two rank routes ever disagree.
    QFormAnalysis analyze(const FieldElem& a, const FieldElem& b) const;

    /// G(eta, chi) == -p^m and sum_x chi(a x^2) == -eta(a) p^m on sampled a.
    std::vector<AuditCheck> gauss_sum_audit(const GaussAuditOptions& opts = {}) const;

    /// Roots of g_v(z) = z^{p^e+1} - v z + v over F_{p^n}, exhaustively.
    /// Result is in {0, 1, 2, p^e+1}; a single root z0 must satisfy
    /// (z0-1)^{(p^n-1)/(p^e-1)} = 1 (checked, throws on violation).
    std::uint64_t g_upsilon_root_count(const FieldElem& upsilon) const;
    /// Census over every nonzero upsilon via the inverse map
    /// z -> v = z^{p^e+1}/(z-1) (each z != 0,1 is a root of exactly one g_v),
    /// a single O(p^n) sweep.
    UpsilonCensus g_upsilon_census() const;

    // exponent-space helpers shared with the spectrum module
    std::uint64_t neg_one_exp() const { return neg_one_exp_; }
    /// E-sum histogram with a = alpha^{ja} (nullopt -> a = 0), b = alpha^{jb}.
    std::vector<std::int64_t> exp_sum_histogram(std::optional<std::uint64_t> ja,
                                                std::optional<std::uint64_t> jb) const;

private:
    std::uint64_t kernel_dim(const FieldElem& a, const FieldElem& b) const;
    std::vector<FieldElem> subfield_coords(const FieldElem& x) const;

    const Field* field_;
    SeqParams params_;
    std::uint64_t neg_one_exp_;      // dlog(-1) = (p^n-1)/2
    std::uint64_t exp_a_;            // p^m + 1
    std::uint64_t exp_b_;            // p^{m+e} + 1
    unsigned subfield_dim_;          // n / e
    std::uint64_t gamma_exp_;        // dlog of a generator of F_{p^e}^*
    std::vector<std::uint32_t> minv_; // inverse of the F_p basis matrix, row-major n x n
};

} // namespace corrspec
