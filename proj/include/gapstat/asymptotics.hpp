#pragma once

#include "gapstat/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gapstat {

// Unique positive root of E exp(theta*K) = 1; bracketed bisection plus a
// Newton polish to |mgf - 1| <= tol.
double theta_star(const ScoringModel& model, double tol = 1e-12);

enum class Domain { LogarithmicForLargeDelta, LinearForAllDelta, Indeterminate };
const char* domain_name(Domain d);

// Convergence test of sum_k exp(-theta_hat * gamma(k)) just below/above the
// theta* threshold. Affine and power-law weights converge for every positive
// theta_hat; logarithmic weights flip at slope = 1/theta*, with an
// indeterminate band of +-margin around the threshold.
struct DomainVerdict {
    Domain verdict = Domain::Indeterminate;
    double theta_hat = 0.0;   // test point used for the evidence series
    double theta_star = 0.0;
    double log_slope = 0.0;   // slope compared against 1/theta* (log-type only)
    SeriesBound evidence;     // sum_{k>=1} exp(-theta_hat * gamma(k))
    std::string detail;
};
DomainVerdict summation_test(const GapPenalty& gap, const ScoringModel& model,
                             double margin = 1e-6);

// One evaluation of a moment surface. `value` is on the log scale; the raw
// h-scale figures are kept alongside because root-finding and closed-form
// cross-checks happen there. trunc_bound is a certified one-sided error
// (true value in [value, value + trunc_bound]); mc_se is a delta-method
// standard error, 0 for exact enumeration.
struct PsiEstimate {
    double value = 0.0;
    double trunc_bound = 0.0;
    double mc_se = 0.0;
    int kappa = 1;
    double theta = 0.0;
    std::string method;
    std::uint64_t seed = 0;
    bool infinite = false;    // gap weight series diverges at this theta
    double h_value = 0.0;     // exp-scale sum actually accumulated
    double h_trunc = 0.0;
    double h_se = 0.0;
    long grid_cut = 0;
    int argmax_r = 0;         // sup statistics (diagonal evaluations only)
    bool sup_at_boundary = false;
    bool sup_certified = true;
};

enum class EvalMethod { ExactTruncated, MonteCarlo };
const char* method_name(EvalMethod m);

struct EvalBudget {
    long grid_cut = 0;        // m+n cutoff for the cell grid; 0 = auto
    long state_cap = 1L << 26; // max letter assignments enumerated per cell
    double op_budget = 2e9;   // rough op count steering the auto cutoff
    long samples = 10000;     // Monte Carlo samples per sampled cell
    long r_max = 12;          // diagonal range for the sup evaluations
};

// Cached evaluator for h_kappa(theta) = sum_{m,n>=kappa} E exp(theta*G_kappa)
// and for the diagonal sup xi_kappa. Each grid cell (m,n) stores a histogram
// of the first-match-marginalized chain score, so evaluations at many theta
// reuse one enumeration/sampling pass. The first matched pair factors out as
// the letter-pair mgf; for kappa = 1 every cell is a single deterministic
// value and the grid extends far. Cells outside the grid are covered by the
// envelope G_kappa(x_m,y_n) <= kappa*K_max - g(m-kappa) - g(n-kappa), whose
// total is certified through the gap weight series bound.
class PsiSurface {
public:
    struct CellInfo {
        int m, n;
        double mult;    // 2 for the merged symmetric twin, 1 on the diagonal
        bool exact;
        long samples;   // 0 when exact
    };

    PsiSurface(const ScoringModel& model, const GapPenalty& gap, int kappa,
               EvalMethod method, EvalBudget budget = {},
               std::uint64_t seed = 0, int threads = 1);

    PsiEstimate psi(double theta) const;
    // Sup over diagonal cells r = kappa..r_max (0 = budget r_max); certifies
    // via the envelope whether terms beyond r_max could still win.
    PsiEstimate xi(double theta, long r_max = 0) const;

    std::vector<CellInfo> cells() const;
    long grid_cut() const { return grid_cut_; }
    long r_max() const { return r_max_; }
    int kappa() const { return kappa_; }
    EvalMethod method() const { return method_; }
    std::uint64_t seed() const { return seed_; }
    const ScoringModel& model() const { return model_; }
    const GapPenalty& gap() const { return gap_; }

private:
    struct Cell {
        int m, n;
        double mult;
        bool exact;
        long n_samples; // 0 when exact
        std::vector<std::pair<double, double>> hist; // value -> probability
    };

    void build_cells(int threads);
    void eval_cell(double theta, const Cell& c, double& mean, double& se) const;

    ScoringModel model_;
    GapPenalty gap_;
    int kappa_;
    EvalMethod method_;
    EvalBudget budget_;
    std::uint64_t seed_;
    long grid_cut_ = 0;
    long r_max_ = 0;
    std::vector<Cell> grid_;   // psi cells first, then any extra diagonal cells
    long psi_cells_ = 0;       // grid_[0..psi_cells_) participate in psi sums
    std::vector<int> diag_;    // index into grid_ for (r,r), r = kappa..r_max
};

// Convenience one-shot wrappers.
PsiEstimate psi_kappa(const ScoringModel& model, const GapPenalty& gap, int kappa,
                      double theta, EvalMethod method, EvalBudget budget = {},
                      std::uint64_t seed = 0, int threads = 1);
PsiEstimate xi_kappa(const ScoringModel& model, const GapPenalty& gap, int kappa,
                     double theta, long r_max, EvalMethod method,
                     EvalBudget budget = {}, std::uint64_t seed = 0, int threads = 1);

// Closed form h_1(theta) = (1 + e^{-theta*open} * sum_k e^{-theta*gamma(k)})^2
// * E e^{theta*K}, with the series remainder propagated into trunc_bound.
PsiEstimate h1_closed_form(double theta, const GapPenalty& gap,
                           const ScoringModel& model);

// Largest positive root of an increasing-branch log moment function: locate
// the minimizer, check it dips below zero, then bisect and secant-polish the
// right-hand sign change. Divergent evaluations count as +inf (left plateau).
struct RootResult {
    bool found = false;
    double theta = 0.0;
    double resid = 0.0;     // |psi| at the returned root
    double h_at_root = 0.0;
    double min_value = 0.0; // smallest function value seen (evidence on NoRoot)
    double min_theta = 0.0;
    int argmax_r = 0;       // xi roots: the r attaining the sup at the root
    std::string note;
};
RootResult root_psi(const PsiSurface& s, double theta_lo = 1e-3,
                    double theta_hi = 0.0, double tol = 1e-6);
RootResult root_xi(const PsiSurface& s, long r_max = 0, double theta_lo = 1e-3,
                   double theta_hi = 0.0, double tol = 1e-6);

struct BracketRow {
    int kappa = 0;
    RootResult lower; // root of psi_kappa
    RootResult upper; // root of xi_kappa
    double width() const { return upper.theta - lower.theta; }
};

struct ThetaBracket {
    double lower = 0.0;
    double upper = 0.0;
    int kappa = 0;
    bool found = false;
    std::vector<BracketRow> rows; // kappa = 1..kappa_max
    double width() const { return upper - lower; }
    double mid() const { return 0.5 * (lower + upper); }
};

ThetaBracket theta_tilde(const ScoringModel& model, const GapPenalty& gap,
                         int kappa_max, EvalMethod method, EvalBudget budget = {},
                         std::uint64_t seed = 0, int threads = 1,
                         double tol = 1e-6);

// Slope of psi_kappa/kappa at the bracket midpoint: central difference,
// cross-checked by re-rooting after an analytic score shift (shifting every
// pair score by lambda adds lambda*kappa*theta to psi exactly, so the root
// displacement measures the slope independently of the grid).
struct SlopeResult {
    double value = 0.0;        // the central-difference estimate
    double central = 0.0;
    double shift_route = 0.0;
    double theta_used = 0.0;
    double h_step = 0.0;
    double lambda = 0.0;
    bool consistent = true;    // two routes agree within tolerance
    bool bracket_warn = false; // bracket wider than the difference step
};
SlopeResult psi_prime(const PsiSurface& s, const ThetaBracket& bracket,
                      double h_step = 0.02);

// Predicted growth constants: score per log n in [2/upper, 2/lower] and
// matches per log n in 2/(theta*slope) over the bracket.
struct GrowthConstants {
    double score_rate_lo = 0.0, score_rate_hi = 0.0;
    double match_rate_lo = 0.0, match_rate_hi = 0.0;
};
GrowthConstants growth_constants(const ThetaBracket& bracket, double slope);

} // namespace gapstat
