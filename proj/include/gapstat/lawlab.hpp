#pragma once

#include "gapstat/asymptotics.hpp"
#include "gapstat/model.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace gapstat {

// i.i.d. letter pair of length-n sequences. x and y use two separate streams
// derived from the seed, so for a fixed seed the length-n output is a prefix
// of the length-2n output; the nested-prefix experiments depend on that.
std::pair<Seq, Seq> simulate_pair(long n, const ScoringModel& model,
                                  std::uint64_t seed);

struct LawRow {
    long n = 0;
    int rep = 0;
    double h = 0.0;
    double h_inf = 0.0;
    long zstar = 0;
};

struct LawSummary {
    long n = 0;
    double med_h_ratio = 0.0, iqr_h_ratio = 0.0;
    double med_hinf_ratio = 0.0, iqr_hinf_ratio = 0.0;
    double med_z_ratio = 0.0, iqr_z_ratio = 0.0;
};

struct LawTrajectory {
    std::vector<long> n_grid; // completed levels only
    int reps = 0;
    std::vector<LawRow> rows; // level-major: n_grid index * reps + rep
    std::vector<LawSummary> summary;
    bool partial = false;     // budget ran out; rows hold the completed prefix
    double theta_star_value = 0.0;
    ThetaBracket bracket;
    SlopeResult slope;
    bool slope_valid = false;
    GrowthConstants growth;
    bool growth_valid = false;
    DomainVerdict domain;
    bool domain_valid = false;
    std::uint64_t seed = 0;
};

// Trajectories of H, H_inf and |z*| along a geometric n grid. Replicate rep
// reuses one letter stream across all n (nested prefixes), so H must be
// nondecreasing in n replicate by replicate; that, H >= H_inf, and the score
// replay of z* are checked on every cell and violations abort. A positive
// wall-clock budget (seconds) cuts the run after the last completed level.
LawTrajectory strong_law_run(const ScoringModel& model, const GapPenalty& gap,
                             const std::vector<long>& n_grid, int reps,
                             std::uint64_t seed, int threads = 1,
                             double budget_seconds = 0.0, int kappa_max = 2,
                             EvalBudget eval_budget = {});

struct BetaEstimate {
    double beta = 0.0, se = 0.0;       // mean of G(x_n, y_n)/n
    double beta_2n = 0.0, se_2n = 0.0; // same replicates extended to 2n
    long n = 0;
    int reps = 0;
    std::uint64_t seed = 0;
};

// Sample mean of the flank-restricted score per letter at n and, on the same
// extended streams, at 2n to expose drift.
BetaEstimate estimate_beta(const ScoringModel& model, const GapPenalty& gap,
                           long n, int reps, std::uint64_t seed,
                           int threads = 1);

struct PhaseCell {
    double open = 0.0;  // gap opening cost of this cell
    double slope = 0.0; // per-gap growth parameter
    double alpha = 0.0; // power-law exponent when applicable
    Domain verdict = Domain::Indeterminate;
    bool verdict_valid = false;
    std::string verdict_error; // why the analytic test refused, if it did
    double beta = 0.0, beta_se = 0.0;
    double slope_vs_n = 0.0;    // mean-H slope against n between n/2 and n
    double slope_vs_logn = 0.0; // same increment against log n
    bool disagreement = false;  // empirical beta sign contradicts the verdict
};

// (open, slope) scan of one gap family: analytic verdict straight from the
// summation test, empirical beta and growth slopes from seeded replicates.
// Disagreements between the two are flagged, never reconciled.
std::vector<PhaseCell> phase_scan(const ScoringModel& model, GapFamily family,
                                  const std::vector<double>& open_grid,
                                  const std::vector<double>& slope_grid,
                                  double alpha, long n, int reps,
                                  std::uint64_t seed, int threads = 1);

} // namespace gapstat
