#pragma once

#include "gapstat/align.hpp"
#include "gapstat/model.hpp"
#include "gapstat/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gapstat {

// Analytic tail bound min(1, m*n*exp(theta*(kappa-1)*K_max)*exp(-theta*c)).
// Valid only at a root of the kappa-th log moment sum, so the caller must
// supply the root residual; it is rejected above resid_tol.
double pvalue_bound(double c, long m, long n, double theta, double resid,
                    int kappa, double k_max, double resid_tol = 1e-6);

struct TailEstimate {
    double p_hat = 0.0;
    double se = 0.0;
    double analytic_bound = -1.0; // < 0 when not applicable
    std::string method;           // direct_mc | importance | bound_only
    double c = 0.0;
    long m = 0, n = 0;
    double theta = 0.0;
    int kappa = 1;
    long n_samples = 0;
    std::uint64_t seed = 0;
};

// Fraction of N independent letter-pair draws of (x,y) with local score >= c,
// with binomial standard error. The curve variant scores each replicate once
// and applies every threshold to the same sample. Deterministic in (seed):
// replicate k uses its own derived seed, drawing x then y.
std::vector<TailEstimate> direct_mc_curve(const std::vector<double>& cs, long m,
                                          long n, const ScoringModel& model,
                                          const GapPenalty& gap, long N,
                                          std::uint64_t seed, int threads = 1);
TailEstimate direct_mc_pvalue(double c, long m, long n, const ScoringModel& model,
                              const GapPenalty& gap, long N, std::uint64_t seed,
                              int threads = 1);

// Segment-pair sampler for the exponentially tilted measure at a root theta
// of the single-match log moment sum: segment lengths (r,s) are independent
// with P(r) proportional to exp(-theta*g(r-1)) up to the cap, the leading
// letter pair is drawn from mu*mu*exp(theta*K)/mgf, and the remaining letters
// are plain mu. Total mass plus the certified beyond-cap residual must come
// out as 1 within 1e-9 (that is what being a root means), else construction
// fails.
class TiltedSegmentSampler {
public:
    struct Segment {
        long r = 0, s = 0;
        double pair_score = 0.0; // K of the leading pair
        double score = 0.0;      // (K - g(r-1)) - g(s-1)
    };

    // cap = 0 grows the length cap until the residual drops below resid_tol.
    TiltedSegmentSampler(double theta, int kappa, const ScoringModel& model,
                         const GapPenalty& gap, long cap = 0,
                         double resid_tol = 1e-9, double root_tol = 1e-6);

    double theta() const { return theta_; }
    int kappa() const { return kappa_; }
    long cap() const { return cap_; }
    double residual() const { return resid_; }
    double total_mass() const { return mass_ + resid_; }
    double pair_mgf() const { return mgf_; }
    double max_score() const { return model_.max_score(); }
    double length_prob(long r) const; // renormalized within the cap
    double pair_prob(int a, int b) const;
    const ScoringModel& model() const { return model_; }
    const GapPenalty& gap() const { return gap_; }

    // Draw order: r, s, leading pair, then v_2..v_r and w_2..w_s.
    Segment sample(Rng& rng, Seq& v, Seq& w) const;

private:
    ScoringModel model_;
    GapPenalty gap_;
    double theta_;
    int kappa_;
    long cap_ = 0;
    double mgf_ = 0.0;
    double mass_ = 0.0;
    double resid_ = 0.0;
    std::vector<double> len_cdf_;  // r = 1..cap
    std::vector<double> pair_cdf_; // row-major (a, b)
};

enum class StopReason { ThresholdReached, Overflow };
const char* stop_reason_name(StopReason r);

struct PlantedSegment {
    long r = 0, s = 0;
    double pair_score = 0.0;
    double score = 0.0; // G of this segment
};

// Trace of one tilted simulation. s_zeta accumulates the planted alignment's
// score with the same operation order the score replay uses, and S is the
// stopping statistic (s_zeta minus the final segment's trailing flanks), so
// s_zeta >= S holds exactly.
struct SimPath {
    long start_i = 1, start_j = 1;
    std::vector<PlantedSegment> segments;
    double s_zeta = kNegInf;
    double S = kNegInf;
    StopReason reason = StopReason::Overflow;

    Alignment zeta() const; // one match at each segment's leading pair
};

// Three-step scheme: uniform start cell, i.i.d. prefixes, tilted segment
// pairs until S >= c - (kappa-1)*K_max or a segment overflows the remaining
// space (then the whole segment is discarded), i.i.d. fill of the rest.
// Draw order: start i, start j, x prefix, y prefix, segments, x fill, y fill.
SimPath simulate_q(long m, long n, double c, const TiltedSegmentSampler& sampler,
                   Rng& rng, Seq& x, Seq& y);

// Numerical audit of one threshold-reached path: the log likelihood ratio is
// additive across segments, the planted alignment reproduces s_zeta exactly,
// s_zeta >= S exactly, and the local DP score dominates s_zeta exactly.
// Violations throw logic_error.
struct LrReport {
    double sum_scores = 0.0;   // plain left-to-right sum of segment scores
    double additivity_gap = 0.0; // |sum_scores - S|
    double h = 0.0;            // local score of (x,y)
    double zeta_score = 0.0;
};
LrReport verify_lr_inequality(const SimPath& path, const Seq& x, const Seq& y,
                              double c, const TiltedSegmentSampler& sampler,
                              DPWorkspace& ws);

// Importance-sampled P{H >= c}: simulate under the tilted scheme and weight
// each replicate by prod over kept segments of mgf*exp(-theta*K_eta), the
// likelihood ratio against the reference path measure that keeps the tilted
// length law but draws every letter from mu (its (x,y)-marginal is exactly
// mu x mu, so the estimator is unbiased; the length-law factors cancel,
// truncation included). Weights are handled in log space; the sampler's
// residual mass is folded into the standard error as a conservative guard.
TailEstimate is_pvalue(double c, long m, long n,
                       const TiltedSegmentSampler& sampler, long N,
                       std::uint64_t seed, int threads = 1);

} // namespace gapstat
