#pragma once

#include "gapstat/model.hpp"

#include <utility>
#include <vector>

namespace gapstat {

// Strictly increasing 1-based index pairs; u-th pair matches x[i(u)] with y[j(u)].
struct Alignment {
    std::vector<std::pair<int, int>> pairs;

    bool empty() const { return pairs.empty(); }
    int matches() const { return static_cast<int>(pairs.size()); }
    bool strictly_increasing() const;
};

struct LocalResult {
    double score = kNegInf;
    Alignment best;
};

// Reusable buffers for the gap DP; safe to share across calls, not threads.
struct DPWorkspace {
    std::vector<double> cols;   // M by column, rows stored reversed
    std::vector<double> prow;   // stage-two row, columns stored reversed
    std::vector<double> diag;   // gapless rolling row
    std::vector<double> gtab;   // g(0..max(m,n))
    const void* gtab_owner = nullptr; // which GapPenalty gtab was built from
    double gtab_sig[3] = {-1.0, -1.0, -1.0};
};

// Score of one explicit alignment, without (alignment_score) and with
// (restricted_score) the four flank penalties. Pairs that point past the
// sequence ends give -inf. Evaluation order mirrors the DP exactly, so an
// alignment recovered from the DP reproduces its score bit-for-bit.
double alignment_score(const Alignment& z, const Seq& x, const Seq& y,
                       const ScoreMatrix& scores, const GapPenalty& gap);
double restricted_score(const Alignment& z, const Seq& x, const Seq& y,
                        const ScoreMatrix& scores, const GapPenalty& gap);

// Best alignment_score over all nonempty alignments (may be negative), with
// the canonical optimum: smallest end pair, then smallest predecessor, with
// "start here" ordering before any predecessor.
LocalResult local_align(const Seq& x, const Seq& y, const ScoreMatrix& scores,
                        const GapPenalty& gap, DPWorkspace& ws);
double local_score(const Seq& x, const Seq& y, const ScoreMatrix& scores,
                   const GapPenalty& gap, DPWorkspace& ws);

// Best restricted_score over all nonempty alignments.
double global_score(const Seq& x, const Seq& y, const ScoreMatrix& scores,
                    const GapPenalty& gap, DPWorkspace& ws);

// Best restricted_score over alignments that contain (1,1) and have exactly
// kappa matches; -inf when no such alignment exists.
double fixed_match_score(int kappa, const Seq& x, const Seq& y,
                         const ScoreMatrix& scores, const GapPenalty& gap,
                         DPWorkspace& ws);

// Gapless local score: best contiguous diagonal run (nonempty).
double gapless_score(const Seq& x, const Seq& y, const ScoreMatrix& scores,
                     DPWorkspace& ws);
LocalResult gapless_align(const Seq& x, const Seq& y, const ScoreMatrix& scores,
                          DPWorkspace& ws);

// Exhaustive enumerations for cross-checking the DP; cost is exponential, so
// m+n is capped at 24. brute_force_local applies the same canonical tie-break.
LocalResult brute_force_local(const Seq& x, const Seq& y, const ScoreMatrix& scores,
                              const GapPenalty& gap);
double brute_force_global(const Seq& x, const Seq& y, const ScoreMatrix& scores,
                          const GapPenalty& gap);
double brute_force_fixed_match(int kappa, const Seq& x, const Seq& y,
                               const ScoreMatrix& scores, const GapPenalty& gap);

namespace detail {

// Best over chains of exactly t matches inside (xs, ys) of a chain score with
// leading flanks g(i-1), g(j-1) and trailing flanks g(|xs|-i), g(|ys|-j).
// For t = 0 this is -g(|xs|) - g(|ys|). Used by the moment-surface evaluator:
// fixed_match_score(k, x, y) == K(x1,y1) + inner_chain_score(k-1, x[1:], y[1:]).
double inner_chain_score(int t, const Seq& xs, const Seq& ys,
                         const ScoreMatrix& scores, const GapPenalty& gap,
                         DPWorkspace& ws);

} // namespace detail

} // namespace gapstat
