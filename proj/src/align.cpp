#include "gapstat/align.hpp"

#include "gapstat/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gapstat {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

void check_alignment(const Alignment& z) {
    if (z.empty()) fail("alignment must be nonempty");
    if (!z.strictly_increasing())
        fail("alignment pairs must be positive and strictly increasing in both coordinates");
}

void ensure_gap_table(DPWorkspace& ws, const GapPenalty& gap, long needed) {
    double sig0 = gap.open_cost(), sig1 = gap.slope(),
           sig2 = gap.alpha() + 64.0 * static_cast<double>(gap.table_size()) +
                  4096.0 * static_cast<double>(gap.family());
    if (ws.gtab_owner == &gap && ws.gtab_sig[0] == sig0 && ws.gtab_sig[1] == sig1 &&
        ws.gtab_sig[2] == sig2 && static_cast<long>(ws.gtab.size()) > needed)
        return;
    ws.gtab = gap_cost_table(gap, needed);
    ws.gtab_owner = &gap;
    ws.gtab_sig[0] = sig0;
    ws.gtab_sig[1] = sig1;
    ws.gtab_sig[2] = sig2;
}

inline double* col_ptr(std::vector<double>& cols, int m, int j) {
    return cols.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(m + 1);
}

} // namespace

bool Alignment::strictly_increasing() const {
    int pi = 0, pj = 0;
    for (const auto& [i, j] : pairs) {
        if (i <= pi || j <= pj) return false;
        pi = i;
        pj = j;
    }
    return true;
}

double alignment_score(const Alignment& z, const Seq& x, const Seq& y,
                       const ScoreMatrix& scores, const GapPenalty& gap) {
    check_alignment(z);
    int m = static_cast<int>(x.size()), n = static_cast<int>(y.size());
    if (z.pairs.back().first > m || z.pairs.back().second > n) return kNegInf;
    auto [i0, j0] = z.pairs.front();
    double acc = scores.at(x[static_cast<std::size_t>(i0 - 1)], y[static_cast<std::size_t>(j0 - 1)]);
    for (std::size_t u = 1; u < z.pairs.size(); ++u) {
        auto [i, j] = z.pairs[u];
        auto [ip, jp] = z.pairs[u - 1];
        acc -= gap.cost(i - ip - 1);
        acc -= gap.cost(j - jp - 1);
        acc += scores.at(x[static_cast<std::size_t>(i - 1)], y[static_cast<std::size_t>(j - 1)]);
    }
    return acc;
}

double restricted_score(const Alignment& z, const Seq& x, const Seq& y,
                        const ScoreMatrix& scores, const GapPenalty& gap) {
    check_alignment(z);
    int m = static_cast<int>(x.size()), n = static_cast<int>(y.size());
    if (z.pairs.back().first > m || z.pairs.back().second > n) return kNegInf;
    auto [i0, j0] = z.pairs.front();
    double acc = scores.at(x[static_cast<std::size_t>(i0 - 1)], y[static_cast<std::size_t>(j0 - 1)]);
    acc -= gap.cost(i0 - 1);
    acc -= gap.cost(j0 - 1);
    for (std::size_t u = 1; u < z.pairs.size(); ++u) {
        auto [i, j] = z.pairs[u];
        auto [ip, jp] = z.pairs[u - 1];
        acc -= gap.cost(i - ip - 1);
        acc -= gap.cost(j - jp - 1);
        acc += scores.at(x[static_cast<std::size_t>(i - 1)], y[static_cast<std::size_t>(j - 1)]);
    }
    acc -= gap.cost(m - z.pairs.back().first);
    acc -= gap.cost(n - z.pairs.back().second);
    return acc;
}

namespace {

struct DPShape {
    int m, n;
    double* cols;
    double* prow;
    const double* g;
    const ScoreMatrix* scores;
    const Seq* x;
    const Seq* y;
};

DPShape prepare(const Seq& x, const Seq& y, const ScoreMatrix& scores,
                const GapPenalty& gap, DPWorkspace& ws, bool second_cols = false) {
    int m = static_cast<int>(x.size()), n = static_cast<int>(y.size());
    if (m == 0 || n == 0) fail("sequences must be nonempty");
    long needed = std::max(m, n);
    ensure_gap_table(ws, gap, needed);
    std::size_t csize = static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(m + 1);
    ws.cols.resize(second_cols ? 2 * csize : csize);
    ws.prow.resize(static_cast<std::size_t>(n + 1));
    return {m, n, ws.cols.data(), ws.prow.data(), ws.gtab.data(), &scores, &x, &y};
}

// Fills prow (reversed) with P(i, j') = max_{i'<i} M(i', j') - g(i-i'-1) for
// j' = 1..n-1, reading layer `src` (column-major, rows reversed).
inline void fill_stage1(const DPShape& d, const double* src, int i) {
    const int m = d.m, n = d.n;
    for (int jp = 1; jp <= n - 1; ++jp) {
        const double* col = src + static_cast<std::size_t>(jp) * static_cast<std::size_t>(m + 1);
        d.prow[n - jp] = kern::max_diff(col + (m - i + 1), d.g, static_cast<std::size_t>(i - 1));
    }
}

inline double stage2(const DPShape& d, int i, int j) {
    if (i < 2 || j < 2) return kNegInf;
    return kern::max_diff(d.prow + (d.n - j + 1), d.g, static_cast<std::size_t>(j - 1));
}

} // namespace

double local_score(const Seq& x, const Seq& y, const ScoreMatrix& scores,
                   const GapPenalty& gap, DPWorkspace& ws) {
    DPShape d = prepare(x, y, scores, gap, ws);
    double best = kNegInf;
    for (int i = 1; i <= d.m; ++i) {
        if (i >= 2) fill_stage1(d, d.cols, i);
        for (int j = 1; j <= d.n; ++j) {
            double base = scores.at(x[static_cast<std::size_t>(i - 1)],
                                    y[static_cast<std::size_t>(j - 1)]);
            double ext = stage2(d, i, j);
            double v = ext > 0.0 ? base + ext : base;
            col_ptr(ws.cols, d.m, j)[d.m - i] = v;
            if (v > best) best = v;
        }
    }
    return best;
}

LocalResult local_align(const Seq& x, const Seq& y, const ScoreMatrix& scores,
                        const GapPenalty& gap, DPWorkspace& ws) {
    DPShape d = prepare(x, y, scores, gap, ws);
    double best = kNegInf;
    int bi = 0, bj = 0;
    for (int i = 1; i <= d.m; ++i) {
        if (i >= 2) fill_stage1(d, d.cols, i);
        for (int j = 1; j <= d.n; ++j) {
            double base = scores.at(x[static_cast<std::size_t>(i - 1)],
                                    y[static_cast<std::size_t>(j - 1)]);
            double ext = stage2(d, i, j);
            double v = ext > 0.0 ? base + ext : base;
            col_ptr(ws.cols, d.m, j)[d.m - i] = v;
            if (v > best) {
                best = v;
                bi = i;
                bj = j;
            }
        }
    }

    // Trace back by rescanning candidates in lexicographic order; values are
    // recomputed with the same association as the forward pass, so the first
    // candidate reaching the stored cell value is the canonical predecessor.
    LocalResult out;
    out.score = best;
    int ci = bi, cj = bj;
    std::vector<std::pair<int, int>> rev;
    for (;;) {
        rev.emplace_back(ci, cj);
        double target = col_ptr(ws.cols, d.m, cj)[d.m - ci];
        double base = scores.at(x[static_cast<std::size_t>(ci - 1)],
                                y[static_cast<std::size_t>(cj - 1)]);
        double best_ext = kNegInf;
        int pi = 0, pj = 0;
        for (int ip = 1; ip <= ci - 1; ++ip) {
            const double* col0 = ws.cols.data();
            for (int jp = 1; jp <= cj - 1; ++jp) {
                double v = (col0[static_cast<std::size_t>(jp) * static_cast<std::size_t>(d.m + 1) +
                                 static_cast<std::size_t>(d.m - ip)] -
                            d.g[ci - ip - 1]) -
                           d.g[cj - jp - 1];
                if (v > best_ext) {
                    best_ext = v;
                    pi = ip;
                    pj = jp;
                }
            }
        }
        double recomputed = best_ext > 0.0 ? base + best_ext : base;
        if (recomputed != target)
            throw std::logic_error("traceback failed to reproduce the DP cell value");
        if (best_ext <= 0.0) break; // ties prefer starting here
        ci = pi;
        cj = pj;
    }
    out.best.pairs.assign(rev.rbegin(), rev.rend());
    double replay = alignment_score(out.best, x, y, scores, gap);
    if (replay != out.score)
        throw std::logic_error("optimal alignment does not reproduce the DP score");
    return out;
}

double global_score(const Seq& x, const Seq& y, const ScoreMatrix& scores,
                    const GapPenalty& gap, DPWorkspace& ws) {
    DPShape d = prepare(x, y, scores, gap, ws);
    double best = kNegInf;
    for (int i = 1; i <= d.m; ++i) {
        if (i >= 2) fill_stage1(d, d.cols, i);
        for (int j = 1; j <= d.n; ++j) {
            double base = scores.at(x[static_cast<std::size_t>(i - 1)],
                                    y[static_cast<std::size_t>(j - 1)]);
            double init = (base - d.g[i - 1]) - d.g[j - 1];
            double ext = stage2(d, i, j);
            double v = std::max(init, base + ext);
            col_ptr(ws.cols, d.m, j)[d.m - i] = v;
            double closed = (v - d.g[d.m - i]) - d.g[d.n - j];
            if (closed > best) best = closed;
        }
    }
    return best;
}

double fixed_match_score(int kappa, const Seq& x, const Seq& y,
                         const ScoreMatrix& scores, const GapPenalty& gap,
                         DPWorkspace& ws) {
    if (kappa < 1) fail("kappa must be >= 1");
    if (static_cast<std::size_t>(kappa) > std::min(x.size(), y.size()))
        fail("kappa exceeds the shorter sequence length");
    DPShape d = prepare(x, y, scores, gap, ws, true);
    std::size_t csize = static_cast<std::size_t>(d.n + 1) * static_cast<std::size_t>(d.m + 1);
    double* prev = d.cols;
    double* next = d.cols + csize;
    std::fill(prev, prev + csize, kNegInf);
    prev[static_cast<std::size_t>(1) * static_cast<std::size_t>(d.m + 1) +
         static_cast<std::size_t>(d.m - 1)] =
        scores.at(x[0], y[0]); // single match pinned at (1,1)
    for (int t = 2; t <= kappa; ++t) {
        for (int i = 1; i <= d.m; ++i) {
            if (i >= 2) fill_stage1(d, prev, i);
            for (int j = 1; j <= d.n; ++j) {
                double base = scores.at(x[static_cast<std::size_t>(i - 1)],
                                        y[static_cast<std::size_t>(j - 1)]);
                double ext = stage2(d, i, j);
                next[static_cast<std::size_t>(j) * static_cast<std::size_t>(d.m + 1) +
                     static_cast<std::size_t>(d.m - i)] = base + ext;
            }
        }
        std::swap(prev, next);
    }
    double best = kNegInf;
    for (int i = 1; i <= d.m; ++i) {
        for (int j = 1; j <= d.n; ++j) {
            double v = prev[static_cast<std::size_t>(j) * static_cast<std::size_t>(d.m + 1) +
                            static_cast<std::size_t>(d.m - i)];
            double closed = (v - d.g[d.m - i]) - d.g[d.n - j];
            if (closed > best) best = closed;
        }
    }
    return best;
}

double gapless_score(const Seq& x, const Seq& y, const ScoreMatrix& scores,
                     DPWorkspace& ws) {
    int m = static_cast<int>(x.size()), n = static_cast<int>(y.size());
    if (m == 0 || n == 0) fail("sequences must be nonempty");
    ws.diag.assign(static_cast<std::size_t>(n) + 1, kNegInf);
    double best = kNegInf;
    for (int i = 1; i <= m; ++i) {
        double upleft = kNegInf;
        for (int j = 1; j <= n; ++j) {
            double saved = ws.diag[static_cast<std::size_t>(j)];
            double base = scores.at(x[static_cast<std::size_t>(i - 1)],
                                    y[static_cast<std::size_t>(j - 1)]);
            double cur = upleft > 0.0 ? base + upleft : base;
            ws.diag[static_cast<std::size_t>(j)] = cur;
            upleft = saved;
            if (cur > best) best = cur;
        }
    }
    return best;
}

LocalResult gapless_align(const Seq& x, const Seq& y, const ScoreMatrix& scores,
                          DPWorkspace& ws) {
    int m = static_cast<int>(x.size()), n = static_cast<int>(y.size());
    if (m == 0 || n == 0) fail("sequences must be nonempty");
    ws.diag.assign(static_cast<std::size_t>(n) + 1, kNegInf);
    std::vector<int> start_i(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> start_j(static_cast<std::size_t>(n) + 1, 0);
    LocalResult out;
    int bi = 0, bj = 0, bsi = 0, bsj = 0;
    for (int i = 1; i <= m; ++i) {
        double upleft = kNegInf;
        int up_si = 0, up_sj = 0;
        for (int j = 1; j <= n; ++j) {
            double saved = ws.diag[static_cast<std::size_t>(j)];
            int saved_si = start_i[static_cast<std::size_t>(j)];
            int saved_sj = start_j[static_cast<std::size_t>(j)];
            double base = scores.at(x[static_cast<std::size_t>(i - 1)],
                                    y[static_cast<std::size_t>(j - 1)]);
            double cur;
            if (upleft > 0.0) {
                cur = base + upleft;
                start_i[static_cast<std::size_t>(j)] = up_si;
                start_j[static_cast<std::size_t>(j)] = up_sj;
            } else {
                cur = base;
                start_i[static_cast<std::size_t>(j)] = i;
                start_j[static_cast<std::size_t>(j)] = j;
            }
            ws.diag[static_cast<std::size_t>(j)] = cur;
            upleft = saved;
            up_si = saved_si;
            up_sj = saved_sj;
            if (cur > out.score) {
                out.score = cur;
                bi = i;
                bj = j;
                bsi = start_i[static_cast<std::size_t>(j)];
                bsj = start_j[static_cast<std::size_t>(j)];
            }
        }
    }
    for (int t = 0; t <= bi - bsi; ++t) out.best.pairs.emplace_back(bsi + t, bsj + t);
    (void)bj;
    return out;
}

namespace detail {

double inner_chain_score(int t, const Seq& xs, const Seq& ys,
                         const ScoreMatrix& scores, const GapPenalty& gap,
                         DPWorkspace& ws) {
    int m = static_cast<int>(xs.size()), n = static_cast<int>(ys.size());
    if (t < 0) fail("match count must be >= 0");
    if (t == 0) {
        ensure_gap_table(ws, gap, std::max<long>(std::max(m, n), 1));
        return (0.0 - ws.gtab[m]) - ws.gtab[n];
    }
    if (m < t || n < t) return kNegInf;
    DPShape d = prepare(xs, ys, scores, gap, ws, true);
    std::size_t csize = static_cast<std::size_t>(d.n + 1) * static_cast<std::size_t>(d.m + 1);
    double* prev = d.cols;
    double* next = d.cols + csize;
    for (int i = 1; i <= d.m; ++i)
        for (int j = 1; j <= d.n; ++j) {
            double base = scores.at(xs[static_cast<std::size_t>(i - 1)],
                                    ys[static_cast<std::size_t>(j - 1)]);
            prev[static_cast<std::size_t>(j) * static_cast<std::size_t>(d.m + 1) +
                 static_cast<std::size_t>(d.m - i)] = (base - d.g[i - 1]) - d.g[j - 1];
        }
    for (int layer = 2; layer <= t; ++layer) {
        for (int i = 1; i <= d.m; ++i) {
            if (i >= 2) fill_stage1(d, prev, i);
            for (int j = 1; j <= d.n; ++j) {
                double base = scores.at(xs[static_cast<std::size_t>(i - 1)],
                                        ys[static_cast<std::size_t>(j - 1)]);
                double ext = stage2(d, i, j);
                next[static_cast<std::size_t>(j) * static_cast<std::size_t>(d.m + 1) +
                     static_cast<std::size_t>(d.m - i)] = base + ext;
            }
        }
        std::swap(prev, next);
    }
    double best = kNegInf;
    for (int i = 1; i <= d.m; ++i)
        for (int j = 1; j <= d.n; ++j) {
            double v = prev[static_cast<std::size_t>(j) * static_cast<std::size_t>(d.m + 1) +
                            static_cast<std::size_t>(d.m - i)];
            double closed = (v - d.g[d.m - i]) - d.g[d.n - j];
            if (closed > best) best = closed;
        }
    return best;
}

} // namespace detail

namespace {

struct BruteState {
    const Seq* x;
    const Seq* y;
    const ScoreMatrix* scores;
    const GapPenalty* gap;
    Alignment current;
};

// Canonical order: compare alignments from their last pair backwards, with
// exhausted positions reading as (0,0); smaller wins. This matches the DP's
// "smallest end cell, then smallest predecessor, prefer stopping" rule.
bool canonical_less(const Alignment& a, const Alignment& b) {
    std::size_t na = a.pairs.size(), nb = b.pairs.size();
    std::size_t steps = std::max(na, nb);
    for (std::size_t t = 0; t < steps; ++t) {
        std::pair<int, int> pa = t < na ? a.pairs[na - 1 - t] : std::make_pair(0, 0);
        std::pair<int, int> pb = t < nb ? b.pairs[nb - 1 - t] : std::make_pair(0, 0);
        if (pa != pb) return pa < pb;
    }
    return false;
}

template <typename Visit>
void enumerate_alignments(BruteState& st, int min_i, int min_j, Visit&& visit) {
    int m = static_cast<int>(st.x->size()), n = static_cast<int>(st.y->size());
    for (int i = min_i; i <= m; ++i) {
        for (int j = min_j; j <= n; ++j) {
            st.current.pairs.emplace_back(i, j);
            visit(st.current);
            enumerate_alignments(st, i + 1, j + 1, visit);
            st.current.pairs.pop_back();
        }
    }
}

void check_brute_size(const Seq& x, const Seq& y) {
    if (x.size() + y.size() > 24)
        fail("brute-force enumeration is capped at m+n <= 24");
    if (x.empty() || y.empty()) fail("sequences must be nonempty");
}

} // namespace

LocalResult brute_force_local(const Seq& x, const Seq& y, const ScoreMatrix& scores,
                              const GapPenalty& gap) {
    check_brute_size(x, y);
    BruteState st{&x, &y, &scores, &gap, {}};
    LocalResult out;
    enumerate_alignments(st, 1, 1, [&](const Alignment& z) {
        double s = alignment_score(z, x, y, scores, gap);
        if (s > out.score || (s == out.score && canonical_less(z, out.best))) {
            out.score = s;
            out.best = z;
        }
    });
    return out;
}

double brute_force_global(const Seq& x, const Seq& y, const ScoreMatrix& scores,
                          const GapPenalty& gap) {
    check_brute_size(x, y);
    BruteState st{&x, &y, &scores, &gap, {}};
    double best = kNegInf;
    enumerate_alignments(st, 1, 1, [&](const Alignment& z) {
        best = std::max(best, restricted_score(z, x, y, scores, gap));
    });
    return best;
}

double brute_force_fixed_match(int kappa, const Seq& x, const Seq& y,
                               const ScoreMatrix& scores, const GapPenalty& gap) {
    check_brute_size(x, y);
    if (kappa < 1) fail("kappa must be >= 1");
    if (static_cast<std::size_t>(kappa) > std::min(x.size(), y.size()))
        fail("kappa exceeds the shorter sequence length");
    BruteState st{&x, &y, &scores, &gap, {}};
    double best = kNegInf;
    enumerate_alignments(st, 1, 1, [&](const Alignment& z) {
        if (z.matches() != kappa) return;
        if (z.pairs.front() != std::make_pair(1, 1)) return;
        best = std::max(best, restricted_score(z, x, y, scores, gap));
    });
    return best;
}

} // namespace gapstat
