#include "gapstat/lawlab.hpp"

#include "gapstat/align.hpp"
#include "gapstat/parallel.hpp"
#include "gapstat/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gapstat {

namespace {

constexpr std::uint64_t kTagLaw = 0x1a3bu;
constexpr std::uint64_t kTagPredict = 0x9c0du;
constexpr std::uint64_t kTagBeta = 0xbe7au;
constexpr std::uint64_t kTagPhase = 0xfa5eu;

void fill_letters(Seq& out, long n, const std::vector<double>& cdf, Rng& rng) {
    out.resize(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] =
            static_cast<std::uint8_t>(rng.sample_cdf(cdf));
}

double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    if (v.size() == 1) return v[0];
    double pos = q * static_cast<double>(v.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= v.size()) return v.back();
    double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[lo + 1] - v[lo]);
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& v) {
    MeanSe r;
    double n = static_cast<double>(v.size());
    for (double x : v) r.mean += x;
    r.mean /= n;
    if (v.size() < 2) return r;
    double ss = 0.0;
    for (double x : v) ss += (x - r.mean) * (x - r.mean);
    r.se = std::sqrt(ss / (n - 1.0) / n);
    return r;
}

} // namespace

std::pair<Seq, Seq> simulate_pair(long n, const ScoringModel& model,
                                  std::uint64_t seed) {
    if (n < 0) throw std::invalid_argument("simulate_pair: negative length");
    const std::vector<double>& cdf = model.dist().cdf();
    std::pair<Seq, Seq> out;
    Rng rx(derive_seed(seed, std::uint64_t{0}));
    Rng ry(derive_seed(seed, std::uint64_t{1}));
    fill_letters(out.first, n, cdf, rx);
    fill_letters(out.second, n, cdf, ry);
    return out;
}

LawTrajectory strong_law_run(const ScoringModel& model, const GapPenalty& gap,
                             const std::vector<long>& n_grid, int reps,
                             std::uint64_t seed, int threads,
                             double budget_seconds, int kappa_max,
                             EvalBudget eval_budget) {
    if (n_grid.empty()) throw std::invalid_argument("strong_law_run: empty n grid");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 2)
            throw std::invalid_argument("strong_law_run: n must be at least 2");
        if (i > 0 && n_grid[i] <= n_grid[i - 1])
            throw std::invalid_argument("strong_law_run: n grid must be strictly increasing");
    }
    if (reps < 1) throw std::invalid_argument("strong_law_run: reps must be positive");

    auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&]() {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    };

    LawTrajectory traj;
    traj.reps = reps;
    traj.seed = seed;
    traj.theta_star_value = theta_star(model);

    if (!gap.is_infinite()) {
        try {
            traj.domain = summation_test(gap, model);
            traj.domain_valid = true;
        } catch (const std::exception&) {
            traj.domain_valid = false;
        }
    }

    std::uint64_t pred_seed = derive_seed(seed, kTagPredict);
    traj.bracket = theta_tilde(model, gap, kappa_max, EvalMethod::ExactTruncated,
                               eval_budget, pred_seed, threads);
    if (traj.bracket.found) {
        try {
            PsiSurface s(model, gap, traj.bracket.kappa, EvalMethod::ExactTruncated,
                         eval_budget, pred_seed, threads);
            traj.slope = psi_prime(s, traj.bracket);
            traj.slope_valid = true;
        } catch (const std::exception&) {
            traj.slope_valid = false;
        }
        if (traj.slope_valid && traj.slope.value > 0.0) {
            traj.growth = growth_constants(traj.bracket, traj.slope.value);
            traj.growth_valid = true;
        }
    }

    std::vector<double> prev_h(static_cast<std::size_t>(reps), kNegInf);
    for (std::size_t level = 0; level < n_grid.size(); ++level) {
        if (level > 0 && budget_seconds > 0.0 && elapsed() > budget_seconds) {
            traj.partial = true;
            break;
        }
        long n = n_grid[level];
        std::vector<LawRow> rows(static_cast<std::size_t>(reps));
        parallel_for_shards(static_cast<std::size_t>(reps), threads,
                            [&](std::size_t rep) {
            auto [x, y] = simulate_pair(n, model, derive_seed(seed, kTagLaw, rep));
            DPWorkspace ws;
            LawRow& row = rows[rep];
            row.n = n;
            row.rep = static_cast<int>(rep);
            if (gap.is_infinite()) {
                LocalResult r = gapless_align(x, y, model.scores(), ws);
                row.h = r.score;
                row.h_inf = r.score;
                row.zstar = r.best.matches();
            } else {
                LocalResult r = local_align(x, y, model.scores(), gap, ws);
                row.h = r.score;
                row.h_inf = gapless_score(x, y, model.scores(), ws);
                row.zstar = r.best.matches();
            }
        });
        // The optimal gapless run and the optimal alignment of a prefix are
        // both candidates the larger DP evaluates with identical arithmetic,
        // so these comparisons hold exactly, not just up to rounding.
        for (int rep = 0; rep < reps; ++rep) {
            const LawRow& row = rows[static_cast<std::size_t>(rep)];
            if (row.h < row.h_inf) {
                std::ostringstream msg;
                msg << "strong_law_run: H < H_inf at n=" << n << " rep=" << rep
                    << " (" << row.h << " < " << row.h_inf << ")";
                throw std::logic_error(msg.str());
            }
            if (row.h < prev_h[static_cast<std::size_t>(rep)]) {
                std::ostringstream msg;
                msg << "strong_law_run: H decreased along nested prefixes at n="
                    << n << " rep=" << rep << " (" << row.h << " < "
                    << prev_h[static_cast<std::size_t>(rep)] << ")";
                throw std::logic_error(msg.str());
            }
            prev_h[static_cast<std::size_t>(rep)] = row.h;
        }

        double ln = std::log(static_cast<double>(n));
        std::vector<double> hr, ir, zr;
        hr.reserve(rows.size());
        ir.reserve(rows.size());
        zr.reserve(rows.size());
        for (const LawRow& row : rows) {
            hr.push_back(row.h / ln);
            ir.push_back(row.h_inf / ln);
            zr.push_back(static_cast<double>(row.zstar) / ln);
        }
        LawSummary sum;
        sum.n = n;
        sum.med_h_ratio = quantile(hr, 0.5);
        sum.iqr_h_ratio = quantile(hr, 0.75) - quantile(hr, 0.25);
        sum.med_hinf_ratio = quantile(ir, 0.5);
        sum.iqr_hinf_ratio = quantile(ir, 0.75) - quantile(ir, 0.25);
        sum.med_z_ratio = quantile(zr, 0.5);
        sum.iqr_z_ratio = quantile(zr, 0.75) - quantile(zr, 0.25);

        traj.n_grid.push_back(n);
        traj.rows.insert(traj.rows.end(), rows.begin(), rows.end());
        traj.summary.push_back(sum);
    }
    return traj;
}

BetaEstimate estimate_beta(const ScoringModel& model, const GapPenalty& gap,
                           long n, int reps, std::uint64_t seed, int threads) {
    if (n < 2) throw std::invalid_argument("estimate_beta: n must be at least 2");
    if (reps < 2) throw std::invalid_argument("estimate_beta: reps must be at least 2");
    std::vector<double> g1(static_cast<std::size_t>(reps));
    std::vector<double> g2(static_cast<std::size_t>(reps));
    parallel_for_shards(static_cast<std::size_t>(reps), threads,
                        [&](std::size_t rep) {
        auto [x, y] = simulate_pair(2 * n, model, derive_seed(seed, kTagBeta, rep));
        Seq xp(x.begin(), x.begin() + n);
        Seq yp(y.begin(), y.begin() + n);
        DPWorkspace ws;
        g1[rep] = global_score(xp, yp, model.scores(), gap, ws) /
                  static_cast<double>(n);
        g2[rep] = global_score(x, y, model.scores(), gap, ws) /
                  static_cast<double>(2 * n);
    });
    MeanSe a = mean_se(g1);
    MeanSe b = mean_se(g2);
    BetaEstimate out;
    out.beta = a.mean;
    out.se = a.se;
    out.beta_2n = b.mean;
    out.se_2n = b.se;
    out.n = n;
    out.reps = reps;
    out.seed = seed;
    return out;
}

std::vector<PhaseCell> phase_scan(const ScoringModel& model, GapFamily family,
                                  const std::vector<double>& open_grid,
                                  const std::vector<double>& slope_grid,
                                  double alpha, long n, int reps,
                                  std::uint64_t seed, int threads) {
    if (family == GapFamily::Infinite || family == GapFamily::CustomTable)
        throw std::invalid_argument("phase_scan: family must be affine, power or log");
    if (open_grid.empty() || slope_grid.empty())
        throw std::invalid_argument("phase_scan: empty grid");
    if (n < 4) throw std::invalid_argument("phase_scan: n must be at least 4");
    if (reps < 2) throw std::invalid_argument("phase_scan: reps must be at least 2");

    std::vector<PhaseCell> cells;
    cells.reserve(open_grid.size() * slope_grid.size());
    long half = n / 2;
    for (double open : open_grid) {
        for (double slope : slope_grid) {
            PhaseCell cell;
            cell.open = open;
            cell.slope = slope;
            cell.alpha = family == GapFamily::PowerLaw ? alpha : 0.0;
            GapPenalty gap = family == GapFamily::Affine
                                 ? GapPenalty::affine(open, slope)
                             : family == GapFamily::PowerLaw
                                 ? GapPenalty::power_law(open, slope, alpha)
                                 : GapPenalty::logarithmic(open, slope);
            try {
                DomainVerdict v = summation_test(gap, model);
                cell.verdict = v.verdict;
                cell.verdict_valid = true;
            } catch (const std::exception& e) {
                cell.verdict_valid = false;
                cell.verdict_error = e.what();
            }

            std::vector<double> gs(static_cast<std::size_t>(reps));
            std::vector<double> h_half(static_cast<std::size_t>(reps));
            std::vector<double> h_full(static_cast<std::size_t>(reps));
            std::uint64_t cell_seed =
                derive_seed(seed, kTagPhase, static_cast<std::uint64_t>(cells.size()));
            parallel_for_shards(static_cast<std::size_t>(reps), threads,
                                [&](std::size_t rep) {
                auto [x, y] = simulate_pair(n, model, derive_seed(cell_seed, rep));
                Seq xp(x.begin(), x.begin() + half);
                Seq yp(y.begin(), y.begin() + half);
                DPWorkspace ws;
                gs[rep] = global_score(x, y, model.scores(), gap, ws) /
                          static_cast<double>(n);
                h_half[rep] = local_score(xp, yp, model.scores(), gap, ws);
                h_full[rep] = local_score(x, y, model.scores(), gap, ws);
            });
            MeanSe b = mean_se(gs);
            cell.beta = b.mean;
            cell.beta_se = b.se;
            MeanSe mh = mean_se(h_half);
            MeanSe mf = mean_se(h_full);
            double dh = mf.mean - mh.mean;
            cell.slope_vs_n = dh / static_cast<double>(n - half);
            cell.slope_vs_logn =
                dh / (std::log(static_cast<double>(n)) -
                      std::log(static_cast<double>(half)));
            // Sign check only: a linear-domain cell must not show beta
            // significantly below zero, a log-domain cell must not show it
            // significantly above. Record the conflict and keep both numbers.
            if (cell.verdict_valid) {
                double lo = cell.beta - 3.0 * cell.beta_se;
                double hi = cell.beta + 3.0 * cell.beta_se;
                if (cell.verdict == Domain::LinearForAllDelta && hi < 0.0)
                    cell.disagreement = true;
                if (cell.verdict == Domain::LogarithmicForLargeDelta && lo > 0.0)
                    cell.disagreement = true;
            }
            cells.push_back(cell);
        }
    }
    return cells;
}

} // namespace gapstat
