#include "gapstat/asymptotics.hpp"

#include "gapstat/align.hpp"
#include "gapstat/parallel.hpp"
#include "gapstat/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

namespace gapstat {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

// Neumaier compensated accumulation.
inline void kadd(double& s, double& c, double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
        c += (s - t) + x;
    else
        c += (x - t) + s;
    s = t;
}

} // namespace

const char* domain_name(Domain d) {
    switch (d) {
    case Domain::LogarithmicForLargeDelta: return "logarithmic_for_large_delta";
    case Domain::LinearForAllDelta: return "linear_for_all_delta";
    case Domain::Indeterminate: return "indeterminate";
    }
    return "?";
}

const char* method_name(EvalMethod m) {
    return m == EvalMethod::ExactTruncated ? "exact_truncated" : "monte_carlo";
}

double theta_star(const ScoringModel& model, double tol) {
    double hi = 0.5;
    int guard = 0;
    while (model.pair_mgf(hi) <= 1.0) {
        hi *= 2.0;
        if (++guard > 60) throw std::runtime_error("pair mgf never exceeds 1");
    }
    // The mgf is convex with slope E[K] < 0 at zero: minimize, then bisect the
    // rising branch.
    double a = 0.0, b = hi;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = model.pair_mgf(c), fd = model.pair_mgf(d);
    for (int it = 0; it < 200 && (b - a) > 1e-14 * hi; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = model.pair_mgf(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = model.pair_mgf(d);
        }
    }
    double tmin = 0.5 * (a + b);
    if (model.pair_mgf(tmin) >= 1.0)
        throw std::runtime_error("pair mgf has no dip below 1; no positive root");
    double lo = tmin;
    double f_lo = model.pair_mgf(lo) - 1.0, f_hi = model.pair_mgf(hi) - 1.0;
    (void)f_lo;
    (void)f_hi;
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (model.pair_mgf(mid) - 1.0 < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double theta = 0.5 * (lo + hi);
    for (int it = 0; it < 50; ++it) {
        double f = model.pair_mgf(theta) - 1.0;
        if (std::abs(f) <= tol) break;
        double deriv = model.pair_mgf_deriv(theta);
        if (deriv <= 0.0) break;
        theta -= f / deriv;
        theta = std::min(std::max(theta, lo), hi);
    }
    return theta;
}

DomainVerdict summation_test(const GapPenalty& gap, const ScoringModel& model,
                             double margin) {
    if (gap.is_infinite()) fail("summation test needs a finite gap family");
    if (!gap.concave()) fail("summation test requires a concave gap cost");
    DomainVerdict v;
    v.theta_star = theta_star(model);
    GapFamily cls = gap.family() == GapFamily::CustomTable ? gap.declared_class()
                                                           : gap.family();
    double slope = gap.family() == GapFamily::CustomTable ? gap.declared_slope()
                                                          : gap.slope();
    if (cls == GapFamily::CustomTable)
        fail("declared asymptotic class is unknown; the test cannot classify it");
    if (cls == GapFamily::Infinite) fail("summation test needs a finite gap family");

    if (cls == GapFamily::Affine || cls == GapFamily::PowerLaw) {
        if (slope > 0.0) {
            v.verdict = Domain::LogarithmicForLargeDelta;
            v.theta_hat = 0.5 * v.theta_star;
            v.evidence = gamma_weight_series(gap, v.theta_hat);
            v.detail = "per-gap weights are summable for every positive theta";
        } else {
            // Flat weights: the series diverges no matter the test point.
            v.verdict = Domain::LinearForAllDelta;
            v.theta_hat = 1.5 * v.theta_star;
            v.evidence = gamma_weight_series(gap, v.theta_hat);
            v.detail = "zero slope keeps every weight at 1; the series diverges";
        }
        return v;
    }

    // Logarithmic growth: summability flips at slope = 1/theta*.
    v.log_slope = slope;
    double threshold = 1.0 / v.theta_star;
    if (slope > threshold + margin) {
        v.verdict = Domain::LogarithmicForLargeDelta;
        v.theta_hat = 0.5 * (1.0 / slope + v.theta_star);
        v.evidence = gamma_weight_series(gap, v.theta_hat);
        v.detail = "slope above 1/theta*: summable at a test point below theta*";
    } else if (slope < threshold - margin) {
        v.verdict = Domain::LinearForAllDelta;
        v.theta_hat = slope > 0.0 ? 0.5 * (v.theta_star + 1.0 / slope)
                                  : 1.5 * v.theta_star;
        v.evidence = gamma_weight_series(gap, v.theta_hat);
        v.detail = "slope below 1/theta*: divergent at a test point above theta*";
    } else {
        v.verdict = Domain::Indeterminate;
        v.theta_hat = v.theta_star;
        v.evidence = gamma_weight_series(gap, v.theta_hat);
        v.detail = "slope within margin of 1/theta*: no classification made";
    }
    return v;
}

PsiEstimate h1_closed_form(double theta, const GapPenalty& gap,
                           const ScoringModel& model) {
    if (theta <= 0.0) fail("theta must be positive");
    if (!gap.concave()) fail("closed form requires a concave gap cost");
    PsiEstimate e;
    e.kappa = 1;
    e.theta = theta;
    e.method = "closed_form";
    SeriesBound s = gap_weight_series(gap, theta);
    if (s.divergent) {
        e.infinite = true;
        e.value = kPosInf;
        e.h_value = kPosInf;
        return e;
    }
    double mgf = model.pair_mgf(theta);
    // with an exact tail the series total is sum + tail and carries no
    // uncertainty; otherwise the truth sits inside [sum, sum + tail]
    double lo = s.tail_exact ? s.upper() : s.sum;
    double h = lo * lo * mgf;
    double up = s.upper() * s.upper() * mgf;
    e.h_value = h;
    e.h_trunc = up - h;
    e.value = std::log(h);
    e.trunc_bound = std::log1p(e.h_trunc / h);
    return e;
}

namespace {

double dp_cost(long m, long n, int kappa) {
    double layers = kappa > 1 ? kappa - 1 : 1;
    return layers * static_cast<double>(m) * static_cast<double>(n) *
           static_cast<double>(m + n);
}

std::vector<std::pair<double, double>> flatten(const std::map<double, double>& acc) {
    return {acc.begin(), acc.end()};
}

} // namespace

PsiSurface::PsiSurface(const ScoringModel& model, const GapPenalty& gap, int kappa,
                       EvalMethod method, EvalBudget budget, std::uint64_t seed,
                       int threads)
    : model_(model), gap_(gap), kappa_(kappa), method_(method), budget_(budget),
      seed_(seed) {
    if (kappa_ < 1) fail("kappa must be >= 1");
    if (!gap_.concave()) fail("asymptotic evaluation requires a concave gap cost");
    if (budget_.samples < 2) budget_.samples = 2;
    build_cells(resolve_threads(threads));
}

void PsiSurface::build_cells(int threads) {
    const int A = model_.alphabet_size();
    const long L = gap_.family() == GapFamily::CustomTable ? gap_.table_size() : 0;
    const long hard_max = gap_.family() == GapFamily::CustomTable ? L + 2 : 4096;
    const double logA = std::log(static_cast<double>(A));

    // Largest diagonal whose full enumeration fits the op budget.
    long exact_T = 2L * kappa_ - 1;
    if (kappa_ > 1) {
        double cum = 0.0;
        for (long T = 2L * kappa_; T <= std::min<long>(hard_max, 64); ++T) {
            double states = std::exp(logA * static_cast<double>(T - 2));
            if (states > static_cast<double>(budget_.state_cap)) break;
            double diag_ops = 0.0;
            for (long m = kappa_; 2 * m <= T; ++m)
                diag_ops += states * dp_cost(m, T - m, kappa_);
            if (cum + diag_ops > budget_.op_budget) break;
            cum += diag_ops;
            exact_T = T;
        }
    }

    long cut = budget_.grid_cut;
    if (cut == 0) {
        if (kappa_ == 1)
            cut = 512;
        else
            cut = method_ == EvalMethod::ExactTruncated ? exact_T : exact_T + 6;
    }
    if (method_ == EvalMethod::ExactTruncated && kappa_ > 1) cut = std::min(cut, exact_T);
    cut = std::min(cut, hard_max);
    cut = std::max(cut, 2L * kappa_);
    grid_cut_ = cut;

    long rmax = std::max<long>(budget_.r_max, kappa_);
    if (L > 0) rmax = std::min(rmax, L);
    r_max_ = std::max<long>(rmax, kappa_);

    for (long T = 2L * kappa_; T <= cut; ++T)
        for (long m = kappa_; 2 * m <= T; ++m) {
            long n = T - m;
            bool exact = kappa_ == 1 || T <= exact_T;
            grid_.push_back({static_cast<int>(m), static_cast<int>(n),
                             m == n ? 1.0 : 2.0, exact,
                             exact ? 0 : budget_.samples, {}});
        }
    psi_cells_ = static_cast<long>(grid_.size());

    for (long r = kappa_; r <= r_max_; ++r) {
        int found = -1;
        for (long i = 0; i < psi_cells_; ++i)
            if (grid_[static_cast<std::size_t>(i)].m == r &&
                grid_[static_cast<std::size_t>(i)].n == r) {
                found = static_cast<int>(i);
                break;
            }
        if (found < 0) {
            double states = std::exp(logA * static_cast<double>(2 * r - 2));
            bool exact = kappa_ == 1 ||
                         (states <= static_cast<double>(budget_.state_cap) &&
                          states * dp_cost(r, r, kappa_) <= 2e7);
            grid_.push_back({static_cast<int>(r), static_cast<int>(r), 1.0, exact,
                             exact ? 0 : budget_.samples, {}});
            found = static_cast<int>(grid_.size()) - 1;
        }
        diag_.push_back(found);
    }

    // Histograms of the first-match-marginalized chain score. Deterministic
    // regardless of thread count: cell order is fixed and each sampled cell
    // owns a seed derived from (master seed, kappa, m, n).
    const auto& probs = model_.dist().probs();
    const auto& cdf = model_.dist().cdf();
    auto build_one = [&](std::size_t idx) {
        Cell& cell = grid_[idx];
        const int m = cell.m, n = cell.n;
        if (kappa_ == 1) {
            double v = (0.0 - gap_.cost(m - 1)) - gap_.cost(n - 1);
            cell.hist = {{v, 1.0}};
            return;
        }
        const int p = m - 1, q = n - 1;
        Seq xs(static_cast<std::size_t>(p)), ys(static_cast<std::size_t>(q));
        DPWorkspace ws;
        std::map<double, double> acc;
        if (cell.exact) {
            std::vector<int> dig(static_cast<std::size_t>(p + q), 0);
            for (;;) {
                double pr = 1.0;
                for (int i = 0; i < p; ++i) {
                    xs[static_cast<std::size_t>(i)] =
                        static_cast<std::uint8_t>(dig[static_cast<std::size_t>(i)]);
                    pr *= probs[static_cast<std::size_t>(dig[static_cast<std::size_t>(i)])];
                }
                for (int j = 0; j < q; ++j) {
                    ys[static_cast<std::size_t>(j)] =
                        static_cast<std::uint8_t>(dig[static_cast<std::size_t>(p + j)]);
                    pr *= probs[static_cast<std::size_t>(dig[static_cast<std::size_t>(p + j)])];
                }
                acc[detail::inner_chain_score(kappa_ - 1, xs, ys, model_.scores(),
                                              gap_, ws)] += pr;
                int d = 0;
                while (d < p + q && ++dig[static_cast<std::size_t>(d)] == A) {
                    dig[static_cast<std::size_t>(d)] = 0;
                    ++d;
                }
                if (d == p + q) break;
            }
            cell.hist = flatten(acc);
        } else {
            Rng rng(derive_seed(seed_, 0xA5u, static_cast<std::uint64_t>(kappa_),
                                static_cast<std::uint64_t>(m),
                                static_cast<std::uint64_t>(n)));
            std::map<double, long> counts;
            for (long s = 0; s < cell.n_samples; ++s) {
                for (int i = 0; i < p; ++i)
                    xs[static_cast<std::size_t>(i)] =
                        static_cast<std::uint8_t>(rng.sample_cdf(cdf));
                for (int j = 0; j < q; ++j)
                    ys[static_cast<std::size_t>(j)] =
                        static_cast<std::uint8_t>(rng.sample_cdf(cdf));
                counts[detail::inner_chain_score(kappa_ - 1, xs, ys, model_.scores(),
                                                 gap_, ws)] += 1;
            }
            cell.hist.reserve(counts.size());
            for (const auto& [v, cnt] : counts)
                cell.hist.emplace_back(
                    v, static_cast<double>(cnt) / static_cast<double>(cell.n_samples));
        }
    };
    parallel_for_shards(grid_.size(), threads, build_one);
}

void PsiSurface::eval_cell(double theta, const Cell& c, double& mean,
                           double& se) const {
    double s = 0.0, comp = 0.0, s2 = 0.0, comp2 = 0.0;
    for (const auto& [v, p] : c.hist) {
        double w = std::exp(theta * v);
        kadd(s, comp, p * w);
        if (!c.exact) kadd(s2, comp2, p * w * w);
    }
    mean = s + comp;
    if (c.exact || c.n_samples < 2) {
        se = 0.0;
        return;
    }
    double nd = static_cast<double>(c.n_samples);
    double var = std::max(0.0, (s2 + comp2) - mean * mean) * nd / (nd - 1.0);
    se = std::sqrt(var / nd);
}

PsiEstimate PsiSurface::psi(double theta) const {
    if (theta <= 0.0) fail("theta must be positive");
    PsiEstimate e;
    e.kappa = kappa_;
    e.theta = theta;
    e.seed = seed_;
    e.grid_cut = grid_cut_;
    SeriesBound s = gap_weight_series(gap_, theta);
    if (s.divergent) {
        e.infinite = true;
        e.value = kPosInf;
        e.h_value = kPosInf;
        e.method = method_name(method_);
        return e;
    }
    double mgf = model_.pair_mgf(theta);
    double h = 0.0, hc = 0.0, env = 0.0, envc = 0.0, sesq = 0.0;
    bool any_mc = false;
    for (long i = 0; i < psi_cells_; ++i) {
        const Cell& c = grid_[static_cast<std::size_t>(i)];
        double mean, se;
        eval_cell(theta, c, mean, se);
        kadd(h, hc, c.mult * mgf * mean);
        if (se > 0.0) {
            any_mc = true;
            sesq += (c.mult * mgf * se) * (c.mult * mgf * se);
        }
        kadd(env, envc,
             c.mult * std::exp(-theta * gap_.cost(c.m - kappa_)) *
                 std::exp(-theta * gap_.cost(c.n - kappa_)));
    }
    double h_total = h + hc;
    double s_up = s.sum + s.tail;
    double trunc = std::exp(theta * kappa_ * model_.max_score()) *
                   std::max(0.0, s_up * s_up - (env + envc));
    e.h_value = h_total;
    e.h_trunc = trunc;
    e.h_se = std::sqrt(sesq);
    e.value = std::log(h_total);
    e.trunc_bound = std::log1p(trunc / h_total);
    e.mc_se = e.h_se / h_total; // delta method on log h
    e.method = any_mc ? "monte_carlo" : "exact_truncated";
    return e;
}

PsiEstimate PsiSurface::xi(double theta, long r_max) const {
    if (theta <= 0.0) fail("theta must be positive");
    if (r_max <= 0 || r_max > r_max_) r_max = r_max_;
    PsiEstimate e;
    e.kappa = kappa_;
    e.theta = theta;
    e.seed = seed_;
    e.grid_cut = grid_cut_;
    double best = kNegInf, best_se = 0.0;
    int arg = 0;
    bool any_mc = false;
    for (long r = kappa_; r <= r_max; ++r) {
        const Cell& c = grid_[static_cast<std::size_t>(diag_[static_cast<std::size_t>(r - kappa_)])];
        double mean, se;
        eval_cell(theta, c, mean, se);
        double mgf = model_.pair_mgf(theta);
        double val = mgf * mean;
        if (se > 0.0) any_mc = true;
        if (val > best) {
            best = val;
            best_se = mgf * se;
            arg = static_cast<int>(r);
        }
    }
    e.h_value = best;
    e.value = std::log(best);
    e.h_se = best_se;
    e.mc_se = best > 0.0 ? best_se / best : 0.0;
    e.argmax_r = arg;
    e.sup_at_boundary = arg == static_cast<int>(r_max);
    double beyond = std::exp(theta * (kappa_ * model_.max_score() -
                                      2.0 * gap_.cost(r_max + 1 - kappa_)));
    if (beyond > best) {
        e.sup_certified = false;
        e.h_trunc = beyond - best;
        e.trunc_bound = std::log(beyond) - std::log(best);
    }
    e.method = any_mc ? "monte_carlo" : "exact_truncated";
    return e;
}

std::vector<PsiSurface::CellInfo> PsiSurface::cells() const {
    std::vector<CellInfo> out;
    out.reserve(static_cast<std::size_t>(psi_cells_));
    for (long i = 0; i < psi_cells_; ++i) {
        const Cell& c = grid_[static_cast<std::size_t>(i)];
        out.push_back({c.m, c.n, c.mult, c.exact, c.n_samples});
    }
    return out;
}

PsiEstimate psi_kappa(const ScoringModel& model, const GapPenalty& gap, int kappa,
                      double theta, EvalMethod method, EvalBudget budget,
                      std::uint64_t seed, int threads) {
    return PsiSurface(model, gap, kappa, method, budget, seed, threads).psi(theta);
}

PsiEstimate xi_kappa(const ScoringModel& model, const GapPenalty& gap, int kappa,
                     double theta, long r_max, EvalMethod method, EvalBudget budget,
                     std::uint64_t seed, int threads) {
    if (r_max > 0) budget.r_max = r_max;
    return PsiSurface(model, gap, kappa, method, budget, seed, threads)
        .xi(theta, r_max);
}

namespace {

// Largest positive root of an increasing-branch convex function that may be
// +inf on a left plateau: coarse scan, golden-section to the minimizer,
// bisection on the right sign change, then a safeguarded secant polish.
RootResult increasing_root(const std::function<double(double)>& f, double lo,
                           double hi, double tol) {
    RootResult out;
    const int kScan = 33;
    double first_finite = kPosInf, best_v = kPosInf, best_t = lo;
    for (int i = 0; i < kScan; ++i) {
        double t = lo + (hi - lo) * static_cast<double>(i) / (kScan - 1);
        double v = f(t);
        if (std::isfinite(v) && t < first_finite) first_finite = t;
        if (v < best_v) {
            best_v = v;
            best_t = t;
        }
    }
    if (!std::isfinite(best_v)) {
        out.note = "no finite evaluation on the search interval";
        out.min_value = best_v;
        out.min_theta = best_t;
        return out;
    }
    double a = std::max(lo, first_finite - (hi - lo) / (kScan - 1));
    double b = hi;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 100 && (b - a) > std::max(1e-12, 0.01 * tol); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    double tmin = 0.5 * (a + b);
    double fmin = f(tmin);
    if (fmin > best_v) {
        tmin = best_t;
        fmin = best_v;
    }
    out.min_value = fmin;
    out.min_theta = tmin;
    if (fmin >= 0.0) {
        out.note = "function never dips below zero on the interval";
        return out;
    }
    double rb = hi, frb = f(rb);
    int guard = 0;
    while (frb <= 0.0 && rb < 80.0 && ++guard < 60) {
        rb *= 1.3;
        frb = f(rb);
    }
    if (frb <= 0.0) {
        out.note = "no sign change above the minimizer";
        return out;
    }
    double ra = tmin, fra = fmin;
    while (rb - ra > tol) {
        double mid = 0.5 * (ra + rb);
        double fm = f(mid);
        if (fm < 0.0) {
            ra = mid;
            fra = fm;
        } else {
            rb = mid;
            frb = fm;
        }
    }
    // Secant polish inside the bracket.
    double x0 = ra, f0 = fra, x1 = rb, f1 = frb;
    for (int it = 0; it < 60; ++it) {
        if (std::abs(f1) <= 1e-11 || x1 == x0) break;
        double step = f1 * (x1 - x0) / (f1 - f0);
        double xn = x1 - step;
        if (!(xn > ra && xn < rb)) xn = 0.5 * (ra + rb);
        double fn = f(xn);
        if (fn < 0.0)
            ra = xn;
        else
            rb = xn;
        x0 = x1;
        f0 = f1;
        x1 = xn;
        f1 = fn;
    }
    double theta = std::abs(f1) <= std::abs(f0) ? x1 : x0;
    out.found = true;
    out.theta = theta;
    out.resid = std::abs(f(theta));
    return out;
}

double default_hi(const PsiSurface& s) {
    return theta_star(s.model()) * 1.05 + 0.02;
}

} // namespace

RootResult root_psi(const PsiSurface& s, double theta_lo, double theta_hi,
                    double tol) {
    if (theta_hi <= 0.0) theta_hi = default_hi(s);
    auto f = [&](double t) { return s.psi(t).value; };
    RootResult r = increasing_root(f, theta_lo, theta_hi, tol);
    if (r.found) r.h_at_root = s.psi(r.theta).h_value;
    return r;
}

RootResult root_xi(const PsiSurface& s, long r_max, double theta_lo,
                   double theta_hi, double tol) {
    if (theta_hi <= 0.0) theta_hi = default_hi(s);
    auto f = [&](double t) { return s.xi(t, r_max).value; };
    RootResult r = increasing_root(f, theta_lo, theta_hi, tol);
    if (r.found) {
        PsiEstimate at = s.xi(r.theta, r_max);
        r.h_at_root = at.h_value;
        r.argmax_r = at.argmax_r;
    }
    return r;
}

ThetaBracket theta_tilde(const ScoringModel& model, const GapPenalty& gap,
                         int kappa_max, EvalMethod method, EvalBudget budget,
                         std::uint64_t seed, int threads, double tol) {
    if (kappa_max < 1) fail("kappa_max must be >= 1");
    ThetaBracket out;
    out.kappa = kappa_max;
    for (int k = 1; k <= kappa_max; ++k) {
        PsiSurface s(model, gap, k, method, budget, seed, threads);
        BracketRow row;
        row.kappa = k;
        row.lower = root_psi(s, 1e-3, 0.0, tol);
        row.upper = root_xi(s, 0, 1e-3, 0.0, tol);
        out.rows.push_back(row);
    }
    const BracketRow& last = out.rows.back();
    out.found = last.lower.found && last.upper.found;
    out.lower = last.lower.theta;
    out.upper = last.upper.theta;
    return out;
}

SlopeResult psi_prime(const PsiSurface& s, const ThetaBracket& bracket,
                      double h_step) {
    if (!bracket.found) fail("slope needs a resolved theta bracket");
    if (h_step <= 0.0) fail("h_step must be positive");
    SlopeResult r;
    r.theta_used = bracket.mid();
    r.h_step = h_step;
    r.bracket_warn = bracket.width() > h_step;
    PsiEstimate up = s.psi(r.theta_used + h_step);
    PsiEstimate dn = s.psi(r.theta_used - h_step);
    if (up.infinite || dn.infinite)
        fail("difference step crosses the divergence boundary; reduce h_step");
    r.central = (up.value - dn.value) / (2.0 * h_step * s.kappa());
    // Shift route: raising every pair score by lambda adds lambda*kappa*theta
    // to the log moment sum exactly, so the displaced root measures the slope.
    r.lambda = std::max(h_step, 0.02);
    RootResult base = root_psi(s, 1e-3, 0.0, 1e-7);
    auto shifted = [&](double t) { return s.psi(t).value + r.lambda * s.kappa() * t; };
    RootResult disp = increasing_root(shifted, 1e-3, default_hi(s), 1e-7);
    if (base.found && disp.found && base.theta > disp.theta) {
        r.shift_route = r.lambda * disp.theta / (base.theta - disp.theta);
        double rel = std::abs(r.central - r.shift_route) /
                     std::max({std::abs(r.central), std::abs(r.shift_route), 1e-12});
        r.consistent = rel <= 0.08;
    } else {
        r.shift_route = 0.0;
        r.consistent = false;
    }
    r.value = r.central;
    return r;
}

GrowthConstants growth_constants(const ThetaBracket& bracket, double slope) {
    if (!bracket.found) fail("growth constants need a resolved theta bracket");
    if (!(slope > 0.0)) fail("slope must be positive at the root");
    GrowthConstants g;
    g.score_rate_lo = 2.0 / bracket.upper;
    g.score_rate_hi = 2.0 / bracket.lower;
    g.match_rate_lo = 2.0 / (bracket.upper * slope);
    g.match_rate_hi = 2.0 / (bracket.lower * slope);
    return g;
}

} // namespace gapstat
