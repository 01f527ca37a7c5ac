// Acceptance gate: ten end-to-end checks, one [PASS]/[FAIL] line each, with
// all tolerances pinned here. A failing check never stops the run; the exit
// code is 1 if anything failed.
#include "gapstat/align.hpp"
#include "gapstat/asymptotics.hpp"
#include "gapstat/lawlab.hpp"
#include "gapstat/model.hpp"
#include "gapstat/rng.hpp"
#include "gapstat/tailprob.hpp"
#include "models.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace gapstat;
namespace fs = std::filesystem;

namespace {

int failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

std::string fmt(double v, int prec = 5) {
    std::ostringstream os;
    os << std::setprecision(prec) << v;
    return os.str();
}

void criterion(int idx, const std::string& label,
               const std::function<std::pair<bool, std::string>()>& body) {
    bool pass = false;
    std::string detail;
    Timer t;
    try {
        auto r = body();
        pass = r.first;
        detail = r.second;
    } catch (const std::exception& e) {
        pass = false;
        detail = std::string("exception: ") + e.what();
    }
    detail += "; " + fmt(t.seconds(), 3) + "s";
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", idx,
                label.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

Seq rand_seq(Rng& rng, long len, int letters) {
    Seq s(static_cast<std::size_t>(len));
    for (auto& c : s) c = static_cast<std::uint8_t>(rng.uniform_index(letters));
    return s;
}

// Random scoring model with a clearly negative mean and positive maximum.
ScoringModel random_model(Rng& rng, int min_letters, int max_letters) {
    for (;;) {
        int a = min_letters + rng.uniform_index(max_letters - min_letters + 1);
        Alphabet alpha(std::string("ACGT").substr(0, static_cast<std::size_t>(a)));
        double mismatch = -(1.0 + 2.0 * rng.uniform());
        std::vector<double> v(static_cast<std::size_t>(a * a), mismatch);
        double diag_sum = 0.0;
        for (int i = 0; i < a; ++i) {
            double match = 0.5 + 1.5 * rng.uniform();
            v[static_cast<std::size_t>(i * a + i)] = match;
            diag_sum += match;
        }
        double mean = (diag_sum + mismatch * static_cast<double>(a * a - a)) /
                      static_cast<double>(a * a);
        if (mean > -0.35) continue;
        return ScoringModel(alpha, LetterDist::uniform(alpha),
                            ScoreMatrix(alpha, v));
    }
}

GapPenalty random_gap(Rng& rng, int kind) {
    // every draw stays concave through the k = 1 joint: open >= gamma(2)
    switch (kind % 3) {
    case 0: {
        double slope = 0.2 + 1.3 * rng.uniform();
        return GapPenalty::affine(slope + 1.5 * rng.uniform(), slope);
    }
    case 1: {
        double slope = 0.2 + 1.3 * rng.uniform();
        return GapPenalty::power_law(slope + 1.5 * rng.uniform(), slope,
                                     0.3 + 0.5 * rng.uniform());
    }
    default: {
        double slope = 1.6 + 1.4 * rng.uniform();
        return GapPenalty::logarithmic(slope * std::log(2.0) + 1.5 * rng.uniform(),
                                       slope);
    }
    }
}

// Smallest theta at which the gap weight series is safely convergent.
double theta_floor(const GapPenalty& g) {
    if (g.family() == GapFamily::Logarithmic) return 1.05 / g.slope();
    return 0.12;
}

std::vector<Seq> all_binary_seqs(int max_len) {
    std::vector<Seq> out;
    for (int len = 1; len <= max_len; ++len)
        for (int mask = 0; mask < (1 << len); ++mask) {
            Seq s(static_cast<std::size_t>(len));
            for (int i = 0; i < len; ++i)
                s[static_cast<std::size_t>(i)] =
                    static_cast<std::uint8_t>((mask >> i) & 1);
            out.push_back(s);
        }
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f.good()) return "<missing " + p.string() + ">";
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

// ---- criterion bodies ------------------------------------------------------

std::pair<bool, std::string> c1_analytic_roots() {
    ScoringModel four = match_model(4, 1.0, -1.0);
    ScoringModel two = match_model(2, 1.0, -2.0);
    double r4 = theta_star(four);
    double r2 = theta_star(two);
    double want4 = std::log(3.0);
    double want2 = std::log((1.0 + std::sqrt(5.0)) / 2.0);

    auto best_of = [](const std::function<void()>& f) {
        double best = 1e9;
        for (int i = 0; i < 5; ++i) {
            Timer t;
            f();
            best = std::min(best, t.seconds());
        }
        return best;
    };
    double t4 = best_of([&] { theta_star(four); });
    double t2 = best_of([&] { theta_star(two); });

    bool ok = std::abs(r4 - want4) <= 1e-10 && std::abs(r2 - want2) <= 1e-10 &&
              t4 < 1e-3 && t2 < 1e-3;
    return {ok, "ln3 err " + fmt(std::abs(r4 - want4), 2) + ", golden-ratio err " +
                    fmt(std::abs(r2 - want2), 2) + ", " + fmt(t4 * 1e6, 3) +
                    "us / " + fmt(t2 * 1e6, 3) + "us"};
}

std::pair<bool, std::string> c2_brute_force_equivalence() {
    ScoringModel m = match_model(2, 1.0, -2.0);
    const ScoreMatrix& sc = m.scores();
    std::vector<GapPenalty> gaps = {GapPenalty::affine(0.25, 0.25),
                                    GapPenalty::logarithmic(0.5, 0.7),
                                    GapPenalty::power_law(0.4, 0.6, 0.5)};
    std::vector<Seq> seqs = all_binary_seqs(5);
    DPWorkspace ws;
    long pairs = 0, checks = 0;
    for (const auto& g : gaps)
        for (const auto& x : seqs)
            for (const auto& y : seqs) {
                ++pairs;
                LocalResult dp = local_align(x, y, sc, g, ws);
                LocalResult bf = brute_force_local(x, y, sc, g);
                if (dp.score != bf.score || dp.best.pairs != bf.best.pairs)
                    return {false, "local mismatch at pair " + std::to_string(pairs)};
                if (global_score(x, y, sc, g, ws) != brute_force_global(x, y, sc, g))
                    return {false, "global mismatch at pair " + std::to_string(pairs)};
                int kmax = static_cast<int>(std::min({x.size(), y.size(),
                                                      std::size_t{3}}));
                for (int k = 1; k <= kmax; ++k) {
                    if (fixed_match_score(k, x, y, sc, g, ws) !=
                        brute_force_fixed_match(k, x, y, sc, g))
                        return {false, "fixed-match mismatch at pair " +
                                           std::to_string(pairs) + ", kappa " +
                                           std::to_string(k)};
                    ++checks;
                }
                checks += 2;
            }
    return {true, std::to_string(pairs) + " pairs, " + std::to_string(checks) +
                      " exact comparisons"};
}

std::pair<bool, std::string> c3_moment_surface_consistency() {
    // single-match sums against the closed form
    ScoringModel m4 = match_model(4, 1.0, -1.0);
    GapPenalty g4 = GapPenalty::affine(3.0, 1.0);
    EvalBudget b1;
    b1.op_budget = 2e8;
    b1.r_max = 2;
    PsiSurface s1(m4, g4, 1, EvalMethod::ExactTruncated, b1);
    double worst1 = 0.0;
    for (int i = 0; i < 10; ++i) {
        double theta = 0.3 + 0.1 * static_cast<double>(i);
        PsiEstimate a = s1.psi(theta);
        PsiEstimate c = h1_closed_form(theta, g4, m4);
        double slack = a.trunc_bound + c.trunc_bound + 1e-8;
        double gap = std::abs(a.value - c.value);
        worst1 = std::max(worst1, gap - slack);
        if (gap > slack)
            return {false, "kappa=1 gap " + fmt(gap) + " above slack " + fmt(slack) +
                               " at theta " + fmt(theta)};
    }

    // two-match sums against full enumeration on a small capped grid
    ScoringModel m2 = match_model(2, 1.0, -2.0);
    GapPenalty g2 = GapPenalty::affine(1.0, 0.75);
    EvalBudget b2;
    b2.grid_cut = 6;
    b2.op_budget = 1e8;
    b2.r_max = 4;
    PsiSurface s2(m2, g2, 2, EvalMethod::ExactTruncated, b2);
    double worst2 = 0.0;
    for (double theta : {0.5, 0.9}) {
        double total = 0.0;
        for (int mm = 2; mm <= 4; ++mm)
            for (int nn = 2; nn <= 6 - mm; ++nn) {
                double cell = 0.0;
                int letters = mm + nn;
                double prob = std::pow(0.5, letters);
                for (int mask = 0; mask < (1 << letters); ++mask) {
                    Seq x(static_cast<std::size_t>(mm)), y(static_cast<std::size_t>(nn));
                    for (int i = 0; i < mm; ++i)
                        x[static_cast<std::size_t>(i)] =
                            static_cast<std::uint8_t>((mask >> i) & 1);
                    for (int j = 0; j < nn; ++j)
                        y[static_cast<std::size_t>(j)] =
                            static_cast<std::uint8_t>((mask >> (mm + j)) & 1);
                    double gv = brute_force_fixed_match(2, x, y, m2.scores(), g2);
                    cell += prob * std::exp(theta * gv);
                }
                total += cell;
            }
        double gap = std::abs(total - s2.psi(theta).h_value);
        worst2 = std::max(worst2, gap);
        if (gap > 1e-9)
            return {false, "kappa=2 enumeration gap " + fmt(gap) + " at theta " +
                               fmt(theta)};
    }
    return {true, "closed-form margin " + fmt(worst1, 3) + ", enumeration gap " +
                      fmt(worst2, 3)};
}

std::pair<bool, std::string> c4_structural_inequalities() {
    const int kCases = 1000;
    Rng rng(0xACCE5);
    std::ostringstream note;

    // pool A: mixed alphabets, kappa 1..2, for convexity / xi / mgf floors
    struct Entry {
        ScoringModel model;
        GapPenalty gap;
        int kappa;
        double tmin;
        PsiSurface surf;
    };
    std::vector<Entry> pool_a;
    for (int i = 0; i < 12; ++i) {
        ScoringModel m = random_model(rng, 2, 4);
        GapPenalty g = random_gap(rng, i);
        int kappa = 1 + (i % 2);
        EvalBudget b;
        b.op_budget = 4e6;
        b.r_max = kappa + 1;
        pool_a.push_back(
            {m, g, kappa, theta_floor(g), PsiSurface(m, g, kappa, EvalMethod::ExactTruncated, b)});
    }

    // pool B: binary models, kappa 1..4, for subadditivity and diagonal sups
    std::vector<Entry> pool_b;
    for (int i = 0; i < 4; ++i) {
        ScoringModel m = random_model(rng, 2, 2);
        GapPenalty g = random_gap(rng, i);
        for (int kappa = 1; kappa <= 4; ++kappa) {
            EvalBudget b;
            b.op_budget = 4e6;
            b.r_max = kappa + 2;
            pool_b.push_back(
                {m, g, kappa, theta_floor(g), PsiSurface(m, g, kappa, EvalMethod::ExactTruncated, b)});
        }
    }

    // pool C: base/shifted surface pairs on one pinned grid
    struct ShiftEntry {
        double lambda;
        int kappa;
        double tmin;
        PsiSurface base;
        PsiSurface moved;
    };
    std::vector<ShiftEntry> pool_c;
    for (int i = 0; i < 8; ++i) {
        ScoringModel m = random_model(rng, 2, 4);
        GapPenalty g = random_gap(rng, i);
        int kappa = 1 + (i % 2);
        double lambda = (i % 2 ? -0.2 : 0.25) + 0.05 * rng.uniform();
        EvalBudget b;
        b.grid_cut = 2 * kappa + 4;
        b.r_max = kappa + 1;
        pool_c.push_back({lambda, kappa, theta_floor(g),
                          PsiSurface(m, g, kappa, EvalMethod::ExactTruncated, b),
                          PsiSurface(m.shifted(lambda), g, kappa,
                                     EvalMethod::ExactTruncated, b)});
    }

    auto sample_theta = [&](double tmin, double lo, double hi) {
        double base = std::max(tmin + 0.02, lo);
        return base + (hi - base) * rng.uniform();
    };

    long viol_convex = 0, viol_subadd = 0, viol_xi = 0, viol_floor = 0,
         viol_env = 0, viol_concat = 0, viol_shift = 0;

    // convexity of the log moment sum in theta
    for (int i = 0; i < kCases; ++i) {
        const Entry& e = pool_a[static_cast<std::size_t>(
            rng.uniform_index(static_cast<int>(pool_a.size())))];
        double h = 0.03 + 0.07 * rng.uniform();
        double t0 = sample_theta(e.tmin + h, 0.15 + h, 1.5);
        PsiEstimate lo = e.surf.psi(t0 - h), mid = e.surf.psi(t0),
                    hi = e.surf.psi(t0 + h);
        if (lo.infinite || mid.infinite || hi.infinite) {
            --i;
            continue;
        }
        if (lo.value + hi.value - 2.0 * mid.value < -1e-9) ++viol_convex;
    }

    // subadditivity across match counts, through the certified bounds
    const int pairs[3][2] = {{1, 1}, {1, 2}, {2, 2}};
    for (int i = 0; i < kCases; ++i) {
        int combo = rng.uniform_index(4);
        const int* pr = pairs[rng.uniform_index(3)];
        const Entry& ek = pool_b[static_cast<std::size_t>(combo * 4 + pr[0] - 1)];
        const Entry& eh = pool_b[static_cast<std::size_t>(combo * 4 + pr[1] - 1)];
        const Entry& es =
            pool_b[static_cast<std::size_t>(combo * 4 + pr[0] + pr[1] - 1)];
        double t0 = sample_theta(ek.tmin, 0.15, 1.5);
        PsiEstimate a = ek.surf.psi(t0), b = eh.surf.psi(t0), s = es.surf.psi(t0);
        if (a.infinite || b.infinite || s.infinite) {
            --i;
            continue;
        }
        if (s.value > a.value + a.trunc_bound + b.value + b.trunc_bound + 1e-9)
            ++viol_subadd;
    }

    // the diagonal sup never exceeds the full sum
    for (int i = 0; i < kCases; ++i) {
        const Entry& e = pool_b[static_cast<std::size_t>(
            rng.uniform_index(static_cast<int>(pool_b.size())))];
        double t0 = sample_theta(e.tmin, 0.15, 1.5);
        PsiEstimate p = e.surf.psi(t0);
        PsiEstimate x = e.surf.xi(t0, e.kappa + 2);
        if (p.infinite) {
            --i;
            continue;
        }
        if (x.value > p.value + 1e-9) ++viol_xi;
    }

    // per-match normalization dominates the letter-pair mgf
    for (int i = 0; i < kCases; ++i) {
        const Entry& e = pool_a[static_cast<std::size_t>(
            rng.uniform_index(static_cast<int>(pool_a.size())))];
        double t0 = sample_theta(e.tmin, 0.15, 1.5);
        PsiEstimate p = e.surf.psi(t0);
        if (p.infinite) {
            --i;
            continue;
        }
        double floor = static_cast<double>(e.kappa) * std::log(e.model.pair_mgf(t0));
        if (p.value + p.trunc_bound < floor - 1e-9) ++viol_floor;
    }

    // envelope and concatenation checks on sampled restricted scores
    std::vector<ScoringModel> emodels;
    std::vector<GapPenalty> egaps;
    for (int i = 0; i < 6; ++i) {
        emodels.push_back(random_model(rng, 2, 4));
        egaps.push_back(random_gap(rng, i));
    }
    DPWorkspace ws;
    for (int i = 0; i < kCases; ++i) {
        const ScoringModel& m = emodels[static_cast<std::size_t>(rng.uniform_index(6))];
        const GapPenalty& g = egaps[static_cast<std::size_t>(rng.uniform_index(6))];
        int kappa = 1 + rng.uniform_index(3);
        long r = kappa + rng.uniform_index(8), s = kappa + rng.uniform_index(8);
        Seq x = rand_seq(rng, r, m.alphabet_size());
        Seq y = rand_seq(rng, s, m.alphabet_size());
        double gv = fixed_match_score(kappa, x, y, m.scores(), g, ws);
        double env = static_cast<double>(kappa) * m.max_score() -
                     g.cost(r - kappa) - g.cost(s - kappa);
        if (gv > env + 1e-9) ++viol_env;
    }
    for (int i = 0; i < kCases; ++i) {
        const ScoringModel& m = emodels[static_cast<std::size_t>(rng.uniform_index(6))];
        const GapPenalty& g = egaps[static_cast<std::size_t>(rng.uniform_index(6))];
        int kappa = 1 + rng.uniform_index(2);
        Seq x = rand_seq(rng, kappa + rng.uniform_index(6), m.alphabet_size());
        Seq y = rand_seq(rng, kappa + rng.uniform_index(6), m.alphabet_size());
        Seq x2 = rand_seq(rng, kappa + rng.uniform_index(6), m.alphabet_size());
        Seq y2 = rand_seq(rng, kappa + rng.uniform_index(6), m.alphabet_size());
        double part = fixed_match_score(kappa, x, y, m.scores(), g, ws) +
                      fixed_match_score(kappa, x2, y2, m.scores(), g, ws);
        Seq cx = x, cy = y;
        cx.insert(cx.end(), x2.begin(), x2.end());
        cy.insert(cy.end(), y2.begin(), y2.end());
        double whole = fixed_match_score(2 * kappa, cx, cy, m.scores(), g, ws);
        if (part > whole + 1e-9) ++viol_concat;
    }

    // exactness of the score-shift identity
    double worst_shift = 0.0;
    for (int i = 0; i < kCases; ++i) {
        const ShiftEntry& e = pool_c[static_cast<std::size_t>(
            rng.uniform_index(static_cast<int>(pool_c.size())))];
        double t0 = sample_theta(e.tmin, 0.15, 1.5);
        PsiEstimate a = e.base.psi(t0), b = e.moved.psi(t0);
        if (a.infinite || b.infinite) {
            --i;
            continue;
        }
        double gap = std::abs(b.value - a.value -
                              e.lambda * static_cast<double>(e.kappa) * t0);
        worst_shift = std::max(worst_shift, gap);
        if (gap > 1e-12) ++viol_shift;
    }

    long total = viol_convex + viol_subadd + viol_xi + viol_floor + viol_env +
                 viol_concat + viol_shift;
    note << "violations: convexity " << viol_convex << ", subadd " << viol_subadd
         << ", sup " << viol_xi << ", mgf floor " << viol_floor << ", envelope "
         << viol_env << ", concat " << viol_concat << ", shift " << viol_shift
         << " (worst shift gap " << fmt(worst_shift, 2) << ")";
    return {total == 0, note.str()};
}

std::pair<bool, std::string> c5_bracket_and_decay_rate() {
    ScoringModel m = match_model(4, 1.0, -1.0);
    GapPenalty g = GapPenalty::affine(8.0, 2.0);
    EvalBudget b;
    b.op_budget = 1e9;
    ThetaBracket br = theta_tilde(m, g, 3, EvalMethod::ExactTruncated, b, 7, 1);
    if (!br.found || br.rows.size() != 3) return {false, "bracket not found"};

    bool ordered = true;
    for (const BracketRow& row : br.rows) {
        double slack = row.kappa == 1 ? 1e-6 : 0.01;
        if (!row.lower.found || !row.upper.found ||
            row.lower.theta > row.upper.theta + slack)
            ordered = false;
    }
    double theta_gap = std::abs(br.rows[0].upper.theta - theta_star(m));
    if (!ordered || theta_gap > 1e-6)
        return {false, "bracket ordering failed, kappa=1 upper vs theta* gap " +
                           fmt(theta_gap)};

    const long N = 4000000;
    std::vector<double> cs;
    for (int c = 4; c <= 16; ++c) cs.push_back(static_cast<double>(c));
    auto curve = direct_mc_curve(cs, 16, 16, m, g, N, 20260815, 1);
    int pick = -1;
    for (int i = 0; i < static_cast<int>(cs.size()); ++i) {
        double hits = curve[static_cast<std::size_t>(i)].p_hat * static_cast<double>(N);
        if (hits >= 30.0) pick = i;
    }
    if (pick < 0) return {false, "no threshold had 30 hits"};
    double c = cs[static_cast<std::size_t>(pick)];
    double p = curve[static_cast<std::size_t>(pick)].p_hat;
    double rate = -std::log(p) / c;
    bool ok = rate >= br.lower - 0.25 && rate <= br.upper + 0.25;
    return {ok, "bracket [" + fmt(br.lower) + ", " + fmt(br.upper) + "], c " +
                    fmt(c, 3) + ", p " + fmt(p, 3) + ", rate " + fmt(rate, 4) +
                    " vs allowed [" + fmt(br.lower - 0.25, 4) + ", " +
                    fmt(br.upper + 0.25, 4) + "]"};
}

std::pair<bool, std::string> c6_bound_dominance() {
    ScoringModel m = match_model(4, 1.0, -1.0);
    GapPenalty g = GapPenalty::affine(8.0, 2.0);
    EvalBudget b;
    b.op_budget = 2e8;
    b.r_max = 2;
    PsiSurface s1(m, g, 1, EvalMethod::ExactTruncated, b);
    RootResult root = root_psi(s1, 1e-3, 0.0, 1e-9);
    if (!root.found) return {false, "single-match root not found"};

    std::vector<double> cs = {4.0, 6.0, 8.0, 10.0, 12.0, 14.0};
    double min_margin = 1e300;
    for (long mn : {32L, 64L}) {
        auto curve = direct_mc_curve(cs, mn, mn, m, g, 100000, 61 + mn, 1);
        for (std::size_t i = 0; i < cs.size(); ++i) {
            double bound = pvalue_bound(cs[i], mn, mn, root.theta, root.resid, 1,
                                        m.max_score());
            double margin = bound - (curve[i].p_hat - 3.0 * curve[i].se);
            min_margin = std::min(min_margin, margin);
            if (margin < 0.0)
                return {false, "violated at c " + fmt(cs[i], 3) + ", m=n " +
                                   std::to_string(mn) + ": p-3se " +
                                   fmt(curve[i].p_hat - 3 * curve[i].se) +
                                   " > bound " + fmt(bound)};
        }
    }
    return {true, "12 cells at theta " + fmt(root.theta) + ", min margin " +
                      fmt(min_margin, 3)};
}

std::pair<bool, std::string> c7_importance_sampling() {
    ScoringModel m = match_model(4, 1.0, -1.0);
    struct Cfg {
        GapPenalty g;
        double c;
        long m, n;
    };
    // the shorter side is kept small on purpose: overflowed paths then carry
    // bounded weights, so the sample mean and its reported standard error can
    // be trusted at these sample sizes
    const Cfg cfgs[5] = {
        {GapPenalty::affine(6.0, 2.0), 3, 6, 6},
        {GapPenalty::affine(6.0, 2.0), 4, 8, 8},
        {GapPenalty::affine(6.0, 2.0), 4, 8, 14},
        {GapPenalty::affine(8.0, 2.0), 5, 8, 12},
        {GapPenalty::infinite(), 5, 8, 8},
    };
    double worst_z = 0.0;
    for (int i = 0; i < 5; ++i) {
        const Cfg& cf = cfgs[i];
        EvalBudget b;
        b.op_budget = 2e8;
        b.r_max = 2;
        PsiSurface s1(m, cf.g, 1, EvalMethod::ExactTruncated, b);
        RootResult root = root_psi(s1, 1e-3, 0.0, 1e-9);
        if (!root.found)
            return {false, "config " + std::to_string(i) + ": no tilting root"};
        TiltedSegmentSampler sampler(root.theta, 1, m, cf.g);
        TailEstimate direct =
            direct_mc_pvalue(cf.c, cf.m, cf.n, m, cf.g, 200000, 700 + i, 1);
        if (direct.p_hat * 200000.0 < 100.0)
            return {false, "config " + std::to_string(i) + " has too few direct hits"};
        TailEstimate is = is_pvalue(cf.c, cf.m, cf.n, sampler, 300000, 800 + i, 1);
        double se = std::sqrt(direct.se * direct.se + is.se * is.se);
        double z = std::abs(direct.p_hat - is.p_hat) / se;
        worst_z = std::max(worst_z, z);
        if (z > 3.0)
            return {false, "config " + std::to_string(i) + " disagrees: direct " +
                               fmt(direct.p_hat) + ", is " + fmt(is.p_hat) + ", z " +
                               fmt(z, 3)};
    }

    GapPenalty g = GapPenalty::affine(6.0, 2.0);
    EvalBudget b;
    b.op_budget = 2e8;
    b.r_max = 2;
    PsiSurface s1(m, g, 1, EvalMethod::ExactTruncated, b);
    RootResult root = root_psi(s1, 1e-3, 0.0, 1e-9);
    if (!root.found) return {false, "audit sampler: no tilting root"};
    TiltedSegmentSampler sampler(root.theta, 1, m, g);
    Rng rng(derive_seed(0x11a, 3));
    DPWorkspace ws;
    Seq x, y;
    long reached = 0, attempts = 0;
    while (reached < 10000 && attempts < 1000000) {
        ++attempts;
        SimPath p = simulate_q(18, 18, 7.0, sampler, rng, x, y);
        if (p.reason != StopReason::ThresholdReached) continue;
        ++reached;
        verify_lr_inequality(p, x, y, 7.0, sampler, ws); // throws on violation
    }
    if (reached < 10000)
        return {false, "only " + std::to_string(reached) + " paths reached"};
    return {true, "5 configs agree (worst z " + fmt(worst_z, 3) + "); 10000 audited paths clean"};
}

std::pair<bool, std::string> c8_growth_trends() {
    ScoringModel m = match_model(4, 1.0, -1.0);
    GapPenalty g = GapPenalty::affine(8.0, 2.0);
    std::vector<long> grid = {64, 128, 256, 512, 1024, 2048, 4096};
    EvalBudget b;
    b.op_budget = 1e9;
    LawTrajectory t = strong_law_run(m, g, grid, 20, 8101, 1, 0.0, 3, b);
    if (t.partial || t.summary.size() != grid.size())
        return {false, "run did not complete"};
    if (!t.bracket.found) return {false, "bracket not found"};

    double target = 2.0 / t.theta_star_value;
    double med_lo = t.summary.front().med_hinf_ratio;
    double med_hi = t.summary.back().med_hinf_ratio;
    bool okA = med_hi >= 0.75 * target && med_hi <= 1.25 * target &&
               std::abs(med_hi - target) < std::abs(med_lo - target);

    double lo = (2.0 / t.bracket.upper) / 1.3;
    double hi = (2.0 / t.bracket.lower) * 1.3;
    double med_g = t.summary.back().med_h_ratio;
    bool okB = med_g >= lo && med_g <= hi;

    std::string detail = "gapless median ratio " + fmt(med_lo, 4) + " -> " +
                         fmt(med_hi, 4) + " vs " + fmt(target, 4) +
                         "; gapped median ratio " + fmt(med_g, 4) + " vs [" +
                         fmt(lo, 4) + ", " + fmt(hi, 4) +
                         "]; per-replicate ordering held on all " +
                         std::to_string(t.rows.size()) + " cells";
    return {okA && okB, detail};
}

std::pair<bool, std::string> c9_phase_flip() {
    ScoringModel m = match_model(4, 1.0, -1.0);
    double split = 1.0 / theta_star(m); // 0.9102
    std::vector<double> slopes;
    for (int i = 0; i < 10; ++i) slopes.push_back(0.5 + 0.1 * static_cast<double>(i));

    auto flip = [&](const std::vector<PhaseCell>& cells) -> int {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (cells[i].beta < 0.0) {
                if (i == 0) return -1;
                for (std::size_t j = 0; j < i; ++j)
                    if (cells[j].beta <= 0.0) return -1;
                return static_cast<int>(i);
            }
        }
        return -1;
    };

    auto cells = phase_scan(m, GapFamily::Logarithmic, {8.0}, slopes, 0.0, 256,
                            50, 0x9a5e, 1);
    int k = flip(cells);

    // companion scan with zero opening cost, reported for diagnosis only
    auto cells0 = phase_scan(m, GapFamily::Logarithmic, {0.0}, slopes, 0.0, 256,
                             50, 0x9a5e, 1);
    int k0 = flip(cells0);
    std::ostringstream info;
    info << "[info] criterion 9 companion (open=0): ";
    if (k0 < 0)
        info << "no clean sign change; betas " << fmt(cells0.front().beta, 3)
             << " .. " << fmt(cells0.back().beta, 3);
    else
        info << "beta flips in [" << fmt(slopes[static_cast<std::size_t>(k0 - 1)], 3)
             << ", " << fmt(slopes[static_cast<std::size_t>(k0)], 3) << "] vs "
             << fmt(split, 4);

    std::string detail;
    bool ok = false;
    if (k < 0) {
        detail = "no clean sign change at open=8; betas " +
                 fmt(cells.front().beta, 3) + " .. " + fmt(cells.back().beta, 3);
    } else {
        double a = slopes[static_cast<std::size_t>(k - 1)];
        double bb = slopes[static_cast<std::size_t>(k)];
        ok = a <= split + 0.1 && bb >= split - 0.1;
        detail = "beta flips in [" + fmt(a, 3) + ", " + fmt(bb, 3) + "] vs " +
                 fmt(split, 4);
    }
    std::printf("%s\n", info.str().c_str());
    return {ok, detail};
}

std::pair<bool, std::string> c10_cli_reproducibility() {
    const char* bin = std::getenv("GAPSTAT_BIN");
    if (!bin) return {false, "GAPSTAT_BIN not set"};
    fs::path dir = fs::temp_directory_path() / "gapstat_acceptance";
    std::error_code ec;
    fs::remove_all(dir, ec);
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "scores.txt");
        f << "A C G T\n 1 -1 -1 -1\n-1 1 -1 -1\n-1 -1 1 -1\n-1 -1 -1 1\n";
        std::ofstream d(dir / "dist.txt");
        d << "A 0.25\nC 0.25\nG 0.25\nT 0.25\n";
    }
    std::string base = std::string(bin) + " ";
    std::string io = " --scores " + (dir / "scores.txt").string() + " --dist " +
                     (dir / "dist.txt").string();

    struct Job {
        std::string name, args;
        std::vector<std::string> files; // relative to the per-thread out path
        bool out_is_dir;
    };
    std::vector<Job> jobs = {
        {"theta-mc",
         "theta" + io + " --gap affine:6,2 --kappa 2 --method mc --samples 400 "
                        "--grid-cut 8 --seed 11 --out ",
         {}, false},
        {"tail-mc",
         "tail" + io + " --gap affine:3,1 --c 6 --m 12 --n 12 --method mc "
                       "--samples 4000 --seed 12 --out ",
         {}, false},
        {"tail-is",
         "tail" + io + " --gap affine:6,2 --c 8 --m 16 --n 16 --method is "
                       "--samples 3000 --seed 13 --out ",
         {}, false},
        {"law",
         "law" + io + " --gap affine:2,1 --n-grid 8,16,32 --reps 4 "
                      "--kappa-max 1 --seed 14 --out ",
         {"trajectory.csv", "summary.json"}, true},
        {"phase",
         "phase" + io + " --family log --open-grid 1 --slope-grid 0.5,1.2 "
                        "--n 24 --reps 4 --seed 15 --out ",
         {"phase.csv", "summary.json"}, true},
    };

    for (const Job& j : jobs) {
        fs::path out1 = dir / (j.name + "_t1");
        fs::path out3 = dir / (j.name + "_t3");
        if (!j.out_is_dir) {
            out1 += ".json";
            out3 += ".json";
        }
        int rc1 = 0, rc3 = 0;
        auto run = [&](const fs::path& out, int threads) {
            std::string cmd = base + j.args + out.string() + " --threads " +
                              std::to_string(threads) + " > /dev/null 2>&1";
            int rc = std::system(cmd.c_str());
            return (rc == -1 || !WIFEXITED(rc)) ? -1 : WEXITSTATUS(rc);
        };
        rc1 = run(out1, 1);
        rc3 = run(out3, 3);
        if (rc1 != rc3 || rc1 < 0 || (rc1 != 0 && rc1 != 3))
            return {false, j.name + " exit codes " + std::to_string(rc1) + " vs " +
                               std::to_string(rc3)};
        if (j.out_is_dir) {
            for (const std::string& f : j.files)
                if (slurp(out1 / f) != slurp(out3 / f))
                    return {false, j.name + "/" + f + " differs across thread counts"};
        } else if (slurp(out1) != slurp(out3)) {
            return {false, j.name + " output differs across thread counts"};
        }
    }
    fs::remove_all(dir, ec);
    return {true, std::to_string(jobs.size()) + " commands byte-identical at 1 and 3 threads"};
}

} // namespace

int main() {
    std::printf("acceptance gate: 10 criteria\n");
    criterion(1, "analytic tilting roots", c1_analytic_roots);
    criterion(2, "dp equals brute force on all short binary pairs",
              c2_brute_force_equivalence);
    criterion(3, "moment sums match the closed form and direct enumeration",
              c3_moment_surface_consistency);
    criterion(4, "structural inequalities hold across randomized cases",
              c4_structural_inequalities);
    criterion(5, "root bracket is ordered and matches the simulated decay rate",
              c5_bracket_and_decay_rate);
    criterion(6, "analytic tail bound dominates direct monte carlo",
              c6_bound_dominance);
    criterion(7, "importance sampling agrees with direct monte carlo",
              c7_importance_sampling);
    criterion(8, "growth trends track the predicted constants", c8_growth_trends);
    criterion(9, "empirical phase flip sits at the predicted slope", c9_phase_flip);
    criterion(10, "stochastic commands rerun byte-identically across thread counts",
              c10_cli_reproducibility);
    std::printf("%d/10 criteria passed\n", 10 - failures);
    return failures ? 1 : 0;
}
