#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gapstat/align.hpp"
#include "gapstat/lawlab.hpp"
#include "gapstat/rng.hpp"
#include "models.hpp"

#include <cmath>
#include <vector>

using namespace gapstat;

TEST_CASE("simulated pairs follow the letter law and the seed") {
    ScoringModel m = match_model(4, 1, -1);
    auto [x, y] = simulate_pair(40000, m, 7);
    REQUIRE(x.size() == 40000);
    std::vector<long> counts(4, 0);
    for (auto c : x) counts[c]++;
    for (auto c : y) counts[c]++;
    double n = 80000.0, p = 0.25;
    double se = std::sqrt(p * (1 - p) * n);
    for (long k : counts)
        CHECK(std::abs(static_cast<double>(k) - n * p) < 4 * se);

    auto [x2, y2] = simulate_pair(40000, m, 7);
    CHECK(x == x2);
    CHECK(y == y2);
    auto [x3, y3] = simulate_pair(40000, m, 8);
    CHECK(x != x3);
}

TEST_CASE("longer draws extend shorter ones") {
    ScoringModel m = match_model(4, 1, -1);
    auto [xs, ys] = simulate_pair(50, m, 123);
    auto [xl, yl] = simulate_pair(200, m, 123);
    CHECK(std::equal(xs.begin(), xs.end(), xl.begin()));
    CHECK(std::equal(ys.begin(), ys.end(), yl.begin()));
}

TEST_CASE("strong law run carries its internal checks and summaries") {
    ScoringModel m = match_model(4, 1, -1);
    GapPenalty g = GapPenalty::affine(8.0, 2.0);
    std::vector<long> grid = {8, 16, 32};
    LawTrajectory t = strong_law_run(m, g, grid, 6, 99, 1);
    CHECK(t.n_grid == grid);
    REQUIRE(t.rows.size() == grid.size() * 6);
    REQUIRE(t.summary.size() == grid.size());
    CHECK_FALSE(t.partial);
    CHECK(t.theta_star_value == doctest::Approx(std::log(3.0)).epsilon(1e-10));
    CHECK(t.domain_valid);
    CHECK(t.domain.verdict == Domain::LogarithmicForLargeDelta);
    CHECK(t.bracket.found);
    CHECK(t.growth_valid);
    CHECK(t.growth.score_rate_lo <= t.growth.score_rate_hi);

    for (const LawRow& r : t.rows) {
        CHECK(r.h >= r.h_inf);
        CHECK(r.zstar >= 1);
    }
    // level-major layout, reps in order
    CHECK(t.rows[0].n == 8);
    CHECK(t.rows[6].n == 16);
    CHECK(t.rows[1].rep == 1);
    for (const LawSummary& s : t.summary) {
        CHECK(s.iqr_h_ratio >= 0.0);
        CHECK(s.med_h_ratio >= s.med_hinf_ratio);
    }
}

TEST_CASE("strong law output is identical across thread counts") {
    ScoringModel m = match_model(4, 1, -1);
    GapPenalty g = GapPenalty::affine(2.0, 1.0);
    std::vector<long> grid = {8, 16};
    LawTrajectory a = strong_law_run(m, g, grid, 5, 42, 1);
    LawTrajectory b = strong_law_run(m, g, grid, 5, 42, 4);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].h == b.rows[i].h);
        CHECK(a.rows[i].h_inf == b.rows[i].h_inf);
        CHECK(a.rows[i].zstar == b.rows[i].zstar);
    }
}

TEST_CASE("a tiny budget yields a completed prefix, not garbage") {
    ScoringModel m = match_model(4, 1, -1);
    GapPenalty g = GapPenalty::affine(2.0, 1.0);
    std::vector<long> grid = {8, 16, 32, 64, 128, 256, 512};
    LawTrajectory t = strong_law_run(m, g, grid, 8, 1, 1, 1e-9);
    CHECK(t.partial);
    CHECK(t.n_grid.size() < grid.size());
    CHECK(t.rows.size() == t.n_grid.size() * 8);
    CHECK(t.n_grid.size() >= 1); // the first level always completes
}

TEST_CASE("bad grids are rejected") {
    ScoringModel m = match_model(4, 1, -1);
    GapPenalty g = GapPenalty::affine(2.0, 1.0);
    CHECK_THROWS(strong_law_run(m, g, {}, 4, 1));
    CHECK_THROWS(strong_law_run(m, g, {1, 2}, 4, 1));
    CHECK_THROWS(strong_law_run(m, g, {16, 16}, 4, 1));
    CHECK_THROWS(strong_law_run(m, g, {8}, 0, 1));
}

TEST_CASE("beta estimates carry the right signs") {
    // expensive gaps and negative mean score: beta below zero
    ScoringModel neg = match_model(4, 1, -1);
    BetaEstimate b = estimate_beta(neg, GapPenalty::affine(8.0, 2.0), 48, 24, 3);
    CHECK(b.beta + 3 * b.se < 0.0);
    CHECK(b.beta_2n + 3 * b.se_2n < 0.0);

    // cheap gaps let the alignment chase matches: beta above zero even
    // though the mean pair score is negative
    ScoringModel pos = match_model(4, 2, -1);
    BetaEstimate p = estimate_beta(pos, GapPenalty::affine(0.25, 0.25), 48, 24, 3);
    CHECK(p.beta - 3 * p.se > 0.0);
}

TEST_CASE("infinite gaps force the full-overlap diagonal") {
    ScoringModel m = match_model(4, 1, -1);
    // G is then exactly the diagonal sum of pair scores
    DPWorkspace ws;
    auto [x, y] = simulate_pair(64, m, 17);
    double diag = 0.0;
    for (int i = 0; i < 64; ++i)
        diag += m.scores().at(x[static_cast<std::size_t>(i)],
                              y[static_cast<std::size_t>(i)]);
    CHECK(global_score(x, y, m.scores(), GapPenalty::infinite(), ws) ==
          doctest::Approx(diag).epsilon(1e-12));

    // so beta degenerates to the mean pair score, -1/2 for this model
    BetaEstimate b = estimate_beta(m, GapPenalty::infinite(), 256, 24, 17);
    CHECK(std::abs(b.beta - (-0.5)) < 5 * b.se);
    BetaEstimate b2 = estimate_beta(m, GapPenalty::infinite(), 256, 24, 17, 4);
    CHECK(b.beta == b2.beta);
    CHECK(b.se == b2.se);
}

TEST_CASE("phase scan verdicts come from the analytic test") {
    ScoringModel m = match_model(4, 1, -1);
    double ts = std::log(3.0);
    auto cells = phase_scan(m, GapFamily::Logarithmic, {2.0}, {0.4, 2.5}, 0.0,
                            32, 4, 11);
    REQUIRE(cells.size() == 2);
    CHECK(cells[0].verdict_valid);
    CHECK(cells[0].verdict == Domain::LinearForAllDelta); // 0.4 < 1/ln3
    CHECK(cells[1].verdict == Domain::LogarithmicForLargeDelta);
    CHECK(cells[0].slope == 0.4);
    CHECK(cells[0].open == 2.0);
    CHECK(0.4 < 1.0 / ts);

    auto affine = phase_scan(m, GapFamily::Affine, {1.0, 2.0}, {0.5}, 0.0, 32,
                             4, 11);
    REQUIRE(affine.size() == 2);
    for (const auto& c : affine)
        CHECK(c.verdict == Domain::LogarithmicForLargeDelta);
}

TEST_CASE("phase scan is seed-reproducible") {
    ScoringModel m = match_model(4, 1, -1);
    auto a = phase_scan(m, GapFamily::Affine, {2.0}, {1.0}, 0.0, 32, 4, 5, 1);
    auto b = phase_scan(m, GapFamily::Affine, {2.0}, {1.0}, 0.0, 32, 4, 5, 3);
    REQUIRE(a.size() == 1);
    CHECK(a[0].beta == b[0].beta);
    CHECK(a[0].beta_se == b[0].beta_se);
    CHECK(a[0].slope_vs_n == b[0].slope_vs_n);
    CHECK(a[0].slope_vs_logn == b[0].slope_vs_logn);
}
