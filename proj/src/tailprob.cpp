#include "gapstat/tailprob.hpp"

#include "gapstat/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gapstat {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

constexpr std::uint64_t kTagDirect = 0xd12ec7;
constexpr std::uint64_t kTagImportance = 0x152a9e;

inline void kadd(double& s, double& c, double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
        c += (s - t) + x;
    else
        c += (x - t) + s;
    s = t;
}

} // namespace

double pvalue_bound(double c, long m, long n, double theta, double resid,
                    int kappa, double k_max, double resid_tol) {
    if (!(theta > 0.0)) fail("theta must be positive");
    if (kappa < 1) fail("kappa must be >= 1");
    if (m < 1 || n < 1) fail("m and n must be >= 1");
    if (!(resid >= 0.0) || resid > resid_tol)
        fail("root residual exceeds tolerance; the bound is invalid off the root");
    double raw = static_cast<double>(m) * static_cast<double>(n) *
                 std::exp(theta * (kappa - 1) * k_max) * std::exp(-theta * c);
    return std::min(1.0, raw);
}

std::vector<TailEstimate> direct_mc_curve(const std::vector<double>& cs, long m,
                                          long n, const ScoringModel& model,
                                          const GapPenalty& gap, long N,
                                          std::uint64_t seed, int threads) {
    if (cs.empty()) fail("need at least one threshold");
    if (N < 1) fail("need at least one replicate");
    if (m < 1 || n < 1) fail("m and n must be >= 1");
    const long kBlock = 256;
    const long blocks = (N + kBlock - 1) / kBlock;
    std::vector<std::vector<long>> hits(static_cast<std::size_t>(blocks),
                                        std::vector<long>(cs.size(), 0));
    const auto& cdf = model.dist().cdf();
    auto run = [&](std::size_t b) {
        long lo = static_cast<long>(b) * kBlock, hi = std::min(N, lo + kBlock);
        DPWorkspace ws;
        Seq x(static_cast<std::size_t>(m)), y(static_cast<std::size_t>(n));
        for (long rep = lo; rep < hi; ++rep) {
            Rng rng(derive_seed(seed, kTagDirect, static_cast<std::uint64_t>(rep)));
            for (long i = 0; i < m; ++i)
                x[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(rng.sample_cdf(cdf));
            for (long j = 0; j < n; ++j)
                y[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(rng.sample_cdf(cdf));
            double h = gap.is_infinite() ? gapless_score(x, y, model.scores(), ws)
                                         : local_score(x, y, model.scores(), gap, ws);
            for (std::size_t ci = 0; ci < cs.size(); ++ci)
                if (h >= cs[ci]) ++hits[b][ci];
        }
    };
    parallel_for_shards(static_cast<std::size_t>(blocks), threads, run);
    std::vector<TailEstimate> out;
    out.reserve(cs.size());
    for (std::size_t ci = 0; ci < cs.size(); ++ci) {
        long tot = 0;
        for (long b = 0; b < blocks; ++b) tot += hits[static_cast<std::size_t>(b)][ci];
        TailEstimate e;
        e.p_hat = static_cast<double>(tot) / static_cast<double>(N);
        e.se = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(N));
        e.method = "direct_mc";
        e.c = cs[ci];
        e.m = m;
        e.n = n;
        e.n_samples = N;
        e.seed = seed;
        out.push_back(e);
    }
    return out;
}

TailEstimate direct_mc_pvalue(double c, long m, long n, const ScoringModel& model,
                              const GapPenalty& gap, long N, std::uint64_t seed,
                              int threads) {
    return direct_mc_curve({c}, m, n, model, gap, N, seed, threads).front();
}

TiltedSegmentSampler::TiltedSegmentSampler(double theta, int kappa,
                                           const ScoringModel& model,
                                           const GapPenalty& gap, long cap,
                                           double resid_tol, double root_tol)
    : model_(model), gap_(gap), theta_(theta), kappa_(kappa) {
    if (kappa_ != 1) fail("tilted segment sampling is implemented for kappa = 1");
    if (!(theta_ > 0.0)) fail("theta must be positive");
    SeriesBound sb = gap_weight_series(gap_, theta_);
    if (sb.divergent) fail("gap weight series diverges at this theta; not a root");
    mgf_ = model_.pair_mgf(theta_);
    double s_up = sb.sum + sb.tail;

    long max_cap = gap_.is_infinite()
                       ? 1
                       : (gap_.family() == GapFamily::CustomTable
                              ? gap_.table_size() + 1
                              : (1L << 22));
    auto partial = [&](long r_cap) {
        double s = 0.0, comp = 0.0;
        for (long k = 0; k < r_cap; ++k) kadd(s, comp, std::exp(-theta_ * gap_.cost(k)));
        return s + comp;
    };
    bool grow = cap <= 0;
    if (grow) cap = std::min<long>(8, max_cap);
    double s_r = 0.0;
    for (;;) {
        s_r = partial(cap);
        resid_ = std::max(0.0, (s_up * s_up - s_r * s_r) * mgf_);
        if (resid_ < resid_tol || !grow || cap >= max_cap) break;
        cap = std::min(cap * 2, max_cap);
    }
    if (resid_ >= resid_tol)
        fail("residual segment-length mass above tolerance at the cap; raise it");
    cap_ = cap;
    mass_ = s_r * s_r * mgf_;
    if (std::abs(total_mass() - 1.0) > root_tol)
        fail("theta is not a root of the single-match moment sum; sampled mass " +
             std::to_string(total_mass()));

    len_cdf_.resize(static_cast<std::size_t>(cap_));
    double run = 0.0, runc = 0.0;
    for (long k = 0; k < cap_; ++k) {
        kadd(run, runc, std::exp(-theta_ * gap_.cost(k)));
        len_cdf_[static_cast<std::size_t>(k)] = (run + runc) / s_r;
    }
    len_cdf_.back() = 1.0;

    int a_sz = model_.alphabet_size();
    pair_cdf_.resize(static_cast<std::size_t>(a_sz) * static_cast<std::size_t>(a_sz));
    run = 0.0;
    runc = 0.0;
    for (int a = 0; a < a_sz; ++a)
        for (int b = 0; b < a_sz; ++b) {
            kadd(run, runc,
                 model_.dist().prob(a) * model_.dist().prob(b) *
                     std::exp(theta_ * model_.score(a, b)) / mgf_);
            pair_cdf_[static_cast<std::size_t>(a) * static_cast<std::size_t>(a_sz) +
                      static_cast<std::size_t>(b)] = run + runc;
        }
    pair_cdf_.back() = 1.0;
}

double TiltedSegmentSampler::length_prob(long r) const {
    if (r < 1 || r > cap_) return 0.0;
    double hi = len_cdf_[static_cast<std::size_t>(r - 1)];
    double lo = r == 1 ? 0.0 : len_cdf_[static_cast<std::size_t>(r - 2)];
    return hi - lo;
}

double TiltedSegmentSampler::pair_prob(int a, int b) const {
    return model_.dist().prob(a) * model_.dist().prob(b) *
           std::exp(theta_ * model_.score(a, b)) / mgf_;
}

TiltedSegmentSampler::Segment TiltedSegmentSampler::sample(Rng& rng, Seq& v,
                                                           Seq& w) const {
    long r = 1 + static_cast<long>(rng.sample_cdf(len_cdf_));
    long s = 1 + static_cast<long>(rng.sample_cdf(len_cdf_));
    int a_sz = model_.alphabet_size();
    int pair = rng.sample_cdf(pair_cdf_);
    int a = pair / a_sz, b = pair % a_sz;
    v.resize(static_cast<std::size_t>(r));
    w.resize(static_cast<std::size_t>(s));
    v[0] = static_cast<std::uint8_t>(a);
    w[0] = static_cast<std::uint8_t>(b);
    const auto& cdf = model_.dist().cdf();
    for (long i = 1; i < r; ++i)
        v[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(rng.sample_cdf(cdf));
    for (long j = 1; j < s; ++j)
        w[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(rng.sample_cdf(cdf));
    Segment seg;
    seg.r = r;
    seg.s = s;
    seg.pair_score = model_.score(a, b);
    seg.score = (seg.pair_score - gap_.cost(r - 1)) - gap_.cost(s - 1);
    return seg;
}

const char* stop_reason_name(StopReason r) {
    return r == StopReason::ThresholdReached ? "threshold_reached" : "overflow";
}

Alignment SimPath::zeta() const {
    Alignment z;
    long i = start_i, j = start_j;
    for (const auto& seg : segments) {
        z.pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
        i += seg.r;
        j += seg.s;
    }
    return z;
}

SimPath simulate_q(long m, long n, double c, const TiltedSegmentSampler& sampler,
                   Rng& rng, Seq& x, Seq& y) {
    if (m < 1 || n < 1) fail("m and n must be >= 1");
    x.resize(static_cast<std::size_t>(m));
    y.resize(static_cast<std::size_t>(n));
    SimPath path;
    path.start_i = 1 + static_cast<long>(rng.uniform_index(static_cast<std::uint64_t>(m)));
    path.start_j = 1 + static_cast<long>(rng.uniform_index(static_cast<std::uint64_t>(n)));
    const auto& cdf = sampler.model().dist().cdf();
    for (long i = 0; i < path.start_i - 1; ++i)
        x[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(rng.sample_cdf(cdf));
    for (long j = 0; j < path.start_j - 1; ++j)
        y[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(rng.sample_cdf(cdf));

    const GapPenalty& gap = sampler.gap();
    const double thresh = c - (sampler.kappa() - 1) * sampler.max_score();
    long ci = path.start_i, cj = path.start_j;
    long prev_r = 0, prev_s = 0;
    double acc = 0.0;
    Seq v, w;
    for (;;) {
        TiltedSegmentSampler::Segment seg = sampler.sample(rng, v, w);
        if (ci + seg.r - 1 > m || cj + seg.s - 1 > n) break; // discard whole segment
        std::copy(v.begin(), v.end(), x.begin() + (ci - 1));
        std::copy(w.begin(), w.end(), y.begin() + (cj - 1));
        if (path.segments.empty()) {
            acc = seg.pair_score;
        } else {
            acc -= gap.cost(prev_r - 1);
            acc -= gap.cost(prev_s - 1);
            acc += seg.pair_score;
        }
        path.segments.push_back({seg.r, seg.s, seg.pair_score, seg.score});
        path.s_zeta = acc;
        path.S = (acc - gap.cost(seg.r - 1)) - gap.cost(seg.s - 1);
        prev_r = seg.r;
        prev_s = seg.s;
        ci += seg.r;
        cj += seg.s;
        if (path.S >= thresh) {
            path.reason = StopReason::ThresholdReached;
            break;
        }
    }
    for (long i = ci - 1; i < m; ++i)
        x[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(rng.sample_cdf(cdf));
    for (long j = cj - 1; j < n; ++j)
        y[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(rng.sample_cdf(cdf));
    return path;
}

LrReport verify_lr_inequality(const SimPath& path, const Seq& x, const Seq& y,
                              double c, const TiltedSegmentSampler& sampler,
                              DPWorkspace& ws) {
    if (path.reason != StopReason::ThresholdReached)
        fail("the audit applies to threshold-reached paths");
    LrReport rep;
    double sum = 0.0;
    for (const auto& seg : path.segments) sum += seg.score;
    rep.sum_scores = sum;
    rep.additivity_gap = std::abs(sum - path.S);
    if (rep.additivity_gap > 1e-9 * std::max(1.0, std::abs(path.S)))
        throw std::logic_error("segment score additivity violated");
    const ScoringModel& model = sampler.model();
    const GapPenalty& gap = sampler.gap();
    rep.zeta_score = alignment_score(path.zeta(), x, y, model.scores(), gap);
    if (rep.zeta_score != path.s_zeta)
        throw std::logic_error("planted alignment does not reproduce its accumulated score");
    if (!(path.s_zeta >= path.S))
        throw std::logic_error("dropping the trailing flanks failed to dominate");
    rep.h = gap.is_infinite() ? gapless_score(x, y, model.scores(), ws)
                              : local_score(x, y, model.scores(), gap, ws);
    if (!(rep.h >= rep.zeta_score))
        throw std::logic_error("local score fails to dominate the planted alignment");
    if (!(path.S >= c - (sampler.kappa() - 1) * sampler.max_score()))
        throw std::logic_error("stop statistic ended below the threshold");
    return rep;
}

TailEstimate is_pvalue(double c, long m, long n, const TiltedSegmentSampler& sampler,
                       long N, std::uint64_t seed, int threads) {
    if (N < 1) fail("need at least one replicate");
    if (m < 1 || n < 1) fail("m and n must be >= 1");
    const double lmgf = std::log(sampler.pair_mgf());
    const double theta = sampler.theta();
    std::vector<double> logw(static_cast<std::size_t>(N), kNegInf);
    const long kBlock = 256;
    const long blocks = (N + kBlock - 1) / kBlock;
    auto run = [&](std::size_t b) {
        long lo = static_cast<long>(b) * kBlock, hi = std::min(N, lo + kBlock);
        DPWorkspace ws;
        Seq x, y;
        for (long rep = lo; rep < hi; ++rep) {
            Rng rng(derive_seed(seed, kTagImportance, static_cast<std::uint64_t>(rep)));
            SimPath path = simulate_q(m, n, c, sampler, rng, x, y);
            double h = sampler.gap().is_infinite()
                           ? gapless_score(x, y, sampler.model().scores(), ws)
                           : local_score(x, y, sampler.model().scores(), sampler.gap(), ws);
            if (h >= c) {
                double lw = 0.0;
                for (const auto& seg : path.segments)
                    lw += lmgf - theta * seg.pair_score;
                logw[static_cast<std::size_t>(rep)] = lw;
            }
        }
    };
    parallel_for_shards(static_cast<std::size_t>(blocks), threads, run);

    double peak = kNegInf;
    for (double lw : logw) peak = std::max(peak, lw);
    TailEstimate e;
    e.method = "importance";
    e.c = c;
    e.m = m;
    e.n = n;
    e.theta = theta;
    e.kappa = sampler.kappa();
    e.n_samples = N;
    e.seed = seed;
    e.analytic_bound = pvalue_bound(c, m, n, theta,
                                    std::abs(sampler.total_mass() - 1.0),
                                    sampler.kappa(), sampler.max_score());
    if (peak == kNegInf) {
        e.p_hat = 0.0;
        e.se = sampler.residual();
        return e;
    }
    double s1 = 0.0, c1 = 0.0, s2 = 0.0, c2 = 0.0;
    for (double lw : logw) {
        if (lw == kNegInf) continue;
        double u = std::exp(lw - peak);
        kadd(s1, c1, u);
        kadd(s2, c2, u * u);
    }
    double nd = static_cast<double>(N);
    double m1 = std::exp(peak) * (s1 + c1) / nd;
    double m2 = std::exp(2.0 * peak) * (s2 + c2) / nd;
    if (!std::isfinite(m1) || !std::isfinite(m2))
        throw std::runtime_error("importance weights overflowed; configuration out of range");
    double var = std::max(0.0, m2 - m1 * m1) * (nd / std::max(1.0, nd - 1.0));
    e.p_hat = m1;
    e.se = std::sqrt(var / nd) + sampler.residual();
    return e;
}

} // namespace gapstat
