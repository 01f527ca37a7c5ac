#include "gapstat/align.hpp"
#include "gapstat/asymptotics.hpp"
#include "gapstat/io.hpp"
#include "gapstat/lawlab.hpp"
#include "gapstat/model.hpp"
#include "gapstat/tailprob.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::ordered_json;
using namespace gapstat;

namespace {

// Exit codes: 0 success, 1 data/invariant error, 2 usage error, 3 no solution.
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int default_threads() {
    const char* env = std::getenv("GAPSTAT_THREADS");
    if (!env) return 1;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 1024) return 1;
    return static_cast<int>(v);
}

GapPenalty parse_gap(const std::string& spec) {
    try {
        return io::parse_gap_spec(spec);
    } catch (const std::invalid_argument& e) {
        throw usage_error(std::string("--gap: ") + e.what());
    }
}

ScoringModel load_model(const std::string& scores_path,
                        const std::string& dist_path) {
    io::ScoreFile sf = io::read_score_matrix(scores_path);
    LetterDist dist = dist_path.empty()
                          ? LetterDist::uniform(sf.alphabet)
                          : io::read_letter_dist(dist_path, sf.alphabet);
    return ScoringModel(sf.alphabet, std::move(dist), sf.scores);
}

template <typename T>
std::vector<T> parse_list(const std::string& csv, const char* what) {
    std::vector<T> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(static_cast<T>(v));
        } catch (const std::exception&) {
            throw usage_error(std::string(what) + ": bad list entry '" + item + "'");
        }
    }
    if (out.empty()) throw usage_error(std::string(what) + ": empty list");
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ordered_json finite_or_null(double v) {
    return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

ordered_json root_json(const RootResult& r) {
    ordered_json j;
    j["found"] = r.found;
    if (r.found) {
        j["theta"] = r.theta;
        j["resid"] = r.resid;
        j["h_at_root"] = r.h_at_root;
        if (r.argmax_r > 0) j["argmax_r"] = r.argmax_r;
    } else {
        j["min_value"] = finite_or_null(r.min_value);
        j["min_theta"] = r.min_theta;
    }
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

ordered_json bracket_json(const ThetaBracket& b) {
    ordered_json rows = ordered_json::array();
    for (const BracketRow& row : b.rows) {
        ordered_json r;
        r["kappa"] = row.kappa;
        r["lower"] = root_json(row.lower);
        r["upper"] = root_json(row.upper);
        rows.push_back(r);
    }
    ordered_json j;
    j["found"] = b.found;
    j["kappa"] = b.kappa;
    if (b.found) {
        j["lower"] = b.lower;
        j["upper"] = b.upper;
        j["width"] = b.width();
    }
    j["rows"] = rows;
    return j;
}

ordered_json slope_json(const SlopeResult& s) {
    ordered_json j;
    j["value"] = s.value;
    j["central"] = s.central;
    j["shift_route"] = s.shift_route;
    j["theta_used"] = s.theta_used;
    j["h_step"] = s.h_step;
    j["lambda"] = s.lambda;
    j["consistent"] = s.consistent;
    j["bracket_warn"] = s.bracket_warn;
    return j;
}

ordered_json growth_json(const GrowthConstants& g) {
    ordered_json j;
    j["score_rate"] = {g.score_rate_lo, g.score_rate_hi};
    j["match_rate"] = {g.match_rate_lo, g.match_rate_hi};
    return j;
}

ordered_json tail_json(const TailEstimate& t) {
    ordered_json j;
    j["command"] = "tail";
    j["method"] = t.method;
    j["c"] = t.c;
    j["m"] = t.m;
    j["n"] = t.n;
    j["p_hat"] = t.p_hat;
    j["se"] = t.se;
    if (t.analytic_bound >= 0.0) j["analytic_bound"] = t.analytic_bound;
    if (t.theta > 0.0) j["theta"] = t.theta;
    j["kappa"] = t.kappa;
    j["n_samples"] = t.n_samples;
    j["seed"] = t.seed;
    return j;
}

struct AlignArgs {
    std::string x, y, scores, gap, out;
    bool want_global = false;
};

int cmd_align(const AlignArgs& a) {
    GapPenalty gap = parse_gap(a.gap);
    io::ScoreFile sf = io::read_score_matrix(a.scores);
    Seq x = io::read_sequence(a.x, sf.alphabet);
    Seq y = io::read_sequence(a.y, sf.alphabet);
    if (x.empty() || y.empty())
        throw std::invalid_argument("empty sequence input");
    DPWorkspace ws;
    LocalResult r = gap.is_infinite() ? gapless_align(x, y, sf.scores, ws)
                                      : local_align(x, y, sf.scores, gap, ws);
    ordered_json j;
    j["command"] = "align";
    j["gap"] = gap.describe();
    j["m"] = x.size();
    j["n"] = y.size();
    j["H"] = r.score;
    ordered_json pairs = ordered_json::array();
    for (const auto& p : r.best.pairs) pairs.push_back({p.first, p.second});
    j["zstar"] = pairs;
    j["zstar_matches"] = r.best.matches();
    if (a.want_global)
        j["G"] = finite_or_null(global_score(x, y, sf.scores, gap, ws));
    write_text(a.out, dump(j));
    return 0;
}

struct GapTestArgs {
    std::string scores, dist, gap, out;
    double margin = 1e-6;
};

int cmd_gap_test(const GapTestArgs& a) {
    GapPenalty gap = parse_gap(a.gap);
    ScoringModel model = load_model(a.scores, a.dist);
    DomainVerdict v = summation_test(gap, model, a.margin);
    ordered_json j;
    j["command"] = "gap-test";
    j["gap"] = gap.describe();
    j["theta_star"] = v.theta_star;
    j["one_over_theta_star"] = 1.0 / v.theta_star;
    j["verdict"] = domain_name(v.verdict);
    j["theta_hat"] = v.theta_hat;
    if (gap.family() == GapFamily::Logarithmic ||
        (gap.family() == GapFamily::CustomTable &&
         gap.declared_class() == GapFamily::Logarithmic))
        j["log_slope"] = v.log_slope;
    ordered_json e;
    e["sum"] = v.evidence.sum;
    e["tail"] = finite_or_null(v.evidence.tail);
    e["divergent"] = v.evidence.divergent;
    e["tail_exact"] = v.evidence.tail_exact;
    j["evidence"] = e;
    j["detail"] = v.detail;
    write_text(a.out, dump(j));
    return 0;
}

struct ThetaArgs {
    std::string scores, dist, gap, out;
    int kappa = 2;
    std::string method = "exact";
    long samples = 10000;
    long grid_cut = 0;
    long r_max = 12;
    double op_budget = 2e9;
    double tol = 1e-6;
    double h_step = 0.02;
    std::uint64_t seed = 1;
};

EvalMethod parse_method(const std::string& m) {
    if (m == "exact") return EvalMethod::ExactTruncated;
    if (m == "mc") return EvalMethod::MonteCarlo;
    throw usage_error("--method: expected exact or mc, got '" + m + "'");
}

int cmd_theta(const ThetaArgs& a, int threads) {
    GapPenalty gap = parse_gap(a.gap);
    ScoringModel model = load_model(a.scores, a.dist);
    EvalMethod method = parse_method(a.method);
    EvalBudget budget;
    budget.grid_cut = a.grid_cut;
    budget.samples = a.samples;
    budget.r_max = a.r_max;
    budget.op_budget = a.op_budget;

    ordered_json j;
    j["command"] = "theta";
    j["gap"] = gap.describe();
    j["seed"] = a.seed;
    j["method"] = a.method;
    j["kappa_max"] = a.kappa;
    j["theta_star"] = theta_star(model);

    ThetaBracket br =
        theta_tilde(model, gap, a.kappa, method, budget, a.seed, threads, a.tol);
    j["bracket"] = bracket_json(br);
    if (!br.found) {
        write_text(a.out, dump(j));
        std::cerr << "no positive root at kappa=" << br.kappa
                  << "; see rows[].note in the report\n";
        return 3;
    }

    PsiSurface surf(model, gap, br.kappa, method, budget, a.seed, threads);
    try {
        SlopeResult sl = psi_prime(surf, br, a.h_step);
        j["psi_prime"] = slope_json(sl);
        if (sl.value > 0.0) j["growth"] = growth_json(growth_constants(br, sl.value));
    } catch (const std::exception& e) {
        j["psi_prime"] = ordered_json{{"error", e.what()}};
    }
    write_text(a.out, dump(j));
    return 0;
}

struct TailArgs {
    std::string scores, dist, gap, out, method = "mc", theta_file;
    double c = 0.0;
    long m = 0, n = 0;
    long samples = 100000;
    long cap = 0;
    int kappa = 1;
    double theta = 0.0;
    bool theta_set = false;
    double resid = 0.0;
    std::uint64_t seed = 1;
};

// Pulls theta (and kappa/resid when present) from a cmd_theta JSON report.
void read_theta_artifact(TailArgs& a) {
    std::ifstream f(a.theta_file);
    if (!f) throw std::runtime_error("cannot read " + a.theta_file);
    ordered_json j;
    try {
        f >> j;
        const auto& b = j.at("bracket");
        if (!b.at("found").get<bool>())
            throw std::runtime_error("artifact records no root");
        a.theta = b.at("upper").get<double>();
        a.kappa = b.at("kappa").get<int>();
        const auto& rows = b.at("rows");
        a.resid = rows.at(rows.size() - 1).at("upper").at("resid").get<double>();
        a.theta_set = true;
    } catch (const ordered_json::exception& e) {
        throw std::runtime_error(a.theta_file + ": not a theta report (" +
                                 e.what() + ")");
    }
}

int cmd_tail(TailArgs& a, int threads) {
    GapPenalty gap = parse_gap(a.gap);
    ScoringModel model = load_model(a.scores, a.dist);
    if (a.m < 1 || a.n < 1) throw usage_error("--m and --n must be positive");
    if (!a.theta_file.empty()) read_theta_artifact(a);

    TailEstimate t;
    if (a.method == "bound") {
        if (!a.theta_set)
            throw usage_error("--method bound needs --theta or --theta-file");
        double b = pvalue_bound(a.c, a.m, a.n, a.theta, a.resid, a.kappa,
                                model.max_score());
        t.p_hat = b;
        t.analytic_bound = b;
        t.method = "bound_only";
        t.c = a.c;
        t.m = a.m;
        t.n = a.n;
        t.theta = a.theta;
        t.kappa = a.kappa;
        t.seed = a.seed;
    } else if (a.method == "mc") {
        t = direct_mc_pvalue(a.c, a.m, a.n, model, gap, a.samples, a.seed, threads);
    } else if (a.method == "is") {
        if (!a.theta_set) {
            PsiSurface s(model, gap, 1, EvalMethod::ExactTruncated, {}, a.seed,
                         threads);
            RootResult r = root_psi(s);
            if (!r.found) {
                ordered_json j;
                j["command"] = "tail";
                j["method"] = "importance";
                j["root"] = root_json(r);
                write_text(a.out, dump(j));
                std::cerr << "no tilting root: " << r.note << "\n";
                return 3;
            }
            a.theta = r.theta;
            a.resid = r.resid;
        }
        TiltedSegmentSampler sampler(a.theta, 1, model, gap, a.cap);
        t = is_pvalue(a.c, a.m, a.n, sampler, a.samples, a.seed, threads);
    } else {
        throw usage_error("--method: expected bound, mc or is, got '" + a.method +
                          "'");
    }
    write_text(a.out, dump(tail_json(t)));
    return 0;
}

struct LawArgs {
    std::string scores, dist, gap, out_dir, n_grid_csv;
    long nmax = 4096;
    int reps = 20;
    int kappa_max = 2;
    double budget = 0.0;
    std::uint64_t seed = 1;
};

int cmd_law(const LawArgs& a, int threads) {
    GapPenalty gap = parse_gap(a.gap);
    ScoringModel model = load_model(a.scores, a.dist);
    std::vector<long> grid;
    if (!a.n_grid_csv.empty()) {
        grid = parse_list<long>(a.n_grid_csv, "--n-grid");
    } else {
        if (a.nmax < 2) throw usage_error("--nmax must be at least 2");
        for (long n = std::min<long>(64, a.nmax); n <= a.nmax; n *= 2)
            grid.push_back(n);
    }
    LawTrajectory t = strong_law_run(model, gap, grid, a.reps, a.seed, threads,
                                     a.budget, a.kappa_max);

    std::ostringstream csv;
    csv << "n,rep,H,Hinf,zstar,H_over_logn,zstar_over_logn\n";
    for (const LawRow& r : t.rows) {
        double ln = std::log(static_cast<double>(r.n));
        csv << r.n << ',' << r.rep << ',' << fmt_g(r.h) << ',' << fmt_g(r.h_inf)
            << ',' << r.zstar << ',' << fmt_g(r.h / ln) << ','
            << fmt_g(static_cast<double>(r.zstar) / ln) << '\n';
    }

    ordered_json j;
    j["command"] = "law";
    j["gap"] = gap.describe();
    j["seed"] = t.seed;
    j["reps"] = t.reps;
    j["n_grid"] = t.n_grid;
    j["partial"] = t.partial;
    j["theta_star"] = t.theta_star_value;
    j["two_over_theta_star"] = 2.0 / t.theta_star_value;
    if (t.domain_valid) j["verdict"] = domain_name(t.domain.verdict);
    j["bracket"] = bracket_json(t.bracket);
    if (t.slope_valid) j["psi_prime"] = slope_json(t.slope);
    if (t.growth_valid) j["growth"] = growth_json(t.growth);
    ordered_json per_n = ordered_json::array();
    for (const LawSummary& s : t.summary) {
        ordered_json row;
        row["n"] = s.n;
        row["med_h_ratio"] = s.med_h_ratio;
        row["iqr_h_ratio"] = s.iqr_h_ratio;
        row["med_hinf_ratio"] = s.med_hinf_ratio;
        row["iqr_hinf_ratio"] = s.iqr_hinf_ratio;
        row["med_z_ratio"] = s.med_z_ratio;
        row["iqr_z_ratio"] = s.iqr_z_ratio;
        per_n.push_back(row);
    }
    j["summary"] = per_n;

    std::filesystem::create_directories(a.out_dir);
    write_text(a.out_dir + "/trajectory.csv", csv.str());
    write_text(a.out_dir + "/summary.json", dump(j));
    std::cout << dump(j);
    return 0;
}

struct PhaseArgs {
    std::string scores, dist, out_dir, family = "affine";
    std::string open_grid_csv, slope_grid_csv;
    double alpha = 0.5;
    long n = 256;
    int reps = 20;
    std::uint64_t seed = 1;
};

int cmd_phase(const PhaseArgs& a, int threads) {
    ScoringModel model = load_model(a.scores, a.dist);
    GapFamily family;
    if (a.family == "affine")
        family = GapFamily::Affine;
    else if (a.family == "power")
        family = GapFamily::PowerLaw;
    else if (a.family == "log")
        family = GapFamily::Logarithmic;
    else
        throw usage_error("--family: expected affine, power or log, got '" +
                          a.family + "'");
    std::vector<double> opens = parse_list<double>(a.open_grid_csv, "--open-grid");
    std::vector<double> slopes =
        parse_list<double>(a.slope_grid_csv, "--slope-grid");
    std::vector<PhaseCell> cells =
        phase_scan(model, family, opens, slopes, a.alpha, a.n, a.reps, a.seed,
                   threads);

    std::ostringstream csv;
    csv << "open,slope,alpha,verdict,beta,beta_se,slope_vs_n,slope_vs_logn,"
           "disagreement\n";
    ordered_json jcells = ordered_json::array();
    for (const PhaseCell& c : cells) {
        const char* verdict = c.verdict_valid ? domain_name(c.verdict) : "invalid";
        csv << fmt_g(c.open) << ',' << fmt_g(c.slope) << ',' << fmt_g(c.alpha)
            << ',' << verdict << ',' << fmt_g(c.beta) << ',' << fmt_g(c.beta_se)
            << ',' << fmt_g(c.slope_vs_n) << ',' << fmt_g(c.slope_vs_logn) << ','
            << (c.disagreement ? 1 : 0) << '\n';
        ordered_json jc;
        jc["open"] = c.open;
        jc["slope"] = c.slope;
        jc["alpha"] = c.alpha;
        jc["verdict"] = verdict;
        if (!c.verdict_valid) jc["verdict_error"] = c.verdict_error;
        jc["beta"] = c.beta;
        jc["beta_se"] = c.beta_se;
        jc["slope_vs_n"] = c.slope_vs_n;
        jc["slope_vs_logn"] = c.slope_vs_logn;
        jc["disagreement"] = c.disagreement;
        jcells.push_back(jc);
    }

    double ts = theta_star(model);
    ordered_json j;
    j["command"] = "phase";
    j["family"] = a.family;
    if (family == GapFamily::PowerLaw) j["alpha"] = a.alpha;
    j["n"] = a.n;
    j["reps"] = a.reps;
    j["seed"] = a.seed;
    j["theta_star"] = ts;
    j["one_over_theta_star"] = 1.0 / ts;
    j["cells"] = jcells;

    std::filesystem::create_directories(a.out_dir);
    write_text(a.out_dir + "/phase.csv", csv.str());
    write_text(a.out_dir + "/summary.json", dump(j));
    std::cout << dump(j);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local alignment statistics under concave gap penalties"};
    app.require_subcommand(1);
    int threads = default_threads();
    app.add_option("--threads", threads,
                   "Worker threads (default: GAPSTAT_THREADS or 1)");

    AlignArgs A;
    CLI::App* align_cmd =
        app.add_subcommand("align", "Optimal local alignment of two sequences");
    align_cmd->add_option("--x", A.x, "First sequence file")->required();
    align_cmd->add_option("--y", A.y, "Second sequence file")->required();
    align_cmd->add_option("--scores", A.scores, "Score matrix file")->required();
    align_cmd->add_option("--gap", A.gap, "Gap penalty spec")->required();
    align_cmd->add_flag("--global", A.want_global,
                        "Also report the flank-penalized score");
    align_cmd->add_option("--out", A.out, "Output file (default stdout)");

    GapTestArgs G;
    CLI::App* gap_cmd = app.add_subcommand(
        "gap-test", "Summation test: logarithmic or linear growth domain");
    gap_cmd->add_option("--scores", G.scores, "Score matrix file")->required();
    gap_cmd->add_option("--dist", G.dist, "Letter distribution file (default uniform)");
    gap_cmd->add_option("--gap", G.gap, "Gap penalty spec")->required();
    gap_cmd->add_option("--margin", G.margin, "Indeterminate band half-width");
    gap_cmd->add_option("--out", G.out, "Output file (default stdout)");

    ThetaArgs T;
    CLI::App* theta_cmd = app.add_subcommand(
        "theta", "Bracket the decay-rate constant and its growth predictions");
    theta_cmd->add_option("--scores", T.scores, "Score matrix file")->required();
    theta_cmd->add_option("--dist", T.dist, "Letter distribution file (default uniform)");
    theta_cmd->add_option("--gap", T.gap, "Gap penalty spec")->required();
    theta_cmd->add_option("--kappa", T.kappa, "Largest match count for the bracket");
    theta_cmd->add_option("--method", T.method, "Cell evaluation: exact or mc");
    theta_cmd->add_option("--samples", T.samples, "Monte Carlo samples per cell");
    theta_cmd->add_option("--grid-cut", T.grid_cut, "Cell grid cutoff (0 = auto)");
    theta_cmd->add_option("--r-max", T.r_max, "Diagonal reach of the lower-bound sup");
    theta_cmd->add_option("--op-budget", T.op_budget, "Operation budget for auto cutoff");
    theta_cmd->add_option("--tol", T.tol, "Root tolerance");
    theta_cmd->add_option("--h-step", T.h_step, "Slope difference step");
    theta_cmd->add_option("--seed", T.seed, "Master seed");
    theta_cmd->add_option("--out", T.out, "Output file (default stdout)");

    TailArgs L;
    CLI::App* tail_cmd =
        app.add_subcommand("tail", "Tail probability of the local score");
    tail_cmd->add_option("--scores", L.scores, "Score matrix file")->required();
    tail_cmd->add_option("--dist", L.dist, "Letter distribution file (default uniform)");
    tail_cmd->add_option("--gap", L.gap, "Gap penalty spec")->required();
    tail_cmd->add_option("--c", L.c, "Score threshold")->required();
    tail_cmd->add_option("--m", L.m, "First sequence length")->required();
    tail_cmd->add_option("--n", L.n, "Second sequence length")->required();
    tail_cmd->add_option("--method", L.method, "bound, mc or is");
    tail_cmd->add_option("--samples", L.samples, "Replicates");
    CLI::Option* theta_opt =
        tail_cmd->add_option("--theta", L.theta, "Tilting point (a positive root)");
    tail_cmd->add_option("--theta-file", L.theta_file,
                         "theta subcommand report to take the root from");
    tail_cmd->add_option("--resid", L.resid, "Root residual of --theta");
    tail_cmd->add_option("--kappa", L.kappa, "Match count of the bound");
    tail_cmd->add_option("--cap", L.cap, "Sampler length cap (0 = auto)");
    tail_cmd->add_option("--seed", L.seed, "Master seed");
    tail_cmd->add_option("--out", L.out, "Output file (default stdout)");

    LawArgs W;
    CLI::App* law_cmd = app.add_subcommand(
        "law", "Growth-law trajectories of H, gapless H and |z*| over n");
    law_cmd->add_option("--scores", W.scores, "Score matrix file")->required();
    law_cmd->add_option("--dist", W.dist, "Letter distribution file (default uniform)");
    law_cmd->add_option("--gap", W.gap, "Gap penalty spec")->required();
    law_cmd->add_option("--nmax", W.nmax, "Largest n of the doubling grid");
    law_cmd->add_option("--n-grid", W.n_grid_csv, "Explicit comma-separated n grid");
    law_cmd->add_option("--reps", W.reps, "Replicates per n");
    law_cmd->add_option("--kappa-max", W.kappa_max, "Bracket depth for predictions");
    law_cmd->add_option("--budget", W.budget, "Wall-clock budget in seconds (0 = none)");
    law_cmd->add_option("--seed", W.seed, "Master seed");
    law_cmd->add_option("--out", W.out_dir, "Output directory")->required();

    PhaseArgs P;
    CLI::App* phase_cmd = app.add_subcommand(
        "phase", "Gap-parameter scan: analytic verdict vs empirical growth");
    phase_cmd->add_option("--scores", P.scores, "Score matrix file")->required();
    phase_cmd->add_option("--dist", P.dist, "Letter distribution file (default uniform)");
    phase_cmd->add_option("--family", P.family, "affine, power or log");
    phase_cmd->add_option("--alpha", P.alpha, "Power-law exponent");
    phase_cmd->add_option("--open-grid", P.open_grid_csv,
                          "Comma-separated gap opening costs")->required();
    phase_cmd->add_option("--slope-grid", P.slope_grid_csv,
                          "Comma-separated growth parameters")->required();
    phase_cmd->add_option("--n", P.n, "Sequence length");
    phase_cmd->add_option("--reps", P.reps, "Replicates per cell");
    phase_cmd->add_option("--seed", P.seed, "Master seed");
    phase_cmd->add_option("--out", P.out_dir, "Output directory")->required();

    // lets --threads appear after the subcommand as well as before it
    for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    L.theta_set = theta_opt->count() > 0;

    try {
        if (*align_cmd) return cmd_align(A);
        if (*gap_cmd) return cmd_gap_test(G);
        if (*theta_cmd) return cmd_theta(T, threads);
        if (*tail_cmd) return cmd_tail(L, threads);
        if (*law_cmd) return cmd_law(W, threads);
        if (*phase_cmd) return cmd_phase(P, threads);
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
