#include "gapstat/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace gapstat {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

} // namespace

Alphabet::Alphabet(const std::string& symbols) : symbols_(symbols) {
    if (symbols_.size() < 2 || symbols_.size() > 64)
        fail("alphabet must have between 2 and 64 symbols");
    for (int i = 0; i < 256; ++i) lookup_[i] = -1;
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(symbols_[i]);
        if (std::isspace(c) || !std::isprint(c))
            fail("alphabet symbols must be printable non-whitespace characters");
        if (lookup_[c] != -1) fail(std::string("duplicate alphabet symbol '") + symbols_[i] + "'");
        lookup_[c] = static_cast<int>(i);
    }
}

int Alphabet::index_of(char c) const { return lookup_[static_cast<unsigned char>(c)]; }

Seq Alphabet::encode(const std::string& text) const {
    Seq out;
    out.reserve(text.size());
    for (char c : text) {
        int idx = index_of(c);
        if (idx < 0) fail(std::string("character '") + c + "' is not in the alphabet");
        out.push_back(static_cast<std::uint8_t>(idx));
    }
    return out;
}

std::string Alphabet::decode(const Seq& s) const {
    std::string out;
    out.reserve(s.size());
    for (std::uint8_t v : s) {
        if (v >= symbols_.size()) fail("letter index out of range");
        out.push_back(symbols_[v]);
    }
    return out;
}

LetterDist::LetterDist(const Alphabet& alphabet, std::vector<double> probs)
    : probs_(std::move(probs)) {
    if (static_cast<int>(probs_.size()) != alphabet.size())
        fail("distribution size does not match the alphabet");
    double total = 0.0;
    for (double p : probs_) {
        if (!(p > 0.0) || !std::isfinite(p)) fail("letter probabilities must be strictly positive");
        total += p;
    }
    if (std::fabs(total - 1.0) > 1e-9) fail("letter probabilities must sum to 1 within 1e-9");
    cdf_.resize(probs_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        acc += probs_[i];
        cdf_[i] = acc;
    }
    cdf_.back() = 1.0;
}

LetterDist LetterDist::uniform(const Alphabet& alphabet) {
    int n = alphabet.size();
    return LetterDist(alphabet, std::vector<double>(static_cast<std::size_t>(n), 1.0 / n));
}

ScoreMatrix::ScoreMatrix(const Alphabet& alphabet, std::vector<double> values)
    : size_(alphabet.size()), values_(std::move(values)) {
    std::size_t n = static_cast<std::size_t>(size_);
    if (values_.size() != n * n) fail("score matrix size does not match the alphabet");
    max_ = kNegInf;
    min_ = kPosInf;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            double v = values_[a * n + b];
            if (!std::isfinite(v)) fail("scores must be finite");
            if (v != values_[b * n + a])
                fail("score matrix must be exactly symmetric (K(a,b) == K(b,a))");
            max_ = std::max(max_, v);
            min_ = std::min(min_, v);
        }
    }
    if (!(max_ > 0.0)) fail("score matrix needs a strictly positive maximum");
}

ScoreMatrix ScoreMatrix::shifted(double lambda) const {
    ScoreMatrix out = *this;
    for (double& v : out.values_) v += lambda;
    out.max_ = max_ + lambda;
    out.min_ = min_ + lambda;
    if (!(out.max_ > 0.0)) fail("shifted score matrix lost its positive maximum");
    return out;
}

const char* family_name(GapFamily f) {
    switch (f) {
        case GapFamily::Affine: return "affine";
        case GapFamily::PowerLaw: return "power";
        case GapFamily::Logarithmic: return "log";
        case GapFamily::CustomTable: return "table";
        case GapFamily::Infinite: return "inf";
    }
    return "?";
}

namespace {

void check_open_slope(double open, double slope) {
    if (!(open >= 0.0) || !std::isfinite(open)) fail("gap open cost must be >= 0");
    if (!(slope >= 0.0) || !std::isfinite(slope)) fail("gap slope must be >= 0");
}

} // namespace

GapPenalty GapPenalty::affine(double open, double slope) {
    check_open_slope(open, slope);
    GapPenalty g;
    g.family_ = GapFamily::Affine;
    g.open_ = open;
    g.slope_ = slope;
    // concavity of g includes the k = 1 joint: g(2)-g(1) <= g(1)-g(0), i.e.
    // gamma(2) <= open. Subadditivity (one long gap never beats a split)
    // follows from it and the growth theory leans on that.
    g.concave_ = slope <= open;
    return g;
}

GapPenalty GapPenalty::power_law(double open, double slope, double alpha) {
    check_open_slope(open, slope);
    if (!(alpha > 0.0) || !(alpha < 1.0)) fail("power-law exponent must lie in (0,1)");
    GapPenalty g;
    g.family_ = GapFamily::PowerLaw;
    g.open_ = open;
    g.slope_ = slope;
    g.alpha_ = alpha;
    g.concave_ = slope <= open; // gamma(2) = slope * 1^alpha
    return g;
}

GapPenalty GapPenalty::logarithmic(double open, double slope) {
    check_open_slope(open, slope);
    GapPenalty g;
    g.family_ = GapFamily::Logarithmic;
    g.open_ = open;
    g.slope_ = slope;
    g.concave_ = slope * std::log(2.0) <= open; // gamma(2)
    return g;
}

GapPenalty GapPenalty::custom_table(double open, std::vector<double> gamma_table,
                                    GapFamily declared, double declared_slope,
                                    double declared_alpha) {
    if (!(open >= 0.0) || !std::isfinite(open)) fail("gap open cost must be >= 0");
    if (gamma_table.empty()) fail("gamma table must not be empty");
    if (gamma_table[0] != 0.0) fail("gamma(1) must be exactly 0");
    for (std::size_t i = 0; i < gamma_table.size(); ++i) {
        if (!std::isfinite(gamma_table[i]) || gamma_table[i] < 0.0)
            fail("gamma table entries must be finite and >= 0");
        if (i > 0 && gamma_table[i] < gamma_table[i - 1])
            fail("gamma table must be nondecreasing");
    }
    switch (declared) {
        case GapFamily::Affine:
        case GapFamily::Logarithmic:
            if (!(declared_slope > 0.0)) fail("declared class needs a positive slope");
            break;
        case GapFamily::PowerLaw:
            if (!(declared_slope > 0.0)) fail("declared class needs a positive slope");
            if (!(declared_alpha > 0.0) || !(declared_alpha < 1.0))
                fail("declared power-law exponent must lie in (0,1)");
            break;
        case GapFamily::CustomTable:
            break; // declared class unknown
        case GapFamily::Infinite:
            fail("a table cannot declare an infinite asymptotic class");
    }
    GapPenalty g;
    g.family_ = GapFamily::CustomTable;
    g.open_ = open;
    g.table_ = std::move(gamma_table);
    g.declared_ = declared;
    g.declared_slope_ = declared_slope;
    g.declared_alpha_ = declared_alpha;
    // concavity includes the k = 1 joint: gamma(2) <= open
    g.concave_ = !(g.table_.size() >= 2 && g.table_[1] > open);
    for (std::size_t k = 2; k + 1 <= g.table_.size() && g.concave_; ++k) {
        double d_prev = g.table_[k - 1] - g.table_[k - 2];
        double d_next = g.table_[k] - g.table_[k - 1];
        if (d_next > d_prev) g.concave_ = false;
    }
    return g;
}

GapPenalty GapPenalty::infinite() {
    GapPenalty g;
    g.family_ = GapFamily::Infinite;
    g.concave_ = true;
    return g;
}

double GapPenalty::gamma(long k) const {
    if (k < 1) fail("gamma is defined for k >= 1");
    switch (family_) {
        case GapFamily::Affine: return slope_ * static_cast<double>(k - 1);
        case GapFamily::PowerLaw: return slope_ * std::pow(static_cast<double>(k - 1), alpha_);
        case GapFamily::Logarithmic: return slope_ * std::log(static_cast<double>(k));
        case GapFamily::CustomTable:
            if (k > static_cast<long>(table_.size()))
                throw std::domain_error("gamma table has no entry for k=" + std::to_string(k) +
                                        " (table covers 1.." + std::to_string(table_.size()) + ")");
            return table_[static_cast<std::size_t>(k - 1)];
        case GapFamily::Infinite: return kPosInf;
    }
    return 0.0;
}

double GapPenalty::cost(long k) const {
    if (k < 0) fail("gap length must be >= 0");
    if (k == 0) return 0.0;
    if (family_ == GapFamily::Infinite) return kPosInf;
    return open_ + gamma(k);
}

std::string GapPenalty::describe() const {
    char buf[160];
    switch (family_) {
        case GapFamily::Affine:
            std::snprintf(buf, sizeof buf, "affine:%g,%g", open_, slope_);
            break;
        case GapFamily::PowerLaw:
            std::snprintf(buf, sizeof buf, "power:%g,%g,%g", open_, slope_, alpha_);
            break;
        case GapFamily::Logarithmic:
            std::snprintf(buf, sizeof buf, "log:%g,%g", open_, slope_);
            break;
        case GapFamily::CustomTable: {
            if (declared_ == GapFamily::CustomTable) {
                std::snprintf(buf, sizeof buf, "table[%zu]:%g,unknown", table_.size(), open_);
            } else if (declared_ == GapFamily::PowerLaw) {
                std::snprintf(buf, sizeof buf, "table[%zu]:%g,power:%g,%g", table_.size(), open_,
                              declared_slope_, declared_alpha_);
            } else {
                std::snprintf(buf, sizeof buf, "table[%zu]:%g,%s:%g", table_.size(), open_,
                              family_name(declared_), declared_slope_);
            }
            break;
        }
        case GapFamily::Infinite:
            std::snprintf(buf, sizeof buf, "inf");
            break;
    }
    return buf;
}

std::vector<double> gap_cost_table(const GapPenalty& g, long n) {
    std::vector<double> out(static_cast<std::size_t>(n) + 1);
    out[0] = 0.0;
    for (long k = 1; k <= n; ++k) out[static_cast<std::size_t>(k)] = g.cost(k);
    return out;
}

namespace {

// Certified bound on sum_{j>=start} exp(-c * j^alpha) via dyadic blocks:
// each block [2^t s, 2^(t+1) s) has 2^t s terms, all <= its left edge.
double power_tail_dyadic(double c, double alpha, double start) {
    double total = 0.0;
    for (int t = 0; t < 4000; ++t) {
        double block = start * std::pow(2.0, t);
        double log_term = std::log(block) - c * std::pow(block, alpha);
        double term = std::exp(log_term);
        total += term;
        if (term < total * 1e-18 || term == 0.0) break;
    }
    return total;
}

// Integration-by-parts bound: sum_{j>=N} exp(-c j^alpha)
//   <= exp(-c N^alpha) + (1/alpha) c^(-1/alpha) * Gamma(1/alpha, z) with z = c N^alpha,
// and Gamma(s,z) <= z^(s-1) e^-z / (1 - (s-1)/z) for z > s-1.
double power_tail_ibp(double c, double alpha, double start) {
    double s = 1.0 / alpha;
    double z = c * std::pow(start, alpha);
    if (!(z > s - 1.0 + 0.5)) return kPosInf;
    double log_gamma_bound = (s - 1.0) * std::log(z) - z - std::log1p(-(s - 1.0) / z);
    double log_integral = -std::log(alpha) - s * std::log(c) + log_gamma_bound;
    return std::exp(-z) + std::exp(log_integral);
}

double power_tail(double c, double alpha, double start) {
    return std::min(power_tail_dyadic(c, alpha, start), power_tail_ibp(c, alpha, start));
}

SeriesBound affine_series(double theta, double slope, long terms) {
    SeriesBound out;
    double q = std::exp(-theta * slope);
    if (q >= 1.0) {
        out.sum = static_cast<double>(terms);
        out.tail = kPosInf;
        out.divergent = true;
        return out;
    }
    double qn = std::pow(q, static_cast<double>(terms));
    out.sum = (1.0 - qn) / (1.0 - q);
    out.tail = qn / (1.0 - q);
    out.tail_exact = true;
    return out;
}

SeriesBound power_series(double theta, double slope, double alpha, long terms) {
    SeriesBound out;
    double c = theta * slope;
    if (c <= 0.0) {
        out.sum = static_cast<double>(terms);
        out.tail = kPosInf;
        out.divergent = true;
        return out;
    }
    for (long k = 1; k <= terms; ++k) {
        double term = std::exp(-c * std::pow(static_cast<double>(k - 1), alpha));
        out.sum += term;
        if (term == 0.0) break;
    }
    out.tail = power_tail(c, alpha, static_cast<double>(terms));
    return out;
}

// sum_{k=a}^inf k^-p = a^(1-p)/(p-1) + a^-p/2 + p a^-(p+1)/12 + R by
// Euler-Maclaurin, with -p(p+1)(p+2) a^-(p+3)/720 <= R <= 0. Kahan summation
// plus an explicit rounding guard keep [sum, sum+tail] a true bracket.
SeriesBound log_series(double theta, double slope, long terms) {
    SeriesBound out;
    double p = theta * slope;
    if (p <= 1.0) {
        for (long k = 1; k <= std::min(terms, 65536L); ++k)
            out.sum += std::pow(static_cast<double>(k), -p);
        out.tail = kPosInf;
        out.divergent = true;
        return out;
    }
    double sum = 0.0, comp = 0.0;
    long k = 1;
    for (; k <= terms; ++k) {
        double term = std::pow(static_cast<double>(k), -p);
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (term < sum * 1e-18) {
            ++k;
            break;
        }
    }
    double a = static_cast<double>(k);
    double est_hi = std::pow(a, 1.0 - p) / (p - 1.0) + 0.5 * std::pow(a, -p) +
                    p * std::pow(a, -p - 1.0) / 12.0;
    double c4 = p * (p + 1.0) * (p + 2.0) * std::pow(a, -p - 3.0) / 720.0;
    double guard =
        8.0 * std::numeric_limits<double>::epsilon() * (sum + est_hi);
    out.sum = sum + (est_hi - c4) - guard;
    out.tail = c4 + 2.0 * guard;
    return out;
}

// Tail of the declared class beyond the table, anchored at k > len.
SeriesBound declared_tail(const GapPenalty& g, double theta, long len) {
    SeriesBound out;
    switch (g.declared_class()) {
        case GapFamily::Affine: {
            double q = std::exp(-theta * g.declared_slope());
            if (q >= 1.0) {
                out.tail = kPosInf;
                out.divergent = true;
            } else {
                out.tail = std::pow(q, static_cast<double>(len)) / (1.0 - q);
            }
            return out;
        }
        case GapFamily::PowerLaw: {
            double c = theta * g.declared_slope();
            out.tail = power_tail(c, g.declared_alpha(), static_cast<double>(len));
            return out;
        }
        case GapFamily::Logarithmic: {
            double p = theta * g.declared_slope();
            if (p <= 1.0) {
                out.tail = kPosInf;
                out.divergent = true;
            } else {
                out.tail = std::pow(static_cast<double>(len), 1.0 - p) / (p - 1.0);
            }
            return out;
        }
        default:
            fail("a declared asymptotic class is required for tail bounds");
    }
    return out;
}

} // namespace

SeriesBound gamma_weight_sum(const GapPenalty& g, double theta, long terms) {
    if (!(theta > 0.0)) fail("theta must be > 0");
    if (terms < 1) fail("need at least one term");
    switch (g.family()) {
        case GapFamily::Affine: return affine_series(theta, g.slope(), terms);
        case GapFamily::PowerLaw: return power_series(theta, g.slope(), g.alpha(), terms);
        case GapFamily::Logarithmic: return log_series(theta, g.slope(), terms);
        case GapFamily::CustomTable: {
            long len = g.table_size();
            if (terms > len)
                throw std::domain_error("gamma table covers only 1.." + std::to_string(len));
            SeriesBound out;
            for (long k = 1; k <= terms; ++k) out.sum += std::exp(-theta * g.gamma(k));
            double known = 0.0;
            for (long k = terms + 1; k <= len; ++k) known += std::exp(-theta * g.gamma(k));
            SeriesBound beyond = declared_tail(g, theta, len);
            out.tail = known + beyond.tail;
            out.divergent = beyond.divergent;
            return out;
        }
        case GapFamily::Infinite:
            fail("infinite gap penalties have no gamma series");
    }
    return {};
}

SeriesBound gamma_weight_series(const GapPenalty& g, double theta, double rel_tol,
                                long max_terms) {
    if (g.family() == GapFamily::Affine)
        return gamma_weight_sum(g, theta, 2);
    if (g.family() == GapFamily::CustomTable)
        return gamma_weight_sum(g, theta, g.table_size());
    long terms = 64;
    SeriesBound out = gamma_weight_sum(g, theta, terms);
    while (!out.divergent && out.tail > rel_tol * std::max(out.sum, 1.0) && terms < max_terms) {
        terms = std::min(terms * 4, max_terms);
        out = gamma_weight_sum(g, theta, terms);
    }
    return out;
}

SeriesBound gap_weight_series(const GapPenalty& g, double theta, double rel_tol,
                              long max_terms) {
    if (!(theta > 0.0)) fail("theta must be > 0");
    SeriesBound out;
    if (g.is_infinite()) {
        out.sum = 1.0;
        out.tail_exact = true;
        return out;
    }
    SeriesBound inner = gamma_weight_series(g, theta, rel_tol, max_terms);
    double w = std::exp(-theta * g.open_cost());
    out.sum = 1.0 + w * inner.sum;
    out.tail = w * inner.tail;
    out.divergent = inner.divergent;
    out.tail_exact = inner.tail_exact;
    return out;
}

ScoringModel::ScoringModel(Alphabet alphabet, LetterDist dist, ScoreMatrix scores)
    : alphabet_(std::move(alphabet)), dist_(std::move(dist)), scores_(std::move(scores)) {
    if (dist_.size() != alphabet_.size() || scores_.size() != alphabet_.size())
        fail("alphabet, distribution, and score matrix sizes must agree");
    mean_ = 0.0;
    for (int a = 0; a < alphabet_.size(); ++a)
        for (int b = 0; b < alphabet_.size(); ++b)
            mean_ += dist_.prob(a) * dist_.prob(b) * scores_.at(a, b);
    if (!(mean_ < 0.0))
        fail("expected pair score must be strictly negative (it is " + std::to_string(mean_) + ")");
}

double ScoringModel::pair_mgf(double theta) const {
    double total = 0.0;
    for (int a = 0; a < alphabet_.size(); ++a)
        for (int b = 0; b < alphabet_.size(); ++b)
            total += dist_.prob(a) * dist_.prob(b) * std::exp(theta * scores_.at(a, b));
    return total;
}

double ScoringModel::pair_mgf_deriv(double theta) const {
    double total = 0.0;
    for (int a = 0; a < alphabet_.size(); ++a)
        for (int b = 0; b < alphabet_.size(); ++b) {
            double k = scores_.at(a, b);
            total += dist_.prob(a) * dist_.prob(b) * k * std::exp(theta * k);
        }
    return total;
}

ScoringModel ScoringModel::shifted(double lambda) const {
    return ScoringModel(alphabet_, dist_, scores_.shifted(lambda));
}

} // namespace gapstat
