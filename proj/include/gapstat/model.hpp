#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace gapstat {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

using Seq = std::vector<std::uint8_t>;

// Ordered set of 2..64 distinct single-character symbols.
class Alphabet {
public:
    explicit Alphabet(const std::string& symbols);

    int size() const { return static_cast<int>(symbols_.size()); }
    char symbol(int i) const { return symbols_[static_cast<std::size_t>(i)]; }
    // -1 when the character is not in the alphabet.
    int index_of(char c) const;
    const std::string& symbols() const { return symbols_; }

    Seq encode(const std::string& text) const;
    std::string decode(const Seq& s) const;

private:
    std::string symbols_;
    int lookup_[256];
};

// Strictly positive letter probabilities summing to 1 within 1e-9.
class LetterDist {
public:
    LetterDist(const Alphabet& alphabet, std::vector<double> probs);

    int size() const { return static_cast<int>(probs_.size()); }
    double prob(int i) const { return probs_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& probs() const { return probs_; }
    // cdf()[i] = P(letter <= i); back() == 1 exactly.
    const std::vector<double>& cdf() const { return cdf_; }

    static LetterDist uniform(const Alphabet& alphabet);

private:
    std::vector<double> probs_;
    std::vector<double> cdf_;
};

// Exactly symmetric pair scores with a positive maximum.
class ScoreMatrix {
public:
    ScoreMatrix(const Alphabet& alphabet, std::vector<double> values);

    int size() const { return size_; }
    double at(int a, int b) const {
        return values_[static_cast<std::size_t>(a) * static_cast<std::size_t>(size_) +
                       static_cast<std::size_t>(b)];
    }
    double max_score() const { return max_; }
    double min_score() const { return min_; }
    const std::vector<double>& values() const { return values_; }

    ScoreMatrix shifted(double lambda) const;

private:
    int size_;
    std::vector<double> values_;
    double max_;
    double min_;
};

enum class GapFamily { Affine, PowerLaw, Logarithmic, CustomTable, Infinite };

const char* family_name(GapFamily f);

// Per-gap cost g(k) = delta + gamma(k) for k >= 1, g(0) = 0, gamma(1) = 0.
// Families:
//   Affine       gamma(k) = slope * (k-1)
//   PowerLaw     gamma(k) = slope * (k-1)^alpha, 0 < alpha < 1
//   Logarithmic  gamma(k) = slope * ln(k)
//   CustomTable  gamma from a finite table plus a declared asymptotic class
//   Infinite     g(k) = +inf for k >= 1 (gapless scoring)
// Construction rejects negative parameters and non-monotone tables. Concavity
// of g is computed, not enforced: scoring works for any nondecreasing g, while
// the asymptotic-theory operations require concave() and reject otherwise.
class GapPenalty {
public:
    static GapPenalty affine(double open, double slope);
    static GapPenalty power_law(double open, double slope, double alpha);
    static GapPenalty logarithmic(double open, double slope);
    // The declared class asserts gamma(k) >= gamma_class(k) beyond the table;
    // tail bounds are certified conditional on that assertion. `declared` must
    // be one of the closed families above or CustomTable meaning "unknown".
    static GapPenalty custom_table(double open, std::vector<double> gamma_table,
                                   GapFamily declared, double declared_slope = 0.0,
                                   double declared_alpha = 0.0);
    static GapPenalty infinite();

    GapFamily family() const { return family_; }
    bool is_infinite() const { return family_ == GapFamily::Infinite; }
    bool concave() const { return concave_; }
    double open_cost() const { return open_; }
    double slope() const { return slope_; }
    double alpha() const { return alpha_; }
    GapFamily declared_class() const { return declared_; }
    double declared_slope() const { return declared_slope_; }
    double declared_alpha() const { return declared_alpha_; }
    long table_size() const { return static_cast<long>(table_.size()); }

    // gamma(k), k >= 1; throws on k past a custom table (no extrapolation).
    double gamma(long k) const;
    // g(k), k >= 0.
    double cost(long k) const;
    double operator()(long k) const { return cost(k); }

    std::string describe() const;

private:
    GapPenalty() = default;

    GapFamily family_ = GapFamily::Affine;
    double open_ = 0.0;
    double slope_ = 0.0;
    double alpha_ = 0.0;
    std::vector<double> table_;
    GapFamily declared_ = GapFamily::CustomTable;
    double declared_slope_ = 0.0;
    double declared_alpha_ = 0.0;
    bool concave_ = true;
};

// Precomputed g(0..n) for the DP hot loops.
std::vector<double> gap_cost_table(const GapPenalty& g, long n);

// Partial sum with a certified remainder:
//   sum  = sum_{k=1..terms} exp(-theta * gamma(k))
//   tail >= sum_{k>terms}  exp(-theta * gamma(k))   (exact for Affine)
// divergent marks a series that is actually infinite (then tail = +inf).
struct SeriesBound {
    double sum = 0.0;
    double tail = 0.0;
    bool divergent = false;
    // True when the tail is the exact remainder (geometric families), so
    // upper() is the exact series value rather than an upper bound.
    bool tail_exact = false;

    double upper() const { return divergent ? kPosInf : sum + tail; }
    double uncertainty() const { return divergent ? kPosInf : (tail_exact ? 0.0 : tail); }
};

SeriesBound gamma_weight_sum(const GapPenalty& g, double theta, long terms);

// Adaptive variant: grows the number of terms until tail <= rel_tol * sum
// (or the term cap is hit; the achieved tail is reported either way).
SeriesBound gamma_weight_series(const GapPenalty& g, double theta,
                                double rel_tol = 1e-14, long max_terms = 1 << 22);

// sum_{k>=0} exp(-theta * g(k)) = 1 + exp(-theta*open) * gamma series.
// Infinite penalties give exactly {1, 0}.
SeriesBound gap_weight_series(const GapPenalty& g, double theta,
                              double rel_tol = 1e-14, long max_terms = 1 << 22);

// Letter distribution + symmetric scores with negative mean and positive max.
class ScoringModel {
public:
    ScoringModel(Alphabet alphabet, LetterDist dist, ScoreMatrix scores);

    const Alphabet& alphabet() const { return alphabet_; }
    const LetterDist& dist() const { return dist_; }
    const ScoreMatrix& scores() const { return scores_; }
    int alphabet_size() const { return alphabet_.size(); }
    double score(int a, int b) const { return scores_.at(a, b); }
    double max_score() const { return scores_.max_score(); }
    double min_score() const { return scores_.min_score(); }
    double mean_score() const { return mean_; }

    // E exp(theta*K) over an i.i.d. letter pair, and its theta-derivative.
    double pair_mgf(double theta) const;
    double pair_mgf_deriv(double theta) const;

    ScoringModel shifted(double lambda) const;

private:
    Alphabet alphabet_;
    LetterDist dist_;
    ScoreMatrix scores_;
    double mean_;
};

} // namespace gapstat
