#pragma once

#include "gapstat/model.hpp"

#include <string>
#include <utility>

namespace gapstat::io {

// Score-matrix text format: first line lists the alphabet symbols separated
// by whitespace, followed by |A| rows of |A| numbers. Symmetry is required,
// not repaired.
struct ScoreFile {
    Alphabet alphabet;
    ScoreMatrix scores;
};
ScoreFile read_score_matrix(const std::string& path);

// Lines of "symbol probability"; every alphabet symbol exactly once.
LetterDist read_letter_dist(const std::string& path, const Alphabet& alphabet);

// Plain text, one sequence per file; lines starting with '>' are ignored and
// whitespace is skipped. Unknown characters are an error.
Seq read_sequence(const std::string& path, const Alphabet& alphabet);

// Gap penalty spec grammar:
//   affine:DELTA,SLOPE | power:DELTA,SLOPE,ALPHA | log:DELTA,SLOPE | inf
//   table:FILE,CLASS with CLASS one of affine:SLOPE | power:SLOPE,ALPHA |
//   log:SLOPE | unknown
// The table file holds whitespace-separated numbers: DELTA gamma(1..L),
// gamma(1) = 0.
GapPenalty parse_gap_spec(const std::string& spec);

std::string read_text_file(const std::string& path);

} // namespace gapstat::io
