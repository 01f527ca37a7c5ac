#include "gapstat/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace gapstat::io {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

double parse_number(const std::string& tok, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        fail("bad " + what + ": '" + tok + "'");
    }
    if (used != tok.size()) fail("trailing characters in " + what + ": '" + tok + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = s.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(s.substr(pos));
            return out;
        }
        out.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
}

} // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw std::runtime_error("read error: " + path);
    return buf.str();
}

ScoreFile read_score_matrix(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::string header;
    while (std::getline(in, header)) {
        if (header.find_first_not_of(" \t\r") != std::string::npos) break;
    }
    std::istringstream hs(header);
    std::string sym, symbols;
    while (hs >> sym) {
        if (sym.size() != 1) fail(path + ": alphabet symbols must be single characters, got '" + sym + "'");
        symbols += sym[0];
    }
    Alphabet alphabet(symbols);
    int a = alphabet.size();
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(a) * static_cast<std::size_t>(a));
    std::string tok;
    while (in >> tok) values.push_back(parse_number(tok, path + " matrix entry"));
    if (values.size() != static_cast<std::size_t>(a) * static_cast<std::size_t>(a))
        fail(path + ": expected " + std::to_string(a * a) + " matrix entries, got " +
             std::to_string(values.size()));
    return {alphabet, ScoreMatrix(alphabet, std::move(values))};
}

LetterDist read_letter_dist(const std::string& path, const Alphabet& alphabet) {
    std::istringstream in(read_text_file(path));
    std::vector<double> probs(static_cast<std::size_t>(alphabet.size()), -1.0);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string sym, ptok, extra;
        if (!(ls >> sym)) continue;
        if (!(ls >> ptok)) fail(path + ": line '" + line + "' lacks a probability");
        if (ls >> extra) fail(path + ": trailing token '" + extra + "' on line '" + line + "'");
        if (sym.size() != 1) fail(path + ": '" + sym + "' is not a single symbol");
        int idx = alphabet.index_of(sym[0]);
        if (idx < 0) fail(path + ": symbol '" + sym + "' is not in the alphabet");
        if (probs[static_cast<std::size_t>(idx)] >= 0.0)
            fail(path + ": symbol '" + sym + "' listed twice");
        probs[static_cast<std::size_t>(idx)] = parse_number(ptok, path + " probability");
    }
    for (int i = 0; i < alphabet.size(); ++i)
        if (probs[static_cast<std::size_t>(i)] < 0.0)
            fail(path + ": no probability for symbol '" + std::string(1, alphabet.symbol(i)) + "'");
    return LetterDist(alphabet, std::move(probs));
}

Seq read_sequence(const std::string& path, const Alphabet& alphabet) {
    std::istringstream in(read_text_file(path));
    std::string line, text;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '>') continue;
        for (char c : line) {
            if (std::isspace(static_cast<unsigned char>(c))) continue;
            text += c;
        }
    }
    if (text.empty()) fail(path + ": no sequence data");
    return alphabet.encode(text);
}

namespace {

GapPenalty parse_table_spec(const std::string& rest) {
    std::size_t comma = rest.find(',');
    if (comma == std::string::npos)
        fail("table gap spec needs a declared class: table:FILE,CLASS");
    std::string file = rest.substr(0, comma);
    std::string cls = rest.substr(comma + 1);

    std::istringstream in(read_text_file(file));
    std::vector<double> nums;
    std::string tok;
    while (in >> tok) nums.push_back(parse_number(tok, file + " entry"));
    if (nums.size() < 2) fail(file + ": need DELTA and at least gamma(1)");
    double open = nums.front();
    std::vector<double> gamma(nums.begin() + 1, nums.end());

    if (cls == "unknown")
        return GapPenalty::custom_table(open, std::move(gamma), GapFamily::CustomTable);
    std::size_t colon = cls.find(':');
    std::string cname = cls.substr(0, colon == std::string::npos ? cls.size() : colon);
    std::vector<std::string> args;
    if (colon != std::string::npos) args = split(cls.substr(colon + 1), ',');
    if (cname == "affine") {
        if (args.size() != 1) fail("declared class affine needs one parameter: affine:SLOPE");
        return GapPenalty::custom_table(open, std::move(gamma), GapFamily::Affine,
                                        parse_number(args[0], "declared slope"));
    }
    if (cname == "power") {
        if (args.size() != 2) fail("declared class power needs two parameters: power:SLOPE,ALPHA");
        return GapPenalty::custom_table(open, std::move(gamma), GapFamily::PowerLaw,
                                        parse_number(args[0], "declared slope"),
                                        parse_number(args[1], "declared alpha"));
    }
    if (cname == "log") {
        if (args.size() != 1) fail("declared class log needs one parameter: log:SLOPE");
        return GapPenalty::custom_table(open, std::move(gamma), GapFamily::Logarithmic,
                                        parse_number(args[0], "declared slope"));
    }
    fail("unknown declared class '" + cname + "' (expected affine, power, log or unknown)");
}

} // namespace

GapPenalty parse_gap_spec(const std::string& spec) {
    if (spec == "inf") return GapPenalty::infinite();
    std::size_t colon = spec.find(':');
    if (colon == std::string::npos)
        fail("bad gap spec '" + spec +
             "' (expected affine:D,S | power:D,S,A | log:D,S | inf | table:FILE,CLASS)");
    std::string fam = spec.substr(0, colon);
    std::string rest = spec.substr(colon + 1);
    if (fam == "table") return parse_table_spec(rest);
    std::vector<std::string> args = split(rest, ',');
    if (fam == "affine") {
        if (args.size() != 2) fail("affine gap spec needs two numbers: affine:DELTA,SLOPE");
        return GapPenalty::affine(parse_number(args[0], "gap delta"),
                                  parse_number(args[1], "gap slope"));
    }
    if (fam == "power") {
        if (args.size() != 3) fail("power gap spec needs three numbers: power:DELTA,SLOPE,ALPHA");
        return GapPenalty::power_law(parse_number(args[0], "gap delta"),
                                     parse_number(args[1], "gap slope"),
                                     parse_number(args[2], "gap alpha"));
    }
    if (fam == "log") {
        if (args.size() != 2) fail("log gap spec needs two numbers: log:DELTA,SLOPE");
        return GapPenalty::logarithmic(parse_number(args[0], "gap delta"),
                                       parse_number(args[1], "gap slope"));
    }
    fail("unknown gap family '" + fam + "'");
}

} // namespace gapstat::io
