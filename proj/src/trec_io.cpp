#include "fuselab/trec_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <unordered_set>

namespace fuselab {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

// Splits a line on runs of whitespace. Bytes are opaque: no decoding.
std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) ++i;
        std::size_t start = i;
        while (i < line.size() && !is_space(line[i])) ++i;
        if (i > start) fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

bool parse_long(std::string_view tok, long long& out) {
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && ptr == tok.data() + tok.size();
}

bool parse_int(std::string_view tok, int& out) {
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && ptr == tok.data() + tok.size();
}

// Returns false for a token that is not a real number at all; *out_of_range
// flags values from_chars could not represent (treated as non-finite).
bool parse_double(std::string_view tok, double& out, bool& out_of_range) {
    out_of_range = false;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    if (ptr != tok.data() + tok.size()) return false;
    if (ec == std::errc::result_out_of_range) {
        out_of_range = true;
        return true;
    }
    return ec == std::errc{};
}

bool is_q0(std::string_view tok) {
    return tok.size() == 2 && (tok[0] == 'Q' || tok[0] == 'q') && tok[1] == '0';
}

}  // namespace

std::string format_score(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

Run parse_run(std::istream& in) {
    Run run;
    std::map<std::string, std::vector<DocScore>> by_query;
    std::map<std::string, std::unordered_set<std::string>> seen;
    bool have_tag = false;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto fields = split_fields(line);
        if (fields.empty()) continue;
        if (fields.size() != 6)
            throw ParseError(ParseError::Kind::malformed_line, line_no,
                             "line " + std::to_string(line_no) + ": expected 6 fields, got " +
                                 std::to_string(fields.size()));
        if (!is_q0(fields[1]))
            throw ParseError(ParseError::Kind::malformed_line, line_no,
                             "line " + std::to_string(line_no) + ": second field must be Q0");
        long long rank = 0;
        if (!parse_long(fields[3], rank))
            throw ParseError(ParseError::Kind::malformed_line, line_no,
                             "line " + std::to_string(line_no) + ": bad rank '" +
                                 std::string(fields[3]) + "'");
        double score = 0.0;
        bool out_of_range = false;
        if (!parse_double(fields[4], score, out_of_range))
            throw ParseError(ParseError::Kind::malformed_line, line_no,
                             "line " + std::to_string(line_no) + ": bad score '" +
                                 std::string(fields[4]) + "'");
        if (out_of_range || !std::isfinite(score))
            throw ParseError(ParseError::Kind::non_finite_score, line_no,
                             "line " + std::to_string(line_no) + ": score '" +
                                 std::string(fields[4]) + "' is not a finite value");

        std::string query_id(fields[0]);
        std::string doc_id(fields[2]);
        std::string tag(fields[5]);
        if (!have_tag) {
            run.run_tag = tag;
            have_tag = true;
        } else if (tag != run.run_tag) {
            throw ParseError(ParseError::Kind::inconsistent_run_tag, line_no,
                             "line " + std::to_string(line_no) + ": run tag '" + tag +
                                 "' differs from '" + run.run_tag + "'");
        }
        if (!seen[query_id].insert(doc_id).second)
            throw ParseError(ParseError::Kind::duplicate_document, line_no,
                             "line " + std::to_string(line_no) + ": duplicate document '" +
                                 doc_id + "' for query '" + query_id + "'",
                             query_id, doc_id);
        by_query[query_id].push_back(DocScore{std::move(doc_id), 0, score});
    }

    for (auto& [query_id, entries] : by_query) {
        int cap = std::max(1000, static_cast<int>(entries.size()));
        run.lists.emplace(query_id, make_ranked_list(query_id, std::move(entries), cap));
    }
    return run;
}

Qrels parse_qrels(std::istream& in) {
    Qrels qrels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto fields = split_fields(line);
        if (fields.empty()) continue;
        if (fields.size() != 4)
            throw ParseError(ParseError::Kind::malformed_line, line_no,
                             "line " + std::to_string(line_no) + ": expected 4 fields, got " +
                                 std::to_string(fields.size()));
        int grade = 0;
        if (!parse_int(fields[3], grade))
            throw ParseError(ParseError::Kind::malformed_line, line_no,
                             "line " + std::to_string(line_no) + ": bad grade '" +
                                 std::string(fields[3]) + "'");
        std::string query_id(fields[0]);
        std::string doc_id(fields[2]);
        auto [it, inserted] = qrels.judgments[query_id].emplace(doc_id, grade);
        if (!inserted && it->second != grade)
            throw ParseError(ParseError::Kind::duplicate_judgment, line_no,
                             "line " + std::to_string(line_no) + ": conflicting grades for ('" +
                                 query_id + "', '" + doc_id + "')",
                             query_id, doc_id);
    }
    return qrels;
}

void write_run(const Run& run, std::ostream& out) {
    for (const auto& [query_id, list] : run.lists)
        for (const auto& e : list.entries)
            out << query_id << " Q0 " << e.doc_id << ' ' << e.rank << ' '
                << format_score(e.score) << ' ' << run.run_tag << '\n';
}

void write_qrels(const Qrels& qrels, std::ostream& out) {
    for (const auto& [query_id, docs] : qrels.judgments)
        for (const auto& [doc_id, grade] : docs)
            out << query_id << " 0 " << doc_id << ' ' << grade << '\n';
}

}  // namespace fuselab
