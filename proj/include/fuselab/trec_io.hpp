#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "fuselab/types.hpp"

namespace fuselab {

// Parse/serialization failure for TREC run and qrels files.
struct ParseError : std::runtime_error {
    enum class Kind {
        malformed_line,      // wrong field count, bad rank/score/grade token
        non_finite_score,    // score parsed to NaN/inf or overflowed
        duplicate_document,  // same (query_id, doc_id) twice in a run
        inconsistent_run_tag,
        duplicate_judgment,  // conflicting grades for one (query_id, doc_id)
    };

    ParseError(Kind k, std::size_t line, std::string msg,
               std::string query = {}, std::string doc = {})
        : std::runtime_error(std::move(msg)),
          kind(k),
          line_no(line),
          query_id(std::move(query)),
          doc_id(std::move(doc)) {}

    Kind kind;
    std::size_t line_no;  // 1-based; 0 when the error is not tied to a line
    std::string query_id;
    std::string doc_id;
};

// Reads a TREC run: per non-empty line exactly six whitespace-separated
// fields "query_id Q0 doc_id rank score run_tag" ("Q0" case-insensitive).
// Input ranks are discarded; lists are re-sorted by score and re-ranked.
// Input treated as raw bytes, inter-field whitespace is free-form.
Run parse_run(std::istream& in);

// Reads TREC qrels: per non-empty line "query_id iteration doc_id grade".
// The iteration field is ignored. Identical duplicate judgments collapse,
// conflicting ones raise duplicate_judgment.
Qrels parse_qrels(std::istream& in);

// Emits six-column lines, queries in lexicographic order, entries in rank
// order. Scores use the shortest representation that parses back to the
// same double, so parse_run(write_run(r)) == r and a second write is
// byte-identical.
void write_run(const Run& run, std::ostream& out);

// Four-column qrels lines, (query_id, doc_id) in lexicographic order.
void write_qrels(const Qrels& qrels, std::ostream& out);

// Shortest round-trip decimal form of a finite double.
std::string format_score(double value);

}  // namespace fuselab
