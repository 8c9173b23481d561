#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fuselab {

// One scored document inside a ranked list. doc_id is an opaque byte token
// (no whitespace), rank is 1-based, score must be finite.
struct DocScore {
    std::string doc_id;
    int rank = 0;
    double score = 0.0;

    friend bool operator==(const DocScore&, const DocScore&) = default;
};

// Canonical entry order: score descending, ties broken by doc_id in
// reverse lexicographic (byte-wise) order. This matches the de facto
// standard evaluation tool, so metric output stays comparable.
inline bool score_order(const DocScore& a, const DocScore& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id > b.doc_id;
}

// One query's ranking. Invariants: unique doc_ids, entries in score_order,
// ranks exactly 1..n, n <= depth. depth is a capacity bound (how long the
// list is allowed to grow), not part of value identity.
struct RankedList {
    std::string query_id;
    std::vector<DocScore> entries;
    int depth = 1000;

    friend bool operator==(const RankedList& a, const RankedList& b) {
        return a.query_id == b.query_id && a.entries == b.entries;
    }
};

// One retrieval strategy's output: a ranked list per query.
struct Run {
    std::string run_tag;
    std::map<std::string, RankedList> lists;  // query_id -> list

    friend bool operator==(const Run&, const Run&) = default;
};

// Graded relevance judgments. Grades <= 0 mean judged but not relevant.
struct Qrels {
    std::map<std::string, std::map<std::string, int>> judgments;  // query_id -> doc_id -> grade

    std::size_t size() const {
        std::size_t n = 0;
        for (const auto& [q, docs] : judgments) n += docs.size();
        return n;
    }

    friend bool operator==(const Qrels&, const Qrels&) = default;
};

// An operation that needs at least one input got none.
struct EmptyInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Sorts entries into canonical order, truncates to max_len and renumbers
// ranks 1..n. The one place list invariants are established.
RankedList make_ranked_list(std::string query_id, std::vector<DocScore> entries,
                            int max_len);

// Top-`depth` prefix of an already-canonical list; resulting capacity = depth.
RankedList truncated(const RankedList& list, int depth);

}  // namespace fuselab
