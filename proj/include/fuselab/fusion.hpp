#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fuselab/types.hpp"

namespace fuselab {

enum class FusionMethod { linear, combsum, combmnz, rrf, borda, condorcet, roundrobin };

enum class Normalization { none, minmax, zscore, rank };

const char* method_name(FusionMethod m);
std::optional<FusionMethod> method_from_name(std::string_view name);
const char* normalization_name(Normalization n);
std::optional<Normalization> normalization_from_name(std::string_view name);

struct WeightArityMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct FusionConfig {
    FusionMethod method = FusionMethod::linear;
    std::vector<double> weights;  // linear only; length must equal the list count
    int depth = 1000;             // per-list truncation before fusion
    std::optional<Normalization> normalization;  // unset -> method default
    double rrf_k = 60.0;
    std::optional<int> output_depth;  // unset -> depth

    // linear fuses raw scores as-is; combsum/combmnz follow the classical
    // min-max convention. Rank-only methods ignore normalization.
    Normalization effective_normalization() const {
        if (normalization) return *normalization;
        if (method == FusionMethod::combsum || method == FusionMethod::combmnz)
            return Normalization::minmax;
        return Normalization::none;
    }

    int effective_output_depth() const { return output_depth.value_or(depth); }

    // Throws std::invalid_argument on depth/rrf_k/weight violations.
    void validate() const;
};

// Same docs, same order; scores transformed. minmax: (s-min)/(max-min),
// all 1.0 when max==min. zscore: (s-mean)/stddev (population), all 0.0
// when stddev==0. rank: 1 - (rank-1)/list.depth. none: identity.
RankedList normalize_scores(const RankedList& list, Normalization norm);

// The paper's method: S_final(D) = sum_n alpha_n * S_n(D) over per-list
// (truncated, normalized) scores. A document absent from list n takes that
// list's backfill value: the score of its last-ranked document (the
// depth-th when full), or 0 for an empty list.
RankedList linear_fuse(std::span<const RankedList> lists, const FusionConfig& config);

// Equal-weight score sum; absent documents contribute 0 (no backfill).
RankedList comb_sum(std::span<const RankedList> lists, const FusionConfig& config);

// CombSum score times the number of lists containing the document.
RankedList comb_mnz(std::span<const RankedList> lists, const FusionConfig& config);

// S(D) = sum over lists containing D of 1/(rrf_k + rank_n(D)).
RankedList rrf_fuse(std::span<const RankedList> lists, const FusionConfig& config);

// Each list is extended to a full ranking of the candidate union U: a doc
// at rank r earns |U|-r+1 points, absent docs split the unfilled
// positions' points equally. Fused score = total points.
RankedList borda_fuse(std::span<const RankedList> lists, const FusionConfig& config);

// Pairwise-majority sort: d1 before d2 when more lists rank d1 above d2
// (absent docs rank below all present ones). Ties fall back to the smaller
// Borda-style rank sum, then reverse-lexicographic doc_id. Candidates are
// seeded in reverse-lexicographic order and ordered by a top-down stable
// merge over this comparator, so the output is a deterministic total
// order even when the majority relation has cycles. Scores are synthetic
// descending integers |U|..1.
RankedList condorcet_fuse(std::span<const RankedList> lists, const FusionConfig& config);

// Takes rank-1 docs of each list in input order, then rank-2, etc.,
// skipping docs already emitted. Synthetic descending scores.
RankedList round_robin_fuse(std::span<const RankedList> lists, const FusionConfig& config);

// Applies the configured per-query fusion over the union of query ids,
// with the same config for every query; a run missing a query contributes
// an empty list. Output run_tag is "fused-<method>".
Run fuse_runs(std::span<const Run> runs, const FusionConfig& config);

}  // namespace fuselab
