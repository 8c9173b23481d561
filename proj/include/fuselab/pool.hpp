#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>

#include "fuselab/metrics.hpp"
#include "fuselab/types.hpp"

namespace fuselab {

struct UnknownRunTag : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Judgment pool: per query, the union of the top-depth doc_ids of the
// contributing runs.
struct Pool {
    int depth = 0;
    std::map<std::string, std::set<std::string>> members;  // query_id -> doc_ids
    std::set<std::string> contributors;                    // run tags
};

Pool build_pool(std::span<const Run> runs, int depth);

// Models assessment as exact restriction of ground truth to the pool:
// keeps the (query, doc) judgments whose doc is pooled for that query.
Qrels simulate_qrels(const Pool& pool, const Qrels& oracle_qrels);

struct BiasRow {
    double metric_with_pool = 0.0;     // target evaluated with the full pool
    double metric_without_target = 0.0;  // pool rebuilt without the target run
    int judged_count_delta = 0;        // judged@depth count lost, always >= 0
};

struct BiasReport {
    std::string target_tag;
    int depth = 0;
    MetricSpec objective;
    std::map<std::string, BiasRow> per_query;
    double mean_with = 0.0;
    double mean_without = 0.0;
    double mean_delta = 0.0;
};

// Quantifies how much the target run depends on its own pool
// contribution: evaluates it against qrels restricted to the full pool
// and to the pool built from all other runs. Queries reported are those
// of the target run with at least one relevant judgment under the full
// pool; a query whose relevant docs all vanish from the reduced pool
// scores 0 there. When several runs carry the target tag only the first
// is held out.
BiasReport leave_one_out_bias(std::span<const Run> runs, std::string_view target_tag,
                              const Qrels& oracle_qrels, int depth,
                              const MetricSpec& objective);

// Drops unjudged docs from every list (ranks close up) before evaluating.
MetricReport condensed_eval(const Run& run, const Qrels& qrels,
                            std::span<const MetricSpec> metrics);

struct CollectionStats {
    int query_count = 0;        // queries with at least one judgment
    long judged_pairs = 0;      // total judgments
    int min_judgments_per_query = 0;
    double median_judgments_per_query = 0.0;
    double mean_judgments_per_query = 0.0;
    int max_judgments_per_query = 0;
    struct RunJudged {
        std::string run_tag;
        // Mean judged count at k over the run's queries that have judgments.
        double mean_judged_at_10 = 0.0;
        double mean_judged_at_20 = 0.0;
        double mean_judged_at_100 = 0.0;
    };
    std::vector<RunJudged> per_run;  // input order
};

CollectionStats collection_stats(std::span<const Run> runs, const Qrels& qrels);

// "query_id<TAB>doc_id" lines, both dimensions in lexicographic order.
void write_pool(const Pool& pool, std::ostream& out);

// Tab-separated with a one-line header; per-query rows then an "all" row.
void write_bias_report(const BiasReport& report, std::ostream& out);

// Tab-separated "stat / run_tag / value" rows with a one-line header.
void write_collection_stats(const CollectionStats& stats, std::ostream& out);

}  // namespace fuselab
