#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fuselab/types.hpp"

namespace fuselab {

struct UnknownMetric : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class MetricKind { ndcg, ndcg_exp, mrr, recall, map, judged, judged_count };

// A metric plus cutoff, e.g. "ndcg@5", "map@1000", bare "mrr" (full-depth).
struct MetricSpec {
    MetricKind kind = MetricKind::ndcg;
    int cutoff = 0;  // 0 = no cutoff (mrr only)

    std::string name() const;

    friend bool operator==(const MetricSpec&, const MetricSpec&) = default;
};

// Accepts ndcg@k, ndcg_exp@k, recall@k, map@k, judged@k, judged_count@k,
// mrr and mrr@k. Throws UnknownMetric otherwise.
MetricSpec parse_metric_spec(std::string_view text);
std::vector<MetricSpec> parse_metric_list(std::string_view comma_separated);

// Judgments for one query: doc_id -> grade.
using QueryJudgments = std::map<std::string, int>;

// DCG@k with linear gain max(grade, 0) and 1/log2(rank+1) discount,
// normalized by the ideal DCG over this query's judged grades. 0 when the
// query has no positive grade.
double ndcg_at_k(const RankedList& list, const QueryJudgments& judgments, int k,
                 bool exponential_gain = false);

// Reciprocal rank of the first doc with grade >= threshold at rank <=
// cutoff; cutoff 0 means the whole list.
double mrr(const RankedList& list, const QueryJudgments& judgments, int threshold = 1,
           int cutoff = 0);

// Relevant (grade >= 1) docs in the top k over all relevant docs judged
// for the query; 0 when the query has none.
double recall_at_k(const RankedList& list, const QueryJudgments& judgments, int k);

// Mean over the query's R relevant docs of precision at their ranks,
// counting only ranks <= k; R is not capped at k.
double map_at_k(const RankedList& list, const QueryJudgments& judgments, int k);

struct JudgedAtK {
    double fraction = 0.0;  // count / min(k, list length); 0 for an empty list
    int count = 0;          // top-k docs judged with any grade, including <= 0
};
JudgedAtK judged_at_k(const RankedList& list, const QueryJudgments& judgments, int k);

double compute_metric(const MetricSpec& spec, const RankedList& list,
                      const QueryJudgments& judgments);

struct MetricReport {
    std::vector<std::string> metric_names;  // column order as requested
    std::map<std::string, std::map<std::string, double>> per_query;
    std::map<std::string, double> means;  // over evaluated queries only
    int evaluated_query_count = 0;
    std::set<std::string> skipped_query_ids;
};

// Evaluates every query present in both run and qrels with at least one
// relevant doc; all other queries of either side land in
// skipped_query_ids. Means are arithmetic over the evaluated queries.
MetricReport evaluate(const Run& run, const Qrels& qrels, std::span<const MetricSpec> metrics);

// Machine-readable lines "query_id<TAB>metric<TAB>value", queries in
// lexicographic order then one "all" line per metric mean. Values use
// shortest round-trip formatting; percent multiplies by 100.
void write_report_tsv(const MetricReport& report, std::ostream& out, bool percent = false);

// Aligned human-readable table, 4 decimals (2 with percent).
void write_report_table(const MetricReport& report, std::ostream& out, bool percent = false);

}  // namespace fuselab
