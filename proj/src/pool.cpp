#include "fuselab/pool.hpp"

#include <algorithm>
#include <ostream>

#include "fuselab/trec_io.hpp"

namespace fuselab {

namespace {

Pool pool_of(std::span<const Run> runs, int depth) {
    Pool pool;
    pool.depth = depth;
    for (const auto& run : runs) {
        pool.contributors.insert(run.run_tag);
        for (const auto& [query_id, list] : run.lists) {
            auto& members = pool.members[query_id];
            const auto n = std::min<std::size_t>(list.entries.size(),
                                                 static_cast<std::size_t>(depth));
            for (std::size_t i = 0; i < n; ++i) members.insert(list.entries[i].doc_id);
        }
    }
    return pool;
}

}  // namespace

Pool build_pool(std::span<const Run> runs, int depth) {
    if (runs.empty()) throw EmptyInput("build_pool: no input runs");
    if (depth < 1) throw std::invalid_argument("pool depth must be >= 1");
    return pool_of(runs, depth);
}

Qrels simulate_qrels(const Pool& pool, const Qrels& oracle_qrels) {
    Qrels restricted;
    for (const auto& [query_id, docs] : oracle_qrels.judgments) {
        auto mt = pool.members.find(query_id);
        if (mt == pool.members.end()) continue;
        for (const auto& [doc_id, grade] : docs)
            if (mt->second.contains(doc_id)) restricted.judgments[query_id][doc_id] = grade;
    }
    return restricted;
}

BiasReport leave_one_out_bias(std::span<const Run> runs, std::string_view target_tag,
                              const Qrels& oracle_qrels, int depth,
                              const MetricSpec& objective) {
    std::size_t target = runs.size();
    for (std::size_t i = 0; i < runs.size(); ++i)
        if (runs[i].run_tag == target_tag) {
            target = i;
            break;
        }
    if (target == runs.size())
        throw UnknownRunTag("no run tagged '" + std::string(target_tag) + "'");

    const Qrels full = simulate_qrels(build_pool(runs, depth), oracle_qrels);
    std::vector<Run> others;
    others.reserve(runs.size() - 1);
    for (std::size_t i = 0; i < runs.size(); ++i)
        if (i != target) others.push_back(runs[i]);
    const Qrels reduced =
        others.empty() ? Qrels{} : simulate_qrels(pool_of(others, depth), oracle_qrels);

    static const QueryJudgments kNoJudgments;
    BiasReport report;
    report.target_tag = std::string(target_tag);
    report.depth = depth;
    report.objective = objective;
    for (const auto& [query_id, list] : runs[target].lists) {
        auto ft = full.judgments.find(query_id);
        if (ft == full.judgments.end()) continue;
        bool any_relevant = false;
        for (const auto& [doc, grade] : ft->second)
            if (grade >= 1) any_relevant = true;
        if (!any_relevant) continue;

        auto rt = reduced.judgments.find(query_id);
        const QueryJudgments& loo = rt != reduced.judgments.end() ? rt->second : kNoJudgments;

        BiasRow row;
        row.metric_with_pool = compute_metric(objective, list, ft->second);
        row.metric_without_target = compute_metric(objective, list, loo);
        row.judged_count_delta =
            judged_at_k(list, ft->second, depth).count - judged_at_k(list, loo, depth).count;
        report.per_query.emplace(query_id, row);
    }

    if (!report.per_query.empty()) {
        for (const auto& [query_id, row] : report.per_query) {
            report.mean_with += row.metric_with_pool;
            report.mean_without += row.metric_without_target;
            report.mean_delta += row.judged_count_delta;
        }
        const double n = static_cast<double>(report.per_query.size());
        report.mean_with /= n;
        report.mean_without /= n;
        report.mean_delta /= n;
    }
    return report;
}

MetricReport condensed_eval(const Run& run, const Qrels& qrels,
                            std::span<const MetricSpec> metrics) {
    Run condensed;
    condensed.run_tag = run.run_tag;
    for (const auto& [query_id, list] : run.lists) {
        RankedList kept{query_id, {}, list.depth};
        auto jt = qrels.judgments.find(query_id);
        if (jt != qrels.judgments.end())
            for (const auto& e : list.entries)
                if (jt->second.contains(e.doc_id)) {
                    kept.entries.push_back(e);
                    kept.entries.back().rank = static_cast<int>(kept.entries.size());
                }
        condensed.lists.emplace(query_id, std::move(kept));
    }
    return evaluate(condensed, qrels, metrics);
}

CollectionStats collection_stats(std::span<const Run> runs, const Qrels& qrels) {
    CollectionStats stats;
    std::vector<int> per_query;
    for (const auto& [query_id, docs] : qrels.judgments) {
        per_query.push_back(static_cast<int>(docs.size()));
        stats.judged_pairs += static_cast<long>(docs.size());
    }
    stats.query_count = static_cast<int>(per_query.size());
    if (!per_query.empty()) {
        std::sort(per_query.begin(), per_query.end());
        stats.min_judgments_per_query = per_query.front();
        stats.max_judgments_per_query = per_query.back();
        stats.mean_judgments_per_query =
            static_cast<double>(stats.judged_pairs) / static_cast<double>(per_query.size());
        const std::size_t mid = per_query.size() / 2;
        stats.median_judgments_per_query =
            per_query.size() % 2 == 1
                ? per_query[mid]
                : (per_query[mid - 1] + per_query[mid]) / 2.0;
    }

    for (const auto& run : runs) {
        CollectionStats::RunJudged row;
        row.run_tag = run.run_tag;
        int queries = 0;
        long at10 = 0, at20 = 0, at100 = 0;
        for (const auto& [query_id, list] : run.lists) {
            auto jt = qrels.judgments.find(query_id);
            if (jt == qrels.judgments.end()) continue;
            ++queries;
            at10 += judged_at_k(list, jt->second, 10).count;
            at20 += judged_at_k(list, jt->second, 20).count;
            at100 += judged_at_k(list, jt->second, 100).count;
        }
        if (queries > 0) {
            row.mean_judged_at_10 = static_cast<double>(at10) / queries;
            row.mean_judged_at_20 = static_cast<double>(at20) / queries;
            row.mean_judged_at_100 = static_cast<double>(at100) / queries;
        }
        stats.per_run.push_back(std::move(row));
    }
    return stats;
}

void write_pool(const Pool& pool, std::ostream& out) {
    for (const auto& [query_id, docs] : pool.members)
        for (const auto& doc_id : docs) out << query_id << '\t' << doc_id << '\n';
}

void write_bias_report(const BiasReport& report, std::ostream& out) {
    out << "query_id\t" << report.objective.name() << "_with_pool\t"
        << report.objective.name() << "_without_" << report.target_tag
        << "\tjudged_count_delta\n";
    for (const auto& [query_id, row] : report.per_query)
        out << query_id << '\t' << format_score(row.metric_with_pool) << '\t'
            << format_score(row.metric_without_target) << '\t' << row.judged_count_delta
            << '\n';
    out << "all\t" << format_score(report.mean_with) << '\t'
        << format_score(report.mean_without) << '\t' << format_score(report.mean_delta) << '\n';
}

void write_collection_stats(const CollectionStats& stats, std::ostream& out) {
    out << "stat\trun_tag\tvalue\n";
    out << "query_count\t-\t" << stats.query_count << '\n';
    out << "judged_pairs\t-\t" << stats.judged_pairs << '\n';
    out << "judgments_per_query_min\t-\t" << stats.min_judgments_per_query << '\n';
    out << "judgments_per_query_median\t-\t" << format_score(stats.median_judgments_per_query)
        << '\n';
    out << "judgments_per_query_mean\t-\t" << format_score(stats.mean_judgments_per_query)
        << '\n';
    out << "judgments_per_query_max\t-\t" << stats.max_judgments_per_query << '\n';
    for (const auto& row : stats.per_run) {
        out << "mean_judged@10\t" << row.run_tag << '\t' << format_score(row.mean_judged_at_10)
            << '\n';
        out << "mean_judged@20\t" << row.run_tag << '\t' << format_score(row.mean_judged_at_20)
            << '\n';
        out << "mean_judged@100\t" << row.run_tag << '\t'
            << format_score(row.mean_judged_at_100) << '\n';
    }
}

}  // namespace fuselab
