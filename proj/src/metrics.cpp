#include "fuselab/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "fuselab/trec_io.hpp"

namespace fuselab {

namespace {

double gain(int grade, bool exponential) {
    if (grade <= 0) return 0.0;
    return exponential ? std::exp2(static_cast<double>(grade)) - 1.0
                       : static_cast<double>(grade);
}

int grade_of(const QueryJudgments& judgments, const std::string& doc_id) {
    auto it = judgments.find(doc_id);
    return it != judgments.end() ? it->second : 0;
}

int relevant_total(const QueryJudgments& judgments) {
    int r = 0;
    for (const auto& [doc, grade] : judgments)
        if (grade >= 1) ++r;
    return r;
}

const char* kind_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::ndcg: return "ndcg";
        case MetricKind::ndcg_exp: return "ndcg_exp";
        case MetricKind::mrr: return "mrr";
        case MetricKind::recall: return "recall";
        case MetricKind::map: return "map";
        case MetricKind::judged: return "judged";
        case MetricKind::judged_count: return "judged_count";
    }
    return "?";
}

}  // namespace

std::string MetricSpec::name() const {
    std::string n = kind_name(kind);
    if (cutoff > 0) n += "@" + std::to_string(cutoff);
    return n;
}

MetricSpec parse_metric_spec(std::string_view text) {
    std::string_view base = text;
    int cutoff = 0;
    if (auto at = text.find('@'); at != std::string_view::npos) {
        base = text.substr(0, at);
        std::string_view num = text.substr(at + 1);
        auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), cutoff);
        if (ec != std::errc{} || ptr != num.data() + num.size() || cutoff < 1)
            throw UnknownMetric("bad metric cutoff in '" + std::string(text) + "'");
    }
    MetricKind kind;
    if (base == "ndcg")
        kind = MetricKind::ndcg;
    else if (base == "ndcg_exp")
        kind = MetricKind::ndcg_exp;
    else if (base == "mrr")
        kind = MetricKind::mrr;
    else if (base == "recall")
        kind = MetricKind::recall;
    else if (base == "map")
        kind = MetricKind::map;
    else if (base == "judged")
        kind = MetricKind::judged;
    else if (base == "judged_count")
        kind = MetricKind::judged_count;
    else
        throw UnknownMetric("unknown metric '" + std::string(text) + "'");
    if (kind != MetricKind::mrr && cutoff == 0)
        throw UnknownMetric("metric '" + std::string(text) + "' needs a cutoff, e.g. " +
                            std::string(base) + "@10");
    return MetricSpec{kind, cutoff};
}

std::vector<MetricSpec> parse_metric_list(std::string_view comma_separated) {
    std::vector<MetricSpec> specs;
    std::size_t pos = 0;
    while (pos <= comma_separated.size()) {
        std::size_t comma = comma_separated.find(',', pos);
        if (comma == std::string_view::npos) comma = comma_separated.size();
        std::string_view item = comma_separated.substr(pos, comma - pos);
        if (!item.empty()) specs.push_back(parse_metric_spec(item));
        pos = comma + 1;
    }
    return specs;
}

double ndcg_at_k(const RankedList& list, const QueryJudgments& judgments, int k,
                 bool exponential_gain) {
    const std::size_t depth = std::min<std::size_t>(list.entries.size(), k);
    double dcg = 0.0;
    for (std::size_t r = 1; r <= depth; ++r)
        dcg += gain(grade_of(judgments, list.entries[r - 1].doc_id), exponential_gain) /
               std::log2(static_cast<double>(r) + 1.0);

    std::vector<int> grades;
    grades.reserve(judgments.size());
    for (const auto& [doc, grade] : judgments) grades.push_back(grade);
    std::sort(grades.begin(), grades.end(), std::greater<>());
    double idcg = 0.0;
    const std::size_t ideal_depth = std::min<std::size_t>(grades.size(), k);
    for (std::size_t r = 1; r <= ideal_depth; ++r)
        idcg += gain(grades[r - 1], exponential_gain) / std::log2(static_cast<double>(r) + 1.0);

    return idcg > 0.0 ? dcg / idcg : 0.0;
}

double mrr(const RankedList& list, const QueryJudgments& judgments, int threshold,
           int cutoff) {
    std::size_t depth = list.entries.size();
    if (cutoff > 0) depth = std::min<std::size_t>(depth, cutoff);
    for (std::size_t r = 1; r <= depth; ++r)
        if (grade_of(judgments, list.entries[r - 1].doc_id) >= threshold)
            return 1.0 / static_cast<double>(r);
    return 0.0;
}

double recall_at_k(const RankedList& list, const QueryJudgments& judgments, int k) {
    const int total = relevant_total(judgments);
    if (total == 0) return 0.0;
    const std::size_t depth = std::min<std::size_t>(list.entries.size(), k);
    int hits = 0;
    for (std::size_t r = 0; r < depth; ++r)
        if (grade_of(judgments, list.entries[r].doc_id) >= 1) ++hits;
    return static_cast<double>(hits) / static_cast<double>(total);
}

double map_at_k(const RankedList& list, const QueryJudgments& judgments, int k) {
    const int total = relevant_total(judgments);
    if (total == 0) return 0.0;
    const std::size_t depth = std::min<std::size_t>(list.entries.size(), k);
    int hits = 0;
    double sum = 0.0;
    for (std::size_t r = 1; r <= depth; ++r)
        if (grade_of(judgments, list.entries[r - 1].doc_id) >= 1) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(r);
        }
    return sum / static_cast<double>(total);
}

JudgedAtK judged_at_k(const RankedList& list, const QueryJudgments& judgments, int k) {
    const std::size_t depth = std::min<std::size_t>(list.entries.size(), k);
    JudgedAtK result;
    for (std::size_t r = 0; r < depth; ++r)
        if (judgments.contains(list.entries[r].doc_id)) ++result.count;
    result.fraction = depth > 0 ? static_cast<double>(result.count) / static_cast<double>(depth)
                                : 0.0;
    return result;
}

double compute_metric(const MetricSpec& spec, const RankedList& list,
                      const QueryJudgments& judgments) {
    switch (spec.kind) {
        case MetricKind::ndcg: return ndcg_at_k(list, judgments, spec.cutoff);
        case MetricKind::ndcg_exp: return ndcg_at_k(list, judgments, spec.cutoff, true);
        case MetricKind::mrr: return mrr(list, judgments, 1, spec.cutoff);
        case MetricKind::recall: return recall_at_k(list, judgments, spec.cutoff);
        case MetricKind::map: return map_at_k(list, judgments, spec.cutoff);
        case MetricKind::judged: return judged_at_k(list, judgments, spec.cutoff).fraction;
        case MetricKind::judged_count:
            return static_cast<double>(judged_at_k(list, judgments, spec.cutoff).count);
    }
    throw std::logic_error("unreachable metric kind");
}

MetricReport evaluate(const Run& run, const Qrels& qrels, std::span<const MetricSpec> metrics) {
    MetricReport report;
    for (const auto& spec : metrics) {
        std::string n = spec.name();
        if (std::find(report.metric_names.begin(), report.metric_names.end(), n) ==
            report.metric_names.end())
            report.metric_names.push_back(std::move(n));
    }

    for (const auto& [query_id, list] : run.lists) {
        auto jt = qrels.judgments.find(query_id);
        if (jt == qrels.judgments.end() || relevant_total(jt->second) == 0) {
            report.skipped_query_ids.insert(query_id);
            continue;
        }
        auto& row = report.per_query[query_id];
        for (const auto& spec : metrics)
            row[spec.name()] = compute_metric(spec, list, jt->second);
        ++report.evaluated_query_count;
    }
    for (const auto& [query_id, judgments] : qrels.judgments)
        if (!report.per_query.contains(query_id)) report.skipped_query_ids.insert(query_id);

    for (const auto& name : report.metric_names) {
        double sum = 0.0;
        for (const auto& [query_id, row] : report.per_query) sum += row.at(name);
        report.means[name] =
            report.evaluated_query_count > 0 ? sum / report.evaluated_query_count : 0.0;
    }
    return report;
}

namespace {

std::string display_value(double v, bool percent) {
    return format_score(percent ? v * 100.0 : v);
}

std::string fixed_value(double v, bool percent) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(percent ? 2 : 4) << (percent ? v * 100.0 : v);
    return os.str();
}

}  // namespace

void write_report_tsv(const MetricReport& report, std::ostream& out, bool percent) {
    for (const auto& [query_id, row] : report.per_query)
        for (const auto& name : report.metric_names)
            out << query_id << '\t' << name << '\t' << display_value(row.at(name), percent)
                << '\n';
    for (const auto& name : report.metric_names)
        out << "all\t" << name << '\t' << display_value(report.means.at(name), percent) << '\n';
}

void write_report_table(const MetricReport& report, std::ostream& out, bool percent) {
    std::size_t qwidth = 5;  // "query"
    for (const auto& [query_id, row] : report.per_query)
        qwidth = std::max(qwidth, query_id.size());
    std::vector<std::size_t> widths;
    for (const auto& name : report.metric_names)
        widths.push_back(std::max<std::size_t>(name.size(), 8));

    out << std::left << std::setw(static_cast<int>(qwidth)) << "query";
    for (std::size_t i = 0; i < report.metric_names.size(); ++i)
        out << "  " << std::right << std::setw(static_cast<int>(widths[i]))
            << report.metric_names[i];
    out << '\n';

    auto emit_row = [&](const std::string& label, const std::map<std::string, double>& row) {
        out << std::left << std::setw(static_cast<int>(qwidth)) << label;
        for (std::size_t i = 0; i < report.metric_names.size(); ++i)
            out << "  " << std::right << std::setw(static_cast<int>(widths[i]))
                << fixed_value(row.at(report.metric_names[i]), percent);
        out << '\n';
    };
    for (const auto& [query_id, row] : report.per_query) emit_row(query_id, row);
    emit_row("all", report.means);
}

}  // namespace fuselab
