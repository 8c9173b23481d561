#include "fuselab/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

namespace fuselab {

namespace {

constexpr int kAbsent = std::numeric_limits<int>::max();

struct PreparedQuery {
    std::vector<RankedList> lists;
    // doc -> score / rank per list; views point into `lists`.
    std::vector<std::unordered_map<std::string_view, double>> scores;
    std::vector<std::unordered_map<std::string_view, int>> ranks;
    std::vector<std::string_view> candidates;  // first-appearance order
};

PreparedQuery prepare(std::span<const RankedList> lists, const FusionConfig& config,
                      bool normalize) {
    PreparedQuery prep;
    prep.lists.reserve(lists.size());
    const Normalization norm = config.effective_normalization();
    for (const auto& list : lists) {
        if (list.query_id != lists.front().query_id)
            throw std::invalid_argument("fusion inputs must share one query id");
        RankedList cut = truncated(list, config.depth);
        prep.lists.push_back(normalize ? normalize_scores(cut, norm) : std::move(cut));
    }
    std::unordered_set<std::string_view> seen;
    for (const auto& list : prep.lists) {
        auto& score_map = prep.scores.emplace_back();
        auto& rank_map = prep.ranks.emplace_back();
        score_map.reserve(list.entries.size());
        rank_map.reserve(list.entries.size());
        for (const auto& e : list.entries) {
            std::string_view doc = e.doc_id;
            score_map.emplace(doc, e.score);
            rank_map.emplace(doc, e.rank);
            if (seen.insert(doc).second) prep.candidates.push_back(doc);
        }
    }
    return prep;
}

RankedList assemble(const std::string& query_id,
                    const std::vector<std::string_view>& docs,
                    const std::vector<double>& scores, const FusionConfig& config) {
    std::vector<DocScore> entries;
    entries.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i)
        entries.push_back(DocScore{std::string(docs[i]), 0, scores[i]});
    return make_ranked_list(query_id, std::move(entries), config.effective_output_depth());
}

void require_nonempty(std::span<const RankedList> lists, const char* op) {
    if (lists.empty()) throw EmptyInput(std::string(op) + ": no input lists");
}

// Stable top-down merge sort. The Condorcet comparator is not a strict
// weak ordering when the majority relation cycles, so std::sort and
// std::stable_sort are off-limits; an explicit merge is well defined for
// any total comparator.
template <typename T, typename Comp>
void stable_merge_sort(std::vector<T>& v, std::size_t lo, std::size_t hi, Comp comp,
                       std::vector<T>& scratch) {
    if (hi - lo < 2) return;
    const std::size_t mid = lo + (hi - lo) / 2;
    stable_merge_sort(v, lo, mid, comp, scratch);
    stable_merge_sort(v, mid, hi, comp, scratch);
    scratch.clear();
    std::size_t i = lo, j = mid;
    while (i < mid && j < hi) {
        if (comp(v[j], v[i]))
            scratch.push_back(v[j++]);
        else
            scratch.push_back(v[i++]);
    }
    while (i < mid) scratch.push_back(v[i++]);
    while (j < hi) scratch.push_back(v[j++]);
    std::copy(scratch.begin(), scratch.end(), v.begin() + lo);
}

}  // namespace

const char* method_name(FusionMethod m) {
    switch (m) {
        case FusionMethod::linear: return "linear";
        case FusionMethod::combsum: return "combsum";
        case FusionMethod::combmnz: return "combmnz";
        case FusionMethod::rrf: return "rrf";
        case FusionMethod::borda: return "borda";
        case FusionMethod::condorcet: return "condorcet";
        case FusionMethod::roundrobin: return "roundrobin";
    }
    return "?";
}

std::optional<FusionMethod> method_from_name(std::string_view name) {
    for (FusionMethod m : {FusionMethod::linear, FusionMethod::combsum, FusionMethod::combmnz,
                           FusionMethod::rrf, FusionMethod::borda, FusionMethod::condorcet,
                           FusionMethod::roundrobin})
        if (name == method_name(m)) return m;
    return std::nullopt;
}

const char* normalization_name(Normalization n) {
    switch (n) {
        case Normalization::none: return "none";
        case Normalization::minmax: return "minmax";
        case Normalization::zscore: return "zscore";
        case Normalization::rank: return "rank";
    }
    return "?";
}

std::optional<Normalization> normalization_from_name(std::string_view name) {
    for (Normalization n : {Normalization::none, Normalization::minmax, Normalization::zscore,
                            Normalization::rank})
        if (name == normalization_name(n)) return n;
    return std::nullopt;
}

void FusionConfig::validate() const {
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    if (!(rrf_k > 0.0)) throw std::invalid_argument("rrf_k must be > 0");
    if (output_depth && *output_depth < 1)
        throw std::invalid_argument("output_depth must be >= 1");
    bool any_positive = false;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0)
            throw std::invalid_argument("weights must be finite and non-negative");
        if (w > 0.0) any_positive = true;
    }
    if (method == FusionMethod::linear && !weights.empty() && !any_positive)
        throw std::invalid_argument("at least one linear weight must be positive");
}

RankedList normalize_scores(const RankedList& list, Normalization norm) {
    RankedList out = list;
    if (out.entries.empty() || norm == Normalization::none) return out;
    switch (norm) {
        case Normalization::none:
            break;
        case Normalization::minmax: {
            const double max = out.entries.front().score;
            const double min = out.entries.back().score;
            if (max == min) {
                for (auto& e : out.entries) e.score = 1.0;
            } else {
                for (auto& e : out.entries) e.score = (e.score - min) / (max - min);
            }
            break;
        }
        case Normalization::zscore: {
            const double n = static_cast<double>(out.entries.size());
            double mean = 0.0;
            for (const auto& e : out.entries) mean += e.score;
            mean /= n;
            double var = 0.0;
            for (const auto& e : out.entries) var += (e.score - mean) * (e.score - mean);
            var /= n;
            const double sd = std::sqrt(var);
            if (sd == 0.0) {
                for (auto& e : out.entries) e.score = 0.0;
            } else {
                for (auto& e : out.entries) e.score = (e.score - mean) / sd;
            }
            break;
        }
        case Normalization::rank: {
            const double depth = static_cast<double>(out.depth);
            for (auto& e : out.entries)
                e.score = 1.0 - static_cast<double>(e.rank - 1) / depth;
            break;
        }
    }
    return out;
}

RankedList linear_fuse(std::span<const RankedList> lists, const FusionConfig& config) {
    require_nonempty(lists, "linear_fuse");
    config.validate();
    if (config.weights.size() != lists.size())
        throw WeightArityMismatch("linear_fuse: " + std::to_string(config.weights.size()) +
                                  " weights for " + std::to_string(lists.size()) + " lists");
    auto prep = prepare(lists, config, /*normalize=*/true);

    std::vector<double> backfill(prep.lists.size());
    for (std::size_t n = 0; n < prep.lists.size(); ++n)
        backfill[n] = prep.lists[n].entries.empty() ? 0.0 : prep.lists[n].entries.back().score;

    std::vector<double> fused(prep.candidates.size(), 0.0);
    for (std::size_t i = 0; i < prep.candidates.size(); ++i) {
        double s = 0.0;
        for (std::size_t n = 0; n < prep.lists.size(); ++n) {
            auto it = prep.scores[n].find(prep.candidates[i]);
            s += config.weights[n] * (it != prep.scores[n].end() ? it->second : backfill[n]);
        }
        fused[i] = s;
    }
    return assemble(lists.front().query_id, prep.candidates, fused, config);
}

RankedList comb_sum(std::span<const RankedList> lists, const FusionConfig& config) {
    require_nonempty(lists, "comb_sum");
    config.validate();
    auto prep = prepare(lists, config, /*normalize=*/true);
    std::vector<double> fused(prep.candidates.size(), 0.0);
    for (std::size_t i = 0; i < prep.candidates.size(); ++i) {
        double s = 0.0;
        for (std::size_t n = 0; n < prep.lists.size(); ++n) {
            auto it = prep.scores[n].find(prep.candidates[i]);
            if (it != prep.scores[n].end()) s += it->second;
        }
        fused[i] = s;
    }
    return assemble(lists.front().query_id, prep.candidates, fused, config);
}

RankedList comb_mnz(std::span<const RankedList> lists, const FusionConfig& config) {
    require_nonempty(lists, "comb_mnz");
    config.validate();
    auto prep = prepare(lists, config, /*normalize=*/true);
    std::vector<double> fused(prep.candidates.size(), 0.0);
    for (std::size_t i = 0; i < prep.candidates.size(); ++i) {
        double s = 0.0;
        int hits = 0;
        for (std::size_t n = 0; n < prep.lists.size(); ++n) {
            auto it = prep.scores[n].find(prep.candidates[i]);
            if (it != prep.scores[n].end()) {
                s += it->second;
                ++hits;
            }
        }
        fused[i] = s * hits;
    }
    return assemble(lists.front().query_id, prep.candidates, fused, config);
}

RankedList rrf_fuse(std::span<const RankedList> lists, const FusionConfig& config) {
    require_nonempty(lists, "rrf_fuse");
    config.validate();
    auto prep = prepare(lists, config, /*normalize=*/false);
    std::vector<double> fused(prep.candidates.size(), 0.0);
    for (std::size_t i = 0; i < prep.candidates.size(); ++i) {
        double s = 0.0;
        for (std::size_t n = 0; n < prep.lists.size(); ++n) {
            auto it = prep.ranks[n].find(prep.candidates[i]);
            if (it != prep.ranks[n].end()) s += 1.0 / (config.rrf_k + it->second);
        }
        fused[i] = s;
    }
    return assemble(lists.front().query_id, prep.candidates, fused, config);
}

RankedList borda_fuse(std::span<const RankedList> lists, const FusionConfig& config) {
    require_nonempty(lists, "borda_fuse");
    config.validate();
    auto prep = prepare(lists, config, /*normalize=*/false);
    const double universe = static_cast<double>(prep.candidates.size());
    std::vector<double> fused(prep.candidates.size(), 0.0);
    for (std::size_t n = 0; n < prep.lists.size(); ++n) {
        const double len = static_cast<double>(prep.lists[n].entries.size());
        // Unfilled positions len+1..|U| hold points 1..|U|-len; absent docs
        // each take the average, keeping the per-list total at |U|(|U|+1)/2.
        const double absent_points = (universe - len + 1.0) / 2.0;
        for (std::size_t i = 0; i < prep.candidates.size(); ++i) {
            auto it = prep.ranks[n].find(prep.candidates[i]);
            fused[i] += it != prep.ranks[n].end() ? universe - it->second + 1.0 : absent_points;
        }
    }
    return assemble(lists.front().query_id, prep.candidates, fused, config);
}

RankedList condorcet_fuse(std::span<const RankedList> lists, const FusionConfig& config) {
    require_nonempty(lists, "condorcet_fuse");
    config.validate();
    auto prep = prepare(lists, config, /*normalize=*/false);

    std::vector<std::string_view> order = prep.candidates;
    std::sort(order.begin(), order.end(), std::greater<>());
    const double universe = static_cast<double>(order.size());

    std::unordered_map<std::string_view, double> borda_rank_sum;
    borda_rank_sum.reserve(order.size());
    for (std::string_view doc : order) {
        double sum = 0.0;
        for (std::size_t n = 0; n < prep.lists.size(); ++n) {
            auto it = prep.ranks[n].find(doc);
            const double len = static_cast<double>(prep.lists[n].entries.size());
            sum += it != prep.ranks[n].end() ? it->second : (len + 1.0 + universe) / 2.0;
        }
        borda_rank_sum.emplace(doc, sum);
    }

    auto precedes = [&](std::string_view a, std::string_view b) {
        int wins_a = 0, wins_b = 0;
        for (std::size_t n = 0; n < prep.lists.size(); ++n) {
            auto ia = prep.ranks[n].find(a);
            auto ib = prep.ranks[n].find(b);
            const int ra = ia != prep.ranks[n].end() ? ia->second : kAbsent;
            const int rb = ib != prep.ranks[n].end() ? ib->second : kAbsent;
            if (ra < rb)
                ++wins_a;
            else if (rb < ra)
                ++wins_b;
        }
        if (wins_a != wins_b) return wins_a > wins_b;
        if (borda_rank_sum.at(a) != borda_rank_sum.at(b))
            return borda_rank_sum.at(a) < borda_rank_sum.at(b);
        return a > b;
    };
    std::vector<std::string_view> scratch;
    scratch.reserve(order.size());
    stable_merge_sort(order, 0, order.size(), precedes, scratch);

    std::vector<double> fused(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) fused[i] = universe - static_cast<double>(i);
    return assemble(lists.front().query_id, order, fused, config);
}

RankedList round_robin_fuse(std::span<const RankedList> lists, const FusionConfig& config) {
    require_nonempty(lists, "round_robin_fuse");
    config.validate();
    auto prep = prepare(lists, config, /*normalize=*/false);

    std::vector<std::string_view> emitted;
    emitted.reserve(prep.candidates.size());
    std::unordered_set<std::string_view> seen;
    std::size_t longest = 0;
    for (const auto& list : prep.lists) longest = std::max(longest, list.entries.size());
    for (std::size_t r = 0; r < longest; ++r)
        for (const auto& list : prep.lists)
            if (r < list.entries.size()) {
                std::string_view doc = list.entries[r].doc_id;
                if (seen.insert(doc).second) emitted.push_back(doc);
            }

    std::vector<double> fused(emitted.size());
    for (std::size_t i = 0; i < emitted.size(); ++i)
        fused[i] = static_cast<double>(emitted.size() - i);
    return assemble(lists.front().query_id, emitted, fused, config);
}

namespace {

RankedList fuse_query(std::span<const RankedList> lists, const FusionConfig& config) {
    switch (config.method) {
        case FusionMethod::linear: return linear_fuse(lists, config);
        case FusionMethod::combsum: return comb_sum(lists, config);
        case FusionMethod::combmnz: return comb_mnz(lists, config);
        case FusionMethod::rrf: return rrf_fuse(lists, config);
        case FusionMethod::borda: return borda_fuse(lists, config);
        case FusionMethod::condorcet: return condorcet_fuse(lists, config);
        case FusionMethod::roundrobin: return round_robin_fuse(lists, config);
    }
    throw std::logic_error("unreachable fusion method");
}

}  // namespace

Run fuse_runs(std::span<const Run> runs, const FusionConfig& config) {
    if (runs.empty()) throw EmptyInput("fuse_runs: no input runs");
    config.validate();

    std::set<std::string> query_ids;
    for (const auto& run : runs)
        for (const auto& [q, list] : run.lists) query_ids.insert(q);

    Run fused;
    fused.run_tag = std::string("fused-") + method_name(config.method);
    for (const auto& q : query_ids) {
        std::vector<RankedList> lists;
        lists.reserve(runs.size());
        for (const auto& run : runs) {
            auto it = run.lists.find(q);
            lists.push_back(it != run.lists.end() ? it->second
                                                  : RankedList{q, {}, config.depth});
        }
        fused.lists.emplace(q, fuse_query(lists, config));
    }
    return fused;
}

}  // namespace fuselab
