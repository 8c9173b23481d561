#pragma once

// Shared builders and randomized-instance generators for the test suites.

#include <algorithm>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fuselab/fusion.hpp"
#include "fuselab/metrics.hpp"
#include "fuselab/types.hpp"

namespace testsupport {

inline fuselab::RankedList list_of(std::string query_id,
                                   std::vector<std::pair<std::string, double>> docs,
                                   int depth = 1000) {
    std::vector<fuselab::DocScore> entries;
    entries.reserve(docs.size());
    for (auto& [doc, score] : docs)
        entries.push_back(fuselab::DocScore{std::move(doc), 0, score});
    return fuselab::make_ranked_list(std::move(query_id), std::move(entries), depth);
}

inline fuselab::Run run_of(std::string tag, std::vector<fuselab::RankedList> lists) {
    fuselab::Run run;
    run.run_tag = std::move(tag);
    for (auto& list : lists) {
        std::string q = list.query_id;
        run.lists.emplace(std::move(q), std::move(list));
    }
    return run;
}

inline std::vector<std::string> doc_universe(int size) {
    std::vector<std::string> docs;
    docs.reserve(size);
    for (int i = 0; i < size; ++i) {
        std::string id = "d";
        if (i < 10) id += '0';
        id += std::to_string(i);
        docs.push_back(std::move(id));
    }
    return docs;
}

struct FusionInstance {
    std::vector<fuselab::RankedList> lists;
    fuselab::FusionConfig config;
};

// Up to `max_lists` lists of up to `max_docs` docs over a shared 30-doc
// universe. Half of the scores are rounded to one decimal to provoke ties.
inline FusionInstance random_fusion_instance(std::mt19937& rng, int max_lists = 5,
                                             int max_docs = 20) {
    static const std::vector<std::string> universe = doc_universe(30);
    std::uniform_int_distribution<int> list_count(1, max_lists);
    std::uniform_int_distribution<int> list_len(0, max_docs);
    std::uniform_real_distribution<double> score(0.0, 100.0);
    std::bernoulli_distribution coarse(0.5);

    FusionInstance inst;
    const int k = list_count(rng);
    for (int n = 0; n < k; ++n) {
        std::vector<std::string> docs = universe;
        std::shuffle(docs.begin(), docs.end(), rng);
        const int len = list_len(rng);
        std::vector<std::pair<std::string, double>> scored;
        const bool tie_prone = coarse(rng);
        for (int i = 0; i < len; ++i) {
            double s = score(rng);
            if (tie_prone) s = std::round(s * 10.0) / 10.0;
            scored.emplace_back(docs[i], s);
        }
        inst.lists.push_back(list_of("q", std::move(scored)));
    }

    std::uniform_int_distribution<int> method_pick(0, 6);
    static const fuselab::FusionMethod methods[] = {
        fuselab::FusionMethod::linear,    fuselab::FusionMethod::combsum,
        fuselab::FusionMethod::combmnz,   fuselab::FusionMethod::rrf,
        fuselab::FusionMethod::borda,     fuselab::FusionMethod::condorcet,
        fuselab::FusionMethod::roundrobin};
    inst.config.method = methods[method_pick(rng)];
    inst.config.depth = std::uniform_int_distribution<int>(1, 25)(rng);
    if (std::bernoulli_distribution(0.5)(rng))
        inst.config.output_depth = std::uniform_int_distribution<int>(1, 30)(rng);
    std::uniform_int_distribution<int> norm_pick(0, 3);
    static const fuselab::Normalization norms[] = {
        fuselab::Normalization::none, fuselab::Normalization::minmax,
        fuselab::Normalization::zscore, fuselab::Normalization::rank};
    if (std::bernoulli_distribution(0.7)(rng))
        inst.config.normalization = norms[norm_pick(rng)];
    inst.config.rrf_k = std::uniform_real_distribution<double>(0.5, 100.0)(rng);
    if (inst.config.method == fuselab::FusionMethod::linear) {
        std::uniform_real_distribution<double> weight(0.0, 3.0);
        inst.config.weights.resize(k);
        double total = 0.0;
        for (double& w : inst.config.weights) {
            w = weight(rng);
            total += w;
        }
        if (total == 0.0) inst.config.weights[0] = 0.5;
    }
    return inst;
}

struct MetricInstance {
    fuselab::RankedList list;
    fuselab::QueryJudgments judgments;
};

// A ranked list of up to 30 docs and up to 30 judgments over a 40-doc
// universe, grades -1..3 so judged-non-relevant paths get exercised.
inline MetricInstance random_metric_instance(std::mt19937& rng) {
    static const std::vector<std::string> universe = doc_universe(40);
    MetricInstance inst;

    std::vector<std::string> docs = universe;
    std::shuffle(docs.begin(), docs.end(), rng);
    const int len = std::uniform_int_distribution<int>(0, 30)(rng);
    std::uniform_real_distribution<double> score(0.0, 10.0);
    std::vector<std::pair<std::string, double>> scored;
    for (int i = 0; i < len; ++i) scored.emplace_back(docs[i], score(rng));
    inst.list = list_of("q", std::move(scored));

    std::vector<std::string> judged = universe;
    std::shuffle(judged.begin(), judged.end(), rng);
    const int judgments = std::uniform_int_distribution<int>(0, 30)(rng);
    std::uniform_int_distribution<int> grade(-1, 3);
    for (int i = 0; i < judgments; ++i) inst.judgments[judged[i]] = grade(rng);
    return inst;
}

}  // namespace testsupport
