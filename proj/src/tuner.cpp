#include "fuselab/tuner.hpp"

#include <cmath>
#include <ostream>

#include "fuselab/trec_io.hpp"

namespace fuselab {

int GridSpec::resolution() const {
    if (!(step > 0.0) || step > 1.0)
        throw InvalidGridStep("grid step must lie in (0, 1], got " + format_score(step));
    const double inv = 1.0 / step;
    const double rounded = std::round(inv);
    if (std::abs(inv - rounded) > 1e-9 * rounded)
        throw InvalidGridStep("1/step must be an integer so the grid closes exactly, got step " +
                              format_score(step));
    return static_cast<int>(rounded);
}

std::vector<std::vector<double>> simplex_lattice(int num_weights, int resolution) {
    std::vector<std::vector<double>> points;
    std::vector<int> counts(num_weights, 0);
    // Ascending lexicographic enumeration of (m_1..m_K), sum = resolution.
    auto recurse = [&](auto&& self, int index, int remaining) -> void {
        if (index == num_weights - 1) {
            counts[index] = remaining;
            std::vector<double> weights(num_weights);
            for (int i = 0; i < num_weights; ++i)
                weights[i] = static_cast<double>(counts[i]) / resolution;
            points.push_back(std::move(weights));
            return;
        }
        for (int m = 0; m <= remaining; ++m) {
            counts[index] = m;
            self(self, index + 1, remaining - m);
        }
    };
    recurse(recurse, 0, resolution);
    return points;
}

TuneReport grid_search(std::span<const Run> runs, const Qrels& qrels, const GridSpec& grid,
                       const FusionConfig& fusion_base) {
    if (runs.size() < 2)
        throw EmptyInput("grid_search: need at least two runs, got " +
                         std::to_string(runs.size()));
    const int resolution = grid.resolution();

    FusionConfig config = fusion_base;
    config.method = FusionMethod::linear;

    TuneReport report;
    report.objective = grid.objective;
    const MetricSpec specs[] = {grid.objective};

    bool first = true;
    for (auto& weights : simplex_lattice(static_cast<int>(runs.size()), resolution)) {
        config.weights = weights;
        Run fused = fuse_runs(runs, config);
        MetricReport eval = evaluate(fused, qrels, specs);
        if (first && eval.evaluated_query_count == 0)
            throw NoEvaluableQueries(
                "grid_search: no query is present in the runs and judged relevant");
        first = false;
        const double value = eval.means.at(grid.objective.name());
        if (report.trials.empty() || value > report.best_score) {
            report.best_score = value;
            report.best_weights = weights;
        }
        report.trials.push_back(TuneTrial{std::move(weights), value});
    }
    return report;
}

namespace {

std::string weights_csv(const std::vector<double>& weights) {
    std::string s;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (i > 0) s += ',';
        s += format_score(weights[i]);
    }
    return s;
}

}  // namespace

void write_tune_report(const TuneReport& report, std::ostream& out) {
    out << "# objective\t" << report.objective.name() << '\n';
    out << "# best\t" << weights_csv(report.best_weights) << '\t'
        << format_score(report.best_score) << '\n';
    for (const auto& trial : report.trials)
        out << weights_csv(trial.weights) << '\t' << format_score(trial.value) << '\n';
}

}  // namespace fuselab
