#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "fuselab/fusion.hpp"
#include "fuselab/metrics.hpp"
#include "fuselab/types.hpp"

namespace fuselab {

struct InvalidGridStep : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NoEvaluableQueries : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Simplex lattice search: weights alpha_n = m_n * step with sum 1. Scaling
// invariance of the linear combination makes the sum-to-1 restriction lossless.
struct GridSpec {
    double step = 0.1;  // 1/step must be a positive integer
    MetricSpec objective{MetricKind::ndcg, 5};

    // Lattice resolution 1/step; throws InvalidGridStep when the grid
    // does not close exactly or step is outside (0, 1].
    int resolution() const;
};

struct TuneTrial {
    std::vector<double> weights;
    double value = 0.0;
};

struct TuneReport {
    std::vector<double> best_weights;  // first maximizer in lexicographic grid order
    double best_score = 0.0;
    std::vector<TuneTrial> trials;  // in lexicographic grid order
    MetricSpec objective;
};

// Enumerates every lattice point in ascending lexicographic order, fuses
// the runs with those linear weights (other knobs from fusion_base), and
// records the mean objective over the evaluable queries.
TuneReport grid_search(std::span<const Run> runs, const Qrels& qrels, const GridSpec& grid,
                       const FusionConfig& fusion_base);

// All weight vectors on the simplex lattice, ascending lexicographic.
std::vector<std::vector<double>> simplex_lattice(int num_weights, int resolution);

// Header naming the best point, then one "w1,...,wK<TAB>value" line per trial.
void write_tune_report(const TuneReport& report, std::ostream& out);

}  // namespace fuselab
