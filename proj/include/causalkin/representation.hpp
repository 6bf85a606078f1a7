#pragma once

#include <vector>

#include "causalkin/config.hpp"
#include "causalkin/types.hpp"

namespace causalkin {

// phi row i: out-edge weights of node i normalized to sum 1; zero elsewhere.
// Sink nodes keep an all-zero row so phi stays a fixed n x n object. A node
// whose out-edges all carry zero weight gets a uniform row and is recorded
// in uniform_rows.
Representation phi(const WeightedCausalDag& g);

struct Theorem1Report {
    bool ok = true;
    std::vector<Edge> violations;  // support/edge-set disagreements, both directions
};

// Support of phi equals the DAG edge set: phi[i][j] > 0 iff edge i -> j.
Theorem1Report check_theorem1(const WeightedCausalDag& g, const Representation& r);

struct Theorem2Report {
    bool ok = true;
    double max_abs_delta = 0.0;      // worst phi difference over all scales
    bool directions_identical = true;
    std::vector<double> alphas;
};

// Reruns the full pipeline on d and on alpha * d for every alpha, asserting
// identical phi (within 1e-12) and identical edge directions. Holds exactly
// under quantile binning: scaled bin indices are unchanged.
Theorem2Report check_theorem2(const Dataset& d, const SkeletonSpec& skeleton,
                              const std::vector<double>& alphas,
                              const PipelineConfig& cfg);

}  // namespace causalkin
