#pragma once

#include <map>
#include <vector>

#include "causalkin/config.hpp"
#include "causalkin/types.hpp"

namespace causalkin {

// Count-based probability tables for one ordered variable pair (i, j).
struct ProbTable {
    int n_i = 0;
    int n_j = 0;
    std::vector<double> counts;       // n_i x n_j contingency
    std::vector<double> count_i;      // per-state counts of i
    std::vector<double> conditional;  // n_i x n_j, row s_i = P(x_j | x_i = s_i)
    std::vector<double> marginal;     // n_j, P(x_j)
    double smoothing = 0.0;

    double cond(int si, int sj) const {
        return conditional[static_cast<std::size_t>(si) * n_j + sj];
    }
};

// MLE with additive smoothing from a raw contingency table.
// Throws EmptyConditioningStateError when smoothing is zero and a state of i
// was never observed.
ProbTable table_from_counts(std::vector<double> counts, int n_i, int n_j,
                            double smoothing);

ProbTable estimate_tables(int i, int j, const DiscreteDataset& d, double smoothing);

// D(p || q) = sum p ln(p/q) in nats, with 0·ln(0/q) = 0.
// Throws SupportMismatchError / ZeroInQError.
double kl_divergence(const std::vector<double>& p, const std::vector<double>& q);

// Directional divergence of variable pair i -> j: the unweighted mean over
// observed states of i of D(P(j | x_i) || P(j)). The mean is unweighted
// because weighting by P(x_i) collapses to mutual information, which is
// symmetric and carries no direction signal.
double directional_kl(int i, int j, const DiscreteDataset& d, double smoothing);

// Outcome of the per-dimension majority vote for one joint pair.
struct DirectionDecision {
    bool forward = true;          // winning direction is src -> dst
    double weight = 0.0;          // mean winning-direction KL over all dimensions
    bool confident = true;        // mean relative gap >= threshold
    std::vector<int> dim_votes;   // +1 forward, -1 reverse, 0 tie per dimension
    bool tie_broken = false;      // majority tied; resolved by total KL
};

// Vote rule on per-dimension KL values (exposed for direct testing).
DirectionDecision decide_direction(const std::vector<double>& d_fwd,
                                   const std::vector<double>& d_rev,
                                   double gap_threshold);

// Orient and weight every connected joint pair of the CPDAG. PC-compelled
// orientations are kept; undirected edges take the per-dimension majority
// direction. Cycles introduced by KL orientation are broken by dropping the
// lowest-weight edge of each cycle (recorded in `dropped`).
WeightedCausalDag assess_directions(const Cpdag& cpdag, const DiscreteDataset& d,
                                    const SkeletonSpec& skeleton, double smoothing,
                                    double gap_threshold = 0.1);

// Frame-resampled reruns of skeleton + orientation; returns the fraction of
// replicates in which each directed edge appeared. Deterministic given seed.
std::map<Edge, double> bootstrap_stability(const Dataset& d,
                                           const SkeletonSpec& skeleton,
                                           const PipelineConfig& cfg, int n_boot,
                                           std::uint64_t seed);

}  // namespace causalkin
