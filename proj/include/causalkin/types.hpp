#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace causalkin {

using Edge = std::pair<int, int>;

inline Edge unordered(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// Joint graph of the body: node set plus the anatomical (physical-link) edges.
struct SkeletonSpec {
    int n_joints = 0;
    std::vector<std::string> joint_names;     // may be empty; filled on demand
    std::vector<Edge> anatomical_edges;       // unordered, stored (lo, hi)

    // throws ConfigError on out-of-range indices, self-loops, duplicates
    void validate() const;
    bool anatomically_adjacent(int a, int b) const;
};

// Bundled 22-joint full-body preset (pelvis-rooted tree, 21 edges).
SkeletonSpec skeletal22();
// Minimal spec for n abstract nodes connected in a chain (used for SCM data).
SkeletonSpec chain_skeleton(int n);

// Joint coordinate time series. Variables are flattened joint-major then
// dimension-major: joint0_x, joint0_y, joint0_z, joint1_x, ...
struct Dataset {
    int n_joints = 0;
    int n_dims = 1;
    std::vector<double> data;       // frames x vars, row-major
    std::vector<int> behavior;      // per-frame binary label
    std::vector<int> exercise;      // optional per-frame categorical label

    int vars() const { return n_joints * n_dims; }
    int frames() const { return vars() == 0 ? 0 : static_cast<int>(data.size()) / vars(); }
    double at(int t, int v) const { return data[static_cast<std::size_t>(t) * vars() + v]; }
    double& at(int t, int v) { return data[static_cast<std::size_t>(t) * vars() + v]; }
    int var_index(int joint, int dim) const { return joint * n_dims + dim; }
    std::vector<double> column(int v) const;
};

// Quantile-binned states. Bin indices are dense per variable: states of
// variable v lie in [0, n_states[v]) and every state occurs at least once.
struct DiscreteDataset {
    int n_joints = 0;
    int n_dims = 1;
    std::vector<int> states;                    // frames x vars, row-major
    std::vector<int> n_states;                  // per variable
    std::vector<std::vector<double>> bin_edges; // per variable, interior cut values
    std::vector<bool> degenerate;               // constant-column flags

    int vars() const { return n_joints * n_dims; }
    int frames() const { return vars() == 0 ? 0 : static_cast<int>(states.size()) / vars(); }
    int at(int t, int v) const { return states[static_cast<std::size_t>(t) * vars() + v]; }
    int var_index(int joint, int dim) const { return joint * n_dims + dim; }
};

// PC output: partially directed graph over joints plus the separation sets
// recorded for every removed pair.
struct Cpdag {
    int n = 0;
    std::vector<Edge> undirected;               // (lo, hi)
    std::vector<Edge> directed;                 // (src, dst)
    std::map<Edge, std::vector<int>> sepsets;   // keyed (lo, hi)
    std::vector<Edge> conflict_edges;           // left undirected after orientation conflict
    std::vector<Edge> flagged_pairs;            // kept because every CI test errored

    bool has_undirected(int a, int b) const;
    bool has_directed(int src, int dst) const;
    bool adjacent(int a, int b) const { return has_undirected(a, b) || has_directed(a, b) || has_directed(b, a); }
    std::vector<int> neighbors(int v) const;    // adjacency ignoring direction
};

struct CausalEdge {
    int src = 0;
    int dst = 0;
    double weight = 0.0;            // mean directional KL in nats
    std::vector<int> dim_votes;     // per dimension: +1 src->dst, -1 dst->src, 0 tie
    bool confident = true;
    bool pc_compelled = false;      // orientation fixed by v-structure/Meek, not KL
};

struct WeightedCausalDag {
    int n = 0;
    std::vector<CausalEdge> edges;
    std::vector<CausalEdge> dropped;  // removed by cycle repair

    const CausalEdge* find(int src, int dst) const;
};

struct AcyclicityReport {
    bool ok = true;
    std::vector<Edge> cycle_edges;  // every edge lying on at least one directed cycle
};

AcyclicityReport validate_dag(const WeightedCausalDag& g);

// Normalized out-edge KL weights, zero-padded to a fixed n x n matrix.
struct Representation {
    int n = 0;
    std::vector<double> phi;         // n x n row-major
    std::vector<int> uniform_rows;   // rows emitted uniform because all out-weights were zero

    double at(int i, int j) const { return phi[static_cast<std::size_t>(i) * n + j]; }
};

}  // namespace causalkin
