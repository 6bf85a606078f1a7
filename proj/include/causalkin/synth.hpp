#pragma once

#include <cstdint>
#include <vector>

#include "causalkin/types.hpp"

namespace causalkin {

enum class Mechanism {
    linear_gaussian,      // x_j = sum w_ij x_i + noise
    nonlinear_asymmetric  // x_j = tanh(sum w_ij x_i) + noise; KL direction identifiable
};

struct ScmEdge {
    int src = 0;
    int dst = 0;
    double weight = 1.0;
};

struct ScmSpec {
    int n_nodes = 0;
    int n_dims = 1;  // coordinate dimensions sampled per node (independent realizations)
    Mechanism mechanism = Mechanism::linear_gaussian;
    double noise_scale = 1.0;
    std::vector<ScmEdge> edges;
    std::vector<ScmEdge> label_edges;  // behavior labels track these edges' drive

    void validate() const;             // throws CyclicSpecError / ConfigError
    std::vector<int> topo_order() const;
    std::vector<Edge> directed_edge_set() const;
};

ScmSpec chain3_scm(Mechanism mech = Mechanism::linear_gaussian, double noise = 1.0);
ScmSpec collider3_scm(double noise = 1.0);
// Anatomical tree of the 22-joint preset, directed away from the pelvis.
ScmSpec skeletal22_scm(Mechanism mech, double noise);

// Ancestral sampling in topological order. Root nodes draw standard normals;
// non-roots add noise_scale-scaled normals to the mechanism output. When
// label_edges is set, frame labels are 1 where the summed weighted source
// activity (dimension 0) exceeds its median, giving a balanced target.
Dataset sample_scm(const ScmSpec& spec, int frames, std::uint64_t seed);

struct RecoveryScore {
    int shd = 0;                        // missing + extra + reversed (reversal = 1)
    double skeleton_precision = 1.0;
    double skeleton_recall = 1.0;
    double skeleton_f1 = 1.0;
    double orientation_accuracy = 1.0;  // correctly directed / skeleton-recovered true edges
    int skeleton_recovered = 0;
};

RecoveryScore score_recovery(const ScmSpec& truth, const WeightedCausalDag& learned);

}  // namespace causalkin
