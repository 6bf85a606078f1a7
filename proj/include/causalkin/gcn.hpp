#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "causalkin/types.hpp"

namespace causalkin {

struct GcnConfig {
    std::vector<int> hidden_dims{32, 32};
    int epochs = 50;
    double learning_rate = 0.01;
    int batch_size = 64;
    double momentum = 0.9;
    std::uint64_t seed = 0;

    void validate() const;  // epochs >= 1, hidden_dims nonempty, learning_rate > 0
};

enum class AdjacencyVariant { anatomical_baseline, causal_weighted };

// Graph fed to the classifier: symmetric 0/1 anatomy, or the directed causal
// DAG with KL weights at matrix[src][dst].
struct AdjacencyMode {
    AdjacencyVariant variant = AdjacencyVariant::anatomical_baseline;
    int n = 0;
    std::vector<double> matrix;  // n x n, entries >= 0

    static AdjacencyMode baseline(const SkeletonSpec& skeleton);
    static AdjacencyMode causal(const WeightedCausalDag& dag);
};

// A_hat = A + I. Baseline: symmetric normalization D^-1/2 A_hat D^-1/2.
// Causal (directed): row normalization D^-1 A_hat, keeping direction.
std::vector<double> normalize_adjacency(const AdjacencyMode& a);

struct GcnLayer {
    int in = 0, out = 0;
    std::vector<double> w;  // in x out
    std::vector<double> b;  // out
};

struct GcnParams {
    int n_nodes = 0;
    int in_features = 0;
    std::vector<GcnLayer> layers;  // graph convolutions, ReLU between
    GcnLayer head;                 // mean-pooled features -> 2 class scores
    std::vector<double> feature_mean, feature_sd;  // train-split standardization

    std::size_t parameter_count() const;
};

GcnParams init_params(int n_nodes, int in_features, const std::vector<int>& hidden_dims,
                      std::uint64_t seed);

// Batch forward pass: x is batch x (n*f) node features, a_hat the normalized
// adjacency. Returns batch x 2 class scores. Throws ShapeMismatchError.
std::vector<double> forward(const GcnParams& p, const std::vector<double>& a_hat,
                            const std::vector<double>& x, int batch);

std::vector<int> predict(const GcnParams& p, const std::vector<double>& a_hat,
                         const std::vector<double>& x, int batch);

struct Metrics {
    double accuracy = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    bool zero_division = false;  // some class had an empty precision/recall cell
};

// Macro metrics over the two classes; zero-division cells contribute 0.
Metrics classification_metrics(const std::vector<int>& predictions,
                               const std::vector<int>& labels);

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;
    Metrics train;
    Metrics test;
};

struct TrainResult {
    GcnParams params;
    std::vector<EpochStats> history;
    std::string optimizer;  // recorded for the run manifest
    std::vector<int> train_idx, test_idx;
};

// Softmax cross-entropy minimized with momentum SGD over an 80/20 stratified
// split. Deterministic given cfg.seed. Throws SingleClassDatasetError.
TrainResult train(const Dataset& d, const AdjacencyMode& adjacency, const GcnConfig& cfg);

// Evaluate stored parameters on a dataset (applies the stored standardization).
Metrics evaluate(const GcnParams& p, const AdjacencyMode& adjacency, const Dataset& d);

// Max relative error between analytic gradients and central finite
// differences (h = 1e-5) over every parameter, on the given batch.
double gradient_check(const GcnParams& p, const std::vector<double>& a_hat,
                      const std::vector<double>& x, const std::vector<int>& labels,
                      int batch);

}  // namespace causalkin
