#include "causalkin/gcn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "causalkin/errors.hpp"
#include "causalkin/kernels.hpp"
#include "causalkin/rng.hpp"

namespace causalkin {

void GcnConfig::validate() const {
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (hidden_dims.empty()) throw ConfigError("hidden_dims must be nonempty");
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
}

AdjacencyMode AdjacencyMode::baseline(const SkeletonSpec& skeleton) {
    AdjacencyMode a;
    a.variant = AdjacencyVariant::anatomical_baseline;
    a.n = skeleton.n_joints;
    a.matrix.assign(static_cast<std::size_t>(a.n) * a.n, 0.0);
    for (const auto& [i, j] : skeleton.anatomical_edges) {
        a.matrix[static_cast<std::size_t>(i) * a.n + j] = 1.0;
        a.matrix[static_cast<std::size_t>(j) * a.n + i] = 1.0;
    }
    return a;
}

AdjacencyMode AdjacencyMode::causal(const WeightedCausalDag& dag) {
    AdjacencyMode a;
    a.variant = AdjacencyVariant::causal_weighted;
    a.n = dag.n;
    a.matrix.assign(static_cast<std::size_t>(a.n) * a.n, 0.0);
    for (const auto& e : dag.edges)
        a.matrix[static_cast<std::size_t>(e.src) * a.n + e.dst] = e.weight;
    return a;
}

std::vector<double> normalize_adjacency(const AdjacencyMode& a) {
    const int n = a.n;
    std::vector<double> m = a.matrix;
    for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i) * n + i] += 1.0;

    std::vector<double> degree(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) degree[i] += m[static_cast<std::size_t>(i) * n + j];

    if (a.variant == AdjacencyVariant::anatomical_baseline) {
        std::vector<double> inv_sqrt(n);
        for (int i = 0; i < n; ++i) inv_sqrt[i] = 1.0 / std::sqrt(degree[i]);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m[static_cast<std::size_t>(i) * n + j] *= inv_sqrt[i] * inv_sqrt[j];
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m[static_cast<std::size_t>(i) * n + j] /= degree[i];
    }
    return m;
}

std::size_t GcnParams::parameter_count() const {
    std::size_t c = head.w.size() + head.b.size();
    for (const auto& l : layers) c += l.w.size() + l.b.size();
    return c;
}

namespace {

GcnLayer make_layer(int in, int out, Rng& rng) {
    GcnLayer l;
    l.in = in;
    l.out = out;
    l.w.resize(static_cast<std::size_t>(in) * out);
    l.b.assign(out, 0.0);
    const double limit = std::sqrt(6.0 / (in + out));  // Glorot uniform
    for (auto& w : l.w) w = rng.uniform(-limit, limit);
    return l;
}

struct ForwardCache {
    std::vector<std::vector<double>> m;  // per layer: aggregated input, (B*n) x in
    std::vector<std::vector<double>> z;  // per layer: pre-activation, (B*n) x out
    std::vector<double> pooled;          // B x f_last
    std::vector<double> scores;          // B x 2
};

void add_bias_relu(std::vector<double>& z, const std::vector<double>& b, int rows,
                   bool relu) {
    const int cols = static_cast<int>(b.size());
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            double& v = z[static_cast<std::size_t>(r) * cols + c];
            v += b[c];
            if (relu && v < 0.0) v = 0.0;
        }
}

void forward_impl(const GcnParams& p, const std::vector<double>& a_hat,
                  const std::vector<double>& x, int batch, ForwardCache& cache) {
    const int n = p.n_nodes;
    if (static_cast<int>(x.size()) != batch * n * p.in_features)
        throw ShapeMismatchError(batch * n * p.in_features, static_cast<int>(x.size()));
    if (static_cast<int>(a_hat.size()) != n * n)
        throw ShapeMismatchError(n * n, static_cast<int>(a_hat.size()));

    const int rows = batch * n;
    cache.m.resize(p.layers.size());
    cache.z.resize(p.layers.size());

    const std::vector<double>* cur = &x;
    std::vector<double> relu_buf;
    for (std::size_t l = 0; l < p.layers.size(); ++l) {
        const auto& layer = p.layers[l];
        cache.m[l].resize(static_cast<std::size_t>(rows) * layer.in);
        kernels::batched_adj_apply(a_hat.data(), cur->data(), cache.m[l].data(), batch, n,
                                   layer.in);
        cache.z[l].resize(static_cast<std::size_t>(rows) * layer.out);
        kernels::matmul(cache.m[l].data(), layer.w.data(), cache.z[l].data(), rows,
                        layer.in, layer.out);
        add_bias_relu(cache.z[l], layer.b, rows, /*relu=*/true);
        cur = &cache.z[l];  // post-activation stored in place
    }

    const int f_last = p.layers.empty() ? p.in_features : p.layers.back().out;
    cache.pooled.assign(static_cast<std::size_t>(batch) * f_last, 0.0);
    for (int bi = 0; bi < batch; ++bi)
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < f_last; ++c)
                cache.pooled[static_cast<std::size_t>(bi) * f_last + c] +=
                    (*cur)[(static_cast<std::size_t>(bi) * n + i) * f_last + c];
    for (auto& v : cache.pooled) v /= n;

    cache.scores.resize(static_cast<std::size_t>(batch) * 2);
    kernels::matmul(cache.pooled.data(), p.head.w.data(), cache.scores.data(), batch,
                    f_last, 2);
    add_bias_relu(cache.scores, p.head.b, batch, /*relu=*/false);
}

// mean softmax cross-entropy; fills dscores = (softmax - onehot) / batch
double cross_entropy(const std::vector<double>& scores, const std::vector<int>& labels,
                     int batch, std::vector<double>* dscores) {
    double loss = 0.0;
    if (dscores) dscores->assign(static_cast<std::size_t>(batch) * 2, 0.0);
    for (int b = 0; b < batch; ++b) {
        const double s0 = scores[static_cast<std::size_t>(b) * 2];
        const double s1 = scores[static_cast<std::size_t>(b) * 2 + 1];
        const double mx = std::max(s0, s1);
        const double lse = mx + std::log(std::exp(s0 - mx) + std::exp(s1 - mx));
        loss += lse - (labels[b] == 1 ? s1 : s0);
        if (dscores) {
            const double p1 = std::exp(s1 - lse);
            (*dscores)[static_cast<std::size_t>(b) * 2] = (1.0 - p1 - (labels[b] == 0)) / batch;
            (*dscores)[static_cast<std::size_t>(b) * 2 + 1] = (p1 - (labels[b] == 1)) / batch;
        }
    }
    return loss / batch;
}

struct Gradients {
    std::vector<GcnLayer> layers;  // same shapes as params
    GcnLayer head;
};

Gradients zero_like(const GcnParams& p) {
    Gradients g;
    g.layers = p.layers;
    for (auto& l : g.layers) {
        std::fill(l.w.begin(), l.w.end(), 0.0);
        std::fill(l.b.begin(), l.b.end(), 0.0);
    }
    g.head = p.head;
    std::fill(g.head.w.begin(), g.head.w.end(), 0.0);
    std::fill(g.head.b.begin(), g.head.b.end(), 0.0);
    return g;
}

void column_sums(const std::vector<double>& m, int rows, int cols, std::vector<double>& out) {
    out.assign(cols, 0.0);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) out[c] += m[static_cast<std::size_t>(r) * cols + c];
}

Gradients backward_impl(const GcnParams& p, const std::vector<double>& a_hat,
                        const std::vector<double>& x, int batch,
                        const ForwardCache& cache, const std::vector<double>& dscores) {
    const int n = p.n_nodes;
    const int rows = batch * n;
    const int f_last = p.layers.empty() ? p.in_features : p.layers.back().out;
    Gradients g = zero_like(p);

    // head
    kernels::matmul_at_b(cache.pooled.data(), dscores.data(), g.head.w.data(), batch,
                         f_last, 2);
    column_sums(dscores, batch, 2, g.head.b);

    // pooled -> node features of the last layer
    std::vector<double> dpooled(static_cast<std::size_t>(batch) * f_last);
    kernels::matmul_a_bt(dscores.data(), p.head.w.data(), dpooled.data(), batch, 2, f_last);
    std::vector<double> dh(static_cast<std::size_t>(rows) * f_last);
    for (int bi = 0; bi < batch; ++bi)
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < f_last; ++c)
                dh[(static_cast<std::size_t>(bi) * n + i) * f_last + c] =
                    dpooled[static_cast<std::size_t>(bi) * f_last + c] / n;

    // transposed adjacency for pushing gradients back through aggregation
    std::vector<double> a_hat_t(a_hat.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a_hat_t[static_cast<std::size_t>(j) * n + i] = a_hat[static_cast<std::size_t>(i) * n + j];

    for (int l = static_cast<int>(p.layers.size()) - 1; l >= 0; --l) {
        const auto& layer = p.layers[l];
        // dZ = dH ⊙ 1[Z > 0]; cache.z holds post-ReLU activations, zero iff clipped
        std::vector<double>& dz = dh;
        for (std::size_t i = 0; i < dz.size(); ++i)
            if (cache.z[l][i] <= 0.0) dz[i] = 0.0;

        kernels::matmul_at_b(cache.m[l].data(), dz.data(), g.layers[l].w.data(), rows,
                             layer.in, layer.out);
        column_sums(dz, rows, layer.out, g.layers[l].b);

        if (l > 0) {  // input gradients are never needed
            std::vector<double> dm(static_cast<std::size_t>(rows) * layer.in);
            kernels::matmul_a_bt(dz.data(), layer.w.data(), dm.data(), rows, layer.out,
                                 layer.in);
            std::vector<double> dprev(static_cast<std::size_t>(rows) * layer.in);
            kernels::batched_adj_apply(a_hat_t.data(), dm.data(), dprev.data(), batch, n,
                                       layer.in);
            dh = std::move(dprev);
        }
    }
    (void)x;
    return g;
}

std::vector<double*> parameter_view(GcnParams& p) {
    std::vector<double*> out;
    for (auto& l : p.layers) {
        for (auto& v : l.w) out.push_back(&v);
        for (auto& v : l.b) out.push_back(&v);
    }
    for (auto& v : p.head.w) out.push_back(&v);
    for (auto& v : p.head.b) out.push_back(&v);
    return out;
}

std::vector<const double*> gradient_view(const Gradients& g) {
    std::vector<const double*> out;
    for (const auto& l : g.layers) {
        for (const auto& v : l.w) out.push_back(&v);
        for (const auto& v : l.b) out.push_back(&v);
    }
    for (const auto& v : g.head.w) out.push_back(&v);
    for (const auto& v : g.head.b) out.push_back(&v);
    return out;
}

std::vector<double*> gradient_view(Gradients& g) {
    std::vector<double*> out;
    for (auto& l : g.layers) {
        for (auto& v : l.w) out.push_back(&v);
        for (auto& v : l.b) out.push_back(&v);
    }
    for (auto& v : g.head.w) out.push_back(&v);
    for (auto& v : g.head.b) out.push_back(&v);
    return out;
}

}  // namespace

GcnParams init_params(int n_nodes, int in_features, const std::vector<int>& hidden_dims,
                      std::uint64_t seed) {
    GcnParams p;
    p.n_nodes = n_nodes;
    p.in_features = in_features;
    Rng rng(seed ^ 0x6a09e667f3bcc908ull);
    int in = in_features;
    for (const int h : hidden_dims) {
        p.layers.push_back(make_layer(in, h, rng));
        in = h;
    }
    p.head = make_layer(in, 2, rng);
    return p;
}

std::vector<double> forward(const GcnParams& p, const std::vector<double>& a_hat,
                            const std::vector<double>& x, int batch) {
    ForwardCache cache;
    forward_impl(p, a_hat, x, batch, cache);
    return cache.scores;
}

std::vector<int> predict(const GcnParams& p, const std::vector<double>& a_hat,
                         const std::vector<double>& x, int batch) {
    const auto scores = forward(p, a_hat, x, batch);
    std::vector<int> out(batch);
    for (int b = 0; b < batch; ++b)
        out[b] = scores[static_cast<std::size_t>(b) * 2 + 1] >
                         scores[static_cast<std::size_t>(b) * 2]
                     ? 1
                     : 0;
    return out;
}

Metrics classification_metrics(const std::vector<int>& predictions,
                               const std::vector<int>& labels) {
    if (predictions.size() != labels.size())
        throw LengthMismatchError(predictions.size(), labels.size());
    if (predictions.empty()) throw LengthMismatchError(0, 0);
    for (std::size_t i = 0; i < labels.size(); ++i)
        if ((labels[i] != 0 && labels[i] != 1) || (predictions[i] != 0 && predictions[i] != 1))
            throw ConfigError("metrics expect binary predictions and labels");

    // confusion[label][prediction]
    double confusion[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    for (std::size_t i = 0; i < labels.size(); ++i)
        confusion[labels[i]][predictions[i]] += 1.0;

    Metrics m;
    m.accuracy = (confusion[0][0] + confusion[1][1]) / static_cast<double>(labels.size());
    for (int c = 0; c < 2; ++c) {
        const double tp = confusion[c][c];
        const double fp = confusion[1 - c][c];
        const double fn = confusion[c][1 - c];
        double precision = 0.0, recall = 0.0;
        if (tp + fp > 0.0)
            precision = tp / (tp + fp);
        else
            m.zero_division = true;
        if (tp + fn > 0.0)
            recall = tp / (tp + fn);
        else
            m.zero_division = true;
        const double f1 =
            precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
        m.macro_precision += precision / 2.0;
        m.macro_recall += recall / 2.0;
        m.macro_f1 += f1 / 2.0;
    }
    return m;
}

namespace {

void stratified_split(const std::vector<int>& labels, std::uint64_t seed,
                      std::vector<int>& train_idx, std::vector<int>& test_idx) {
    for (int c = 0; c < 2; ++c) {
        std::vector<int> idx;
        for (int i = 0; i < static_cast<int>(labels.size()); ++i)
            if (labels[i] == c) idx.push_back(i);
        Rng rng = Rng(seed).split(17 + c);
        rng.shuffle(idx);
        const int n_train = static_cast<int>((4 * idx.size()) / 5);
        train_idx.insert(train_idx.end(), idx.begin(), idx.begin() + n_train);
        test_idx.insert(test_idx.end(), idx.begin() + n_train, idx.end());
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());
}

std::vector<double> gather_rows(const std::vector<double>& x, int row_width,
                                const std::vector<int>& rows) {
    std::vector<double> out(rows.size() * static_cast<std::size_t>(row_width));
    for (std::size_t r = 0; r < rows.size(); ++r)
        std::copy_n(x.begin() + static_cast<std::size_t>(rows[r]) * row_width, row_width,
                    out.begin() + r * row_width);
    return out;
}

}  // namespace

TrainResult train(const Dataset& d, const AdjacencyMode& adjacency, const GcnConfig& cfg) {
    cfg.validate();
    if (adjacency.n != d.n_joints) throw ShapeMismatchError(d.n_joints, adjacency.n);
    const int frames = d.frames();
    if (static_cast<int>(d.behavior.size()) != frames)
        throw LengthMismatchError(d.behavior.size(), frames);

    TrainResult result;
    stratified_split(d.behavior, cfg.seed, result.train_idx, result.test_idx);

    bool has0 = false, has1 = false;
    for (const int i : result.train_idx) (d.behavior[i] == 0 ? has0 : has1) = true;
    if (!has0 || !has1) throw SingleClassDatasetError();

    const int width = d.vars();
    GcnParams params = init_params(d.n_joints, d.n_dims, cfg.hidden_dims, cfg.seed);

    // standardize features on the train split only
    params.feature_mean.assign(width, 0.0);
    params.feature_sd.assign(width, 1.0);
    for (int v = 0; v < width; ++v) {
        double mean = 0.0;
        for (const int t : result.train_idx) mean += d.at(t, v);
        mean /= static_cast<double>(result.train_idx.size());
        double ss = 0.0;
        for (const int t : result.train_idx) {
            const double c = d.at(t, v) - mean;
            ss += c * c;
        }
        const double sd = std::sqrt(ss / std::max<std::size_t>(result.train_idx.size() - 1, 1));
        params.feature_mean[v] = mean;
        params.feature_sd[v] = sd > 0.0 ? sd : 1.0;
    }
    std::vector<double> features = d.data;
    for (int t = 0; t < frames; ++t)
        for (int v = 0; v < width; ++v) {
            double& f = features[static_cast<std::size_t>(t) * width + v];
            f = (f - params.feature_mean[v]) / params.feature_sd[v];
        }

    const auto a_hat = normalize_adjacency(adjacency);
    const auto train_x = gather_rows(features, width, result.train_idx);
    const auto test_x = gather_rows(features, width, result.test_idx);
    std::vector<int> train_y, test_y;
    for (const int i : result.train_idx) train_y.push_back(d.behavior[i]);
    for (const int i : result.test_idx) test_y.push_back(d.behavior[i]);
    const int n_train = static_cast<int>(train_y.size());

    Gradients velocity = zero_like(params);
    std::vector<double*> vel_view = gradient_view(velocity);
    std::vector<double*> par_view = parameter_view(params);

    Rng shuffle_rng = Rng(cfg.seed).split(101);
    std::vector<int> order(n_train);
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double loss_sum = 0.0;
        for (int start = 0; start < n_train; start += cfg.batch_size) {
            const int bsz = std::min(cfg.batch_size, n_train - start);
            std::vector<int> batch_rows(order.begin() + start, order.begin() + start + bsz);
            const auto bx = gather_rows(train_x, width, batch_rows);
            std::vector<int> by(bsz);
            for (int i = 0; i < bsz; ++i) by[i] = train_y[batch_rows[i]];

            ForwardCache cache;
            forward_impl(params, a_hat, bx, bsz, cache);
            std::vector<double> dscores;
            loss_sum += cross_entropy(cache.scores, by, bsz, &dscores) * bsz;
            const Gradients grads = backward_impl(params, a_hat, bx, bsz, cache, dscores);

            const std::vector<const double*> grad_view = gradient_view(grads);
            for (std::size_t k = 0; k < par_view.size(); ++k) {
                double& v = *vel_view[k];
                v = cfg.momentum * v - cfg.learning_rate * *grad_view[k];
                *par_view[k] += v;
            }
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.train_loss = loss_sum / n_train;
        stats.train = classification_metrics(predict(params, a_hat, train_x, n_train), train_y);
        stats.test = classification_metrics(
            predict(params, a_hat, test_x, static_cast<int>(test_y.size())), test_y);
        result.history.push_back(stats);
    }

    result.params = std::move(params);
    result.optimizer = "sgd_momentum(lr=" + std::to_string(cfg.learning_rate) +
                       ",momentum=" + std::to_string(cfg.momentum) + ")";
    return result;
}

Metrics evaluate(const GcnParams& p, const AdjacencyMode& adjacency, const Dataset& d) {
    const int frames = d.frames();
    const int width = d.vars();
    if (static_cast<int>(p.feature_mean.size()) != width)
        throw ShapeMismatchError(static_cast<int>(p.feature_mean.size()), width);
    std::vector<double> features = d.data;
    for (int t = 0; t < frames; ++t)
        for (int v = 0; v < width; ++v) {
            double& f = features[static_cast<std::size_t>(t) * width + v];
            f = (f - p.feature_mean[v]) / p.feature_sd[v];
        }
    const auto a_hat = normalize_adjacency(adjacency);
    return classification_metrics(predict(p, a_hat, features, frames), d.behavior);
}

double gradient_check(const GcnParams& p, const std::vector<double>& a_hat,
                      const std::vector<double>& x, const std::vector<int>& labels,
                      int batch) {
    if (p.parameter_count() == 0) return 0.0;

    GcnParams work = p;
    ForwardCache cache;
    forward_impl(work, a_hat, x, batch, cache);
    std::vector<double> dscores;
    cross_entropy(cache.scores, labels, batch, &dscores);
    const Gradients analytic = backward_impl(work, a_hat, x, batch, cache, dscores);

    const auto params = parameter_view(work);
    const auto grads = gradient_view(analytic);
    const double h = 1e-5;
    double max_rel = 0.0;
    for (std::size_t k = 0; k < params.size(); ++k) {
        const double saved = *params[k];
        *params[k] = saved + h;
        forward_impl(work, a_hat, x, batch, cache);
        const double up = cross_entropy(cache.scores, labels, batch, nullptr);
        *params[k] = saved - h;
        forward_impl(work, a_hat, x, batch, cache);
        const double down = cross_entropy(cache.scores, labels, batch, nullptr);
        *params[k] = saved;
        const double numeric = (up - down) / (2.0 * h);
        const double denom = std::max({std::abs(*grads[k]), std::abs(numeric), 1e-6});
        max_rel = std::max(max_rel, std::abs(*grads[k] - numeric) / denom);
    }
    return max_rel;
}

}  // namespace causalkin
