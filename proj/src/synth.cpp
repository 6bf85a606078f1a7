#include "causalkin/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "causalkin/errors.hpp"
#include "causalkin/rng.hpp"

namespace causalkin {

void ScmSpec::validate() const {
    if (n_nodes <= 0) throw ConfigError("SCM needs at least one node");
    if (n_dims <= 0) throw ConfigError("SCM n_dims must be positive");
    if (!(noise_scale > 0.0)) throw ConfigError("noise_scale must be positive");
    for (const auto& e : edges) {
        if (e.src < 0 || e.src >= n_nodes || e.dst < 0 || e.dst >= n_nodes)
            throw ConfigError("SCM edge index out of range");
        if (e.src == e.dst) throw ConfigError("SCM self-loop");
    }
    topo_order();  // throws CyclicSpecError on cycles
}

std::vector<int> ScmSpec::topo_order() const {
    std::vector<int> indeg(n_nodes, 0);
    for (const auto& e : edges) ++indeg[e.dst];
    std::vector<int> order;
    std::vector<int> ready;
    for (int v = n_nodes - 1; v >= 0; --v)
        if (indeg[v] == 0) ready.push_back(v);
    while (!ready.empty()) {
        const int v = ready.back();
        ready.pop_back();
        order.push_back(v);
        for (const auto& e : edges)
            if (e.src == v && --indeg[e.dst] == 0) ready.push_back(e.dst);
    }
    if (static_cast<int>(order.size()) != n_nodes) throw CyclicSpecError();
    return order;
}

std::vector<Edge> ScmSpec::directed_edge_set() const {
    std::vector<Edge> out;
    for (const auto& e : edges) out.push_back({e.src, e.dst});
    std::sort(out.begin(), out.end());
    return out;
}

ScmSpec chain3_scm(Mechanism mech, double noise) {
    ScmSpec s;
    s.n_nodes = 3;
    s.mechanism = mech;
    s.noise_scale = noise;
    s.edges = {{0, 1, 1.0}, {1, 2, 1.0}};
    return s;
}

ScmSpec collider3_scm(double noise) {
    ScmSpec s;
    s.n_nodes = 3;
    s.mechanism = Mechanism::linear_gaussian;
    s.noise_scale = noise;
    s.edges = {{0, 2, 1.0}, {1, 2, 1.0}};
    return s;
}

ScmSpec skeletal22_scm(Mechanism mech, double noise) {
    const SkeletonSpec sk = skeletal22();
    ScmSpec s;
    s.n_nodes = sk.n_joints;
    s.mechanism = mech;
    s.noise_scale = noise;

    // direct the anatomical tree away from the pelvis (node 0)
    std::vector<std::vector<int>> adj(sk.n_joints);
    for (const auto& [a, b] : sk.anatomical_edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<char> seen(sk.n_joints, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                s.edges.push_back({v, w, 1.0});
                stack.push_back(w);
            }
    }
    std::sort(s.edges.begin(), s.edges.end(), [](const ScmEdge& a, const ScmEdge& b) {
        return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
    });
    return s;
}

Dataset sample_scm(const ScmSpec& spec, int frames, std::uint64_t seed) {
    spec.validate();
    if (frames < 1) throw ConfigError("frames must be >= 1");
    const auto order = spec.topo_order();

    std::vector<std::vector<const ScmEdge*>> parents(spec.n_nodes);
    for (const auto& e : spec.edges) parents[e.dst].push_back(&e);

    Dataset d;
    d.n_joints = spec.n_nodes;
    d.n_dims = spec.n_dims;
    d.data.assign(static_cast<std::size_t>(frames) * d.vars(), 0.0);

    Rng rng(seed);
    for (int k = 0; k < spec.n_dims; ++k)
        for (int t = 0; t < frames; ++t)
            for (const int v : order) {
                double value;
                if (parents[v].empty()) {
                    value = rng.normal();
                } else {
                    double drive = 0.0;
                    for (const auto* e : parents[v])
                        drive += e->weight * d.at(t, d.var_index(e->src, k));
                    if (spec.mechanism == Mechanism::nonlinear_asymmetric)
                        drive = std::tanh(drive);
                    value = drive + spec.noise_scale * rng.normal();
                }
                d.at(t, d.var_index(v, k)) = value;
            }

    if (spec.label_edges.empty()) {
        d.behavior.assign(frames, 0);
        return d;
    }
    std::vector<double> activity(frames, 0.0);
    for (int t = 0; t < frames; ++t)
        for (const auto& e : spec.label_edges)
            activity[t] += e.weight * d.at(t, d.var_index(e.src, 0));
    std::vector<double> sorted = activity;
    std::nth_element(sorted.begin(), sorted.begin() + frames / 2, sorted.end());
    const double median = sorted[frames / 2];
    d.behavior.resize(frames);
    for (int t = 0; t < frames; ++t) d.behavior[t] = activity[t] > median ? 1 : 0;
    return d;
}

RecoveryScore score_recovery(const ScmSpec& truth, const WeightedCausalDag& learned) {
    if (truth.n_nodes != learned.n)
        throw NodeCountMismatchError(truth.n_nodes, learned.n);

    std::set<Edge> truth_dir, learned_dir;
    std::set<Edge> truth_skel, learned_skel;
    for (const auto& e : truth.edges) {
        truth_dir.insert({e.src, e.dst});
        truth_skel.insert(unordered(e.src, e.dst));
    }
    for (const auto& e : learned.edges) {
        learned_dir.insert({e.src, e.dst});
        learned_skel.insert(unordered(e.src, e.dst));
    }

    int common = 0, correctly_directed = 0, reversed = 0;
    for (const auto& pair : truth_skel)
        if (learned_skel.count(pair)) {
            ++common;
            const bool truth_fwd = truth_dir.count(pair) > 0;  // pair stored (lo, hi)
            const bool learned_fwd = learned_dir.count(pair) > 0;
            if (truth_fwd == learned_fwd)
                ++correctly_directed;
            else
                ++reversed;
        }
    const int missing = static_cast<int>(truth_skel.size()) - common;
    const int extra = static_cast<int>(learned_skel.size()) - common;

    RecoveryScore s;
    s.shd = missing + extra + reversed;
    s.skeleton_recovered = common;
    s.skeleton_precision =
        learned_skel.empty() ? 1.0 : static_cast<double>(common) / learned_skel.size();
    s.skeleton_recall =
        truth_skel.empty() ? 1.0 : static_cast<double>(common) / truth_skel.size();
    const double pr = s.skeleton_precision + s.skeleton_recall;
    s.skeleton_f1 = pr > 0.0 ? 2.0 * s.skeleton_precision * s.skeleton_recall / pr : 0.0;
    s.orientation_accuracy =
        common > 0 ? static_cast<double>(correctly_directed) / common : 0.0;
    return s;
}

}  // namespace causalkin
