#include "causalkin/representation.hpp"

#include <algorithm>
#include <cmath>

#include "causalkin/errors.hpp"
#include "causalkin/pipeline.hpp"

namespace causalkin {

Representation phi(const WeightedCausalDag& g) {
    Representation r;
    r.n = g.n;
    r.phi.assign(static_cast<std::size_t>(g.n) * g.n, 0.0);

    std::vector<std::vector<const CausalEdge*>> out(g.n);
    for (const auto& e : g.edges) {
        if (e.weight < 0.0) throw ConfigError("negative edge weight");
        out[e.src].push_back(&e);
    }

    for (int i = 0; i < g.n; ++i) {
        if (out[i].empty()) continue;  // sinks keep an all-zero row
        double total = 0.0;
        for (const auto* e : out[i]) total += e->weight;
        if (total > 0.0) {
            for (const auto* e : out[i])
                r.phi[static_cast<std::size_t>(i) * g.n + e->dst] = e->weight / total;
        } else {  // AllZeroOutWeights: uniform fallback, flagged
            const double u = 1.0 / static_cast<double>(out[i].size());
            for (const auto* e : out[i])
                r.phi[static_cast<std::size_t>(i) * g.n + e->dst] = u;
            r.uniform_rows.push_back(i);
        }
    }
    return r;
}

Theorem1Report check_theorem1(const WeightedCausalDag& g, const Representation& r) {
    Theorem1Report report;
    std::vector<char> edge(static_cast<std::size_t>(g.n) * g.n, 0);
    for (const auto& e : g.edges) edge[static_cast<std::size_t>(e.src) * g.n + e.dst] = 1;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            const bool positive = r.at(i, j) > 0.0;
            const bool present = edge[static_cast<std::size_t>(i) * g.n + j] != 0;
            if (positive != present) report.violations.push_back({i, j});
        }
    report.ok = report.violations.empty();
    return report;
}

namespace {

std::vector<Edge> directed_edges(const WeightedCausalDag& g) {
    std::vector<Edge> out;
    for (const auto& e : g.edges) out.push_back({e.src, e.dst});
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

Theorem2Report check_theorem2(const Dataset& d, const SkeletonSpec& skeleton,
                              const std::vector<double>& alphas,
                              const PipelineConfig& cfg) {
    Theorem2Report report;
    report.alphas = alphas;

    const auto base_dag = learn_causal_dag(d, skeleton, cfg);
    const auto base_phi = phi(base_dag);
    const auto base_edges = directed_edges(base_dag);

    for (const double alpha : alphas) {
        if (!(alpha > 0.0)) throw ConfigError("theorem 2 scales must be positive");
        Dataset scaled = d;
        for (double& v : scaled.data) v *= alpha;
        const auto dag = learn_causal_dag(scaled, skeleton, cfg);
        if (directed_edges(dag) != base_edges) report.directions_identical = false;
        const auto p = phi(dag);
        for (std::size_t k = 0; k < p.phi.size(); ++k)
            report.max_abs_delta =
                std::max(report.max_abs_delta, std::abs(p.phi[k] - base_phi.phi[k]));
    }
    report.ok = report.directions_identical && report.max_abs_delta <= 1e-12;
    return report;
}

}  // namespace causalkin
