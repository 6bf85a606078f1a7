#include "causalkin/kl.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <tuple>

#include "causalkin/errors.hpp"
#include "causalkin/ingest.hpp"
#include "causalkin/kernels.hpp"
#include "causalkin/pc.hpp"
#include "causalkin/rng.hpp"

namespace causalkin {

ProbTable table_from_counts(std::vector<double> counts, int n_i, int n_j,
                            double smoothing) {
    if (smoothing < 0.0) throw ConfigError("smoothing must be >= 0");
    ProbTable t;
    t.n_i = n_i;
    t.n_j = n_j;
    t.counts = std::move(counts);
    t.smoothing = smoothing;
    t.count_i.assign(n_i, 0.0);
    t.marginal.assign(n_j, 0.0);
    t.conditional.assign(static_cast<std::size_t>(n_i) * n_j, 0.0);

    double total = 0.0;
    std::vector<double> count_j(n_j, 0.0);
    for (int a = 0; a < n_i; ++a)
        for (int b = 0; b < n_j; ++b) {
            const double c = t.counts[static_cast<std::size_t>(a) * n_j + b];
            t.count_i[a] += c;
            count_j[b] += c;
            total += c;
        }

    for (int a = 0; a < n_i; ++a) {
        const double denom = t.count_i[a] + smoothing * n_j;
        if (denom <= 0.0) throw EmptyConditioningStateError(a);
        for (int b = 0; b < n_j; ++b)
            t.conditional[static_cast<std::size_t>(a) * n_j + b] =
                (t.counts[static_cast<std::size_t>(a) * n_j + b] + smoothing) / denom;
    }
    const double mdenom = total + smoothing * n_j;
    for (int b = 0; b < n_j; ++b) t.marginal[b] = (count_j[b] + smoothing) / mdenom;
    return t;
}

ProbTable estimate_tables(int i, int j, const DiscreteDataset& d, double smoothing) {
    const int n_i = d.n_states[i];
    const int n_j = d.n_states[j];
    std::vector<double> counts(static_cast<std::size_t>(n_i) * n_j, 0.0);
    for (int t = 0; t < d.frames(); ++t)
        counts[static_cast<std::size_t>(d.at(t, i)) * n_j + d.at(t, j)] += 1.0;
    return table_from_counts(std::move(counts), n_i, n_j, smoothing);
}

double kl_divergence(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw SupportMismatchError(p.size(), q.size());
    double div = 0.0;
    for (std::size_t s = 0; s < p.size(); ++s) {
        if (p[s] == 0.0) continue;
        if (q[s] <= 0.0) throw ZeroInQError(s);
        div += p[s] * std::log(p[s] / q[s]);
    }
    return div;
}

double directional_kl(int i, int j, const DiscreteDataset& d, double smoothing) {
    const ProbTable t = estimate_tables(i, j, d, smoothing);
    double sum = 0.0;
    int observed = 0;
    std::vector<double> row(t.n_j);
    for (int a = 0; a < t.n_i; ++a) {
        if (t.count_i[a] == 0.0) continue;
        for (int b = 0; b < t.n_j; ++b) row[b] = t.cond(a, b);
        sum += kl_divergence(row, t.marginal);
        ++observed;
    }
    return observed > 0 ? sum / observed : 0.0;
}

DirectionDecision decide_direction(const std::vector<double>& d_fwd,
                                   const std::vector<double>& d_rev,
                                   double gap_threshold) {
    if (d_fwd.size() != d_rev.size())
        throw LengthMismatchError(d_fwd.size(), d_rev.size());
    const int dims = static_cast<int>(d_fwd.size());

    DirectionDecision out;
    out.dim_votes.resize(dims);
    int fwd_votes = 0, rev_votes = 0;
    double fwd_total = 0.0, rev_total = 0.0, gap_sum = 0.0;
    for (int k = 0; k < dims; ++k) {
        fwd_total += d_fwd[k];
        rev_total += d_rev[k];
        if (d_fwd[k] > d_rev[k]) {
            out.dim_votes[k] = 1;
            ++fwd_votes;
        } else if (d_rev[k] > d_fwd[k]) {
            out.dim_votes[k] = -1;
            ++rev_votes;
        }
        const double hi = std::max(d_fwd[k], d_rev[k]);
        if (hi > 0.0) gap_sum += std::abs(d_fwd[k] - d_rev[k]) / hi;
    }

    if (fwd_votes != rev_votes) {
        out.forward = fwd_votes > rev_votes;
    } else {  // VoteTie: larger summed KL wins; equal sums default forward
        out.tie_broken = true;
        out.forward = fwd_total >= rev_total;
    }
    const auto& winning = out.forward ? d_fwd : d_rev;
    double w = 0.0;
    for (double v : winning) w += v;
    out.weight = dims > 0 ? w / dims : 0.0;
    out.confident = dims > 0 && (gap_sum / dims) >= gap_threshold;
    return out;
}

namespace {

// one directed cycle as an edge-index sequence, or empty when acyclic
std::vector<int> find_cycle(const WeightedCausalDag& g) {
    std::vector<std::vector<std::pair<int, int>>> out(g.n);  // (dst, edge index)
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
        out[g.edges[e].src].push_back({g.edges[e].dst, e});

    std::vector<int> color(g.n, 0);                // 0 white, 1 on stack, 2 done
    std::vector<std::pair<int, int>> path;         // (node, edge into node)

    auto dfs = [&](auto&& self, int v) -> std::vector<int> {
        color[v] = 1;
        for (const auto& [w, e] : out[v]) {
            if (color[w] == 1) {
                std::vector<int> cycle;
                bool collecting = false;
                for (const auto& [node, edge_in] : path) {
                    if (collecting) cycle.push_back(edge_in);
                    if (node == w) collecting = true;
                }
                cycle.push_back(e);
                return cycle;
            }
            if (color[w] == 0) {
                path.push_back({w, e});
                auto cycle = self(self, w);
                if (!cycle.empty()) return cycle;
                path.pop_back();
            }
        }
        color[v] = 2;
        return {};
    };

    for (int v = 0; v < g.n; ++v) {
        if (color[v] != 0) continue;
        path.assign(1, {v, -1});
        auto cycle = dfs(dfs, v);
        if (!cycle.empty()) return cycle;
    }
    return {};
}

}  // namespace

WeightedCausalDag assess_directions(const Cpdag& cpdag, const DiscreteDataset& d,
                                    const SkeletonSpec& skeleton, double smoothing,
                                    double gap_threshold) {
    if (cpdag.n != skeleton.n_joints)
        throw NodeCountMismatchError(cpdag.n, skeleton.n_joints);
    if (d.n_joints != skeleton.n_joints)
        throw ShapeMismatchError(skeleton.n_joints, d.n_joints);
    const int dims = d.n_dims;

    struct PairTask {
        int src, dst;
        bool compelled;
    };
    std::vector<PairTask> tasks;
    for (const auto& [a, b] : cpdag.directed) tasks.push_back({a, b, true});
    for (const auto& [a, b] : cpdag.undirected) tasks.push_back({a, b, false});

    std::vector<CausalEdge> results(tasks.size());
    std::exception_ptr failure = nullptr;
    std::mutex failure_mutex;
    kernels::parallel_for(static_cast<int>(tasks.size()), [&](int idx) {
        try {
            const auto& task = tasks[idx];
            std::vector<double> d_fwd(dims), d_rev(dims);
            for (int k = 0; k < dims; ++k) {
                const int vi = d.var_index(task.src, k);
                const int vj = d.var_index(task.dst, k);
                d_fwd[k] = directional_kl(vi, vj, d, smoothing);
                d_rev[k] = directional_kl(vj, vi, d, smoothing);
            }
            const DirectionDecision dec = decide_direction(d_fwd, d_rev, gap_threshold);

            CausalEdge e;
            e.confident = dec.confident;
            e.dim_votes = dec.dim_votes;
            e.pc_compelled = task.compelled;
            if (task.compelled) {  // PC orientation is never overridden
                e.src = task.src;
                e.dst = task.dst;
                double w = 0.0;
                for (double v : d_fwd) w += v;
                e.weight = dims > 0 ? w / dims : 0.0;
            } else if (dec.forward) {
                e.src = task.src;
                e.dst = task.dst;
                e.weight = dec.weight;
            } else {
                e.src = task.dst;
                e.dst = task.src;
                e.weight = dec.weight;
                for (int& v : e.dim_votes) v = -v;  // votes relative to final src
            }
            results[idx] = std::move(e);
        } catch (...) {
            const std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    });
    if (failure) std::rethrow_exception(failure);

    WeightedCausalDag g;
    g.n = cpdag.n;
    g.edges = std::move(results);
    std::sort(g.edges.begin(), g.edges.end(),
              [](const CausalEdge& a, const CausalEdge& b) {
                  return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
              });

    // break cycles introduced by KL orientation: cheapest edge goes first,
    // preferring edges that were not PC-compelled
    while (true) {
        const auto cycle = find_cycle(g);
        if (cycle.empty()) break;
        int victim = cycle.front();
        for (int e : cycle) {
            const bool better_class =
                !g.edges[e].pc_compelled && g.edges[victim].pc_compelled;
            const bool same_class = g.edges[e].pc_compelled == g.edges[victim].pc_compelled;
            if (better_class || (same_class && g.edges[e].weight < g.edges[victim].weight))
                victim = e;
        }
        g.dropped.push_back(g.edges[victim]);
        g.edges.erase(g.edges.begin() + victim);
    }
    return g;
}

std::map<Edge, double> bootstrap_stability(const Dataset& d,
                                           const SkeletonSpec& skeleton,
                                           const PipelineConfig& cfg, int n_boot,
                                           std::uint64_t seed) {
    if (n_boot < 10) throw ConfigError("bootstrap needs n_boot >= 10");

    PcOptions opt;
    opt.restrict_to_anatomy = cfg.restrict_to_anatomy;
    opt.ci = cfg.ci_test;
    opt.n_bins = cfg.n_bins;
    opt.bin_profile = cfg.bin_profile;

    const int frames = d.frames();
    std::vector<std::map<Edge, int>> counts(n_boot);
    std::exception_ptr failure = nullptr;
    std::mutex failure_mutex;

    kernels::parallel_for(n_boot, [&](int rep) {
        try {
            Rng rng = Rng(seed).split(static_cast<std::uint64_t>(rep) + 1);
            Dataset resampled;
            resampled.n_joints = d.n_joints;
            resampled.n_dims = d.n_dims;
            resampled.data.reserve(d.data.size());
            for (int t = 0; t < frames; ++t) {
                const int src = static_cast<int>(rng.below(frames));
                for (int v = 0; v < d.vars(); ++v)
                    resampled.data.push_back(d.at(src, v));
                resampled.behavior.push_back(d.behavior.empty() ? 0 : d.behavior[src]);
            }
            const auto skel = pc_skeleton(resampled, skeleton, cfg.alpha, cfg.max_cond, opt);
            const auto cpdag = meek_closure(orient_v_structures(skel));
            const auto dag = assess_directions(
                cpdag, discretize(resampled, cfg.n_bins, cfg.bin_profile), skeleton,
                cfg.smoothing, cfg.gap_threshold);
            for (const auto& e : dag.edges) counts[rep][{e.src, e.dst}] = 1;
        } catch (...) {
            const std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    });
    if (failure) std::rethrow_exception(failure);

    std::map<Edge, double> freq;
    for (const auto& rep : counts)
        for (const auto& [edge, one] : rep) freq[edge] += one;
    for (auto& [edge, f] : freq) f /= n_boot;
    return freq;
}

}  // namespace causalkin
