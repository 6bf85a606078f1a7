#include "causalkin/pc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "causalkin/citest.hpp"
#include "causalkin/errors.hpp"
#include "causalkin/ingest.hpp"
#include "causalkin/kernels.hpp"

namespace causalkin {

namespace {

struct JointCiResult {
    bool independent = false;
    bool errored = false;  // every dimension-pair test failed
};

// Joint-level CI oracle shared by all skeleton levels. Thread-safe: the
// correlation matrix / discrete states are read-only after construction.
class JointCi {
public:
    JointCi(const Dataset& d, const PcOptions& opt, double alpha)
        : alpha_(alpha), n_dims_(d.n_dims), frames_(d.frames()), opt_(opt) {
        if (opt.ci == CiKind::gaussian) {
            corr_ = correlation_matrix(d);
            n_vars_ = d.vars();
        } else {
            discrete_ = discretize(d, opt.n_bins, opt.bin_profile);
        }
    }

    JointCiResult test(int x, int y, const std::vector<int>& s) const {
        std::vector<int> cond_vars;
        cond_vars.reserve(s.size() * n_dims_);
        for (int joint : s)
            for (int k = 0; k < n_dims_; ++k) cond_vars.push_back(joint * n_dims_ + k);

        JointCiResult out;
        out.independent = true;
        int errors = 0, tests = 0;
        for (int a = 0; a < n_dims_; ++a)
            for (int b = 0; b < n_dims_; ++b) {
                ++tests;
                const int vx = x * n_dims_ + a;
                const int vy = y * n_dims_ + b;
                if (opt_.ci == CiKind::gaussian) {
                    try {
                        const double r =
                            partial_correlation_from_corr(vx, vy, cond_vars, corr_, n_vars_);
                        if (std::abs(r) >= 1.0 - 1e-12) {
                            out.independent = false;  // numerically perfect dependence
                            continue;
                        }
                        const auto dec = fisher_z_test(r, frames_,
                                                       static_cast<int>(cond_vars.size()), alpha_);
                        if (!dec.independent) out.independent = false;
                    } catch (const SingularConditioningError&) {
                        ++errors;
                        out.independent = false;  // conservative: keep the edge
                    }
                } else {
                    const auto dec = conditional_mi_test(vx, vy, cond_vars, discrete_, alpha_);
                    if (!dec.independent) out.independent = false;
                }
            }
        out.errored = (errors == tests);
        return out;
    }

private:
    double alpha_;
    int n_dims_;
    int frames_;
    int n_vars_ = 0;
    PcOptions opt_;
    std::vector<double> corr_;
    DiscreteDataset discrete_;
};

// lexicographic size-k subsets of `pool`, excluding `skip`
void for_each_subset(const std::vector<int>& pool, int k,
                     const std::function<void(const std::vector<int>&)>& fn) {
    const int n = static_cast<int>(pool.size());
    if (k > n) return;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    std::vector<int> subset(k);
    while (true) {
        for (int i = 0; i < k; ++i) subset[i] = pool[idx[i]];
        fn(subset);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

SkeletonResult pc_skeleton(const Dataset& d, const SkeletonSpec& skeleton,
                           double alpha, int max_cond, const PcOptions& opt) {
    skeleton.validate();
    if (d.frames() < 50) throw InsufficientSamplesError("PC needs at least 50 frames");
    if (max_cond < 0) throw ConfigError("max_cond must be >= 0");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    if (d.n_joints != skeleton.n_joints)
        throw ShapeMismatchError(skeleton.n_joints, d.n_joints);

    const int n = skeleton.n_joints;
    const JointCi ci(d, opt, alpha);

    std::vector<Edge> edges;
    if (opt.restrict_to_anatomy) {
        edges = skeleton.anatomical_edges;
        std::sort(edges.begin(), edges.end());
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
    }

    SkeletonResult result;
    result.n = n;
    std::map<Edge, std::pair<int, int>> error_tally;  // pair -> (errored, total)

    for (int level = 0; level <= max_cond; ++level) {
        // adjacency snapshot frozen for the whole level (stable variant)
        std::vector<std::vector<int>> adj(n);
        for (const auto& [a, b] : edges) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        for (auto& v : adj) std::sort(v.begin(), v.end());

        bool any_testable = false;
        for (const auto& [a, b] : edges)
            if (static_cast<int>(adj[a].size()) - 1 >= level ||
                static_cast<int>(adj[b].size()) - 1 >= level) {
                any_testable = true;
                break;
            }
        if (!any_testable) break;

        struct PairOutcome {
            bool removed = false;
            std::vector<int> sepset;
            int errors = 0, tests = 0;
        };
        std::vector<PairOutcome> outcome(edges.size());

        kernels::parallel_for(static_cast<int>(edges.size()), [&](int e) {
            const auto [x, y] = edges[e];
            PairOutcome& po = outcome[e];
            std::set<std::vector<int>> tried;
            for (int side = 0; side < 2 && !po.removed; ++side) {
                const int from = side == 0 ? x : y;
                const int other = side == 0 ? y : x;
                std::vector<int> pool;
                for (int v : adj[from])
                    if (v != other) pool.push_back(v);
                for_each_subset(pool, level, [&](const std::vector<int>& s) {
                    if (po.removed || !tried.insert(s).second) return;
                    const auto r = ci.test(x, y, s);
                    ++po.tests;
                    if (r.errored) ++po.errors;
                    if (!r.errored && r.independent) {
                        po.removed = true;
                        po.sepset = s;
                    }
                });
            }
        });

        std::vector<Edge> kept;
        for (std::size_t e = 0; e < edges.size(); ++e) {
            auto& tally = error_tally[edges[e]];
            tally.first += outcome[e].errors;
            tally.second += outcome[e].tests;
            if (outcome[e].removed)
                result.sepsets[edges[e]] = outcome[e].sepset;
            else
                kept.push_back(edges[e]);
        }
        edges.swap(kept);
    }

    result.edges = std::move(edges);
    for (const auto& e : result.edges) {
        const auto it = error_tally.find(e);
        if (it != error_tally.end() && it->second.second > 0 &&
            it->second.first == it->second.second)
            result.flagged.push_back(e);
    }
    return result;
}

Cpdag orient_v_structures(const SkeletonResult& skeleton) {
    Cpdag g;
    g.n = skeleton.n;
    g.undirected = skeleton.edges;
    g.sepsets = skeleton.sepsets;
    g.flagged_pairs = skeleton.flagged;

    std::vector<std::vector<char>> adj(g.n, std::vector<char>(g.n, 0));
    for (const auto& [a, b] : g.undirected) adj[a][b] = adj[b][a] = 1;

    std::set<Edge> demands;
    for (int z = 0; z < g.n; ++z)
        for (int x = 0; x < g.n; ++x) {
            if (!adj[x][z]) continue;
            for (int y = x + 1; y < g.n; ++y) {
                if (y == z || !adj[y][z] || adj[x][y]) continue;  // need unshielded x-z-y
                const auto it = skeleton.sepsets.find(unordered(x, y));
                if (it == skeleton.sepsets.end()) continue;
                const auto& sep = it->second;
                if (std::find(sep.begin(), sep.end(), z) == sep.end()) {
                    demands.insert({x, z});
                    demands.insert({y, z});
                }
            }
        }

    std::set<Edge> conflicted;
    for (const auto& [a, b] : demands)
        if (demands.count({b, a})) conflicted.insert(unordered(a, b));

    for (const auto& [a, b] : demands) {
        if (conflicted.count(unordered(a, b))) continue;
        const Edge e = unordered(a, b);
        const auto it = std::find(g.undirected.begin(), g.undirected.end(), e);
        if (it == g.undirected.end()) continue;  // already directed by the other demand
        g.undirected.erase(it);
        g.directed.push_back({a, b});
    }
    g.conflict_edges.assign(conflicted.begin(), conflicted.end());
    std::sort(g.directed.begin(), g.directed.end());
    return g;
}

namespace {

// 0 none, 1 undirected, 2 directed row->col
struct Pdag {
    int n;
    std::vector<char> m;
    explicit Pdag(const Cpdag& g) : n(g.n), m(static_cast<std::size_t>(g.n) * g.n, 0) {
        for (const auto& [a, b] : g.undirected) at(a, b) = at(b, a) = 1;
        for (const auto& [a, b] : g.directed) at(a, b) = 2;
    }
    char& at(int i, int j) { return m[static_cast<std::size_t>(i) * n + j]; }
    char at(int i, int j) const { return m[static_cast<std::size_t>(i) * n + j]; }
    bool undirected(int i, int j) const { return at(i, j) == 1; }
    bool directed(int i, int j) const { return at(i, j) == 2; }
    bool adjacent(int i, int j) const { return at(i, j) != 0 || at(j, i) != 0; }

    bool directed_path(int from, int to) const {
        if (from == to) return true;
        std::vector<char> seen(n, 0);
        std::vector<int> stack{from};
        seen[from] = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int w = 0; w < n; ++w)
                if (directed(v, w) && !seen[w]) {
                    if (w == to) return true;
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        return false;
    }

    // returns false when orienting a->b would close a directed cycle
    bool orient(int a, int b) {
        if (directed_path(b, a)) return false;
        at(a, b) = 2;
        at(b, a) = 0;
        return true;
    }
};

bool meek_step(Pdag& g, int a, int b) {
    // R1: c -> a, a - b, c and b nonadjacent
    for (int c = 0; c < g.n; ++c)
        if (g.directed(c, a) && !g.adjacent(c, b) && c != b)
            return g.orient(a, b);
    // R2: a -> c -> b with a - b
    for (int c = 0; c < g.n; ++c)
        if (g.directed(a, c) && g.directed(c, b))
            return g.orient(a, b);
    // R3: a - c -> b and a - d -> b with c, d nonadjacent
    for (int c = 0; c < g.n; ++c) {
        if (!(g.undirected(a, c) && g.directed(c, b))) continue;
        for (int e = c + 1; e < g.n; ++e)
            if (g.undirected(a, e) && g.directed(e, b) && !g.adjacent(c, e))
                return g.orient(a, b);
    }
    // R4: a - c, c -> d, d -> b, c and b nonadjacent
    for (int c = 0; c < g.n; ++c) {
        if (!g.undirected(a, c) || g.adjacent(c, b)) continue;
        for (int e = 0; e < g.n; ++e)
            if (g.directed(c, e) && g.directed(e, b))
                return g.orient(a, b);
    }
    return false;
}

}  // namespace

Cpdag meek_closure(const Cpdag& g) {
    Pdag p(g);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int a = 0; a < p.n; ++a)
            for (int b = 0; b < p.n; ++b)
                if (a != b && p.undirected(a, b) && meek_step(p, a, b)) changed = true;
    }

    Cpdag out;
    out.n = g.n;
    out.sepsets = g.sepsets;
    out.conflict_edges = g.conflict_edges;
    out.flagged_pairs = g.flagged_pairs;
    for (int i = 0; i < p.n; ++i)
        for (int j = 0; j < p.n; ++j) {
            if (p.directed(i, j)) out.directed.push_back({i, j});
            if (i < j && p.undirected(i, j)) out.undirected.push_back({i, j});
        }
    std::sort(out.directed.begin(), out.directed.end());
    std::sort(out.undirected.begin(), out.undirected.end());
    return out;
}

}  // namespace causalkin
