#include "causalkin/types.hpp"

#include <algorithm>
#include <set>

#include "causalkin/errors.hpp"

namespace causalkin {

void SkeletonSpec::validate() const {
    if (n_joints <= 0) throw ConfigError("skeleton needs at least one joint");
    if (!joint_names.empty() && static_cast<int>(joint_names.size()) != n_joints)
        throw ConfigError("joint_names length does not match n_joints");
    std::set<Edge> seen;
    for (const auto& [a, b] : anatomical_edges) {
        if (a < 0 || a >= n_joints || b < 0 || b >= n_joints)
            throw ConfigError("anatomical edge index out of range");
        if (a == b) throw ConfigError("anatomical self-loop");
        if (!seen.insert(unordered(a, b)).second)
            throw ConfigError("duplicate anatomical edge");
    }
}

bool SkeletonSpec::anatomically_adjacent(int a, int b) const {
    const Edge e = unordered(a, b);
    return std::find(anatomical_edges.begin(), anatomical_edges.end(), e) !=
           anatomical_edges.end();
}

SkeletonSpec skeletal22() {
    SkeletonSpec s;
    s.n_joints = 22;
    s.joint_names = {
        "pelvis",     "spine_lower", "spine_upper", "neck",       "head",
        "l_shoulder", "l_elbow",     "l_wrist",     "l_hand",     "r_shoulder",
        "r_elbow",    "r_wrist",     "r_hand",      "l_hip",      "l_knee",
        "l_ankle",    "l_foot",      "r_hip",       "r_knee",     "r_ankle",
        "r_foot",     "chest"};
    s.anatomical_edges = {
        {0, 1},  {1, 21}, {2, 21}, {2, 3},  {3, 4},            // trunk + head
        {2, 5},  {5, 6},  {6, 7},  {7, 8},                     // left arm
        {2, 9},  {9, 10}, {10, 11}, {11, 12},                  // right arm
        {0, 13}, {13, 14}, {14, 15}, {15, 16},                 // left leg
        {0, 17}, {17, 18}, {18, 19}, {19, 20}};                // right leg
    for (auto& e : s.anatomical_edges) e = unordered(e.first, e.second);
    return s;
}

SkeletonSpec chain_skeleton(int n) {
    SkeletonSpec s;
    s.n_joints = n;
    for (int i = 0; i < n; ++i) s.joint_names.push_back("node" + std::to_string(i));
    for (int i = 0; i + 1 < n; ++i) s.anatomical_edges.push_back({i, i + 1});
    return s;
}

std::vector<double> Dataset::column(int v) const {
    const int t_max = frames();
    std::vector<double> col(t_max);
    for (int t = 0; t < t_max; ++t) col[t] = at(t, v);
    return col;
}

bool Cpdag::has_undirected(int a, int b) const {
    const Edge e = unordered(a, b);
    return std::find(undirected.begin(), undirected.end(), e) != undirected.end();
}

bool Cpdag::has_directed(int src, int dst) const {
    return std::find(directed.begin(), directed.end(), Edge{src, dst}) != directed.end();
}

std::vector<int> Cpdag::neighbors(int v) const {
    std::set<int> out;
    for (const auto& [a, b] : undirected) {
        if (a == v) out.insert(b);
        if (b == v) out.insert(a);
    }
    for (const auto& [a, b] : directed) {
        if (a == v) out.insert(b);
        if (b == v) out.insert(a);
    }
    return {out.begin(), out.end()};
}

const CausalEdge* WeightedCausalDag::find(int src, int dst) const {
    for (const auto& e : edges)
        if (e.src == src && e.dst == dst) return &e;
    return nullptr;
}

namespace {

// is `to` reachable from `from` along directed edges
bool reachable(const WeightedCausalDag& g, int from, int to) {
    std::vector<char> seen(g.n, 0);
    std::vector<int> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (v == to) return true;
        for (const auto& e : g.edges)
            if (e.src == v && !seen[e.dst]) {
                seen[e.dst] = 1;
                stack.push_back(e.dst);
            }
    }
    return false;
}

}  // namespace

AcyclicityReport validate_dag(const WeightedCausalDag& g) {
    AcyclicityReport report;
    for (const auto& e : g.edges)
        if (reachable(g, e.dst, e.src)) report.cycle_edges.push_back({e.src, e.dst});
    report.ok = report.cycle_edges.empty();
    return report;
}

}  // namespace causalkin
