#include <doctest.h>

#include "causalkin/errors.hpp"
#include "causalkin/types.hpp"

using namespace causalkin;

namespace {

WeightedCausalDag dag_from_edges(int n, const std::vector<Edge>& edges) {
    WeightedCausalDag g;
    g.n = n;
    for (const auto& [a, b] : edges) {
        CausalEdge e;
        e.src = a;
        e.dst = b;
        e.weight = 1.0;
        g.edges.push_back(e);
    }
    return g;
}

}  // namespace

TEST_SUITE("types") {

TEST_CASE("validate_dag: 3-node chain is acyclic") {
    const auto report = validate_dag(dag_from_edges(3, {{0, 1}, {1, 2}}));
    CHECK(report.ok);
    CHECK(report.cycle_edges.empty());
}

TEST_CASE("validate_dag: 2-cycle reports both edges") {
    const auto report = validate_dag(dag_from_edges(2, {{0, 1}, {1, 0}}));
    CHECK_FALSE(report.ok);
    REQUIRE(report.cycle_edges.size() == 2);
    CHECK(report.cycle_edges[0] == Edge{0, 1});
    CHECK(report.cycle_edges[1] == Edge{1, 0});
}

TEST_CASE("validate_dag: 3-cycle reports all three edges") {
    const auto report = validate_dag(dag_from_edges(3, {{0, 1}, {1, 2}, {2, 0}}));
    CHECK_FALSE(report.ok);
    CHECK(report.cycle_edges.size() == 3);
}

TEST_CASE("validate_dag: cycle edges exclude branches off the cycle") {
    // 0->1->2->0 plus 2->3; the dangling edge lies on no cycle
    const auto report = validate_dag(dag_from_edges(4, {{0, 1}, {1, 2}, {2, 0}, {2, 3}}));
    CHECK_FALSE(report.ok);
    CHECK(report.cycle_edges.size() == 3);
}

TEST_CASE("skeleton validation rejects malformed edge lists") {
    SkeletonSpec s;
    s.n_joints = 3;
    s.anatomical_edges = {{0, 3}};
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s.anatomical_edges = {{1, 1}};
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s.anatomical_edges = {{0, 1}, {1, 0}};  // same unordered pair twice
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s.anatomical_edges = {{0, 1}, {1, 2}};
    CHECK_NOTHROW(s.validate());
}

TEST_CASE("skeletal22 preset is a valid 22-node tree") {
    const SkeletonSpec s = skeletal22();
    CHECK_NOTHROW(s.validate());
    CHECK(s.n_joints == 22);
    CHECK(s.joint_names.size() == 22);
    CHECK(s.anatomical_edges.size() == 21);  // spanning tree

    std::vector<char> seen(22, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (const auto& [a, b] : s.anatomical_edges) {
            const int w = a == v ? b : (b == v ? a : -1);
            if (w >= 0 && !seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    CHECK(reached == 22);
}

TEST_CASE("dataset indexing is joint-major then dimension-major") {
    Dataset d;
    d.n_joints = 2;
    d.n_dims = 3;
    d.data.resize(12);
    for (int i = 0; i < 12; ++i) d.data[i] = i;
    CHECK(d.frames() == 2);
    CHECK(d.var_index(0, 2) == 2);
    CHECK(d.var_index(1, 0) == 3);
    CHECK(d.at(1, d.var_index(1, 1)) == 10);
    CHECK(d.column(4) == std::vector<double>{4.0, 10.0});
}

}  // TEST_SUITE
