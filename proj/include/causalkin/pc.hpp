#pragma once

#include <map>
#include <vector>

#include "causalkin/config.hpp"
#include "causalkin/types.hpp"

namespace causalkin {

struct PcOptions {
    bool restrict_to_anatomy = false;
    CiKind ci = CiKind::gaussian;
    int n_bins = 8;  // used by the discrete CI test
    BinProfile bin_profile = BinProfile::tail_weighted;
};

struct SkeletonResult {
    int n = 0;
    std::vector<Edge> edges;                   // undirected, (lo, hi)
    std::map<Edge, std::vector<int>> sepsets;  // for every removed pair
    std::vector<Edge> flagged;                 // kept because every CI test errored
};

// Stable PC adjacency search over joints. Joint-pair independence aggregates
// the CI tests of all dimension pairs ("any dimension dependent" keeps the
// edge); conditioning on a joint set conditions on all of its dimensions.
// Edge deletions are applied only after each level completes, so the result
// does not depend on variable ordering.
SkeletonResult pc_skeleton(const Dataset& d, const SkeletonSpec& skeleton,
                           double alpha, int max_cond, const PcOptions& opt = {});

// Orient every unshielded triple x - z - y with z outside sepset(x, y) as
// x -> z <- y. Edges demanded in both directions stay undirected and are
// flagged as conflicts.
Cpdag orient_v_structures(const SkeletonResult& skeleton);

// Meek rules R1-R4 to fixpoint. A rule only fires when the orientation does
// not close a directed cycle, so no cycle is ever introduced.
Cpdag meek_closure(const Cpdag& g);

}  // namespace causalkin
