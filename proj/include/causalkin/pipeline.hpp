#pragma once

#include "causalkin/config.hpp"
#include "causalkin/types.hpp"

namespace causalkin {

// Skeleton search, v-structure orientation and Meek closure in one call.
Cpdag discover_cpdag(const Dataset& d, const SkeletonSpec& skeleton,
                     const PipelineConfig& cfg);

// KL orientation and weighting of a discovered CPDAG.
WeightedCausalDag orient_edges(const Dataset& d, const Cpdag& cpdag,
                               const SkeletonSpec& skeleton,
                               const PipelineConfig& cfg);

// Full discovery: discover_cpdag followed by orient_edges.
WeightedCausalDag learn_causal_dag(const Dataset& d, const SkeletonSpec& skeleton,
                                   const PipelineConfig& cfg);

}  // namespace causalkin
