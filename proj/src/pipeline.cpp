#include "causalkin/pipeline.hpp"

#include "causalkin/ingest.hpp"
#include "causalkin/kl.hpp"
#include "causalkin/pc.hpp"

namespace causalkin {

Cpdag discover_cpdag(const Dataset& d, const SkeletonSpec& skeleton,
                     const PipelineConfig& cfg) {
    PcOptions opt;
    opt.restrict_to_anatomy = cfg.restrict_to_anatomy;
    opt.ci = cfg.ci_test;
    opt.n_bins = cfg.n_bins;
    opt.bin_profile = cfg.bin_profile;
    const auto skel = pc_skeleton(d, skeleton, cfg.alpha, cfg.max_cond, opt);
    return meek_closure(orient_v_structures(skel));
}

WeightedCausalDag orient_edges(const Dataset& d, const Cpdag& cpdag,
                               const SkeletonSpec& skeleton,
                               const PipelineConfig& cfg) {
    const DiscreteDataset dd = discretize(d, cfg.n_bins, cfg.bin_profile);
    return assess_directions(cpdag, dd, skeleton, cfg.smoothing, cfg.gap_threshold);
}

WeightedCausalDag learn_causal_dag(const Dataset& d, const SkeletonSpec& skeleton,
                                   const PipelineConfig& cfg) {
    return orient_edges(d, discover_cpdag(d, skeleton, cfg), skeleton, cfg);
}

}  // namespace causalkin
