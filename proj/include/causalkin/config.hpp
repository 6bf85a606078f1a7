#pragma once

#include <cstdint>

namespace causalkin {

enum class CiKind { gaussian, discrete };

// Spacing of the quantile cutpoints used by discretize.
//
//   uniform:       equally spaced quantiles (equal-frequency bins). Both
//                  margins come out uniform, and with uniform margins the
//                  mean directional KL of a pair is algebraically symmetric,
//                  so edge direction degenerates to a coin flip. Kept for
//                  comparison runs.
//   tail_weighted: cutpoints at q = 1/2 + sign(2u-1)|2u-1|^1.5 / 2 for
//                  u = k/B, clustering boundaries near the median. Tail bins
//                  carry more mass, margins are non-uniform, and the KL
//                  asymmetry that orients edges survives discretization.
//
// Both are rank-based, so scale invariance of the discretized pipeline is
// exact either way.
enum class BinProfile { tail_weighted, uniform };

// Knobs of the discovery pipeline (skeleton search through edge weighting).
// One config drives discover, orient and the theorem suites so that a run is
// reproducible from a single file.
struct PipelineConfig {
    double alpha = 0.05;             // CI significance level
    int max_cond = 3;                // largest conditioning set searched
    int n_bins = 8;                  // quantile bins for probability estimation
    double smoothing = 0.5;          // additive smoothing of count tables
    double gap_threshold = 0.1;      // relative KL gap below which edges are "imprecise"
    bool restrict_to_anatomy = false;  // start PC from anatomical edges, not the complete graph
    CiKind ci_test = CiKind::gaussian;
    BinProfile bin_profile = BinProfile::tail_weighted;
    int n_boot = 0;                  // bootstrap replicates; 0 disables
    std::uint64_t seed = 0;
};

}  // namespace causalkin
