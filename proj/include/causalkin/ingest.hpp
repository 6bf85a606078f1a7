#pragma once

#include <string>
#include <vector>

#include "causalkin/config.hpp"
#include "causalkin/types.hpp"

namespace causalkin {

// Column layout of a motion CSV. Coordinate columns must be listed in the
// dataset's variable order (joint-major, then dimension).
struct CsvSchema {
    std::string frame_column = "frame";
    std::vector<std::string> coordinate_columns;
    std::string behavior_column = "behavior";
    std::string exercise_column;  // empty = not present
};

// Preset naming columns joint01_x .. joint<NN>_z (dims beyond z continue as d3, d4, ...).
CsvSchema coordinate_schema(int n_joints, int n_dims);

// UTF-8, comma-delimited, first row header. Frames keep file order.
Dataset load_csv(const std::string& path, const CsvSchema& schema,
                 const SkeletonSpec& skeleton);

void write_csv(const std::string& path, const Dataset& d, const CsvSchema& schema);

// Per-variable binning on value ranks at the profile's quantile cutpoints;
// ties share the lower bin and occupied bins are relabeled densely, so the
// result depends on the ordering of values only (exact invariance under any
// strictly increasing column-wise map). Constant columns collapse to a
// single state and are flagged degenerate rather than failing.
DiscreteDataset discretize(const Dataset& d, int n_bins,
                           BinProfile profile = BinProfile::tail_weighted);

}  // namespace causalkin
