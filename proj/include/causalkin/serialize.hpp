#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "causalkin/config.hpp"
#include "causalkin/gcn.hpp"
#include "causalkin/ingest.hpp"
#include "causalkin/synth.hpp"
#include "causalkin/types.hpp"

namespace causalkin {

using json = nlohmann::json;

// JSON codecs for every inter-stage artifact; parse(emit(x)) == x.
json to_json(const SkeletonSpec& s);
SkeletonSpec skeleton_from_json(const json& j);

json to_json(const ScmSpec& s);
ScmSpec scm_from_json(const json& j);

json to_json(const Cpdag& g);
Cpdag cpdag_from_json(const json& j);

json to_json(const WeightedCausalDag& g);
WeightedCausalDag dag_from_json(const json& j);

json to_json(const Representation& r);
Representation representation_from_json(const json& j);

json to_json(const PipelineConfig& c);
PipelineConfig pipeline_config_from_json(const json& j);

json to_json(const GcnConfig& c);
GcnConfig gcn_config_from_json(const json& j);

// versioned classifier checkpoint
json checkpoint_to_json(const GcnParams& p, AdjacencyVariant variant);
GcnParams checkpoint_from_json(const json& j, AdjacencyVariant* variant = nullptr);

json to_json(const std::map<Edge, double>& stability);

// Deterministic DOT rendering: nodes in index order, edges sorted, penwidth
// scaled by the maximum weight, style=dashed for low-confidence edges.
std::string export_dot(const WeightedCausalDag& g,
                       const SkeletonSpec* names = nullptr);

// header: epoch,split,accuracy,macro_precision,macro_recall,macro_f1
std::string metrics_csv(const std::vector<EpochStats>& history);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);
json read_json_file(const std::string& path);

std::uint64_t fnv1a64(const std::string& s);

inline constexpr const char* kLibraryVersion = "0.1.0";
inline constexpr int kArtifactFormatVersion = 1;

}  // namespace causalkin
