#include "causalkin/serialize.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "causalkin/errors.hpp"

namespace causalkin {

namespace {

json edges_to_json(const std::vector<Edge>& edges) {
    json out = json::array();
    for (const auto& [a, b] : edges) out.push_back({a, b});
    return out;
}

std::vector<Edge> edges_from_json(const json& j) {
    std::vector<Edge> out;
    for (const auto& e : j) out.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    return out;
}

json layer_to_json(const GcnLayer& l) {
    return {{"in", l.in}, {"out", l.out}, {"w", l.w}, {"b", l.b}};
}

GcnLayer layer_from_json(const json& j) {
    GcnLayer l;
    l.in = j.at("in").get<int>();
    l.out = j.at("out").get<int>();
    l.w = j.at("w").get<std::vector<double>>();
    l.b = j.at("b").get<std::vector<double>>();
    return l;
}

}  // namespace

json to_json(const SkeletonSpec& s) {
    return {{"n_joints", s.n_joints},
            {"joint_names", s.joint_names},
            {"anatomical_edges", edges_to_json(s.anatomical_edges)}};
}

SkeletonSpec skeleton_from_json(const json& j) {
    SkeletonSpec s;
    s.n_joints = j.at("n_joints").get<int>();
    if (j.contains("joint_names"))
        s.joint_names = j.at("joint_names").get<std::vector<std::string>>();
    if (j.contains("anatomical_edges"))
        s.anatomical_edges = edges_from_json(j.at("anatomical_edges"));
    s.validate();
    return s;
}

json to_json(const ScmSpec& s) {
    json edges = json::array();
    for (const auto& e : s.edges) edges.push_back({{"src", e.src}, {"dst", e.dst}, {"weight", e.weight}});
    json label_edges = json::array();
    for (const auto& e : s.label_edges)
        label_edges.push_back({{"src", e.src}, {"dst", e.dst}, {"weight", e.weight}});
    return {{"n_nodes", s.n_nodes},
            {"n_dims", s.n_dims},
            {"mechanism", s.mechanism == Mechanism::linear_gaussian ? "linear-gaussian"
                                                                    : "nonlinear-asymmetric"},
            {"noise_scale", s.noise_scale},
            {"edges", edges},
            {"label_edges", label_edges}};
}

ScmSpec scm_from_json(const json& j) {
    ScmSpec s;
    s.n_nodes = j.at("n_nodes").get<int>();
    s.n_dims = j.value("n_dims", 1);
    const std::string mech = j.value("mechanism", "linear-gaussian");
    if (mech == "linear-gaussian")
        s.mechanism = Mechanism::linear_gaussian;
    else if (mech == "nonlinear-asymmetric")
        s.mechanism = Mechanism::nonlinear_asymmetric;
    else
        throw ConfigError("unknown mechanism '" + mech + "'");
    s.noise_scale = j.value("noise_scale", 1.0);
    for (const auto& e : j.value("edges", json::array()))
        s.edges.push_back({e.at("src").get<int>(), e.at("dst").get<int>(),
                           e.value("weight", 1.0)});
    for (const auto& e : j.value("label_edges", json::array()))
        s.label_edges.push_back({e.at("src").get<int>(), e.at("dst").get<int>(),
                                 e.value("weight", 1.0)});
    s.validate();
    return s;
}

json to_json(const Cpdag& g) {
    json sepsets = json::array();
    for (const auto& [pair, sep] : g.sepsets)
        sepsets.push_back({{"pair", {pair.first, pair.second}}, {"sepset", sep}});
    return {{"format_version", kArtifactFormatVersion},
            {"n", g.n},
            {"undirected", edges_to_json(g.undirected)},
            {"directed", edges_to_json(g.directed)},
            {"sepsets", sepsets},
            {"conflict_edges", edges_to_json(g.conflict_edges)},
            {"flagged_pairs", edges_to_json(g.flagged_pairs)}};
}

Cpdag cpdag_from_json(const json& j) {
    Cpdag g;
    g.n = j.at("n").get<int>();
    g.undirected = edges_from_json(j.at("undirected"));
    g.directed = edges_from_json(j.at("directed"));
    for (const auto& s : j.at("sepsets")) {
        const Edge pair{s.at("pair").at(0).get<int>(), s.at("pair").at(1).get<int>()};
        g.sepsets[pair] = s.at("sepset").get<std::vector<int>>();
    }
    g.conflict_edges = edges_from_json(j.value("conflict_edges", json::array()));
    g.flagged_pairs = edges_from_json(j.value("flagged_pairs", json::array()));
    return g;
}

namespace {

json causal_edge_to_json(const CausalEdge& e) {
    return {{"src", e.src},
            {"dst", e.dst},
            {"weight", e.weight},
            {"dim_votes", e.dim_votes},
            {"confident", e.confident},
            {"pc_compelled", e.pc_compelled}};
}

CausalEdge causal_edge_from_json(const json& j) {
    CausalEdge e;
    e.src = j.at("src").get<int>();
    e.dst = j.at("dst").get<int>();
    e.weight = j.at("weight").get<double>();
    e.dim_votes = j.value("dim_votes", std::vector<int>{});
    e.confident = j.value("confident", true);
    e.pc_compelled = j.value("pc_compelled", false);
    return e;
}

}  // namespace

json to_json(const WeightedCausalDag& g) {
    json edges = json::array();
    for (const auto& e : g.edges) edges.push_back(causal_edge_to_json(e));
    json dropped = json::array();
    for (const auto& e : g.dropped) dropped.push_back(causal_edge_to_json(e));
    return {{"format_version", kArtifactFormatVersion},
            {"n", g.n},
            {"edges", edges},
            {"dropped", dropped}};
}

WeightedCausalDag dag_from_json(const json& j) {
    WeightedCausalDag g;
    g.n = j.at("n").get<int>();
    for (const auto& e : j.at("edges")) g.edges.push_back(causal_edge_from_json(e));
    for (const auto& e : j.value("dropped", json::array()))
        g.dropped.push_back(causal_edge_from_json(e));
    return g;
}

json to_json(const Representation& r) {
    json rows = json::array();
    for (int i = 0; i < r.n; ++i) {
        json row = json::array();
        for (int k = 0; k < r.n; ++k) row.push_back(r.at(i, k));
        rows.push_back(row);
    }
    return {{"format_version", kArtifactFormatVersion},
            {"n", r.n},
            {"phi", rows},
            {"uniform_rows", r.uniform_rows}};
}

Representation representation_from_json(const json& j) {
    Representation r;
    r.n = j.at("n").get<int>();
    for (const auto& row : j.at("phi"))
        for (const auto& v : row) r.phi.push_back(v.get<double>());
    if (static_cast<int>(r.phi.size()) != r.n * r.n)
        throw ShapeMismatchError(r.n * r.n, static_cast<int>(r.phi.size()));
    r.uniform_rows = j.value("uniform_rows", std::vector<int>{});
    return r;
}

json to_json(const PipelineConfig& c) {
    return {{"alpha", c.alpha},
            {"max_cond", c.max_cond},
            {"n_bins", c.n_bins},
            {"smoothing", c.smoothing},
            {"gap_threshold", c.gap_threshold},
            {"restrict_to_anatomy", c.restrict_to_anatomy},
            {"ci_test", c.ci_test == CiKind::gaussian ? "gaussian" : "discrete"},
            {"bin_profile",
             c.bin_profile == BinProfile::tail_weighted ? "tail-weighted" : "uniform"},
            {"n_boot", c.n_boot},
            {"seed", c.seed}};
}

PipelineConfig pipeline_config_from_json(const json& j) {
    PipelineConfig c;
    c.alpha = j.value("alpha", c.alpha);
    c.max_cond = j.value("max_cond", c.max_cond);
    c.n_bins = j.value("n_bins", c.n_bins);
    c.smoothing = j.value("smoothing", c.smoothing);
    c.gap_threshold = j.value("gap_threshold", c.gap_threshold);
    c.restrict_to_anatomy = j.value("restrict_to_anatomy", c.restrict_to_anatomy);
    const std::string ci = j.value("ci_test", "gaussian");
    if (ci == "gaussian")
        c.ci_test = CiKind::gaussian;
    else if (ci == "discrete")
        c.ci_test = CiKind::discrete;
    else
        throw ConfigError("unknown ci_test '" + ci + "'");
    const std::string profile = j.value("bin_profile", "tail-weighted");
    if (profile == "tail-weighted")
        c.bin_profile = BinProfile::tail_weighted;
    else if (profile == "uniform")
        c.bin_profile = BinProfile::uniform;
    else
        throw ConfigError("unknown bin_profile '" + profile + "'");
    c.n_boot = j.value("n_boot", c.n_boot);
    c.seed = j.value("seed", c.seed);
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    if (c.max_cond < 0) throw ConfigError("max_cond must be >= 0");
    if (c.n_bins < 2) throw ConfigError("n_bins must be >= 2");
    if (c.smoothing < 0.0) throw ConfigError("smoothing must be >= 0");
    return c;
}

json to_json(const GcnConfig& c) {
    return {{"hidden_dims", c.hidden_dims},
            {"epochs", c.epochs},
            {"learning_rate", c.learning_rate},
            {"batch_size", c.batch_size},
            {"momentum", c.momentum},
            {"seed", c.seed},
            {"pooling", "mean"}};
}

GcnConfig gcn_config_from_json(const json& j) {
    GcnConfig c;
    c.hidden_dims = j.value("hidden_dims", c.hidden_dims);
    c.epochs = j.value("epochs", c.epochs);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.momentum = j.value("momentum", c.momentum);
    c.seed = j.value("seed", c.seed);
    c.validate();
    return c;
}

json checkpoint_to_json(const GcnParams& p, AdjacencyVariant variant) {
    json layers = json::array();
    for (const auto& l : p.layers) layers.push_back(layer_to_json(l));
    return {{"format_version", kArtifactFormatVersion},
            {"n_nodes", p.n_nodes},
            {"in_features", p.in_features},
            {"layers", layers},
            {"head", layer_to_json(p.head)},
            {"feature_mean", p.feature_mean},
            {"feature_sd", p.feature_sd},
            {"adjacency", variant == AdjacencyVariant::anatomical_baseline
                              ? "anatomical-baseline"
                              : "causal-weighted"}};
}

GcnParams checkpoint_from_json(const json& j, AdjacencyVariant* variant) {
    GcnParams p;
    p.n_nodes = j.at("n_nodes").get<int>();
    p.in_features = j.at("in_features").get<int>();
    for (const auto& l : j.at("layers")) p.layers.push_back(layer_from_json(l));
    p.head = layer_from_json(j.at("head"));
    p.feature_mean = j.value("feature_mean", std::vector<double>{});
    p.feature_sd = j.value("feature_sd", std::vector<double>{});
    if (variant) {
        const std::string v = j.value("adjacency", "anatomical-baseline");
        *variant = v == "causal-weighted" ? AdjacencyVariant::causal_weighted
                                          : AdjacencyVariant::anatomical_baseline;
    }
    return p;
}

json to_json(const std::map<Edge, double>& stability) {
    json out = json::array();
    for (const auto& [edge, freq] : stability)
        out.push_back({{"src", edge.first}, {"dst", edge.second}, {"frequency", freq}});
    return out;
}

std::string export_dot(const WeightedCausalDag& g, const SkeletonSpec* names) {
    double max_w = 0.0;
    for (const auto& e : g.edges) max_w = std::max(max_w, e.weight);

    std::ostringstream out;
    out << "digraph causal {\n  rankdir=LR;\n  node [shape=circle, fontsize=10];\n";
    char buf[64];
    for (int i = 0; i < g.n; ++i) {
        out << "  n" << i;
        if (names && i < static_cast<int>(names->joint_names.size()))
            out << " [label=\"" << i << ":" << names->joint_names[i] << "\"]";
        out << ";\n";
    }
    std::vector<CausalEdge> edges = g.edges;
    std::sort(edges.begin(), edges.end(), [](const CausalEdge& a, const CausalEdge& b) {
        return std::pair{a.src, a.dst} < std::pair{b.src, b.dst};
    });
    for (const auto& e : edges) {
        // display width uses the max-normalized weight; the raw nats stay in `weight`
        const double norm = max_w > 0.0 ? e.weight / max_w : 0.0;
        std::snprintf(buf, sizeof buf, "weight=%.6g, penwidth=%.3f", e.weight,
                      0.5 + 3.5 * norm);
        out << "  n" << e.src << " -> n" << e.dst << " [" << buf;
        if (!e.confident) out << ", style=dashed";
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

std::string metrics_csv(const std::vector<EpochStats>& history) {
    std::ostringstream out;
    out << "epoch,split,accuracy,macro_precision,macro_recall,macro_f1\n";
    char buf[160];
    for (const auto& s : history) {
        std::snprintf(buf, sizeof buf, "%d,train,%.6f,%.6f,%.6f,%.6f\n", s.epoch,
                      s.train.accuracy, s.train.macro_precision, s.train.macro_recall,
                      s.train.macro_f1);
        out << buf;
        std::snprintf(buf, sizeof buf, "%d,test,%.6f,%.6f,%.6f,%.6f\n", s.epoch,
                      s.test.accuracy, s.test.macro_precision, s.test.macro_recall,
                      s.test.macro_f1);
        out << buf;
    }
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json_file(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError("invalid JSON in '" + path + "': " + e.what());
    }
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace causalkin
