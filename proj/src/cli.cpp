#include "causalkin/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "causalkin/errors.hpp"
#include "causalkin/gcn.hpp"
#include "causalkin/ingest.hpp"
#include "causalkin/kl.hpp"
#include "causalkin/pipeline.hpp"
#include "causalkin/representation.hpp"
#include "causalkin/serialize.hpp"
#include "causalkin/synth.hpp"

namespace causalkin {

namespace {

namespace fs = std::filesystem;

struct LoadedConfig {
    json raw;
    PipelineConfig pipeline;
    GcnConfig gcn;
    AdjacencyVariant gcn_adjacency = AdjacencyVariant::anatomical_baseline;
    std::string dataset_path;
    SkeletonSpec skeleton;
    CsvSchema schema;
};

SkeletonSpec skeleton_from_config(const json& raw, int n_joints) {
    if (!raw.contains("skeleton")) return chain_skeleton(n_joints);
    const json& js = raw.at("skeleton");
    if (js.contains("preset")) {
        const std::string preset = js.at("preset").get<std::string>();
        if (preset == "skeletal22") {
            if (n_joints != 22) throw ConfigError("skeletal22 preset requires n_joints=22");
            return skeletal22();
        }
        if (preset == "chain") return chain_skeleton(n_joints);
        throw ConfigError("unknown skeleton preset '" + preset + "'");
    }
    SkeletonSpec s = skeleton_from_json(js);
    if (s.n_joints != n_joints)
        throw ConfigError("skeleton n_joints disagrees with config n_joints");
    return s;
}

LoadedConfig load_config(const std::string& path,
                         const std::optional<std::uint64_t>& seed_override) {
    LoadedConfig c;
    c.raw = read_json_file(path);
    try {
        c.pipeline = pipeline_config_from_json(c.raw);
        if (seed_override) c.pipeline.seed = *seed_override;

        const int n_joints = c.raw.value("n_joints", 0);
        const int n_dims = c.raw.value("n_dims", 1);
        if (n_joints <= 0) throw ConfigError("config needs a positive n_joints");
        if (n_dims <= 0) throw ConfigError("config needs a positive n_dims");
        c.dataset_path = c.raw.value("dataset", "");
        c.skeleton = skeleton_from_config(c.raw, n_joints);

        if (c.raw.contains("schema")) {
            const json& js = c.raw.at("schema");
            c.schema.frame_column = js.value("frame_column", "frame");
            c.schema.behavior_column = js.value("behavior_column", "behavior");
            c.schema.exercise_column = js.value("exercise_column", "");
            if (js.contains("coordinate_columns"))
                c.schema.coordinate_columns =
                    js.at("coordinate_columns").get<std::vector<std::string>>();
        }
        if (c.schema.coordinate_columns.empty()) {
            const auto generated = coordinate_schema(n_joints, n_dims);
            c.schema.coordinate_columns = generated.coordinate_columns;
        }
        if (static_cast<int>(c.schema.coordinate_columns.size()) != n_joints * n_dims)
            throw ConfigError("schema coordinate column count must equal n_joints*n_dims");

        if (c.raw.contains("gcn")) {
            c.gcn = gcn_config_from_json(c.raw.at("gcn"));
            const std::string adj = c.raw.at("gcn").value("adjacency", "anatomical-baseline");
            if (adj == "anatomical-baseline")
                c.gcn_adjacency = AdjacencyVariant::anatomical_baseline;
            else if (adj == "causal-weighted")
                c.gcn_adjacency = AdjacencyVariant::causal_weighted;
            else
                throw ConfigError("unknown gcn adjacency '" + adj + "'");
        }
        c.gcn.seed = c.pipeline.seed;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
    return c;
}

Dataset load_dataset(const LoadedConfig& c) {
    if (c.dataset_path.empty()) throw ConfigError("config key 'dataset' is required");
    return load_csv(c.dataset_path, c.schema, c.skeleton);
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const std::string& config_text, std::uint64_t seed) {
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(config_text)));
    const json manifest = {{"command", command},
                           {"config_hash", hash},
                           {"seed", seed},
                           {"versions",
                            {{"causalkin", kLibraryVersion},
                             {"artifact_format", kArtifactFormatVersion}}}};
    write_file((out_dir / ("manifest_" + command + ".json")).string(),
               manifest.dump(2) + "\n");
}

int run_discover(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const std::string& out_dir) {
    const auto cfg = load_config(config_path, seed);
    const auto dataset = load_dataset(cfg);
    const Cpdag cpdag = discover_cpdag(dataset, cfg.skeleton, cfg.pipeline);

    fs::create_directories(out_dir);
    write_file((fs::path(out_dir) / "cpdag.json").string(), to_json(cpdag).dump(2) + "\n");
    write_manifest(out_dir, "discover", cfg.raw.dump(), cfg.pipeline.seed);

    std::cout << "cpdag: " << cpdag.n << " nodes, " << cpdag.undirected.size()
              << " undirected + " << cpdag.directed.size() << " directed edges, "
              << cpdag.sepsets.size() << " sepsets recorded\n"
              << "wrote " << (fs::path(out_dir) / "cpdag.json").string() << "\n";
    return 0;
}

int run_orient(const std::string& config_path, std::optional<std::uint64_t> seed,
               const std::string& out_dir, std::string cpdag_path) {
    const auto cfg = load_config(config_path, seed);
    const auto dataset = load_dataset(cfg);
    if (cpdag_path.empty()) cpdag_path = (fs::path(out_dir) / "cpdag.json").string();
    const Cpdag cpdag = cpdag_from_json(read_json_file(cpdag_path));
    const WeightedCausalDag dag =
        orient_edges(dataset, cpdag, cfg.skeleton, cfg.pipeline);

    json out = to_json(dag);
    if (cfg.pipeline.n_boot > 0)
        out["stability"] = to_json(bootstrap_stability(dataset, cfg.skeleton, cfg.pipeline,
                                                       cfg.pipeline.n_boot,
                                                       cfg.pipeline.seed));

    fs::create_directories(out_dir);
    write_file((fs::path(out_dir) / "weighted_dag.json").string(), out.dump(2) + "\n");
    write_file((fs::path(out_dir) / "weighted_dag.dot").string(),
               export_dot(dag, &cfg.skeleton));
    write_manifest(out_dir, "orient", cfg.raw.dump(), cfg.pipeline.seed);

    std::cout << "weighted dag: " << dag.edges.size() << " directed edges, "
              << dag.dropped.size() << " dropped by cycle repair\n"
              << "wrote " << (fs::path(out_dir) / "weighted_dag.json").string() << "\n";
    return 0;
}

int run_represent(std::string dag_path, const std::string& out_dir) {
    if (dag_path.empty()) dag_path = (fs::path(out_dir) / "weighted_dag.json").string();
    const std::string dag_text = read_file(dag_path);
    const WeightedCausalDag dag = dag_from_json(json::parse(dag_text));
    const Representation r = phi(dag);

    fs::create_directories(out_dir);
    write_file((fs::path(out_dir) / "phi.json").string(), to_json(r).dump(2) + "\n");
    write_manifest(out_dir, "represent", dag_text, 0);

    int nonzero_rows = 0;
    for (int i = 0; i < r.n; ++i)
        for (int j = 0; j < r.n; ++j)
            if (r.at(i, j) > 0.0) {
                ++nonzero_rows;
                break;
            }
    std::cout << "phi: " << r.n << " x " << r.n << ", " << nonzero_rows
              << " nonzero rows\n"
              << "wrote " << (fs::path(out_dir) / "phi.json").string() << "\n";
    return 0;
}

AdjacencyMode make_adjacency(const LoadedConfig& cfg, AdjacencyVariant variant,
                             std::string dag_path, const std::string& out_dir) {
    if (variant == AdjacencyVariant::anatomical_baseline)
        return AdjacencyMode::baseline(cfg.skeleton);
    if (dag_path.empty()) dag_path = (fs::path(out_dir) / "weighted_dag.json").string();
    return AdjacencyMode::causal(dag_from_json(read_json_file(dag_path)));
}

int run_train(const std::string& config_path, std::optional<std::uint64_t> seed,
              const std::string& out_dir, const std::string& adjacency_flag,
              const std::string& dag_path) {
    auto cfg = load_config(config_path, seed);
    AdjacencyVariant variant = cfg.gcn_adjacency;
    if (adjacency_flag == "baseline") variant = AdjacencyVariant::anatomical_baseline;
    else if (adjacency_flag == "causal") variant = AdjacencyVariant::causal_weighted;
    else if (!adjacency_flag.empty()) throw ConfigError("adjacency must be baseline|causal");

    const auto dataset = load_dataset(cfg);
    const auto adjacency = make_adjacency(cfg, variant, dag_path, out_dir);
    const TrainResult result = train(dataset, adjacency, cfg.gcn);

    fs::create_directories(out_dir);
    write_file((fs::path(out_dir) / "metrics.csv").string(), metrics_csv(result.history));
    json checkpoint = checkpoint_to_json(result.params, variant);
    checkpoint["optimizer"] = result.optimizer;
    write_file((fs::path(out_dir) / "checkpoint.json").string(), checkpoint.dump(2) + "\n");
    write_manifest(out_dir, "train", cfg.raw.dump(), cfg.gcn.seed);

    const auto& last = result.history.back();
    std::printf("epoch %d  train acc %.4f f1 %.4f | test acc %.4f f1 %.4f\n", last.epoch,
                last.train.accuracy, last.train.macro_f1, last.test.accuracy,
                last.test.macro_f1);
    std::cout << "wrote " << (fs::path(out_dir) / "metrics.csv").string() << " and "
              << (fs::path(out_dir) / "checkpoint.json").string() << "\n";
    return 0;
}

int run_eval(const std::string& config_path, std::optional<std::uint64_t> seed,
             const std::string& out_dir, const std::string& checkpoint_path) {
    const auto cfg = load_config(config_path, seed);
    if (checkpoint_path.empty()) throw ConfigError("--checkpoint is required");
    AdjacencyVariant variant;
    const GcnParams params =
        checkpoint_from_json(read_json_file(checkpoint_path), &variant);

    const auto dataset = load_dataset(cfg);
    AdjacencyMode adjacency;
    if (variant == AdjacencyVariant::anatomical_baseline) {
        adjacency = AdjacencyMode::baseline(cfg.skeleton);
    } else {
        const std::string dag_path = (fs::path(out_dir) / "weighted_dag.json").string();
        adjacency = AdjacencyMode::causal(dag_from_json(read_json_file(dag_path)));
    }
    const Metrics m = evaluate(params, adjacency, dataset);

    fs::create_directories(out_dir);
    char buf[160];
    std::snprintf(buf, sizeof buf, "0,eval,%.6f,%.6f,%.6f,%.6f\n", m.accuracy,
                  m.macro_precision, m.macro_recall, m.macro_f1);
    write_file((fs::path(out_dir) / "eval_metrics.csv").string(),
               std::string("epoch,split,accuracy,macro_precision,macro_recall,macro_f1\n") +
                   buf);
    write_manifest(out_dir, "eval", cfg.raw.dump(), cfg.pipeline.seed);

    std::printf("eval  acc %.4f prec %.4f rec %.4f f1 %.4f\n", m.accuracy,
                m.macro_precision, m.macro_recall, m.macro_f1);
    return 0;
}

int run_synth(const std::string& scm_path, int frames,
              std::optional<std::uint64_t> seed, const std::string& out_dir) {
    const std::string scm_text = read_file(scm_path);
    const ScmSpec spec = scm_from_json(json::parse(scm_text));
    const std::uint64_t s = seed.value_or(0);
    const Dataset d = sample_scm(spec, frames, s);

    fs::create_directories(out_dir);
    const auto schema = coordinate_schema(spec.n_nodes, spec.n_dims);
    write_csv((fs::path(out_dir) / "dataset.csv").string(), d, schema);
    write_manifest(out_dir, "synth", scm_text + std::to_string(frames), s);

    std::cout << "sampled " << d.frames() << " frames x " << d.vars()
              << " variables\nwrote " << (fs::path(out_dir) / "dataset.csv").string()
              << "\n";
    return 0;
}

int run_export(const std::string& dag_path, std::string out_path,
               const std::string& out_dir) {
    const WeightedCausalDag dag = dag_from_json(read_json_file(dag_path));
    const std::string dot = export_dot(dag);
    if (out_path == "-") {
        std::cout << dot;
        return 0;
    }
    if (out_path.empty()) {
        fs::create_directories(out_dir);
        out_path = (fs::path(out_dir) / "weighted_dag.dot").string();
    }
    write_file(out_path, dot);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

void emit_error(const std::string& kind, const std::string& message) {
    const json err = {{"error", {{"kind", kind}, {"message", message}}}};
    std::cerr << err.dump() << "\n";
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"causal graph learning over joint time series"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", cpdag_path, dag_path, checkpoint_path;
    std::string adjacency_flag, scm_path, export_out;
    std::optional<std::uint64_t> seed;
    int frames = 10000;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config)
            cmd->add_option("--config", config_path, "pipeline config JSON")->required();
        cmd->add_option("--seed", seed, "override the config seed");
        cmd->add_option("--out-dir", out_dir, "artifact output directory");
    };

    auto* discover = app.add_subcommand("discover", "PC skeleton + orientation -> cpdag.json");
    add_common(discover, true);
    auto* orient = app.add_subcommand("orient", "KL direction + weights -> weighted_dag.json");
    add_common(orient, true);
    orient->add_option("--cpdag", cpdag_path, "cpdag.json path (default <out-dir>/cpdag.json)");
    auto* represent = app.add_subcommand("represent", "normalized KL representation -> phi.json");
    add_common(represent, false);
    represent->add_option("--dag", dag_path, "weighted_dag.json path");
    auto* train_cmd = app.add_subcommand("train", "train the graph classifier");
    add_common(train_cmd, true);
    train_cmd->add_option("--adjacency", adjacency_flag, "baseline|causal (overrides config)");
    train_cmd->add_option("--dag", dag_path, "weighted_dag.json for causal adjacency");
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint");
    add_common(eval_cmd, true);
    eval_cmd->add_option("--checkpoint", checkpoint_path, "checkpoint.json path")->required();
    auto* synth = app.add_subcommand("synth", "sample a synthetic SCM dataset");
    synth->add_option("--scm", scm_path, "ScmSpec JSON path")->required();
    synth->add_option("--frames", frames, "number of frames");
    add_common(synth, false);
    auto* export_cmd = app.add_subcommand("export", "render a weighted dag as DOT");
    export_cmd->add_option("--dag", dag_path, "weighted_dag.json path")->required();
    export_cmd->add_option("--out", export_out, "output path ('-' for stdout)");
    export_cmd->add_option("--out-dir", out_dir, "artifact output directory");

    try {
        app.parse(argc, const_cast<char**>(argv));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (discover->parsed()) return run_discover(config_path, seed, out_dir);
        if (orient->parsed()) return run_orient(config_path, seed, out_dir, cpdag_path);
        if (represent->parsed()) return run_represent(dag_path, out_dir);
        if (train_cmd->parsed())
            return run_train(config_path, seed, out_dir, adjacency_flag, dag_path);
        if (eval_cmd->parsed())
            return run_eval(config_path, seed, out_dir, checkpoint_path);
        if (synth->parsed()) return run_synth(scm_path, frames, seed, out_dir);
        if (export_cmd->parsed()) return run_export(dag_path, export_out, out_dir);
    } catch (const ConfigError& e) {
        emit_error(e.kind(), e.what());
        return 2;
    } catch (const DataError& e) {
        emit_error(e.kind(), e.what());
        return 3;
    } catch (const Error& e) {
        emit_error(e.kind(), e.what());
        return 4;
    } catch (const std::exception& e) {
        emit_error("Internal", e.what());
        return 4;
    }
    return 0;
}

}  // namespace causalkin
