#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fngcn/error.hpp"
#include "fngcn/harness.hpp"
#include "fngcn/runtime.hpp"

using namespace fngcn;

namespace {

/// Flags shared by every subcommand; each maps onto one config key.
struct CommonOptions {
    std::string config_path;
    std::map<std::string, std::string> overrides;

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "key = value config file");
        const std::vector<std::pair<std::string, std::string>> flags = {
            {"--graph", "graph"},           {"--out-dir", "out_dir"},       {"--mode", "mode"},
            {"--metrics", "metrics"},       {"--leave-out", "leave_out"},   {"--delta", "delta"},
            {"--variant", "variant"},       {"--layers", "hidden_layers"},  {"--hidden-dim", "hidden_dim"},
            {"--epochs", "max_epochs"},     {"--patience", "patience"},     {"--lr", "learning_rate"},
            {"--model-seed", "model_seed"}, {"--runs", "sir_runs"},         {"--xi", "sir_xi"},
            {"--gamma", "sir_gamma"},       {"--beta", "sir_beta"},         {"--sir-seed", "sir_seed"},
            {"--top-fraction", "top_fraction"}, {"--neg-ratio", "neg_ratio"}, {"--split", "split"},
            {"--dataset-seed", "dataset_seed"}, {"--rank-ties", "rank_ties"}, {"--threads", "threads"},
            {"--sir-cache", "sir_cache"},
        };
        for (const auto& [flag, key] : flags)
            app->add_option_function<std::string>(flag, [this, key](const std::string& v) { overrides[key] = v; },
                                                  "sets config key '" + key + "'");
        app->add_option_function<std::uint64_t>(
            "--seed",
            [this](std::uint64_t s) {
                for (const char* key : {"sir_seed", "dataset_seed", "model_seed"})
                    if (!overrides.count(key)) overrides[key] = std::to_string(s);
            },
            "seed for SIR, dataset and model unless set individually");
    }

    ExperimentConfig build() const {
        std::string text = config_path.empty() ? std::string() : read_text(config_path);
        // Overrides are appended, so they win over the file.
        for (const auto& [k, v] : overrides) text += k + " = \"" + v + "\"\n";
        return parse_config(text);
    }
};

void require_graph(const ExperimentConfig& cfg) {
    if (cfg.graph_path.empty()) throw ConfigError("config", "no graph given (--graph or graph = ...)");
}

void print_metrics(const RunRecord& r) {
    std::printf("%s: accuracy=%.4f f1=%.4f auc=%.4f (features: %zu, epochs: %d)\n", r.label.c_str(),
                r.test_metrics.accuracy, r.test_metrics.f1, r.test_metrics.auc, r.features.size(), r.trace.epochs_run());
}

}  // namespace

int main(int argc, char** argv) {
    tune_allocator();
    CLI::App app{"Influential node identification with centrality features and graph convolutional networks"};
    app.require_subcommand(1);

    CommonOptions common;
    auto* centrality_cmd = app.add_subcommand("centrality", "compute centralities to centralities.csv");
    std::string which = "all";
    centrality_cmd->add_option("--which", which, "local, global or all (or use --metrics)");
    auto* fn_cmd = app.add_subcommand("feature-net", "build the feature network and select metrics");
    auto* sir_cmd = app.add_subcommand("sir-label", "SIR influence scores to scores.csv");
    auto* dataset_cmd = app.add_subcommand("dataset", "labeled train/test split to dataset.json");
    auto* train_cmd = app.add_subcommand("train", "train a model; writes model.json and metrics");
    auto* predict_cmd = app.add_subcommand("predict", "predict influential nodes with a trained model");
    std::string model_path;
    predict_cmd->add_option("--model", model_path, "checkpoint written by train")->required();
    auto* ablate_cmd = app.add_subcommand("ablate", "depth, feature-set or leave-one-out ablation");
    std::string ablation;
    ablate_cmd->add_option("kind", ablation, "depth | features | loo")
        ->required()
        ->check(CLI::IsMember({"depth", "features", "loo"}));
    std::vector<int> depths = kDefaultDepths;
    ablate_cmd->add_option("--depths", depths, "depths for the depth ablation")->delimiter(',');
    std::vector<std::string> modes;
    ablate_cmd->add_option("--modes", modes, "feature modes for the feature ablation")->delimiter(',');
    auto* bench_cmd = app.add_subcommand("bench-timing", "single-threaded centrality timing per group");
    std::vector<std::string> bench_graphs;
    bench_cmd->add_option("graphs", bench_graphs, "edge lists; defaults to --graph");
    auto* pipeline_cmd = app.add_subcommand("pipeline", "end-to-end run; writes run_record.json");

    for (auto* sub : {centrality_cmd, fn_cmd, sir_cmd, dataset_cmd, train_cmd, predict_cmd, ablate_cmd, bench_cmd,
                      pipeline_cmd})
        common.attach(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig cfg = common.build();
        const auto& out = cfg.out_dir;

        if (centrality_cmd->parsed()) {
            require_graph(cfg);
            PipelineContext ctx(cfg);
            std::vector<Metric> metrics;
            if (!cfg.explicit_metrics.empty()) metrics = cfg.explicit_metrics;
            else if (which == "local") metrics = local_metrics();
            else if (which == "global") metrics = global_metrics();
            else if (which == "all") metrics.assign(kAllMetrics.begin(), kAllMetrics.end());
            else throw ConfigError("config", "--which must be local, global or all");
            const CentralityTable t = ctx.centralities(metrics);
            write_text(out / "centralities.csv", centrality_csv(ctx.graph(), t));
            write_json(out / "centrality_timings.json", centrality_timings_json(t));
            std::printf("%zu nodes, %zu metrics -> %s\n", ctx.graph().num_nodes(), t.metrics.size(),
                        (out / "centralities.csv").c_str());
        } else if (fn_cmd->parsed()) {
            require_graph(cfg);
            PipelineContext ctx(cfg);
            const auto s = ctx.select(cfg.delta);
            write_json(out / "selection.json", selection_json(s.network, s.result));
            std::printf("%zu groups; chosen:", s.result.groups.size());
            for (const auto& name : s.result.chosen_names(s.network)) std::printf(" %s", name.c_str());
            std::printf("\n");
        } else if (sir_cmd->parsed()) {
            require_graph(cfg);
            PipelineContext ctx(cfg);
            const auto& s = ctx.scores();
            write_text(out / "scores.csv", scores_csv(ctx.graph(), s));
            std::printf("beta_c=%.6g beta=%.6g -> %s\n", s.beta_c, s.beta, (out / "scores.csv").c_str());
        } else if (dataset_cmd->parsed()) {
            require_graph(cfg);
            PipelineContext ctx(cfg);
            const auto& d = ctx.dataset();
            write_json(out / "dataset.json", dataset_json(ctx.graph(), d, cfg.dataset));
            std::printf("%zu positives, %zu negatives, %zu train, %zu test\n", d.positives.size(), d.negatives.size(),
                        d.train.size(), d.test.size());
        } else if (train_cmd->parsed()) {
            require_graph(cfg);
            PipelineContext ctx(cfg);
            print_metrics(ctx.run(cfg, "train", out));
        } else if (predict_cmd->parsed()) {
            require_graph(cfg);
            const Checkpoint ck = checkpoint_from_json(read_json(model_path));
            PipelineContext ctx(cfg);
            std::vector<Metric> metrics;
            for (const auto& name : ck.features) {
                const auto m = parse_metric(name);
                if (!m) throw IoError("checkpoint", "unknown feature " + name);
                metrics.push_back(*m);
            }
            const FeatureMatrix f = normalize(ctx.centralities(metrics), metrics, ck.ties);
            const Prediction p = predict(ck.params, ck.config, ctx.transition(), f.values);
            std::string csv = "node,class,probability\n";
            for (Eigen::Index i = 0; i < p.cls.size(); ++i)
                csv += ctx.graph().name(static_cast<NodeId>(i)) + "," + std::to_string(p.cls[i]) + "," +
                       format_double(p.positive_probability[i]) + "\n";
            write_text(out / "predictions.csv", csv);
            std::printf("%d of %zu nodes predicted influential -> %s\n", p.cls.sum(), ctx.graph().num_nodes(),
                        (out / "predictions.csv").c_str());
        } else if (ablate_cmd->parsed()) {
            require_graph(cfg);
            PipelineContext ctx(cfg);
            if (ablation == "depth") {
                for (const auto& r : ablate_depth(ctx, depths)) print_metrics(r);
            } else if (ablation == "features") {
                std::vector<FeatureMode> ms;
                for (const auto& m : modes) ms.push_back(parse_feature_mode(m));
                for (const auto& r : ablate_features(ctx, ms.empty() ? kDefaultAblationModes : ms)) print_metrics(r);
            } else {
                const auto res = ablate_leave_one_out(ctx);
                print_metrics(res.baseline);
                for (const auto& row : res.summary)
                    std::printf("without %s: d_accuracy=%+.4f d_f1=%+.4f d_auc=%+.4f\n", row.metric.c_str(),
                                row.delta_accuracy, row.delta_f1, row.delta_auc);
            }
        } else if (bench_cmd->parsed()) {
            if (bench_graphs.empty()) {
                require_graph(cfg);
                bench_graphs.push_back(cfg.graph_path.string());
            }
            std::vector<TimingRow> rows;
            for (const auto& path : bench_graphs) {
                const Graph g = load_edge_list(path).graph;
                rows.push_back(timing_benchmark(g, std::filesystem::path(path).stem().string(), cfg.conductance_volume));
            }
            const std::string csv = timing_csv(rows);
            write_text(out / "timing.csv", csv);
            std::cout << csv;
        } else if (pipeline_cmd->parsed()) {
            require_graph(cfg);
            print_metrics(run_pipeline(cfg));
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error [%s]: %s\n", e.stage().c_str(), e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error [internal]: %s\n", e.what());
        return 1;
    }
    return 0;
}
