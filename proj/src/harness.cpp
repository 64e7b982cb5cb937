#include "fngcn/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "fngcn/error.hpp"

namespace fngcn {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex(std::uint64_t x) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    double x = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x))
        throw ConfigError("config", key + ": expected a number, got '" + v + "'");
    return x;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& v) {
    Int x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ConfigError("config", key + ": expected an integer, got '" + v + "'");
    return x;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config", key + ": expected true/false, got '" + v + "'");
}

Metric to_metric(const std::string& name) {
    const auto m = parse_metric(name);
    if (!m) throw ConfigError("config", "unknown metric: " + name);
    return *m;
}

std::string metric_list(const std::vector<Metric>& ms) {
    std::string out;
    for (Metric m : ms) out += (out.empty() ? "" : ",") + std::string(metric_name(m));
    return out;
}

/// Runs `f`, retagging foreign exceptions with `stage`.
template <typename F>
auto staged(const char* stage, F&& f) {
    try {
        return f();
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(stage, e.what());
    }
}

MetricsReport evaluate_on(const Prediction& pred, const LabeledDataset& d, const std::vector<NodeId>& nodes) {
    const auto k = static_cast<Eigen::Index>(nodes.size());
    Eigen::VectorXi cls(k), truth(k);
    Eigen::VectorXd score(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const NodeId v = nodes[static_cast<std::size_t>(i)];
        cls[i] = pred.cls[v];
        score[i] = pred.positive_probability[v];
        truth[i] = d.labels[v];
    }
    return evaluate(cls, score, truth);
}

std::vector<Metric> sorted_metrics(std::vector<Metric> ms) {
    std::sort(ms.begin(), ms.end(), [](Metric a, Metric b) { return static_cast<int>(a) < static_cast<int>(b); });
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
    return ms;
}

}  // namespace

std::string_view feature_mode_name(FeatureMode m) {
    switch (m) {
        case FeatureMode::FnSelected: return "fn-selected";
        case FeatureMode::AllLocal: return "all-local";
        case FeatureMode::AllGlobal: return "all-global";
        case FeatureMode::All: return "all";
        case FeatureMode::InfGcn4: return "infgcn4";
        case FeatureMode::Explicit: return "explicit";
        case FeatureMode::LeaveOneOut: return "leave-one-out";
    }
    return "?";
}

FeatureMode parse_feature_mode(std::string_view name) {
    for (FeatureMode m : {FeatureMode::FnSelected, FeatureMode::AllLocal, FeatureMode::AllGlobal, FeatureMode::All,
                          FeatureMode::InfGcn4, FeatureMode::Explicit, FeatureMode::LeaveOneOut})
        if (feature_mode_name(m) == name) return m;
    throw ConfigError("config", "unknown feature mode: " + std::string(name));
}

std::vector<Metric> infgcn4_metrics() { return {Metric::Closeness, Metric::Betweenness, Metric::Degree, Metric::LCC}; }

void ExperimentConfig::validate() const {
    if (!(delta >= 0.0 && delta < 1.0)) throw ConfigError("config", "delta must lie in [0, 1)");
    if (mode == FeatureMode::Explicit && explicit_metrics.empty())
        throw ConfigError("config", "explicit feature mode needs a metric list");
    if (mode == FeatureMode::LeaveOneOut && !leave_out)
        throw ConfigError("config", "leave-one-out mode needs leave_out");
    if (sir.runs < 1) throw ConfigError("config", "sir_runs must be positive");
    if (!(sir.xi > 0.0)) throw ConfigError("config", "sir_xi must be positive");
    if (!(sir.gamma > 0.0 && sir.gamma <= 1.0)) throw ConfigError("config", "sir_gamma must lie in (0, 1]");
    if (sir.beta_override && !(*sir.beta_override >= 0.0 && *sir.beta_override <= 1.0))
        throw ConfigError("config", "sir_beta must lie in [0, 1]");
    if (!(dataset.top_fraction > 0.0 && dataset.top_fraction <= 1.0))
        throw ConfigError("config", "top_fraction must lie in (0, 1]");
    if (!(dataset.split > 0.0 && dataset.split < 1.0)) throw ConfigError("config", "split must lie in (0, 1)");
    if (!(dataset.neg_ratio > 0.0)) throw ConfigError("config", "neg_ratio must be positive");
    model.validate();
}

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& v) {
    auto& m = c.model;
    if (key == "graph") c.graph_path = v;
    else if (key == "mode") c.mode = parse_feature_mode(v);
    else if (key == "metrics") {
        c.explicit_metrics.clear();
        for (const auto& name : split_list(v)) c.explicit_metrics.push_back(to_metric(name));
    } else if (key == "leave_out") {
        if (v.empty()) c.leave_out.reset();
        else c.leave_out = to_metric(v);
    } else if (key == "delta") c.delta = to_double(key, v);
    else if (key == "variant") {
        if (v == "shallow") m = ModelConfig::shallow();
        else if (v == "deep") m = ModelConfig::deep();
        else throw ConfigError("config", "unknown variant: " + v);
    } else if (key == "hidden_layers") m.hidden_layers = to_int<int>(key, v);
    else if (key == "hidden_dim") m.hidden_dim = to_int<int>(key, v);
    else if (key == "alpha") m.alpha = to_double(key, v);
    else if (key == "lambda") m.lambda = to_double(key, v);
    else if (key == "beta_schedule") {
        if (v == "log") m.beta_schedule = BetaSchedule::Log;
        else if (v == "linear") m.beta_schedule = BetaSchedule::Linear;
        else throw ConfigError("config", "unknown beta_schedule: " + v);
    } else if (key == "dropout") m.dropout = to_double(key, v);
    else if (key == "learning_rate") m.learning_rate = to_double(key, v);
    else if (key == "weight_decay_hidden") m.weight_decay_hidden = to_double(key, v);
    else if (key == "weight_decay_fc") m.weight_decay_fc = to_double(key, v);
    else if (key == "patience") m.patience = to_int<int>(key, v);
    else if (key == "max_epochs") m.max_epochs = to_int<int>(key, v);
    else if (key == "model_seed") m.seed = to_int<std::uint64_t>(key, v);
    else if (key == "stopping") {
        if (v == "test") m.stopping = StoppingSet::Test;
        else if (v == "validation") m.stopping = StoppingSet::Validation;
        else throw ConfigError("config", "unknown stopping set: " + v);
    } else if (key == "validation_fraction") m.validation_fraction = to_double(key, v);
    else if (key == "sir_runs") c.sir.runs = to_int<int>(key, v);
    else if (key == "sir_xi") c.sir.xi = to_double(key, v);
    else if (key == "sir_gamma") c.sir.gamma = to_double(key, v);
    else if (key == "sir_seed") c.sir.seed = to_int<std::uint64_t>(key, v);
    else if (key == "sir_beta") {
        if (v.empty()) c.sir.beta_override.reset();
        else c.sir.beta_override = to_double(key, v);
    } else if (key == "top_fraction") c.dataset.top_fraction = to_double(key, v);
    else if (key == "neg_ratio") c.dataset.neg_ratio = to_double(key, v);
    else if (key == "split") c.dataset.split = to_double(key, v);
    else if (key == "dataset_seed") c.dataset.seed = to_int<std::uint64_t>(key, v);
    else if (key == "negative_sampling") {
        if (v == "ratio") c.dataset.sampling = NegativeSampling::Ratio;
        else if (v == "ten-percent") c.dataset.sampling = NegativeSampling::TenPercent;
        else throw ConfigError("config", "unknown negative_sampling: " + v);
    } else if (key == "rank_ties") {
        if (v == "node-id") c.rank_ties = RankTies::NodeId;
        else if (v == "average") c.rank_ties = RankTies::Average;
        else throw ConfigError("config", "unknown rank_ties: " + v);
    } else if (key == "conductance_volume") {
        if (v == "degree-sum") c.conductance_volume = VolumeMeasure::DegreeSum;
        else if (v == "node-count") c.conductance_volume = VolumeMeasure::NodeCount;
        else throw ConfigError("config", "unknown conductance_volume: " + v);
    } else if (key == "out_dir") c.out_dir = v;
    else if (key == "threads") c.threads = to_int<unsigned>(key, v);
    else if (key == "sir_cache") c.use_sir_cache = to_bool(key, v);
    else throw ConfigError("config", "unknown key: " + key);
}

std::vector<std::pair<std::string, std::string>> settings(const ExperimentConfig& c) {
    const auto& m = c.model;
    const auto d = [](double x) { return format_double(x); };
    return {
        {"variant", m.variant == Variant::Shallow ? "shallow" : "deep"},
        {"graph", c.graph_path.string()},
        {"mode", std::string(feature_mode_name(c.mode))},
        {"metrics", metric_list(c.explicit_metrics)},
        {"leave_out", c.leave_out ? std::string(metric_name(*c.leave_out)) : ""},
        {"delta", d(c.delta)},
        {"hidden_layers", std::to_string(m.hidden_layers)},
        {"hidden_dim", std::to_string(m.hidden_dim)},
        {"alpha", d(m.alpha)},
        {"lambda", d(m.lambda)},
        {"beta_schedule", m.beta_schedule == BetaSchedule::Log ? "log" : "linear"},
        {"dropout", d(m.dropout)},
        {"learning_rate", d(m.learning_rate)},
        {"weight_decay_hidden", d(m.weight_decay_hidden)},
        {"weight_decay_fc", d(m.weight_decay_fc)},
        {"patience", std::to_string(m.patience)},
        {"max_epochs", std::to_string(m.max_epochs)},
        {"model_seed", std::to_string(m.seed)},
        {"stopping", m.stopping == StoppingSet::Test ? "test" : "validation"},
        {"validation_fraction", d(m.validation_fraction)},
        {"sir_runs", std::to_string(c.sir.runs)},
        {"sir_xi", d(c.sir.xi)},
        {"sir_gamma", d(c.sir.gamma)},
        {"sir_seed", std::to_string(c.sir.seed)},
        {"sir_beta", c.sir.beta_override ? d(*c.sir.beta_override) : ""},
        {"top_fraction", d(c.dataset.top_fraction)},
        {"neg_ratio", d(c.dataset.neg_ratio)},
        {"split", d(c.dataset.split)},
        {"dataset_seed", std::to_string(c.dataset.seed)},
        {"negative_sampling", c.dataset.sampling == NegativeSampling::Ratio ? "ratio" : "ten-percent"},
        {"rank_ties", c.rank_ties == RankTies::NodeId ? "node-id" : "average"},
        {"conductance_volume", c.conductance_volume == VolumeMeasure::DegreeSum ? "degree-sum" : "node-count"},
        {"out_dir", c.out_dir.string()},
        {"threads", std::to_string(c.threads)},
        {"sir_cache", c.use_sir_cache ? "true" : "false"},
    };
}

ExperimentConfig parse_config(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty() || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config", "line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        pairs.emplace_back(std::move(key), std::move(value));
    }
    ExperimentConfig cfg;
    // The variant resets model defaults, so it is applied before everything else.
    for (const auto& [k, v] : pairs)
        if (k == "variant") apply_setting(cfg, k, v);
    for (const auto& [k, v] : pairs)
        if (k != "variant") apply_setting(cfg, k, v);
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) { return parse_config(read_text(path)); }

std::string config_text(const ExperimentConfig& cfg) {
    std::string out;
    for (const auto& [k, v] : settings(cfg)) out += k + " = \"" + v + "\"\n";
    return out;
}

Json config_json(const ExperimentConfig& cfg) {
    Json j = Json::object();
    for (const auto& [k, v] : settings(cfg)) j[k] = v;
    return j;
}

Json RunRecord::to_json() const {
    Json stage_json = Json::object();
    for (const auto& s : stages) stage_json[s.stage] = s.seconds;
    Json cent = Json::object();
    for (const auto& [k, v] : centrality_seconds) cent[k] = v;
    return Json{
        {"label", label},
        {"config", config_json(config)},
        {"network", {{"nodes", num_nodes}, {"edges", num_edges}, {"hash", hex(graph_hash)}}},
        {"selection", feature_network && selection ? selection_json(*feature_network, *selection) : Json(nullptr)},
        {"features", features},
        {"dataset",
         {{"hash", hex(dataset_hash)},
          {"scores_hash", hex(scores_hash)},
          {"positives", positives},
          {"negatives", negatives},
          {"train", train_size},
          {"test", test_size},
          {"beta_c", beta_c},
          {"beta", beta}}},
        {"trace", trace_json(trace)},
        {"test_metrics", metrics_json(test_metrics)},
        {"train_metrics", metrics_json(train_metrics)},
        {"timings", {{"stages", std::move(stage_json)}, {"centrality", std::move(cent)}}},
    };
}

// ---------------------------------------------------------------------------
// PipelineContext

PipelineContext::PipelineContext(ExperimentConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    const auto t0 = Clock::now();
    graph_ = staged("load", [&] { return load_edge_list(cfg_.graph_path).graph; });
    shared_stages_.push_back({"load", since(t0)});
}

PipelineContext::PipelineContext(Graph g, ExperimentConfig cfg) : cfg_(std::move(cfg)), graph_(std::move(g)) {
    cfg_.validate();
}

const SparseMatrix<double>& PipelineContext::transition() {
    if (!transition_) transition_ = adjusted_transition<double>(graph_);
    return *transition_;
}

CentralityTable PipelineContext::centralities(const std::vector<Metric>& wanted) {
    const auto metrics = sorted_metrics(wanted);
    std::vector<Metric> missing;
    for (Metric m : metrics)
        if (!columns_.count(m)) missing.push_back(m);
    if (!missing.empty()) {
        const auto t0 = Clock::now();
        CentralityOptions opts;
        opts.conductance_volume = cfg_.conductance_volume;
        opts.threads = cfg_.threads;
        const CentralityTable t = staged("centrality", [&] { return compute(graph_, missing, opts); });
        for (std::size_t i = 0; i < t.metrics.size(); ++i)
            columns_[t.metrics[i]] = {t.values.col(static_cast<Eigen::Index>(i)), t.seconds[i]};
        shared_stages_.push_back({"centrality", since(t0)});
    }
    CentralityTable out;
    out.metrics = metrics;
    out.values.resize(static_cast<Eigen::Index>(graph_.num_nodes()), static_cast<Eigen::Index>(metrics.size()));
    for (std::size_t i = 0; i < metrics.size(); ++i) {
        const auto& [col, secs] = columns_.at(metrics[i]);
        out.values.col(static_cast<Eigen::Index>(i)) = col;
        out.seconds.push_back(secs);
    }
    return out;
}

const InfluenceScores& PipelineContext::scores() {
    if (scores_) return *scores_;
    const auto t0 = Clock::now();
    SirConfig sir = cfg_.sir;
    sir.threads = cfg_.threads;
    std::filesystem::path cache;
    if (cfg_.use_sir_cache && !cfg_.out_dir.empty()) {
        std::string key = hex(graph_hash(graph_)) + "|" + std::to_string(sir.runs) + "|" + format_double(sir.xi) + "|" +
                          format_double(sir.gamma) + "|" + std::to_string(sir.seed) + "|" +
                          (sir.beta_override ? format_double(*sir.beta_override) : "-");
        cache = cfg_.out_dir / "sir_cache" / (hex(graph_hash(graph_)) + "_" + hex(fnv1a(key)) + ".csv");
    }
    scores_ = staged("sir", [&] {
        if (!cache.empty() && std::filesystem::exists(cache)) {
            InfluenceScores s = parse_scores_csv(graph_, read_text(cache));
            s.beta_c = critical_beta(degree_stats(graph_));
            s.beta = sir.beta_override ? *sir.beta_override : std::min(1.0, sir.xi * s.beta_c);
            return s;
        }
        InfluenceScores s = influence_scores(graph_, sir);
        if (!cache.empty()) write_text(cache, scores_csv(graph_, s));
        return s;
    });
    scores_hash_ = fnv1a(scores_csv(graph_, *scores_));
    shared_stages_.push_back({"sir", since(t0)});
    return *scores_;
}

std::uint64_t PipelineContext::scores_hash() {
    scores();
    return *scores_hash_;
}

const LabeledDataset& PipelineContext::dataset() {
    if (dataset_) return *dataset_;
    const auto& s = scores();
    const auto t0 = Clock::now();
    dataset_ = staged("dataset", [&] { return build_dataset(s, cfg_.dataset); });
    shared_stages_.push_back({"dataset", since(t0)});
    return *dataset_;
}

PipelineContext::Selection PipelineContext::select(double delta) {
    const CentralityTable table = centralities(local_metrics());
    return staged("selection", [&] {
        Selection s{build_feature_network(table, delta), {}, {}};
        s.result = select_representatives(s.network, cluster(s.network));
        for (const auto& name : s.result.chosen_names(s.network)) s.metrics.push_back(to_metric(name));
        return s;
    });
}

RunRecord PipelineContext::run(const ExperimentConfig& cfg, const std::string& label,
                               const std::filesystem::path& artifact_dir) {
    cfg.validate();
    RunRecord rec;
    rec.label = label;
    rec.config = cfg;
    rec.num_nodes = graph_.num_nodes();
    rec.num_edges = graph_.num_edges();
    rec.graph_hash = graph_hash(graph_);
    const std::size_t shared_before = shared_stages_.size();
    auto write = [&](const std::string& name, const std::string& text) {
        if (!artifact_dir.empty()) write_text(artifact_dir / name, text);
    };

    // Feature set.
    auto t0 = Clock::now();
    std::vector<Metric> metrics;
    switch (cfg.mode) {
        case FeatureMode::FnSelected:
        case FeatureMode::LeaveOneOut: {
            Selection s = select(cfg.delta);
            metrics = s.metrics;
            if (cfg.mode == FeatureMode::LeaveOneOut) {
                const auto it = std::find(metrics.begin(), metrics.end(), *cfg.leave_out);
                if (it == metrics.end())
                    throw ConfigError("config", "leave_out metric " + std::string(metric_name(*cfg.leave_out)) +
                                                    " is not in the selected set");
                metrics.erase(it);
                if (metrics.empty()) throw ConfigError("config", "leave-one-out would leave no features");
            }
            write("selection.json", selection_json(s.network, s.result).dump(2) + "\n");
            rec.feature_network = std::move(s.network);
            rec.selection = std::move(s.result);
            break;
        }
        case FeatureMode::AllLocal: metrics = local_metrics(); break;
        case FeatureMode::AllGlobal: metrics = global_metrics(); break;
        case FeatureMode::All: metrics.assign(kAllMetrics.begin(), kAllMetrics.end()); break;
        case FeatureMode::InfGcn4: metrics = infgcn4_metrics(); break;
        case FeatureMode::Explicit: metrics = cfg.explicit_metrics; break;
    }
    metrics = sorted_metrics(metrics);
    const CentralityTable table = centralities(metrics);
    write("centralities.csv", centrality_csv(graph_, table));
    for (std::size_t i = 0; i < table.metrics.size(); ++i)
        rec.centrality_seconds[std::string(metric_name(table.metrics[i]))] = table.seconds[i];
    rec.stages.push_back({"features", since(t0)});

    t0 = Clock::now();
    const FeatureMatrix features = staged("normalize", [&] { return normalize(table, metrics, cfg.rank_ties); });
    rec.features = features.names;
    write("features.csv", feature_matrix_csv(graph_, features));
    rec.stages.push_back({"normalize", since(t0)});

    const LabeledDataset& ds = dataset();
    const InfluenceScores& sc = scores();
    write("scores.csv", scores_csv(graph_, sc));
    write("dataset.json", dataset_json(graph_, ds, cfg_.dataset).dump(2) + "\n");
    rec.scores_hash = scores_hash();
    rec.dataset_hash = ds.hash();
    rec.positives = ds.positives.size();
    rec.negatives = ds.negatives.size();
    rec.train_size = ds.train.size();
    rec.test_size = ds.test.size();
    rec.beta_c = sc.beta_c;
    rec.beta = sc.beta;

    t0 = Clock::now();
    const auto& p = transition();
    const TrainResult tr = staged("train", [&] { return train(p, features.values, ds.labels, ds.train, ds.test, cfg.model); });
    rec.trace = tr.trace;
    write("trace.json", trace_json(tr.trace).dump(2) + "\n");
    write("model.json", checkpoint_json(cfg.model, tr.params, features.names, cfg.rank_ties).dump() + "\n");
    rec.stages.push_back({"train", since(t0)});
    if (tr.trace.diverged) throw DivergenceError("train", tr.trace.message);

    t0 = Clock::now();
    staged("evaluate", [&] {
        const Prediction pred = predict(tr.params, cfg.model, p, features.values);
        rec.test_metrics = evaluate_on(pred, ds, ds.test);
        rec.train_metrics = evaluate_on(pred, ds, ds.train);
        return 0;
    });
    write("metrics.json", metrics_json(rec.test_metrics).dump(2) + "\n");
    rec.stages.push_back({"evaluate", since(t0)});

    for (std::size_t i = shared_before; i < shared_stages_.size(); ++i) rec.stages.push_back(shared_stages_[i]);
    write("config.toml", config_text(cfg));
    write("run_record.json", rec.to_json().dump(2) + "\n");
    return rec;
}

RunRecord run_pipeline(const ExperimentConfig& cfg) {
    PipelineContext ctx(cfg);
    RunRecord rec = ctx.run(cfg, "pipeline", cfg.out_dir);
    // Loading happened before the run started; report it too.
    for (const auto& s : ctx.shared_stages())
        if (s.stage == "load") rec.stages.insert(rec.stages.begin(), s);
    if (!cfg.out_dir.empty()) write_json(cfg.out_dir / "run_record.json", rec.to_json());
    return rec;
}

// ---------------------------------------------------------------------------
// Ablations

std::string ablation_csv(const std::vector<RunRecord>& records, const std::string& key_column) {
    std::string out = key_column + ",accuracy,f1,auc\n";
    for (const auto& r : records)
        out += r.label + "," + format_double(r.test_metrics.accuracy) + "," + format_double(r.test_metrics.f1) + "," +
               format_double(r.test_metrics.auc) + "\n";
    return out;
}

std::vector<RunRecord> ablate_depth(PipelineContext& ctx, const std::vector<int>& depths) {
    const ExperimentConfig& base = ctx.config();
    if (base.model.variant != Variant::Deep) throw ConfigError("config", "depth ablation needs the deep variant");
    if (depths.empty()) throw ConfigError("config", "depth ablation needs at least one depth");
    std::vector<RunRecord> records;
    for (int depth : depths) {
        ExperimentConfig c = base;
        c.model.hidden_layers = depth;
        const std::string label = std::to_string(depth);
        records.push_back(ctx.run(c, label, base.out_dir.empty() ? base.out_dir : base.out_dir / "depth" / label));
    }
    if (!base.out_dir.empty()) write_text(base.out_dir / "depth.csv", ablation_csv(records, "depth"));
    return records;
}

std::vector<RunRecord> ablate_features(PipelineContext& ctx, const std::vector<FeatureMode>& modes) {
    const ExperimentConfig& base = ctx.config();
    if (modes.empty()) throw ConfigError("config", "feature ablation needs at least one mode");
    std::vector<RunRecord> records;
    for (FeatureMode mode : modes) {
        ExperimentConfig c = base;
        c.mode = mode;
        const std::string label(feature_mode_name(mode));
        records.push_back(ctx.run(c, label, base.out_dir.empty() ? base.out_dir : base.out_dir / "features" / label));
    }
    if (!base.out_dir.empty()) write_text(base.out_dir / "features.csv", ablation_csv(records, "mode"));
    return records;
}

LeaveOneOutResult ablate_leave_one_out(PipelineContext& ctx) {
    const ExperimentConfig& base = ctx.config();
    const auto dir = [&](const std::string& label) {
        return base.out_dir.empty() ? base.out_dir : base.out_dir / "leave_one_out" / label;
    };
    ExperimentConfig c = base;
    c.mode = FeatureMode::FnSelected;
    LeaveOneOutResult out;
    out.baseline = ctx.run(c, "baseline", dir("baseline"));
    const auto chosen = ctx.select(base.delta).metrics;
    for (Metric m : chosen) {
        ExperimentConfig loo = c;
        loo.mode = FeatureMode::LeaveOneOut;
        loo.leave_out = m;
        const std::string name(metric_name(m));
        out.records.push_back(ctx.run(loo, name, dir(name)));
        const auto& b = out.baseline.test_metrics;
        const auto& r = out.records.back().test_metrics;
        out.summary.push_back({name, b.accuracy - r.accuracy, b.f1 - r.f1, b.auc - r.auc});
    }
    std::sort(out.summary.begin(), out.summary.end(), [](const LeaveOneOutRow& a, const LeaveOneOutRow& b) {
        if (a.delta_accuracy != b.delta_accuracy) return a.delta_accuracy > b.delta_accuracy;
        if (a.delta_f1 != b.delta_f1) return a.delta_f1 > b.delta_f1;
        if (a.delta_auc != b.delta_auc) return a.delta_auc > b.delta_auc;
        return a.metric < b.metric;
    });
    if (!base.out_dir.empty()) {
        std::string csv = "metric,delta_accuracy,delta_f1,delta_auc\n";
        for (const auto& r : out.summary)
            csv += r.metric + "," + format_double(r.delta_accuracy) + "," + format_double(r.delta_f1) + "," +
                   format_double(r.delta_auc) + "\n";
        write_text(base.out_dir / "leave_one_out.csv", csv);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Timing

TimingRow timing_benchmark(const Graph& g, const std::string& network, VolumeMeasure volume) {
    CentralityOptions opts;
    opts.threads = 1;
    opts.conductance_volume = volume;
    const auto total = [&](MetricSelection which) {
        const CentralityTable t = compute(g, which, opts);
        double s = 0.0;
        for (double x : t.seconds) s += x;
        return s;
    };
    TimingRow row;
    row.network = network;
    row.local = total(MetricSelection::Local);
    row.global = total(MetricSelection::Global);
    row.all = total(MetricSelection::All);
    return row;
}

std::string timing_csv(const std::vector<TimingRow>& rows) {
    std::string out = "network,all,global,local\n";
    for (const auto& r : rows)
        out += r.network + "," + format_double(r.all) + "," + format_double(r.global) + "," + format_double(r.local) + "\n";
    return out;
}

}  // namespace fngcn
