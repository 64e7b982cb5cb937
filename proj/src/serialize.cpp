#include "fngcn/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fngcn/error.hpp"

namespace fngcn {

namespace {

std::string_view variant_name(Variant v) { return v == Variant::Shallow ? "shallow" : "deep"; }

Json matrix_json(const std::string& name, const Eigen::MatrixXd& m) {
    Json data = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
    return Json{{"name", name}, {"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (static_cast<Eigen::Index>(data.size()) != rows * cols)
        throw IoError("checkpoint", "tensor " + j.value("name", std::string("?")) + " has wrong element count");
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = data[static_cast<std::size_t>(i * cols + k)].get<double>();
    return m;
}

}  // namespace

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write", "cannot write " + path.string());
    out << text;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("load", "cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

Json read_json(const std::filesystem::path& path) {
    try {
        return Json::parse(read_text(path));
    } catch (const Json::parse_error& e) {
        throw IoError("load", path.string() + ": " + e.what());
    }
}

std::string centrality_csv(const Graph& g, const CentralityTable& table) {
    std::string out = "node";
    for (Metric m : table.metrics) out += "," + std::string(metric_name(m));
    out += "\n";
    for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
        out += g.name(static_cast<NodeId>(i));
        for (Eigen::Index j = 0; j < table.values.cols(); ++j) out += "," + format_double(table.values(i, j));
        out += "\n";
    }
    return out;
}

Json centrality_timings_json(const CentralityTable& table) {
    Json j = Json::object();
    for (std::size_t i = 0; i < table.metrics.size(); ++i) j[std::string(metric_name(table.metrics[i]))] = table.seconds[i];
    return j;
}

Json selection_json(const FeatureNetwork& fn, const SelectionResult& sel) {
    Json scc = Json::array();
    for (Eigen::Index i = 0; i < fn.scc.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < fn.scc.cols(); ++k) row.push_back(fn.scc(i, k));
        scc.push_back(std::move(row));
    }
    Json edges = Json::array();
    for (const auto& [a, b] : fn.edges) edges.push_back({fn.nodes[a], fn.nodes[b]});
    Json groups = Json::array();
    for (const auto& g : sel.groups) {
        Json members = Json::array();
        for (int v : g) members.push_back(fn.nodes[v]);
        groups.push_back(std::move(members));
    }
    Json trace = Json::array();
    for (const auto& t : sel.trace) {
        Json candidates = Json::array(), skipped = Json::array();
        for (int c : t.candidates) candidates.push_back({{"metric", fn.nodes[c]}, {"degree", fn.degree(c)}});
        for (int s : t.skipped) skipped.push_back(fn.nodes[s]);
        trace.push_back({{"candidates", std::move(candidates)},
                         {"skipped", std::move(skipped)},
                         {"chosen", fn.nodes[t.chosen]},
                         {"fallback", t.fallback}});
    }
    return Json{{"delta", fn.delta},      {"metrics", fn.nodes},
                {"scc_matrix", std::move(scc)}, {"edges", std::move(edges)},
                {"groups", std::move(groups)},  {"chosen", sel.chosen_names(fn)},
                {"fallback_used", sel.fallback_used}, {"trace", std::move(trace)}};
}

std::string feature_matrix_csv(const Graph& g, const FeatureMatrix& f) {
    std::string out = "node";
    for (const auto& name : f.names) out += "," + name;
    out += "\n";
    for (Eigen::Index i = 0; i < f.values.rows(); ++i) {
        out += g.name(static_cast<NodeId>(i));
        for (Eigen::Index j = 0; j < f.values.cols(); ++j) out += "," + format_double(f.values(i, j));
        out += "\n";
    }
    return out;
}

std::string scores_csv(const Graph& g, const InfluenceScores& s) {
    std::string out = "node,ic\n";
    for (Eigen::Index i = 0; i < s.ic.size(); ++i)
        out += g.name(static_cast<NodeId>(i)) + "," + format_double(s.ic[i]) + "\n";
    return out;
}

InfluenceScores parse_scores_csv(const Graph& g, const std::string& text) {
    InfluenceScores s;
    s.ic = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(g.num_nodes()), -1.0);
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.rfind("node,", 0) == 0) continue;
        }
        const auto comma = line.rfind(',');
        if (comma == std::string::npos) throw IoError("load", "scores: malformed line '" + line + "'");
        const NodeId v = g.id_of(line.substr(0, comma));
        if (v < 0) throw IoError("load", "scores: unknown node '" + line.substr(0, comma) + "'");
        s.ic[v] = std::stod(line.substr(comma + 1));
    }
    if ((s.ic.array() < 0.0).any()) throw IoError("load", "scores: some nodes have no score");
    return s;
}

Json dataset_json(const Graph& g, const LabeledDataset& d, const DatasetConfig& cfg) {
    auto names = [&](const std::vector<NodeId>& v) {
        Json a = Json::array();
        for (NodeId x : v) a.push_back(g.name(x));
        return a;
    };
    Json labels = Json::object();
    for (NodeId v : d.positives) labels[g.name(v)] = 1;
    for (NodeId v : d.negatives) labels[g.name(v)] = 0;
    return Json{{"positives", names(d.positives)},
                {"negatives", names(d.negatives)},
                {"train", names(d.train)},
                {"test", names(d.test)},
                {"labels", std::move(labels)},
                {"hash", std::to_string(d.hash())},
                {"config",
                 {{"top_fraction", cfg.top_fraction},
                  {"neg_ratio", cfg.neg_ratio},
                  {"split", cfg.split},
                  {"seed", cfg.seed},
                  {"negative_sampling", cfg.sampling == NegativeSampling::Ratio ? "ratio" : "ten-percent"}}}};
}

Json metrics_json(const MetricsReport& m) {
    return Json{{"accuracy", m.accuracy}, {"f1", m.f1},   {"auc", m.auc}, {"precision", m.precision},
                {"recall", m.recall},     {"tp", m.tp},   {"fp", m.fp},   {"tn", m.tn},
                {"fn", m.fn}};
}

Json model_config_json(const ModelConfig& c) {
    return Json{{"variant", variant_name(c.variant)},
                {"hidden_layers", c.hidden_layers},
                {"hidden_dim", c.hidden_dim},
                {"alpha", c.alpha},
                {"lambda", c.lambda},
                {"beta_schedule", c.beta_schedule == BetaSchedule::Log ? "log" : "linear"},
                {"dropout", c.dropout},
                {"learning_rate", c.learning_rate},
                {"weight_decay_hidden", c.weight_decay_hidden},
                {"weight_decay_fc", c.weight_decay_fc},
                {"patience", c.patience},
                {"max_epochs", c.max_epochs},
                {"seed", c.seed},
                {"stopping", c.stopping == StoppingSet::Test ? "test" : "validation"},
                {"validation_fraction", c.validation_fraction}};
}

ModelConfig model_config_from_json(const Json& j) {
    const std::string variant = j.value("variant", std::string("shallow"));
    ModelConfig c = variant == "deep" ? ModelConfig::deep(j.value("hidden_layers", 64)) : ModelConfig::shallow();
    if (variant != "deep" && variant != "shallow") throw ConfigError("config", "unknown variant: " + variant);
    c.hidden_layers = j.value("hidden_layers", c.hidden_layers);
    c.hidden_dim = j.value("hidden_dim", c.hidden_dim);
    c.alpha = j.value("alpha", c.alpha);
    c.lambda = j.value("lambda", c.lambda);
    c.beta_schedule = j.value("beta_schedule", std::string("log")) == "linear" ? BetaSchedule::Linear : BetaSchedule::Log;
    c.dropout = j.value("dropout", c.dropout);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.weight_decay_hidden = j.value("weight_decay_hidden", c.weight_decay_hidden);
    c.weight_decay_fc = j.value("weight_decay_fc", c.weight_decay_fc);
    c.patience = j.value("patience", c.patience);
    c.max_epochs = j.value("max_epochs", c.max_epochs);
    c.seed = j.value("seed", c.seed);
    c.stopping = j.value("stopping", std::string("test")) == "validation" ? StoppingSet::Validation : StoppingSet::Test;
    c.validation_fraction = j.value("validation_fraction", c.validation_fraction);
    c.validate();
    return c;
}

Json checkpoint_json(const ModelConfig& cfg, const ModelParameters& params, const std::vector<std::string>& features,
                     RankTies ties) {
    Json tensors = Json::array();
    auto names = params.tensor_names();
    ModelParameters copy = params;
    auto views = copy.tensors();
    for (std::size_t i = 0; i < views.size(); ++i) tensors.push_back(matrix_json(names[i], views[i]));
    return Json{{"format", "fngcn-checkpoint"},
                {"version", 1},
                {"config", model_config_json(cfg)},
                {"features", features},
                {"rank_ties", ties == RankTies::NodeId ? "node-id" : "average"},
                {"init", {{"scheme", params.init_scheme}, {"seed", params.init_seed}}},
                {"tensors", std::move(tensors)}};
}

Checkpoint checkpoint_from_json(const Json& j) {
    if (j.value("format", std::string()) != "fngcn-checkpoint")
        throw IoError("checkpoint", "not a model checkpoint");
    if (j.value("version", 0) != 1) throw IoError("checkpoint", "unsupported checkpoint version");
    Checkpoint c;
    c.config = model_config_from_json(j.at("config"));
    c.features = j.at("features").get<std::vector<std::string>>();
    c.ties = j.value("rank_ties", std::string("node-id")) == "average" ? RankTies::Average : RankTies::NodeId;
    c.params.init_scheme = j.at("init").value("scheme", std::string("glorot-uniform"));
    c.params.init_seed = j.at("init").value("seed", std::uint64_t{0});
    for (const auto& t : j.at("tensors")) {
        const std::string name = t.at("name").get<std::string>();
        Eigen::MatrixXd m = matrix_from_json(t);
        if (name.rfind("gcn.", 0) == 0) c.params.gcn.push_back(std::move(m));
        else if (name == "input_w") c.params.input_w = std::move(m);
        else if (name == "input_b") c.params.input_b = m.size() ? Eigen::RowVectorXd(m.row(0)) : Eigen::RowVectorXd();
        else if (name == "output_w") c.params.output_w = std::move(m);
        else if (name == "output_b") c.params.output_b = Eigen::RowVectorXd(m.row(0));
        else throw IoError("checkpoint", "unknown tensor " + name);
    }
    if (static_cast<int>(c.params.gcn.size()) != c.config.hidden_layers)
        throw IoError("checkpoint", "layer count does not match config");
    return c;
}

Json trace_json(const TrainTrace& t) {
    return Json{{"train_loss", t.train_loss}, {"test_loss", t.test_loss}, {"chosen_epoch", t.chosen_epoch},
                {"epochs_run", t.epochs_run()}, {"seconds", t.seconds}, {"diverged", t.diverged},
                {"message", t.message}};
}

}  // namespace fngcn
