#include "fngcn/gcn.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>

namespace fngcn {

ModelConfig ModelConfig::shallow() { return ModelConfig{}; }

ModelConfig ModelConfig::deep(int layers) {
    ModelConfig c;
    c.variant = Variant::Deep;
    c.hidden_layers = layers;
    c.learning_rate = 0.05;
    c.patience = 100;
    return c;
}

void ModelConfig::validate() const {
    auto fail = [](const std::string& what) { throw ConfigError("train", what); };
    if (hidden_layers < 1) fail("hidden_layers must be at least 1");
    if (hidden_dim < 1) fail("hidden_dim must be at least 1");
    if (!(dropout >= 0.0 && dropout < 1.0)) fail("dropout must lie in [0, 1)");
    if (!(learning_rate > 0.0)) fail("learning_rate must be positive");
    if (!(weight_decay_hidden >= 0.0 && weight_decay_fc >= 0.0)) fail("weight decay must be nonnegative");
    if (!(alpha >= 0.0 && alpha <= 1.0)) fail("alpha must lie in [0, 1]");
    if (!(lambda > 0.0)) fail("lambda must be positive");
    if (patience < 0) fail("patience must be nonnegative");
    if (max_epochs < 1) fail("max_epochs must be at least 1");
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) fail("validation_fraction must lie in (0, 1)");
}

double layer_beta(double lambda, int layer, BetaSchedule schedule) {
    const double ratio = lambda / static_cast<double>(layer);
    return schedule == BetaSchedule::Log ? std::log(ratio + 1.0) : std::min(1.0, ratio);
}

std::vector<Eigen::Map<Eigen::MatrixXd>> ModelParameters::tensors() {
    std::vector<Eigen::Map<Eigen::MatrixXd>> out;
    for (auto& w : gcn) out.emplace_back(w.data(), w.rows(), w.cols());
    out.emplace_back(input_w.data(), input_w.rows(), input_w.cols());
    out.emplace_back(input_b.data(), input_b.rows(), input_b.cols());
    out.emplace_back(output_w.data(), output_w.rows(), output_w.cols());
    out.emplace_back(output_b.data(), output_b.rows(), output_b.cols());
    return out;
}

std::vector<std::string> ModelParameters::tensor_names() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < gcn.size(); ++i) out.push_back("gcn." + std::to_string(i));
    out.insert(out.end(), {"input_w", "input_b", "output_w", "output_b"});
    return out;
}

bool ModelParameters::all_finite() const {
    for (const auto& w : gcn)
        if (!w.allFinite()) return false;
    return input_w.allFinite() && input_b.allFinite() && output_w.allFinite() && output_b.allFinite();
}

ModelParameters init_parameters(const ModelConfig& cfg, int num_features) {
    cfg.validate();
    if (num_features < 1) throw ConfigError("train", "at least one feature column is required");
    ModelParameters p;
    p.init_seed = cfg.seed;
    std::mt19937_64 rng(cfg.seed);
    auto glorot = [&](int fan_in, int fan_out) {
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        std::uniform_real_distribution<double> dist(-limit, limit);
        Eigen::MatrixXd w(fan_in, fan_out);
        for (Eigen::Index j = 0; j < w.cols(); ++j)
            for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = dist(rng);
        return w;
    };
    const int h = cfg.hidden_dim;
    if (cfg.variant == Variant::Shallow) {
        p.gcn.push_back(glorot(num_features, h));
        for (int l = 1; l < cfg.hidden_layers; ++l) p.gcn.push_back(glorot(h, h));
        p.input_w.resize(0, 0);
        p.input_b.resize(0);
    } else {
        p.input_w = glorot(num_features, h);
        p.input_b = Eigen::RowVectorXd::Zero(h);
        for (int l = 0; l < cfg.hidden_layers; ++l) p.gcn.push_back(glorot(h, h));
    }
    p.output_w = glorot(h, 2);
    p.output_b = Eigen::RowVectorXd::Zero(2);
    return p;
}

namespace {

/// Inverted dropout mask: kept entries scaled by 1/(1−rate).
Eigen::MatrixXd dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double keep = 1.0 / (1.0 - rate);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = unif(rng) < rate ? 0.0 : keep;
    return m;
}

struct Cache {
    // Shallow: per layer, P̃·input and pre-activation.
    // Deep: per layer, support S and pre-activation T.
    std::vector<Eigen::MatrixXd> first, pre;
    std::vector<Eigen::MatrixXd> masks;  // masks[l] applies to the input of layer l (empty = none)
    Eigen::MatrixXd input_pre;           // deep: X Win + b
    Eigen::MatrixXd h0;                  // deep: relu(input_pre)
    Eigen::MatrixXd last_dropped;        // final hidden after dropout
    Eigen::MatrixXd output_mask;
    Eigen::MatrixXd logits;
};

Eigen::MatrixXd apply_mask(const Eigen::MatrixXd& h, const Eigen::MatrixXd& mask) {
    return mask.size() == 0 ? h : Eigen::MatrixXd(h.cwiseProduct(mask));
}

Eigen::MatrixXd run_forward(const ModelParameters& params, const ModelConfig& cfg, const SparseMatrix<double>& p,
                            const Eigen::MatrixXd& x, std::mt19937_64* rng, Cache* cache) {
    const bool drop = rng != nullptr && cfg.dropout > 0.0;
    const Eigen::Index n = x.rows();
    if (p.rows() != n || p.cols() != n) throw Error("gcn", "propagation matrix does not match feature rows");
    const Eigen::Index expected_features =
        cfg.variant == Variant::Shallow ? params.gcn.front().rows() : params.input_w.rows();
    if (x.cols() != expected_features) throw Error("gcn", "feature count does not match the model");

    auto mask_for = [&](const Eigen::MatrixXd& h) -> Eigen::MatrixXd {
        if (!drop) return {};
        return dropout_mask(h.rows(), h.cols(), cfg.dropout, *rng);
    };

    Eigen::MatrixXd h;
    const std::size_t layers = params.gcn.size();
    if (cache) {
        cache->first.resize(layers);
        cache->pre.resize(layers);
        cache->masks.resize(layers);
    }
    if (cfg.variant == Variant::Shallow) {
        for (std::size_t l = 0; l < layers; ++l) {
            Eigen::MatrixXd mask = l == 0 ? Eigen::MatrixXd() : mask_for(h);
            Eigen::MatrixXd propagated = p * (l == 0 ? x : apply_mask(h, mask));
            Eigen::MatrixXd pre = propagated * params.gcn[l];
            h = pre.cwiseMax(0.0);
            if (cache) {
                cache->first[l] = std::move(propagated);
                cache->pre[l] = std::move(pre);
                cache->masks[l] = std::move(mask);
            }
        }
    } else {
        Eigen::MatrixXd input_pre = (x * params.input_w).rowwise() + params.input_b;
        const Eigen::MatrixXd h0 = input_pre.cwiseMax(0.0);
        h = h0;
        const double a = cfg.alpha;
        for (std::size_t l = 0; l < layers; ++l) {
            const double beta = layer_beta(cfg.lambda, static_cast<int>(l) + 1, cfg.beta_schedule);
            Eigen::MatrixXd mask = mask_for(h);
            Eigen::MatrixXd support = (1.0 - a) * (p * apply_mask(h, mask)) + a * h0;
            Eigen::MatrixXd pre = (1.0 - beta) * support + beta * (support * params.gcn[l]);
            h = pre.cwiseMax(0.0);
            if (cache) {
                cache->first[l] = std::move(support);
                cache->pre[l] = std::move(pre);
                cache->masks[l] = std::move(mask);
            }
        }
        if (cache) {
            cache->input_pre = std::move(input_pre);
            cache->h0 = h0;
        }
    }
    Eigen::MatrixXd out_mask = mask_for(h);
    Eigen::MatrixXd last = apply_mask(h, out_mask);
    Eigen::MatrixXd logits = (last * params.output_w).rowwise() + params.output_b;
    if (!logits.allFinite()) throw DivergenceError("train", "nonfinite activation in forward pass");
    Eigen::MatrixXd out = log_softmax(logits);
    if (cache) {
        cache->last_dropped = std::move(last);
        cache->output_mask = std::move(out_mask);
        cache->logits = std::move(logits);
    }
    return out;
}

ModelParameters zeros_like(const ModelParameters& p) {
    ModelParameters g;
    for (const auto& w : p.gcn) g.gcn.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    g.input_w = Eigen::MatrixXd::Zero(p.input_w.rows(), p.input_w.cols());
    g.input_b = Eigen::RowVectorXd::Zero(p.input_b.size());
    g.output_w = Eigen::MatrixXd::Zero(p.output_w.rows(), p.output_w.cols());
    g.output_b = Eigen::RowVectorXd::Zero(p.output_b.size());
    g.init_scheme = p.init_scheme;
    g.init_seed = p.init_seed;
    return g;
}

Eigen::MatrixXd relu_grad(const Eigen::MatrixXd& upstream, const Eigen::MatrixXd& pre) {
    return upstream.cwiseProduct((pre.array() > 0.0).cast<double>().matrix());
}

}  // namespace

Eigen::MatrixXd forward(const ModelParameters& params, const ModelConfig& cfg, const SparseMatrix<double>& p,
                        const Eigen::MatrixXd& x, std::mt19937_64* dropout_rng) {
    return run_forward(params, cfg, p, x, dropout_rng, nullptr);
}

double loss(const Eigen::MatrixXd& log_probs, const Eigen::VectorXi& labels, const std::vector<NodeId>& nodes) {
    if (nodes.empty()) throw Error("train", "loss over an empty node mask");
    double total = 0.0;
    for (NodeId v : nodes) {
        const int y = labels[v];
        if (y != 0 && y != 1) throw Error("train", "masked node has no label");
        total -= log_probs(v, y);
    }
    return total / static_cast<double>(nodes.size());
}

LossAndGradients loss_and_gradients(const ModelParameters& params, const ModelConfig& cfg,
                                    const SparseMatrix<double>& p, const Eigen::MatrixXd& x,
                                    const Eigen::VectorXi& labels, const std::vector<NodeId>& nodes,
                                    std::mt19937_64* dropout_rng) {
    Cache cache;
    const Eigen::MatrixXd logp = run_forward(params, cfg, p, x, dropout_rng, &cache);
    LossAndGradients r;
    r.loss = loss(logp, labels, nodes);
    r.grads = zeros_like(params);
    ModelParameters& g = r.grads;

    // d loss / d logits = (softmax − onehot) / |mask| on masked rows.
    Eigen::MatrixXd d_logits = Eigen::MatrixXd::Zero(logp.rows(), 2);
    const double scale = 1.0 / static_cast<double>(nodes.size());
    for (NodeId v : nodes) {
        d_logits.row(v) += scale * logp.row(v).array().exp().matrix();
        d_logits(v, labels[v]) -= scale;
    }
    g.output_w = cache.last_dropped.transpose() * d_logits;
    g.output_b = d_logits.colwise().sum();
    Eigen::MatrixXd d_h = d_logits * params.output_w.transpose();
    if (cache.output_mask.size() != 0) d_h = d_h.cwiseProduct(cache.output_mask);

    const std::size_t layers = params.gcn.size();
    if (cfg.variant == Variant::Shallow) {
        for (std::size_t l = layers; l-- > 0;) {
            const Eigen::MatrixXd d_pre = relu_grad(d_h, cache.pre[l]);
            g.gcn[l] = cache.first[l].transpose() * d_pre;
            if (l == 0) break;
            // P̃ is symmetric, so P̃ᵀ = P̃.
            d_h = p * (d_pre * params.gcn[l].transpose());
            if (cache.masks[l].size() != 0) d_h = d_h.cwiseProduct(cache.masks[l]);
        }
    } else {
        const double a = cfg.alpha;
        Eigen::MatrixXd d_h0 = Eigen::MatrixXd::Zero(cache.h0.rows(), cache.h0.cols());
        for (std::size_t l = layers; l-- > 0;) {
            const double beta = layer_beta(cfg.lambda, static_cast<int>(l) + 1, cfg.beta_schedule);
            const Eigen::MatrixXd d_pre = relu_grad(d_h, cache.pre[l]);
            g.gcn[l] = beta * (cache.first[l].transpose() * d_pre);
            const Eigen::MatrixXd d_support = (1.0 - beta) * d_pre + beta * (d_pre * params.gcn[l].transpose());
            d_h0 += a * d_support;
            d_h = (1.0 - a) * (p * d_support);
            if (cache.masks[l].size() != 0) d_h = d_h.cwiseProduct(cache.masks[l]);
        }
        // The first layer's input is H0 itself.
        d_h0 += d_h;
        const Eigen::MatrixXd d_input_pre = relu_grad(d_h0, cache.input_pre);
        g.input_w = x.transpose() * d_input_pre;
        g.input_b = d_input_pre.colwise().sum();
    }
    return r;
}

namespace {

struct Adam {
    double lr = 0.01, b1 = 0.9, b2 = 0.999, eps = 1e-8;
    int t = 0;
    std::vector<Eigen::MatrixXd> m, v;

    void step(std::vector<Eigen::Map<Eigen::MatrixXd>> params, std::vector<Eigen::Map<Eigen::MatrixXd>> grads) {
        if (m.empty()) {
            for (auto& p : params) {
                m.push_back(Eigen::MatrixXd::Zero(p.rows(), p.cols()));
                v.push_back(Eigen::MatrixXd::Zero(p.rows(), p.cols()));
            }
        }
        ++t;
        const double c1 = 1.0 - std::pow(b1, t);
        const double c2 = 1.0 - std::pow(b2, t);
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (params[i].size() == 0) continue;
            m[i] = b1 * m[i] + (1.0 - b1) * grads[i];
            v[i] = b2 * v[i] + (1.0 - b2) * grads[i].cwiseAbs2();
            params[i].array() -= lr * (m[i].array() / c1) / ((v[i].array() / c2).sqrt() + eps);
        }
    }
};

void add_weight_decay(const ModelParameters& params, const ModelConfig& cfg, ModelParameters& grads) {
    const bool deep = cfg.variant == Variant::Deep;
    const double fc = deep ? cfg.weight_decay_fc : cfg.weight_decay_hidden;
    for (std::size_t l = 0; l < params.gcn.size(); ++l) grads.gcn[l] += cfg.weight_decay_hidden * params.gcn[l];
    if (deep) grads.input_w += fc * params.input_w;
    grads.output_w += fc * params.output_w;
}

}  // namespace

TrainResult train(const SparseMatrix<double>& p, const Eigen::MatrixXd& x, const Eigen::VectorXi& labels,
                  const std::vector<NodeId>& train_nodes, const std::vector<NodeId>& test_nodes,
                  const ModelConfig& cfg) {
    cfg.validate();
    if (train_nodes.empty()) throw Error("train", "empty training mask");
    if (labels.size() != x.rows()) throw Error("train", "label vector does not match feature rows");
    const auto start = std::chrono::steady_clock::now();

    std::vector<NodeId> fit_nodes = train_nodes;
    std::vector<NodeId> monitor_nodes = test_nodes;
    if (cfg.stopping == StoppingSet::Validation) {
        std::mt19937_64 split_rng(cfg.seed ^ 0x5f3759dfULL);
        std::shuffle(fit_nodes.begin(), fit_nodes.end(), split_rng);
        const auto held = static_cast<std::size_t>(
            std::max(1.0, std::floor(cfg.validation_fraction * static_cast<double>(fit_nodes.size()))));
        if (held >= fit_nodes.size()) throw ConfigError("train", "training mask too small for a validation split");
        monitor_nodes.assign(fit_nodes.end() - static_cast<std::ptrdiff_t>(held), fit_nodes.end());
        fit_nodes.resize(fit_nodes.size() - held);
        std::sort(fit_nodes.begin(), fit_nodes.end());
        std::sort(monitor_nodes.begin(), monitor_nodes.end());
    }
    if (monitor_nodes.empty()) throw Error("train", "empty early-stopping mask");

    TrainResult result;
    ModelParameters params = init_parameters(cfg, static_cast<int>(x.cols()));
    result.params = params;
    Adam adam;
    adam.lr = cfg.learning_rate;
    std::mt19937_64 dropout_rng(cfg.seed + 0x9e3779b97f4a7c15ULL);

    double best = std::numeric_limits<double>::infinity();
    int bad_epochs = 0;
    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        LossAndGradients lg;
        double monitor_loss = 0.0;
        try {
            lg = loss_and_gradients(params, cfg, p, x, labels, fit_nodes, &dropout_rng);
            if (!std::isfinite(lg.loss)) throw DivergenceError("train", "nonfinite training loss");
            add_weight_decay(params, cfg, lg.grads);
            adam.step(params.tensors(), lg.grads.tensors());
            monitor_loss = loss(forward(params, cfg, p, x), labels, monitor_nodes);
            if (!std::isfinite(monitor_loss)) throw DivergenceError("train", "nonfinite monitor loss");
        } catch (const DivergenceError& e) {
            result.trace.diverged = true;
            result.trace.message = "epoch " + std::to_string(epoch) + ": " + e.what();
            break;
        }
        result.trace.train_loss.push_back(lg.loss);
        result.trace.test_loss.push_back(monitor_loss);
        if (monitor_loss < best) {
            best = monitor_loss;
            bad_epochs = 0;
            result.trace.chosen_epoch = epoch;
            result.params = params;
        } else if (++bad_epochs > cfg.patience) {
            break;
        }
    }
    result.trace.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

Prediction predict(const ModelParameters& params, const ModelConfig& cfg, const SparseMatrix<double>& p,
                   const Eigen::MatrixXd& x) {
    const Eigen::MatrixXd logp = forward(params, cfg, p, x);
    Prediction out;
    out.cls.resize(logp.rows());
    out.positive_probability.resize(logp.rows());
    for (Eigen::Index i = 0; i < logp.rows(); ++i) {
        out.cls[i] = logp(i, 1) > logp(i, 0) ? 1 : 0;
        out.positive_probability[i] = std::exp(logp(i, 1));
    }
    return out;
}

}  // namespace fngcn
