#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "fngcn/error.hpp"
#include "fngcn/graph.hpp"

namespace fngcn {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// ---------------------------------------------------------------------------
// Layers

/// Rectified GCN propagation: max(0, P̃ H W).
template <typename Scalar>
Matrix<Scalar> shallow_layer(const SparseMatrix<Scalar>& p, const Eigen::Ref<const Matrix<Scalar>>& h,
                             const Eigen::Ref<const Matrix<Scalar>>& w) {
    if (p.cols() != h.rows() || h.cols() != w.rows())
        throw Error("gcn", "shallow_layer: dimension mismatch");
    const Matrix<Scalar> propagated = p * h;
    return (propagated * w).cwiseMax(Scalar(0));
}

/// Initial-residual, identity-mapped propagation:
/// max(0, ((1−α) P̃ H + α H0) ((1−β) I + β W)).
template <typename Scalar>
Matrix<Scalar> gcnii_layer(const SparseMatrix<Scalar>& p, const Eigen::Ref<const Matrix<Scalar>>& h,
                           const Eigen::Ref<const Matrix<Scalar>>& h0, const Eigen::Ref<const Matrix<Scalar>>& w,
                           Scalar alpha, Scalar beta) {
    if (p.cols() != h.rows() || h.rows() != h0.rows() || h.cols() != h0.cols() || w.rows() != h.cols() ||
        w.cols() != h.cols())
        throw Error("gcn", "gcnii_layer: dimension mismatch");
    const Matrix<Scalar> support = (Scalar(1) - alpha) * (p * h) + alpha * h0;
    return ((Scalar(1) - beta) * support + beta * (support * w)).cwiseMax(Scalar(0));
}

/// Row-wise log-softmax with max subtraction.
template <typename Derived>
Matrix<typename Derived::Scalar> log_softmax(const Eigen::MatrixBase<Derived>& logits) {
    using Scalar = typename Derived::Scalar;
    Matrix<Scalar> out(logits.rows(), logits.cols());
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
        const Scalar mx = logits.row(i).maxCoeff();
        const Scalar lse = mx + std::log((logits.row(i).array() - mx).exp().sum());
        out.row(i) = logits.row(i).array() - lse;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Configuration and parameters

enum class Variant { Shallow, Deep };
enum class BetaSchedule {
    Log,     ///< β_ℓ = ln(λ/ℓ + 1)
    Linear,  ///< β_ℓ = λ/ℓ
};
enum class StoppingSet { Test, Validation };

struct ModelConfig {
    Variant variant = Variant::Shallow;
    int hidden_layers = 3;
    int hidden_dim = 64;
    double alpha = 0.1;
    double lambda = 0.5;
    BetaSchedule beta_schedule = BetaSchedule::Log;
    double dropout = 0.4;
    double learning_rate = 0.01;
    double weight_decay_hidden = 0.01;
    double weight_decay_fc = 0.0005;
    int patience = 30;
    int max_epochs = 1500;
    std::uint64_t seed = 1;
    StoppingSet stopping = StoppingSet::Test;
    double validation_fraction = 0.2;

    static ModelConfig shallow();
    static ModelConfig deep(int layers = 64);
    void validate() const;
};

/// β_ℓ for 1-based layer index ℓ.
double layer_beta(double lambda, int layer, BetaSchedule schedule = BetaSchedule::Log);

struct ModelParameters {
    /// Shallow: f×h then (layers−1) h×h. Deep: `layers` h×h.
    std::vector<Eigen::MatrixXd> gcn;
    /// Deep only: f×h map producing H0.
    Eigen::MatrixXd input_w;
    Eigen::RowVectorXd input_b;
    Eigen::MatrixXd output_w;  // h×2
    Eigen::RowVectorXd output_b;
    std::string init_scheme = "glorot-uniform";
    std::uint64_t init_seed = 0;

    /// Every tensor in a fixed order: gcn..., input_w, input_b, output_w, output_b.
    std::vector<Eigen::Map<Eigen::MatrixXd>> tensors();
    std::vector<std::string> tensor_names() const;
    bool all_finite() const;
};

ModelParameters init_parameters(const ModelConfig& cfg, int num_features);

// ---------------------------------------------------------------------------
// Forward / loss / gradients

/// n×2 log-probabilities. Dropout is active iff `dropout_rng` is non-null.
Eigen::MatrixXd forward(const ModelParameters& params, const ModelConfig& cfg, const SparseMatrix<double>& p,
                        const Eigen::MatrixXd& x, std::mt19937_64* dropout_rng = nullptr);

/// Mean negative log-probability of the true class over `nodes`.
double loss(const Eigen::MatrixXd& log_probs, const Eigen::VectorXi& labels, const std::vector<NodeId>& nodes);

struct LossAndGradients {
    double loss = 0.0;
    ModelParameters grads;  // same shapes as the parameters
};

/// Loss on `nodes` and its gradient w.r.t. every parameter (no weight decay).
LossAndGradients loss_and_gradients(const ModelParameters& params, const ModelConfig& cfg,
                                    const SparseMatrix<double>& p, const Eigen::MatrixXd& x,
                                    const Eigen::VectorXi& labels, const std::vector<NodeId>& nodes,
                                    std::mt19937_64* dropout_rng = nullptr);

// ---------------------------------------------------------------------------
// Training

struct TrainTrace {
    std::vector<double> train_loss;
    std::vector<double> test_loss;
    int chosen_epoch = -1;
    double seconds = 0.0;
    bool diverged = false;
    std::string message;

    int epochs_run() const { return static_cast<int>(train_loss.size()); }
};

struct TrainResult {
    ModelParameters params;
    TrainTrace trace;
};

/// Full-batch transductive training with Adam and early stopping. `train`
/// drives the updates and `test` the stopping rule (or a held-out slice of
/// `train` with StoppingSet::Validation). Returns the best-monitor-loss
/// snapshot.
TrainResult train(const SparseMatrix<double>& p, const Eigen::MatrixXd& x, const Eigen::VectorXi& labels,
                  const std::vector<NodeId>& train_nodes, const std::vector<NodeId>& test_nodes,
                  const ModelConfig& cfg);

struct Prediction {
    Eigen::VectorXi cls;
    Eigen::VectorXd positive_probability;
};

Prediction predict(const ModelParameters& params, const ModelConfig& cfg, const SparseMatrix<double>& p,
                   const Eigen::MatrixXd& x);

}  // namespace fngcn
