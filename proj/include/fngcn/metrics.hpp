#pragma once

#include <cstddef>

#include <Eigen/Core>

namespace fngcn {

/// Binary classification summary; the positive class is label 1.
struct MetricsReport {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double auc = 0.0;
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

MetricsReport accuracy_f1(const Eigen::Ref<const Eigen::VectorXi>& pred, const Eigen::Ref<const Eigen::VectorXi>& truth);

/// Mann–Whitney AUC: P(score_pos > score_neg) + ½ P(tie).
double auc(const Eigen::Ref<const Eigen::VectorXd>& scores, const Eigen::Ref<const Eigen::VectorXi>& truth);

/// accuracy_f1 plus auc in one report.
MetricsReport evaluate(const Eigen::Ref<const Eigen::VectorXi>& pred, const Eigen::Ref<const Eigen::VectorXd>& scores,
                       const Eigen::Ref<const Eigen::VectorXi>& truth);

}  // namespace fngcn
