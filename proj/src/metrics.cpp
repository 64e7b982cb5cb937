#include "fngcn/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "fngcn/error.hpp"

namespace fngcn {

MetricsReport accuracy_f1(const Eigen::Ref<const Eigen::VectorXi>& pred, const Eigen::Ref<const Eigen::VectorXi>& truth) {
    if (pred.size() != truth.size()) throw Error("evaluate", "prediction and truth lengths differ");
    if (pred.size() == 0) throw Error("evaluate", "no predictions to score");
    MetricsReport r;
    for (Eigen::Index i = 0; i < pred.size(); ++i) {
        const bool p = pred[i] == 1, t = truth[i] == 1;
        if (p && t) ++r.tp;
        else if (p && !t) ++r.fp;
        else if (!p && t) ++r.fn;
        else ++r.tn;
    }
    const auto total = static_cast<double>(pred.size());
    r.accuracy = static_cast<double>(r.tp + r.tn) / total;
    r.precision = r.tp + r.fp == 0 ? 0.0 : static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
    r.recall = r.tp + r.fn == 0 ? 0.0 : static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
    r.f1 = r.precision + r.recall == 0.0 ? 0.0 : 2.0 * r.precision * r.recall / (r.precision + r.recall);
    return r;
}

double auc(const Eigen::Ref<const Eigen::VectorXd>& scores, const Eigen::Ref<const Eigen::VectorXi>& truth) {
    if (scores.size() != truth.size()) throw Error("evaluate", "score and truth lengths differ");
    const Eigen::Index n = scores.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return scores[a] < scores[b]; });

    // Sum of average ranks of the positives (Mann–Whitney U).
    double pos_rank_sum = 0.0;
    std::size_t pos = 0;
    Eigen::Index i = 0;
    while (i < n) {
        Eigen::Index j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (Eigen::Index k = i; k <= j; ++k)
            if (truth[order[k]] == 1) {
                pos_rank_sum += avg;
                ++pos;
            }
        i = j + 1;
    }
    const std::size_t neg = static_cast<std::size_t>(n) - pos;
    if (pos == 0 || neg == 0) throw Error("evaluate", "AUC needs both positive and negative examples");
    const double u = pos_rank_sum - 0.5 * static_cast<double>(pos) * static_cast<double>(pos + 1);
    return u / (static_cast<double>(pos) * static_cast<double>(neg));
}

MetricsReport evaluate(const Eigen::Ref<const Eigen::VectorXi>& pred, const Eigen::Ref<const Eigen::VectorXd>& scores,
                       const Eigen::Ref<const Eigen::VectorXi>& truth) {
    MetricsReport r = accuracy_f1(pred, truth);
    r.auc = auc(scores, truth);
    return r;
}

}  // namespace fngcn
