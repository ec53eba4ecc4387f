#include "unfollow/metrics.h"

#include <algorithm>
#include <numeric>

#include "unfollow/error.h"

namespace unfollow {

ConfusionMatrix confusion_matrix(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size()) throw InputError("confusion_matrix: length mismatch");
    ConfusionMatrix c;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const bool actual = y_true[i] == 1;
        const bool predicted = y_pred[i] == 1;
        if (actual && predicted) {
            ++c.tp;
        } else if (!actual && predicted) {
            ++c.fp;
        } else if (!actual) {
            ++c.tn;
        } else {
            ++c.fn;
        }
    }
    return c;
}

double roc_auc(const std::vector<int>& y_true, const std::vector<double>& scores) {
    if (y_true.size() != scores.size()) throw InputError("roc_auc: length mismatch");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Midranks over tie groups, 1-based; kept doubled so sums stay integral.
    double positive_rank_sum2 = 0.0;
    std::size_t positives = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double rank2 = static_cast<double>(i + 1 + j);  // 2 * mean of ranks i+1..j
        for (std::size_t k = i; k < j; ++k) {
            if (y_true[order[k]] == 1) {
                positive_rank_sum2 += rank2;
                ++positives;
            }
        }
        i = j;
    }
    const std::size_t negatives = n - positives;
    if (positives == 0 || negatives == 0) throw InputError("roc_auc: need both classes");
    const double p = static_cast<double>(positives);
    const double u2 = positive_rank_sum2 - p * (p + 1.0);
    return u2 / (2.0 * p * static_cast<double>(negatives));
}

Metrics compute_metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                        const std::vector<double>& scores) {
    if (y_true.size() != y_pred.size() || y_true.size() != scores.size()) {
        throw InputError("compute_metrics: length mismatch");
    }
    Metrics m;
    m.confusion = confusion_matrix(y_true, y_pred);
    const auto& c = m.confusion;
    const double tp = static_cast<double>(c.tp);
    m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    if (c.tp + c.fp == 0) {
        m.precision_undefined = true;
        m.precision = 0.0;
    } else {
        m.precision = tp / static_cast<double>(c.tp + c.fp);
    }
    m.recall = c.tp + c.fn == 0 ? 0.0 : tp / static_cast<double>(c.tp + c.fn);
    // 2TP / (2TP + FP + FN) is the harmonic mean of precision and recall
    const std::size_t f1_denom = 2 * c.tp + c.fp + c.fn;
    m.f1 = f1_denom == 0 ? 0.0 : 2.0 * tp / static_cast<double>(f1_denom);
    m.roc_auc = roc_auc(y_true, scores);
    return m;
}

}  // namespace unfollow
