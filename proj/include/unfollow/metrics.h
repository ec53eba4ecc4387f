#pragma once

#include <cstddef>
#include <vector>

namespace unfollow {

struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
    bool operator==(const ConfusionMatrix&) const = default;
};

struct Metrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double roc_auc = 0.0;
    bool precision_undefined = false;  // no predicted positives; precision reported as 0
    ConfusionMatrix confusion;
};

ConfusionMatrix confusion_matrix(const std::vector<int>& y_true, const std::vector<int>& y_pred);

// Mann-Whitney AUC with tied scores counted half. Throws InputError unless
// both classes are present.
double roc_auc(const std::vector<int>& y_true, const std::vector<double>& scores);

// Throws InputError on length mismatch or a missing class.
Metrics compute_metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                        const std::vector<double>& scores);

}  // namespace unfollow
