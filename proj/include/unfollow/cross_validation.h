#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "unfollow/metrics.h"
#include "unfollow/pipeline.h"

namespace unfollow {

// Seeded stratified split: each class is shuffled and dealt round-robin,
// continuing the fold counter across classes. Throws InputError when a
// class has fewer than `folds` examples.
std::vector<std::vector<std::size_t>> stratified_folds(const std::vector<int>& labels, std::size_t folds,
                                                       std::uint64_t seed);

struct FoldResult {
    std::size_t index = 0;
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    Metrics model;
    Metrics baseline;
};

struct MeanMetrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double roc_auc = 0.0;
};

struct EvaluationReport {
    std::vector<FoldResult> folds;
    MeanMetrics model_mean;
    MeanMetrics baseline_mean;
};

struct CrossValidationOptions {
    std::size_t folds = 10;
    std::uint64_t seed = 1;
    // Folds run concurrently on up to this many threads.
    unsigned workers = 1;
};

// Every trained component is refit on the training portion of each fold.
EvaluationReport cross_validate(const PreparedCorpus& corpus, const PipelineOptions& options,
                                const CrossValidationOptions& cv);

MeanMetrics mean_metrics(const std::vector<FoldResult>& folds, bool baseline);

// {"tool_version", "config", "our_model": {"folds": [...], "mean": {...}}, "baseline": {...}}
nlohmann::json report_to_json(const EvaluationReport& report, const nlohmann::json& config_echo);

}  // namespace unfollow
