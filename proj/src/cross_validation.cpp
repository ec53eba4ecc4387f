#include "unfollow/cross_validation.h"

#include <algorithm>

#include "unfollow/error.h"
#include "unfollow/parallel.h"
#include "unfollow/version.h"

namespace unfollow {
namespace {

nlohmann::json metrics_json(const Metrics& m) {
    return {{"accuracy", m.accuracy},
            {"precision", m.precision},
            {"precision_undefined", m.precision_undefined},
            {"recall", m.recall},
            {"f1", m.f1},
            {"roc_auc", m.roc_auc},
            {"confusion",
             {{"tp", m.confusion.tp}, {"fp", m.confusion.fp}, {"tn", m.confusion.tn}, {"fn", m.confusion.fn}}}};
}

nlohmann::json mean_json(const MeanMetrics& m) {
    return {{"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall},
            {"f1", m.f1},             {"roc_auc", m.roc_auc}};
}

}  // namespace

std::vector<std::vector<std::size_t>> stratified_folds(const std::vector<int>& labels, std::size_t folds,
                                                       std::uint64_t seed) {
    if (folds < 2) throw InputError("stratified_folds: need at least 2 folds");
    std::vector<std::size_t> pos;
    std::vector<std::size_t> neg;
    for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == 1 ? pos : neg).push_back(i);
    if (pos.size() < folds || neg.size() < folds) {
        throw InputError("stratified_folds: each class needs at least as many examples as folds");
    }
    Rng rng(seed);
    rng.shuffle(pos);
    rng.shuffle(neg);
    std::vector<std::vector<std::size_t>> out(folds);
    std::size_t counter = 0;
    for (const auto* group : {&pos, &neg}) {
        for (std::size_t i : *group) out[counter++ % folds].push_back(i);
    }
    for (auto& f : out) std::sort(f.begin(), f.end());
    return out;
}

MeanMetrics mean_metrics(const std::vector<FoldResult>& folds, bool baseline) {
    MeanMetrics m;
    if (folds.empty()) return m;
    for (const auto& f : folds) {
        const Metrics& x = baseline ? f.baseline : f.model;
        m.accuracy += x.accuracy;
        m.precision += x.precision;
        m.recall += x.recall;
        m.f1 += x.f1;
        m.roc_auc += x.roc_auc;
    }
    const auto n = static_cast<double>(folds.size());
    m.accuracy /= n;
    m.precision /= n;
    m.recall /= n;
    m.f1 /= n;
    m.roc_auc /= n;
    return m;
}

EvaluationReport cross_validate(const PreparedCorpus& corpus, const PipelineOptions& options,
                                const CrossValidationOptions& cv) {
    const auto folds = stratified_folds(corpus.labels(), cv.folds, cv.seed);
    EvaluationReport report;
    report.folds.resize(folds.size());
    PipelineOptions inner = options;
    if (cv.workers > 1) inner.workers = 1;

    parallel_for(folds.size(), cv.workers, [&](std::size_t f) {
        std::vector<std::size_t> train;
        for (std::size_t g = 0; g < folds.size(); ++g) {
            if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
        }
        std::sort(train.begin(), train.end());
        const auto& test = folds[f];
        const auto seeds = PipelineSeeds::from(derive_seed(cv.seed, 1000 + f));
        const auto trained = train_pipeline(corpus, train, inner, seeds);
        const auto held = held_out_features(corpus, trained.models, train, test, inner, seeds);

        FoldResult& r = report.folds[f];
        r.index = f;
        r.train_size = train.size();
        r.test_size = test.size();
        const auto& y = held.features.labels;
        const auto scores = predict_proba(trained.models.classifier, held.features.rows);
        std::vector<int> pred;
        for (double p : scores) pred.push_back(p >= 0.5 ? 1 : 0);
        r.model = compute_metrics(y, pred, scores);
        const auto base_scores = predict_proba(trained.models.baseline, held.baseline_features.rows);
        std::vector<int> base_pred;
        for (double p : base_scores) base_pred.push_back(p >= 0.5 ? 1 : 0);
        r.baseline = compute_metrics(held.baseline_features.labels, base_pred, base_scores);
    });
    report.model_mean = mean_metrics(report.folds, false);
    report.baseline_mean = mean_metrics(report.folds, true);
    return report;
}

nlohmann::json report_to_json(const EvaluationReport& report, const nlohmann::json& config_echo) {
    nlohmann::json model_folds = nlohmann::json::array();
    nlohmann::json base_folds = nlohmann::json::array();
    for (const auto& f : report.folds) {
        auto m = metrics_json(f.model);
        m["fold"] = f.index;
        m["train_size"] = f.train_size;
        m["test_size"] = f.test_size;
        model_folds.push_back(std::move(m));
        auto b = metrics_json(f.baseline);
        b["fold"] = f.index;
        b["train_size"] = f.train_size;
        b["test_size"] = f.test_size;
        base_folds.push_back(std::move(b));
    }
    return {{"tool_version", kToolVersion},
            {"config", config_echo},
            {"our_model", {{"folds", std::move(model_folds)}, {"mean", mean_json(report.model_mean)}}},
            {"baseline", {{"folds", std::move(base_folds)}, {"mean", mean_json(report.baseline_mean)}}}};
}

}  // namespace unfollow
