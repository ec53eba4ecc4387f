#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "unfollow/burst_features.h"
#include "unfollow/category_features.h"
#include "unfollow/corpus.h"
#include "unfollow/embeddings.h"
#include "unfollow/features.h"
#include "unfollow/graph_features.h"
#include "unfollow/lexical_features.h"
#include "unfollow/mlp.h"
#include "unfollow/topic_model.h"

#include <json.hpp>

namespace unfollow {

struct PipelineOptions {
    BurstOptions burst;
    LengthThresholds lengths;
    LdaConfig lda;
    EmbeddingConfig embedding;
    std::size_t embed_infer_epochs = 20;
    MlpConfig mlp;
    double similarity_threshold = 0.3;
    unsigned workers = 1;
};

struct Resources {
    Stopwords stopwords = Stopwords::english();
    BadnessLexicon badness;
    CategoryLexicon categories;
};

struct LabeledCorpus {
    std::vector<UserRecord> users;
    std::vector<int> labels;  // 1 Loser, 0 Stable
};

struct SelectionOptions {
    EligibilityRules rules;
    double english_threshold = 0.10;
    bool balance_classes = false;  // downsample the larger class
    std::uint64_t seed = 1;
};

// Eligible users whose label is Loser or Stable, in input order.
LabeledCorpus select_labeled(std::span<const UserRecord> users, const Stopwords& stopwords,
                             const SelectionOptions& options);

// What the graph features need to know about each user.
struct GraphInputs {
    std::vector<std::string> ids;
    std::vector<std::vector<std::string>> mentions;
    std::vector<Document> documents;  // filtered tokens, used as the Jaccard token sets

    std::size_t size() const { return ids.size(); }
};

// Graph features for `members` (indices into `inputs`), using the mention
// graph and the similarity graph restricted to those members. Only labels of
// members are consulted for the neighbor-majority feature; pass std::nullopt
// for users whose labels must stay hidden.
std::vector<GraphFeatures> member_graph_features(const GraphInputs& inputs, const SimilarityGraph& full_similarity,
                                                 std::span<const std::size_t> members,
                                                 std::span<const std::optional<int>> labels);

// Label-independent per-user extraction, done once per corpus.
class PreparedCorpus {
public:
    PreparedCorpus(std::vector<UserRecord> users, std::vector<int> labels, const Resources& resources,
                   const PipelineOptions& options);

    std::size_t size() const { return users_.size(); }
    const std::vector<UserRecord>& users() const { return users_; }
    const std::vector<int>& labels() const { return labels_; }
    const std::vector<UserExtraction>& extractions() const { return extractions_; }
    const GraphInputs& graph_inputs() const { return graph_inputs_; }
    const SimilarityGraph& similarity() const { return similarity_; }
    const std::vector<std::string>& category_names() const { return category_names_; }

    // Structural graph features with every user present; neighbor majority unset.
    const std::vector<GraphFeatures>& full_graph_features() const { return full_graph_; }

private:
    std::vector<UserRecord> users_;
    std::vector<int> labels_;
    std::vector<UserExtraction> extractions_;
    GraphInputs graph_inputs_;
    SimilarityGraph similarity_;
    std::vector<std::string> category_names_;
    std::vector<GraphFeatures> full_graph_;
};

struct TrainedPipeline {
    TopicModel topics;
    EmbeddingModel embedding;
    MlpModel classifier;
    MlpModel baseline;
    std::vector<std::string> columns;

    bool operator==(const TrainedPipeline& o) const {
        return topics == o.topics && embedding == o.embedding && classifier == o.classifier &&
               baseline == o.baseline && columns == o.columns;
    }
};

struct TrainingOutput {
    TrainedPipeline models;
    FeatureMatrix features;           // training rows, unscaled
    FeatureMatrix baseline_features;  // training rows, unscaled
};

// Seeds for the component models of one training run.
struct PipelineSeeds {
    std::uint64_t lda;
    std::uint64_t embedding;
    std::uint64_t classifier;
    std::uint64_t baseline;
    std::uint64_t inference;

    static PipelineSeeds from(std::uint64_t seed);
};

// Trains topics, embeddings, the MLP and the baseline on `train` only: no
// tweet, label, or graph edge of any other user is read.
TrainingOutput train_pipeline(const PreparedCorpus& corpus, std::span<const std::size_t> train,
                              const PipelineOptions& options, const PipelineSeeds& seeds);

struct HeldOutFeatures {
    FeatureMatrix features;
    FeatureMatrix baseline_features;
};

// Features for held-out users against models trained on `train`. Graph
// features use the full corpus graph with only training labels visible.
HeldOutFeatures held_out_features(const PreparedCorpus& corpus, const TrainedPipeline& models,
                                  std::span<const std::size_t> train, std::span<const std::size_t> test,
                                  const PipelineOptions& options, const PipelineSeeds& seeds);

// A trained pipeline plus what scoring new users needs: the options used for
// extraction and the training users' graph inputs and labels.
struct PipelineBundle {
    TrainedPipeline models;
    PipelineOptions options;
    std::vector<std::string> category_names;
    GraphInputs training_graph;
    std::vector<int> training_labels;
    std::uint64_t inference_seed = 0;
    nlohmann::json config_echo;
};

PipelineBundle make_bundle(const PreparedCorpus& corpus, TrainedPipeline models, const PipelineOptions& options,
                           const PipelineSeeds& seeds, nlohmann::json config_echo);

void save_bundle(const PipelineBundle& bundle, std::ostream& out);
PipelineBundle load_bundle(std::istream& in);

struct ScoredUser {
    std::string user_id;
    double probability = 0.0;
    int label = 0;
    std::vector<std::string> missing;  // presence flags that are 0
};

// Scores users that were not part of training. The resources must be the
// ones used at training time.
std::vector<ScoredUser> score_users(const PipelineBundle& bundle, std::span<const UserRecord> users,
                                    const Resources& resources, double threshold = 0.5);

}  // namespace unfollow
