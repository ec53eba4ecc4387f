#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "unfollow/burst_features.h"
#include "unfollow/corpus.h"
#include "unfollow/embeddings.h"
#include "unfollow/graph_features.h"
#include "unfollow/lexical_features.h"

namespace unfollow {

// Named, ordered feature columns for one user.
struct FeatureVector {
    std::vector<std::string> columns;
    std::vector<double> values;
    int label = 0;  // 1 Loser, 0 Stable
};

struct FeatureMatrix {
    std::vector<std::string> columns;
    std::vector<std::string> user_ids;
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;

    std::size_t size() const { return rows.size(); }
    void append(const std::string& user_id, FeatureVector v);
};

// Everything about a user that does not depend on a trained model.
struct UserExtraction {
    LexicalFeatures lexical;
    std::optional<BurstFeatures> bursts;
    std::optional<std::vector<double>> categories;
};

// Model- and graph-derived features for a user.
struct ModelFeatures {
    std::optional<double> topic_div;
    GraphFeatures graph;
    InferredVector embedding;
};

// Labels encode Loser as 1 and Stable as 0.
int label_value(Label label);

// Followees over followers; 0 when either count is zero.
double followee_follower_ratio(std::int64_t followers, std::int64_t followees);

// Column order: lexical, burst, topic diversity, categories, graph, presence
// flags, follower counts, embedding dimensions. Undefined features are
// imputed to 0 and their presence flag set to 0. Throws SchemaError when
// `expected` is given and the produced columns differ from it.
FeatureVector assemble_features(const UserRecord& user, const UserExtraction& extraction,
                                const ModelFeatures& model_features,
                                const std::vector<std::string>& category_names,
                                const std::vector<std::string>* expected = nullptr);

// followers_t0, followees_t0, followee_follower_ratio.
FeatureVector baseline_features(const UserRecord& user);

// The assembled column names without computing any values.
std::vector<std::string> feature_columns(const std::vector<std::string>& category_names, std::size_t embed_dim);

// CSV with a header row: user_id, the feature columns, label.
void write_feature_csv(const FeatureMatrix& matrix, std::ostream& out);

}  // namespace unfollow
