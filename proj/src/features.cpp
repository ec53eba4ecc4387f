#include "unfollow/features.h"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "unfollow/error.h"

namespace unfollow {
namespace {

class RowBuilder {
public:
    void add(const std::string& name, double value) {
        columns_.push_back(name);
        values_.push_back(value);
    }

    // Imputes missing values to 0 and records presence under `flag`.
    void add(const std::string& name, const std::optional<double>& value, const std::string& flag) {
        add(name, value.value_or(0.0));
        note_flag(flag, value.has_value());
    }

    void note_flag(const std::string& flag, bool present) {
        for (auto& [name, p] : flags_) {
            if (name == flag) {
                p = p && present;
                return;
            }
        }
        flags_.emplace_back(flag, present);
    }

    void flush_flags() {
        for (const auto& [name, present] : flags_) add(name, present ? 1.0 : 0.0);
        flags_.clear();
    }

    FeatureVector finish() { return {std::move(columns_), std::move(values_), 0}; }

private:
    std::vector<std::string> columns_;
    std::vector<double> values_;
    std::vector<std::pair<std::string, bool>> flags_;
};

std::optional<double> field(const std::optional<TweetLengthFeatures>& f, double TweetLengthFeatures::*member) {
    if (!f) return std::nullopt;
    return (*f).*member;
}

std::optional<double> field(const std::optional<BurstFeatures>& f, double BurstFeatures::*member) {
    if (!f) return std::nullopt;
    return (*f).*member;
}

void build_row(RowBuilder& row, const UserRecord& user, const UserExtraction& ex,
               const ModelFeatures& mf, const std::vector<std::string>& category_names, std::size_t embed_dim) {
    const auto& lx = ex.lexical;
    row.add("badness_coeff", lx.badness_coeff, "present_badness_coeff");
    row.add("content_div", lx.content_div, "present_content_div");
    row.add("tweet_rate", lx.tweet_rate, "present_tweet_rate");
    row.add("mention_coeff", lx.mention_coeff, "present_mention_coeff");
    row.add("mention_entropy", lx.mention_entropy, "present_mention_entropy");
    row.add("url_rate", lx.url_rate, "present_url_rate");
    row.add("mean_tweet_len", field(lx.length, &TweetLengthFeatures::mean_len), "present_tweet_length");
    row.add("frac_short", field(lx.length, &TweetLengthFeatures::frac_short), "present_tweet_length");
    row.add("frac_near_max", field(lx.length, &TweetLengthFeatures::frac_near_max), "present_tweet_length");
    row.add("has_description", user.has_description ? 1.0 : 0.0);
    row.add("is_verified", user.is_verified ? 1.0 : 0.0);

    row.add("burst_mean_gap", field(ex.bursts, &BurstFeatures::mean_inter_burst_gap), "present_bursts");
    row.add("burst_mean_period", field(ex.bursts, &BurstFeatures::mean_period), "present_bursts");
    row.add("burst_max_period", field(ex.bursts, &BurstFeatures::max_period), "present_bursts");
    row.add("burst_min_period", field(ex.bursts, &BurstFeatures::min_period), "present_bursts");
    row.add("burst_count", field(ex.bursts, &BurstFeatures::burst_count), "present_bursts");

    row.add("topic_div", mf.topic_div, "present_topic_div");

    if (ex.categories && ex.categories->size() != category_names.size()) {
        throw SchemaError("category score count does not match the lexicon");
    }
    for (std::size_t c = 0; c < category_names.size(); ++c) {
        std::optional<double> v;
        if (ex.categories) v = (*ex.categories)[c];
        row.add("cat_" + category_names[c], v, "present_categories");
    }
    if (category_names.empty()) row.note_flag("present_categories", ex.categories.has_value());

    const auto& g = mf.graph;
    row.add("mention_in_deg", g.in_deg);
    row.add("mention_out_deg", g.out_deg);
    row.add("mention_betweenness", g.betweenness);
    row.add("mention_closeness", g.closeness);
    row.add("mention_eigenvector", g.eigenvector);
    row.add("mention_clustering", g.clustering);
    row.add("in_mention_graph", g.in_mention_graph);
    row.add("sim_neighbor_majority", g.sim_neighbor_majority);
    row.add("sim_clustering", g.sim_clustering);

    row.note_flag("present_embedding", !mf.embedding.missing);
    row.flush_flags();

    row.add("followers_t0", static_cast<double>(user.followers_t0));
    row.add("followees_t0", static_cast<double>(user.followees_t0));
    row.add("followee_follower_ratio", followee_follower_ratio(user.followers_t0, user.followees_t0));

    if (mf.embedding.vector.size() != embed_dim) throw SchemaError("embedding has the wrong dimension");
    for (std::size_t d = 0; d < embed_dim; ++d) row.add("emb_" + std::to_string(d), mf.embedding.vector[d]);
}

}  // namespace

void FeatureMatrix::append(const std::string& user_id, FeatureVector v) {
    if (columns.empty() && rows.empty()) {
        columns = std::move(v.columns);
    } else if (v.columns != columns) {
        throw SchemaError("feature vector columns do not match the matrix schema");
    }
    user_ids.push_back(user_id);
    rows.push_back(std::move(v.values));
    labels.push_back(v.label);
}

int label_value(Label label) {
    if (label == Label::Excluded) throw InputError("excluded users carry no class label");
    return label == Label::Loser ? 1 : 0;
}

double followee_follower_ratio(std::int64_t followers, std::int64_t followees) {
    if (followers <= 0 || followees <= 0) return 0.0;
    return static_cast<double>(followees) / static_cast<double>(followers);
}

FeatureVector assemble_features(const UserRecord& user, const UserExtraction& extraction,
                                const ModelFeatures& model_features,
                                const std::vector<std::string>& category_names,
                                const std::vector<std::string>* expected) {
    RowBuilder row;
    build_row(row, user, extraction, model_features, category_names, model_features.embedding.vector.size());
    FeatureVector v = row.finish();
    for (double x : v.values) {
        if (!std::isfinite(x)) throw InputError("non-finite feature value for user " + user.user_id);
    }
    if (expected && *expected != v.columns) {
        throw SchemaError("assembled features do not match the expected schema");
    }
    return v;
}

FeatureVector baseline_features(const UserRecord& user) {
    FeatureVector v;
    v.columns = {"followers_t0", "followees_t0", "followee_follower_ratio"};
    v.values = {static_cast<double>(user.followers_t0), static_cast<double>(user.followees_t0),
                followee_follower_ratio(user.followers_t0, user.followees_t0)};
    return v;
}

std::vector<std::string> feature_columns(const std::vector<std::string>& category_names, std::size_t embed_dim) {
    UserRecord user;
    UserExtraction ex;
    ModelFeatures mf;
    mf.embedding.vector.assign(embed_dim, 0.0);
    RowBuilder row;
    build_row(row, user, ex, mf, category_names, embed_dim);
    return row.finish().columns;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

}  // namespace

void write_feature_csv(const FeatureMatrix& matrix, std::ostream& out) {
    out << "user_id";
    for (const auto& c : matrix.columns) out << ',' << c;
    out << ",label\n";
    char buf[40];
    for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
        out << csv_field(matrix.user_ids[r]);
        for (double x : matrix.rows[r]) {
            std::snprintf(buf, sizeof buf, "%.17g", x);
            out << ',' << buf;
        }
        out << ',' << matrix.labels[r] << '\n';
    }
}

}  // namespace unfollow
