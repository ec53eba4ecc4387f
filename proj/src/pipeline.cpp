#include "unfollow/pipeline.h"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "unfollow/error.h"
#include "unfollow/parallel.h"
#include "unfollow/serialization.h"

namespace unfollow {
namespace {

constexpr const char* kBundleFormat = "unfollow.pipeline";
constexpr int kBundleVersion = 1;

struct PreparedUser {
    UserExtraction extraction;
    Document document;
    std::vector<std::string> mentions;
};

PreparedUser prepare_user(const UserRecord& user, const Resources& resources, const PipelineOptions& options) {
    PreparedUser p;
    p.extraction.lexical = extract_lexical(user, resources.badness, resources.stopwords, options.lengths);
    std::vector<std::int64_t> timestamps;
    timestamps.reserve(user.tweets.size());
    for (const auto& t : user.tweets) timestamps.push_back(t.timestamp);
    std::sort(timestamps.begin(), timestamps.end());
    p.extraction.bursts = extract_bursts(timestamps, options.burst);
    p.extraction.categories = category_scores(user.tweets, resources.categories);
    p.document = filtered_tokens(user.tweets, resources.stopwords);
    for (const auto& t : user.tweets) p.mentions.insert(p.mentions.end(), t.mentions.begin(), t.mentions.end());
    return p;
}

std::vector<PreparedUser> prepare_all(std::span<const UserRecord> users, const Resources& resources,
                                      const PipelineOptions& options) {
    std::vector<PreparedUser> out(users.size());
    parallel_for(users.size(), options.workers,
                 [&](std::size_t i) { out[i] = prepare_user(users[i], resources, options); });
    return out;
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

bool has_vocab_token(const EmbeddingModel& model, const Document& doc) {
    return std::any_of(doc.begin(), doc.end(), [&](const std::string& w) { return model.index.contains(w); });
}

// Model-derived features for a user the models were not trained on.
ModelFeatures infer_model_features(const TrainedPipeline& models, const Document& doc,
                                   const PipelineOptions& options, std::uint64_t seed) {
    ModelFeatures mf;
    if (auto theta = infer_topics(models.topics, doc, options.lda.infer_iterations, derive_seed(seed, 1))) {
        mf.topic_div = topic_diversity(*theta);
    }
    mf.embedding = infer_vector(models.embedding, doc, options.embed_infer_epochs, derive_seed(seed, 2));
    return mf;
}

nlohmann::json options_to_json(const PipelineOptions& o) {
    return {
        {"burst_gap_seconds", o.burst.gap_threshold},
        {"burst_min_length", o.burst.min_length},
        {"short_len", o.lengths.short_len},
        {"near_max_len", o.lengths.near_max_len},
        {"topics", o.lda.topics},
        {"lda_alpha", o.lda.effective_alpha()},
        {"lda_beta", o.lda.beta},
        {"lda_iters", o.lda.iterations},
        {"lda_infer_iters", o.lda.infer_iterations},
        {"embed_dim", o.embedding.dim},
        {"embed_window", o.embedding.window},
        {"embed_epochs", o.embedding.epochs},
        {"embed_negatives", o.embedding.negatives},
        {"embed_min_count", o.embedding.min_count},
        {"embed_mode", o.embedding.mode == EmbeddingMode::Dbow ? "dbow" : "dm"},
        {"embed_infer_epochs", o.embed_infer_epochs},
        {"similarity_threshold", o.similarity_threshold},
    };
}

PipelineOptions options_from_json(const nlohmann::json& j) {
    PipelineOptions o;
    o.burst.gap_threshold = j.at("burst_gap_seconds").get<std::int64_t>();
    o.burst.min_length = j.at("burst_min_length").get<std::size_t>();
    o.lengths.short_len = j.at("short_len").get<std::size_t>();
    o.lengths.near_max_len = j.at("near_max_len").get<std::size_t>();
    o.lda.topics = j.at("topics").get<std::size_t>();
    o.lda.alpha = j.at("lda_alpha").get<double>();
    o.lda.beta = j.at("lda_beta").get<double>();
    o.lda.iterations = j.at("lda_iters").get<std::size_t>();
    o.lda.infer_iterations = j.at("lda_infer_iters").get<std::size_t>();
    o.embedding.dim = j.at("embed_dim").get<std::size_t>();
    o.embedding.window = j.at("embed_window").get<std::size_t>();
    o.embedding.epochs = j.at("embed_epochs").get<std::size_t>();
    o.embedding.negatives = j.at("embed_negatives").get<std::size_t>();
    o.embedding.min_count = j.at("embed_min_count").get<std::size_t>();
    o.embedding.mode = j.at("embed_mode").get<std::string>() == "dm" ? EmbeddingMode::Dm : EmbeddingMode::Dbow;
    o.embed_infer_epochs = j.at("embed_infer_epochs").get<std::size_t>();
    o.similarity_threshold = j.at("similarity_threshold").get<double>();
    return o;
}

}  // namespace

LabeledCorpus select_labeled(std::span<const UserRecord> users, const Stopwords& stopwords,
                             const SelectionOptions& options) {
    const StopwordRatioDetector detector(stopwords, options.english_threshold);
    std::vector<std::size_t> positives;
    std::vector<std::size_t> negatives;
    for (std::size_t i = 0; i < users.size(); ++i) {
        const auto& u = users[i];
        if (u.followers_t0 <= 0 || !filter_eligible(u, detector, options.rules)) continue;
        const Label label = label_user(u.followers_t0, u.followers_t1);
        if (label == Label::Loser) positives.push_back(i);
        if (label == Label::Stable) negatives.push_back(i);
    }
    if (options.balance_classes) {
        Rng rng(derive_seed(options.seed, 7));
        const std::size_t keep = std::min(positives.size(), negatives.size());
        for (auto* group : {&positives, &negatives}) {
            rng.shuffle(*group);
            group->resize(keep);
        }
    }
    std::vector<std::pair<std::size_t, int>> chosen;
    for (auto i : positives) chosen.emplace_back(i, 1);
    for (auto i : negatives) chosen.emplace_back(i, 0);
    std::sort(chosen.begin(), chosen.end());
    LabeledCorpus out;
    for (const auto& [i, label] : chosen) {
        out.users.push_back(users[i]);
        out.labels.push_back(label);
    }
    return out;
}

std::vector<GraphFeatures> member_graph_features(const GraphInputs& inputs, const SimilarityGraph& full_similarity,
                                                 std::span<const std::size_t> members,
                                                 std::span<const std::optional<int>> labels) {
    std::vector<std::string> ids;
    std::vector<std::vector<std::string>> mentions;
    ids.reserve(members.size());
    mentions.reserve(members.size());
    for (std::size_t m : members) {
        ids.push_back(inputs.ids[m]);
        mentions.push_back(inputs.mentions[m]);
    }
    const MentionGraph mention = build_mention_graph(ids, mentions);
    const auto cent = centralities(mention);

    std::vector<bool> keep(full_similarity.size(), false);
    for (std::size_t m : members) keep[m] = true;
    const SimilarityGraph sub = induced_subgraph(full_similarity, keep);
    std::vector<std::size_t> sub_index(full_similarity.size(), 0);
    std::vector<std::optional<int>> sub_labels;
    for (std::size_t v = 0; v < full_similarity.size(); ++v) {
        if (!keep[v]) continue;
        sub_index[v] = sub_labels.size();
        sub_labels.push_back(v < labels.size() ? labels[v] : std::nullopt);
    }
    const auto sim_clustering = clustering_coefficients(sub.neighbor_lists());

    std::vector<GraphFeatures> out(members.size());
    for (std::size_t r = 0; r < members.size(); ++r) {
        auto& f = out[r];
        if (auto node = mention.find(ids[r])) {
            const auto& c = cent[*node];
            f.in_deg = c.in_deg;
            f.out_deg = c.out_deg;
            f.betweenness = c.betweenness;
            f.closeness = c.closeness;
            f.eigenvector = c.eigenvector;
            f.clustering = c.clustering;
            f.in_mention_graph = 1.0;
        }
        const std::size_t s = sub_index[members[r]];
        f.sim_clustering = sim_clustering[s];
        f.sim_neighbor_majority = neighbor_majority_class(sub, s, sub_labels);
    }
    return out;
}

PreparedCorpus::PreparedCorpus(std::vector<UserRecord> users, std::vector<int> labels, const Resources& resources,
                               const PipelineOptions& options)
    : users_(std::move(users)), labels_(std::move(labels)), category_names_(resources.categories.categories()) {
    if (labels_.size() != users_.size()) throw InputError("PreparedCorpus: one label per user required");
    std::unordered_set<std::string> seen;
    for (const auto& u : users_) {
        std::string key = u.user_id;
        std::transform(key.begin(), key.end(), key.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (!seen.insert(key).second) throw InputError("duplicate user_id: " + u.user_id);
    }
    auto prepared = prepare_all(users_, resources, options);
    extractions_.reserve(prepared.size());
    for (std::size_t i = 0; i < prepared.size(); ++i) {
        extractions_.push_back(std::move(prepared[i].extraction));
        graph_inputs_.ids.push_back(users_[i].user_id);
        graph_inputs_.mentions.push_back(std::move(prepared[i].mentions));
        graph_inputs_.documents.push_back(std::move(prepared[i].document));
    }
    similarity_ = build_similarity_graph(token_id_sets(graph_inputs_.documents), options.similarity_threshold);
    std::vector<std::size_t> all(users_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const std::vector<std::optional<int>> hidden(users_.size());
    full_graph_ = member_graph_features(graph_inputs_, similarity_, all, hidden);
}

PipelineSeeds PipelineSeeds::from(std::uint64_t seed) {
    return {derive_seed(seed, 11), derive_seed(seed, 12), derive_seed(seed, 13), derive_seed(seed, 14),
            derive_seed(seed, 15)};
}

TrainingOutput train_pipeline(const PreparedCorpus& corpus, std::span<const std::size_t> train,
                              const PipelineOptions& options, const PipelineSeeds& seeds) {
    if (train.empty()) throw InputError("train_pipeline: no training users");
    const auto& inputs = corpus.graph_inputs();
    std::vector<Document> docs;
    docs.reserve(train.size());
    for (std::size_t i : train) docs.push_back(inputs.documents[i]);

    TrainingOutput out;
    auto& models = out.models;
    LdaConfig lda = options.lda;
    lda.seed = seeds.lda;
    models.topics = train_lda(docs, lda);
    EmbeddingConfig emb = options.embedding;
    emb.seed = seeds.embedding;
    models.embedding = train_embeddings(docs, emb);

    std::vector<std::optional<int>> visible(corpus.size());
    for (std::size_t i : train) visible[i] = corpus.labels()[i];
    const auto graph = member_graph_features(inputs, corpus.similarity(), train, visible);

    for (std::size_t r = 0; r < train.size(); ++r) {
        const std::size_t i = train[r];
        ModelFeatures mf;
        if (!docs[r].empty()) mf.topic_div = topic_diversity(models.topics.theta[r]);
        if (has_vocab_token(models.embedding, docs[r])) {
            const auto v = models.embedding.doc_vector(r);
            mf.embedding.vector.assign(v.begin(), v.end());
        } else {
            mf.embedding.vector.assign(models.embedding.dim(), 0.0);
            mf.embedding.missing = true;
        }
        mf.graph = graph[r];
        const auto& user = corpus.users()[i];
        FeatureVector fv = assemble_features(user, corpus.extractions()[i], mf, corpus.category_names());
        fv.label = corpus.labels()[i];
        out.features.append(user.user_id, std::move(fv));
        FeatureVector base = baseline_features(user);
        base.label = corpus.labels()[i];
        out.baseline_features.append(user.user_id, std::move(base));
    }
    models.columns = out.features.columns;

    MlpConfig mlp = options.mlp;
    mlp.seed = seeds.classifier;
    models.classifier = fit_classifier(out.features.rows, out.features.labels, mlp, models.columns);
    mlp.seed = seeds.baseline;
    models.baseline = fit_classifier(out.baseline_features.rows, out.baseline_features.labels, mlp,
                                     out.baseline_features.columns);
    return out;
}

HeldOutFeatures held_out_features(const PreparedCorpus& corpus, const TrainedPipeline& models,
                                  std::span<const std::size_t> train, std::span<const std::size_t> test,
                                  const PipelineOptions& options, const PipelineSeeds& seeds) {
    std::vector<std::optional<int>> visible(corpus.size());
    for (std::size_t i : train) visible[i] = corpus.labels()[i];

    std::vector<ModelFeatures> inferred(test.size());
    parallel_for(test.size(), options.workers, [&](std::size_t r) {
        const std::size_t i = test[r];
        inferred[r] = infer_model_features(models, corpus.graph_inputs().documents[i], options,
                                           derive_seed(seeds.inference, i));
    });

    HeldOutFeatures out;
    for (std::size_t r = 0; r < test.size(); ++r) {
        const std::size_t i = test[r];
        auto& mf = inferred[r];
        mf.graph = corpus.full_graph_features()[i];
        mf.graph.sim_neighbor_majority = neighbor_majority_class(corpus.similarity(), i, visible);
        const auto& user = corpus.users()[i];
        FeatureVector fv =
            assemble_features(user, corpus.extractions()[i], mf, corpus.category_names(), &models.columns);
        fv.label = corpus.labels()[i];
        out.features.append(user.user_id, std::move(fv));
        FeatureVector base = baseline_features(user);
        base.label = corpus.labels()[i];
        out.baseline_features.append(user.user_id, std::move(base));
    }
    return out;
}

PipelineBundle make_bundle(const PreparedCorpus& corpus, TrainedPipeline models, const PipelineOptions& options,
                           const PipelineSeeds& seeds, nlohmann::json config_echo) {
    PipelineBundle b;
    b.models = std::move(models);
    b.options = options;
    b.category_names = corpus.category_names();
    b.training_graph = corpus.graph_inputs();
    b.training_labels = corpus.labels();
    b.inference_seed = seeds.inference;
    b.config_echo = std::move(config_echo);
    return b;
}

void save_bundle(const PipelineBundle& b, std::ostream& out) {
    nlohmann::json j = {
        {"format", kBundleFormat},
        {"version", kBundleVersion},
        {"config", b.config_echo},
        {"options", options_to_json(b.options)},
        {"categories", b.category_names},
        {"columns", b.models.columns},
        {"topics", topic_model_to_json(b.models.topics)},
        {"embedding", embedding_model_to_json(b.models.embedding)},
        {"classifier", mlp_to_json(b.models.classifier)},
        {"baseline", mlp_to_json(b.models.baseline)},
        {"inference_seed", b.inference_seed},
        {"training",
         {{"ids", b.training_graph.ids},
          {"mentions", b.training_graph.mentions},
          {"documents", b.training_graph.documents},
          {"labels", b.training_labels}}},
    };
    out << j.dump() << '\n';
}

PipelineBundle load_bundle(std::istream& in) {
    const auto j = read_json(in, "pipeline bundle");
    check_container(j, kBundleFormat, kBundleVersion);
    try {
        PipelineBundle b;
        b.config_echo = j.at("config");
        b.options = options_from_json(j.at("options"));
        b.category_names = j.at("categories").get<std::vector<std::string>>();
        b.models.columns = j.at("columns").get<std::vector<std::string>>();
        b.models.topics = topic_model_from_json(j.at("topics"));
        b.models.embedding = embedding_model_from_json(j.at("embedding"));
        b.models.classifier = mlp_from_json(j.at("classifier"));
        b.models.baseline = mlp_from_json(j.at("baseline"));
        b.inference_seed = j.at("inference_seed").get<std::uint64_t>();
        const auto& t = j.at("training");
        b.training_graph.ids = t.at("ids").get<std::vector<std::string>>();
        b.training_graph.mentions = t.at("mentions").get<std::vector<std::vector<std::string>>>();
        b.training_graph.documents = t.at("documents").get<std::vector<Document>>();
        b.training_labels = t.at("labels").get<std::vector<int>>();
        const std::size_t n = b.training_graph.ids.size();
        if (b.training_graph.mentions.size() != n || b.training_graph.documents.size() != n ||
            b.training_labels.size() != n) {
            throw SchemaError("pipeline bundle: training arrays differ in length");
        }
        if (b.models.classifier.columns != b.models.columns) {
            throw SchemaError("pipeline bundle: classifier columns do not match the schema");
        }
        return b;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("pipeline bundle: ") + e.what());
    }
}

std::vector<ScoredUser> score_users(const PipelineBundle& bundle, std::span<const UserRecord> users,
                                    const Resources& resources, double threshold) {
    if (resources.categories.categories() != bundle.category_names) {
        throw SchemaError("category lexicon differs from the one used for training");
    }
    auto options = bundle.options;
    auto prepared = prepare_all(users, resources, options);

    GraphInputs combined = bundle.training_graph;
    const std::size_t n_train = combined.size();
    for (auto& p : prepared) combined.documents.push_back(p.document);
    for (std::size_t i = 0; i < users.size(); ++i) {
        combined.ids.push_back(users[i].user_id);
        combined.mentions.push_back(prepared[i].mentions);
    }
    const auto similarity = build_similarity_graph(token_id_sets(combined.documents), options.similarity_threshold);
    std::vector<std::size_t> members(combined.size());
    for (std::size_t i = 0; i < members.size(); ++i) members[i] = i;
    std::vector<std::optional<int>> visible(combined.size());
    for (std::size_t i = 0; i < n_train; ++i) visible[i] = bundle.training_labels[i];
    const auto graph = member_graph_features(combined, similarity, members, visible);

    std::vector<ScoredUser> out;
    Matrix rows;
    for (std::size_t i = 0; i < users.size(); ++i) {
        ModelFeatures mf = infer_model_features(bundle.models, prepared[i].document, options,
                                                derive_seed(bundle.inference_seed, fnv1a(users[i].user_id)));
        mf.graph = graph[n_train + i];
        FeatureVector fv = assemble_features(users[i], prepared[i].extraction, mf, bundle.category_names,
                                             &bundle.models.columns);
        ScoredUser s;
        s.user_id = users[i].user_id;
        for (std::size_t c = 0; c < fv.columns.size(); ++c) {
            if (fv.columns[c].starts_with("present_") && fv.values[c] == 0.0) {
                s.missing.push_back(fv.columns[c].substr(8));
            }
        }
        rows.push_back(std::move(fv.values));
        out.push_back(std::move(s));
    }
    const auto proba = predict_proba(bundle.models.classifier, rows);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].probability = proba[i];
        out[i].label = proba[i] >= threshold ? 1 : 0;
    }
    return out;
}

}  // namespace unfollow
