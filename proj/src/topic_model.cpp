#include "unfollow/topic_model.h"

#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "unfollow/entropy.h"
#include "unfollow/error.h"
#include "unfollow/serialization.h"

namespace unfollow {
namespace {

constexpr const char* kFormat = "unfollow.topic_model";
constexpr int kVersion = 1;

std::size_t sample_index(Rng& rng, std::span<const double> cumulative) {
    const double u = rng.uniform() * cumulative.back();
    std::size_t k = 0;
    while (k + 1 < cumulative.size() && cumulative[k] <= u) ++k;
    return k;
}

}  // namespace

bool TopicModel::operator==(const TopicModel& other) const {
    return topics == other.topics && alpha == other.alpha && beta == other.beta && seed == other.seed &&
           vocab == other.vocab && phi == other.phi && theta == other.theta;
}

LdaSampler::LdaSampler(std::span<const Document> documents, std::size_t topics, double alpha,
                       double beta, std::uint64_t seed)
    : topics_(topics), alpha_(alpha), beta_(beta), seed_(seed), rng_(seed) {
    if (topics < 2) throw InputError("train_lda: need at least 2 topics");
    if (!(alpha > 0.0) || !(beta > 0.0)) throw InputError("train_lda: alpha and beta must be positive");
    doc_words_.reserve(documents.size());
    for (const auto& doc : documents) {
        std::vector<std::uint32_t> ids;
        ids.reserve(doc.size());
        for (const auto& word : doc) {
            auto [it, inserted] = index_.try_emplace(word, vocab_.size());
            if (inserted) vocab_.push_back(word);
            ids.push_back(static_cast<std::uint32_t>(it->second));
        }
        doc_words_.push_back(std::move(ids));
    }
    if (vocab_.empty()) throw InputError("train_lda: corpus has no tokens");

    doc_topic_.assign(doc_words_.size() * topics_, 0);
    word_topic_.assign(vocab_.size() * topics_, 0);
    topic_total_.assign(topics_, 0);
    weights_.assign(topics_, 0.0);
    assignments_.resize(doc_words_.size());
    for (std::size_t d = 0; d < doc_words_.size(); ++d) {
        auto& z = assignments_[d];
        z.resize(doc_words_[d].size());
        for (std::size_t i = 0; i < z.size(); ++i) {
            const auto k = static_cast<std::uint32_t>(rng_.below(topics_));
            z[i] = k;
            ++doc_topic_[d * topics_ + k];
            ++word_topic_[doc_words_[d][i] * topics_ + k];
            ++topic_total_[k];
        }
    }
}

void LdaSampler::sweep() {
    const double v_beta = static_cast<double>(vocab_.size()) * beta_;
    for (std::size_t d = 0; d < doc_words_.size(); ++d) {
        const auto& words = doc_words_[d];
        auto& z = assignments_[d];
        std::uint32_t* dt = &doc_topic_[d * topics_];
        for (std::size_t i = 0; i < words.size(); ++i) {
            std::uint32_t* wt = &word_topic_[words[i] * topics_];
            const std::uint32_t old = z[i];
            --dt[old];
            --wt[old];
            --topic_total_[old];
            double acc = 0.0;
            for (std::size_t k = 0; k < topics_; ++k) {
                acc += (dt[k] + alpha_) * (wt[k] + beta_) / (topic_total_[k] + v_beta);
                weights_[k] = acc;
            }
            const auto k = static_cast<std::uint32_t>(sample_index(rng_, weights_));
            z[i] = k;
            ++dt[k];
            ++wt[k];
            ++topic_total_[k];
        }
    }
}

std::size_t LdaSampler::total_tokens() const {
    std::size_t n = 0;
    for (const auto& doc : doc_words_) n += doc.size();
    return n;
}

bool LdaSampler::counts_consistent() const {
    std::vector<std::uint32_t> dt(doc_topic_.size(), 0);
    std::vector<std::uint32_t> wt(word_topic_.size(), 0);
    std::vector<std::uint32_t> tt(topics_, 0);
    for (std::size_t d = 0; d < doc_words_.size(); ++d) {
        for (std::size_t i = 0; i < doc_words_[d].size(); ++i) {
            const auto k = assignments_[d][i];
            ++dt[d * topics_ + k];
            ++wt[doc_words_[d][i] * topics_ + k];
            ++tt[k];
        }
    }
    return dt == doc_topic_ && wt == word_topic_ && tt == topic_total_;
}

TopicModel LdaSampler::to_model() const {
    TopicModel m;
    m.topics = topics_;
    m.alpha = alpha_;
    m.beta = beta_;
    m.seed = seed_;
    m.vocab = vocab_;
    m.index = index_;
    const std::size_t v = vocab_.size();
    m.phi.assign(topics_ * v, 0.0);
    for (std::size_t k = 0; k < topics_; ++k) {
        const double denom = topic_total_[k] + static_cast<double>(v) * beta_;
        for (std::size_t w = 0; w < v; ++w) {
            m.phi[k * v + w] = (word_topic_[w * topics_ + k] + beta_) / denom;
        }
    }
    m.theta.reserve(doc_words_.size());
    const double k_alpha = static_cast<double>(topics_) * alpha_;
    for (std::size_t d = 0; d < doc_words_.size(); ++d) {
        std::vector<double> row(topics_);
        const double denom = static_cast<double>(doc_words_[d].size()) + k_alpha;
        for (std::size_t k = 0; k < topics_; ++k) row[k] = (doc_topic_[d * topics_ + k] + alpha_) / denom;
        m.theta.push_back(std::move(row));
    }
    return m;
}

TopicModel train_lda(std::span<const Document> documents, const LdaConfig& config) {
    if (documents.empty()) throw InputError("train_lda: empty corpus");
    LdaSampler sampler(documents, config.topics, config.effective_alpha(), config.beta, config.seed);
    for (std::size_t it = 0; it < config.iterations; ++it) sampler.sweep();
    return sampler.to_model();
}

std::optional<std::vector<double>> infer_topics(const TopicModel& model, const Document& doc,
                                                std::size_t iterations, std::uint64_t seed) {
    std::vector<std::size_t> words;
    words.reserve(doc.size());
    for (const auto& w : doc) {
        auto it = model.index.find(w);
        if (it != model.index.end()) words.push_back(it->second);
    }
    if (words.empty()) return std::nullopt;

    const std::size_t topics = model.topics;
    Rng rng(seed);
    std::vector<std::uint32_t> z(words.size());
    std::vector<std::uint32_t> counts(topics, 0);
    for (auto& k : z) {
        k = static_cast<std::uint32_t>(rng.below(topics));
        ++counts[k];
    }
    std::vector<double> weights(topics);
    for (std::size_t it = 0; it < iterations; ++it) {
        for (std::size_t i = 0; i < words.size(); ++i) {
            --counts[z[i]];
            double acc = 0.0;
            for (std::size_t k = 0; k < topics; ++k) {
                acc += (counts[k] + model.alpha) * model.phi_at(k, words[i]);
                weights[k] = acc;
            }
            z[i] = static_cast<std::uint32_t>(sample_index(rng, weights));
            ++counts[z[i]];
        }
    }
    std::vector<double> theta(topics);
    const double denom = static_cast<double>(words.size()) + static_cast<double>(topics) * model.alpha;
    for (std::size_t k = 0; k < topics; ++k) theta[k] = (counts[k] + model.alpha) / denom;
    return theta;
}

double topic_diversity(std::span<const double> theta) {
    double total = 0.0;
    for (double p : theta) {
        if (!(p >= 0.0)) throw InputError("topic_diversity: negative or non-finite component");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-6) throw InputError("topic_diversity: theta is not normalized");
    return entropy_of_weights<double>(theta);
}

nlohmann::json topic_model_to_json(const TopicModel& model) {
    return {{"format", kFormat},    {"version", kVersion}, {"topics", model.topics},
            {"alpha", model.alpha}, {"beta", model.beta},  {"seed", model.seed},
            {"vocab", model.vocab}, {"phi", model.phi},    {"theta", model.theta}};
}

TopicModel topic_model_from_json(const nlohmann::json& j) {
    check_container(j, kFormat, kVersion);
    try {
        TopicModel m;
        m.topics = j.at("topics").get<std::size_t>();
        m.alpha = j.at("alpha").get<double>();
        m.beta = j.at("beta").get<double>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.vocab = j.at("vocab").get<std::vector<std::string>>();
        m.phi = j.at("phi").get<std::vector<double>>();
        m.theta = j.at("theta").get<std::vector<std::vector<double>>>();
        if (m.phi.size() != m.topics * m.vocab.size()) throw SchemaError("topic model: phi has wrong size");
        for (std::size_t i = 0; i < m.vocab.size(); ++i) m.index.emplace(m.vocab[i], i);
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("topic model: ") + e.what());
    }
}

void save_topic_model(const TopicModel& model, std::ostream& out) {
    out << topic_model_to_json(model).dump() << '\n';
}

TopicModel load_topic_model(std::istream& in) {
    return topic_model_from_json(read_json(in, "topic model"));
}

}  // namespace unfollow
