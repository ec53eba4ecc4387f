#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "unfollow/rng.h"

namespace unfollow {

using Document = std::vector<std::string>;

struct LdaConfig {
    std::size_t topics = 30;
    std::optional<double> alpha;  // defaults to 50 / topics
    double beta = 0.01;
    std::size_t iterations = 500;
    std::size_t infer_iterations = 50;
    std::uint64_t seed = 1;

    double effective_alpha() const { return alpha ? *alpha : 50.0 / static_cast<double>(topics); }
};

struct TopicModel {
    std::size_t topics = 0;
    double alpha = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::string> vocab;                     // index -> word
    std::unordered_map<std::string, std::size_t> index;  // word -> index
    std::vector<double> phi;                            // topics x vocab, row-major
    std::vector<std::vector<double>> theta;             // one K-vector per training document

    std::size_t vocab_size() const { return vocab.size(); }
    double phi_at(std::size_t k, std::size_t w) const { return phi[k * vocab.size() + w]; }
    bool operator==(const TopicModel& other) const;
};

// Collapsed Gibbs sampler state. Exposed so that count bookkeeping can be
// checked between sweeps; train_lda is the usual entry point.
class LdaSampler {
public:
    LdaSampler(std::span<const Document> documents, std::size_t topics, double alpha, double beta,
               std::uint64_t seed);

    void sweep();

    std::size_t topics() const { return topics_; }
    std::size_t vocab_size() const { return vocab_.size(); }
    std::size_t documents() const { return doc_words_.size(); }
    std::size_t doc_topic(std::size_t d, std::size_t k) const { return doc_topic_[d * topics_ + k]; }
    std::size_t word_topic(std::size_t w, std::size_t k) const { return word_topic_[w * topics_ + k]; }
    std::size_t topic_total(std::size_t k) const { return topic_total_[k]; }
    std::size_t doc_length(std::size_t d) const { return doc_words_[d].size(); }
    std::size_t total_tokens() const;

    // True when every count table agrees with the current assignments.
    bool counts_consistent() const;

    TopicModel to_model() const;

private:
    std::size_t topics_;
    double alpha_;
    double beta_;
    std::uint64_t seed_;
    Rng rng_;
    std::vector<std::string> vocab_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::vector<std::uint32_t>> doc_words_;
    std::vector<std::vector<std::uint32_t>> assignments_;
    std::vector<std::uint32_t> doc_topic_;
    std::vector<std::uint32_t> word_topic_;
    std::vector<std::uint32_t> topic_total_;
    std::vector<double> weights_;
};

// Throws InputError for an empty corpus or topics < 2.
TopicModel train_lda(std::span<const Document> documents, const LdaConfig& config);

// Folds a held-out document in with phi fixed. Out-of-vocabulary tokens are
// dropped; std::nullopt when nothing remains.
std::optional<std::vector<double>> infer_topics(const TopicModel& model, const Document& doc,
                                                std::size_t iterations, std::uint64_t seed);

// Entropy in nats with 0 ln 0 = 0. Throws InputError unless the vector sums to 1 within 1e-6.
double topic_diversity(std::span<const double> theta);

void save_topic_model(const TopicModel& model, std::ostream& out);
TopicModel load_topic_model(std::istream& in);

}  // namespace unfollow
