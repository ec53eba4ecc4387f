#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "unfollow/topic_model.h"

namespace unfollow {

enum class EmbeddingMode { Dbow, Dm };

struct EmbeddingConfig {
    std::size_t dim = 50;
    std::size_t window = 5;  // context half-width, used by Dm only
    std::size_t epochs = 20;
    std::size_t negatives = 5;
    std::size_t min_count = 2;
    double start_lr = 0.025;
    double end_lr = 0.0001;
    EmbeddingMode mode = EmbeddingMode::Dbow;
    std::uint64_t seed = 1;
};

// Paragraph-vector model. Rows are stored flat, row-major, `dim` wide.
struct EmbeddingModel {
    EmbeddingConfig config;
    std::vector<std::string> vocab;  // descending frequency, ties by word
    std::vector<std::uint64_t> counts;
    std::unordered_map<std::string, std::size_t> index;
    std::vector<double> word_in;   // context vectors (Dm input)
    std::vector<double> word_out;  // negative-sampling output vectors
    std::vector<double> docs;      // one row per training document
    std::vector<double> epoch_loss;
    std::vector<double> noise_cdf;  // unigram^0.75, rebuilt from counts on load

    std::size_t dim() const { return config.dim; }
    std::size_t doc_count() const { return dim() == 0 ? 0 : docs.size() / dim(); }
    std::span<const double> doc_vector(std::size_t d) const {
        return std::span<const double>(docs).subspan(d * dim(), dim());
    }
    bool operator==(const EmbeddingModel& other) const;
};

// Throws InputError for fewer than 2 documents, dim < 2, or an empty
// vocabulary after the min-count filter.
EmbeddingModel train_embeddings(std::span<const Document> documents, const EmbeddingConfig& config);

struct InferredVector {
    std::vector<double> vector;
    bool missing = false;  // no in-vocabulary tokens; vector is all zeros
};

// Learns a fresh document vector against the frozen model.
InferredVector infer_vector(const EmbeddingModel& model, const Document& doc, std::size_t epochs,
                            std::uint64_t seed);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

void save_embedding_model(const EmbeddingModel& model, std::ostream& out);
EmbeddingModel load_embedding_model(std::istream& in);

}  // namespace unfollow
