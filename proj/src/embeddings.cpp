#include "unfollow/embeddings.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include <json.hpp>

#include "unfollow/error.h"
#include "unfollow/rng.h"
#include "unfollow/serialization.h"

namespace unfollow {
namespace {

constexpr const char* kFormat = "unfollow.embedding_model";
constexpr int kVersion = 1;

double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// -log(sigmoid(x)) without overflow
double neg_log_sigmoid(double x) {
    return x >= 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

std::vector<double> build_noise_cdf(const std::vector<std::uint64_t>& counts) {
    std::vector<double> cdf(counts.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        acc += std::pow(static_cast<double>(counts[i]), 0.75);
        cdf[i] = acc;
    }
    return cdf;
}

std::size_t sample_noise(Rng& rng, const std::vector<double>& cdf) {
    const double u = rng.uniform() * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

std::vector<std::vector<std::uint32_t>> encode(const EmbeddingModel& m, std::span<const Document> docs) {
    std::vector<std::vector<std::uint32_t>> out;
    out.reserve(docs.size());
    for (const auto& doc : docs) {
        std::vector<std::uint32_t> ids;
        ids.reserve(doc.size());
        for (const auto& w : doc) {
            auto it = m.index.find(w);
            if (it != m.index.end()) ids.push_back(static_cast<std::uint32_t>(it->second));
        }
        out.push_back(std::move(ids));
    }
    return out;
}

// Negative-sampling updates for a single document. The document vector is
// updated in place; word vectors are written only when tables are supplied.
class Trainer {
public:
    struct WordTables {
        double* in = nullptr;
        double* out = nullptr;
    };

    Trainer(const EmbeddingModel& model, Rng& rng, WordTables words)
        : m_(model), rng_(rng), words_(words), dim_(model.dim()), hidden_(dim_), grad_(dim_) {}

    // Returns summed loss and number of predictions.
    std::pair<double, std::size_t> run_document(std::span<double> doc, std::span<const std::uint32_t> words,
                                                double& processed, double total) {
        double loss = 0.0;
        std::size_t predictions = 0;
        const auto& c = m_.config;
        for (std::size_t i = 0; i < words.size(); ++i) {
            const double progress = total > 0 ? processed / total : 0.0;
            const double lr = std::max(c.end_lr, c.start_lr - (c.start_lr - c.end_lr) * progress);
            processed += 1.0;
            std::copy(doc.begin(), doc.end(), hidden_.begin());
            if (c.mode == EmbeddingMode::Dbow) {
                loss += predict(words[i], lr);
                for (std::size_t j = 0; j < dim_; ++j) doc[j] += grad_[j];
            } else {
                const std::size_t lo = i >= c.window ? i - c.window : 0;
                const std::size_t hi = std::min(words.size(), i + c.window + 1);
                std::size_t inputs = 1;
                for (std::size_t k = lo; k < hi; ++k) {
                    if (k == i) continue;
                    const double* v = &m_.word_in[words[k] * dim_];
                    for (std::size_t j = 0; j < dim_; ++j) hidden_[j] += v[j];
                    ++inputs;
                }
                for (auto& h : hidden_) h /= static_cast<double>(inputs);
                loss += predict(words[i], lr);
                for (std::size_t j = 0; j < dim_; ++j) doc[j] += grad_[j];
                if (words_.in) {
                    for (std::size_t k = lo; k < hi; ++k) {
                        if (k == i) continue;
                        double* v = words_.in + words[k] * dim_;
                        for (std::size_t j = 0; j < dim_; ++j) v[j] += grad_[j];
                    }
                }
            }
            ++predictions;
        }
        return {loss, predictions};
    }

private:
    // Positive target plus sampled negatives against hidden_; fills grad_.
    double predict(std::uint32_t target, double lr) {
        std::fill(grad_.begin(), grad_.end(), 0.0);
        double loss = 0.0;
        for (std::size_t s = 0; s <= m_.config.negatives; ++s) {
            std::size_t word = target;
            double label = 1.0;
            if (s > 0) {
                word = sample_noise(rng_, m_.noise_cdf);
                if (word == target) continue;
                label = 0.0;
            }
            const double* out = &m_.word_out[word * dim_];
            double f = 0.0;
            for (std::size_t j = 0; j < dim_; ++j) f += hidden_[j] * out[j];
            loss += label > 0 ? neg_log_sigmoid(f) : neg_log_sigmoid(-f);
            const double g = (label - sigmoid(f)) * lr;
            for (std::size_t j = 0; j < dim_; ++j) grad_[j] += g * out[j];
            if (words_.out) {
                double* w = words_.out + word * dim_;
                for (std::size_t j = 0; j < dim_; ++j) w[j] += g * hidden_[j];
            }
        }
        return loss;
    }

    const EmbeddingModel& m_;
    Rng& rng_;
    WordTables words_;
    std::size_t dim_;
    std::vector<double> hidden_;
    std::vector<double> grad_;
};

void init_rows(std::span<double> rows, std::size_t dim, Rng& rng) {
    for (auto& x : rows) x = (rng.uniform() - 0.5) / static_cast<double>(dim);
}

void check_finite(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) throw std::runtime_error(std::string("non-finite value in ") + what);
    }
}

}  // namespace

bool EmbeddingModel::operator==(const EmbeddingModel& o) const {
    return config.dim == o.config.dim && config.window == o.config.window &&
           config.epochs == o.config.epochs && config.negatives == o.config.negatives &&
           config.min_count == o.config.min_count && config.start_lr == o.config.start_lr &&
           config.end_lr == o.config.end_lr && config.mode == o.config.mode && config.seed == o.config.seed &&
           vocab == o.vocab && counts == o.counts && word_in == o.word_in && word_out == o.word_out &&
           docs == o.docs && epoch_loss == o.epoch_loss;
}

EmbeddingModel train_embeddings(std::span<const Document> documents, const EmbeddingConfig& config) {
    if (documents.size() < 2) throw InputError("train_embeddings: need at least 2 documents");
    if (config.dim < 2) throw InputError("train_embeddings: dim must be at least 2");

    EmbeddingModel m;
    m.config = config;
    std::map<std::string, std::uint64_t> freq;
    for (const auto& doc : documents) {
        for (const auto& w : doc) ++freq[w];
    }
    std::vector<std::pair<std::string, std::uint64_t>> kept;
    for (auto& [w, c] : freq) {
        if (c >= config.min_count) kept.emplace_back(w, c);
    }
    if (kept.empty()) throw InputError("train_embeddings: empty vocabulary after min-count filter");
    std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    for (auto& [w, c] : kept) {
        m.index.emplace(w, m.vocab.size());
        m.vocab.push_back(w);
        m.counts.push_back(c);
    }
    m.noise_cdf = build_noise_cdf(m.counts);

    const std::size_t dim = config.dim;
    Rng rng(config.seed);
    m.docs.assign(documents.size() * dim, 0.0);
    m.word_in.assign(m.vocab.size() * dim, 0.0);
    m.word_out.assign(m.vocab.size() * dim, 0.0);
    init_rows(m.docs, dim, rng);
    init_rows(m.word_in, dim, rng);

    const auto encoded = encode(m, documents);
    double words_per_epoch = 0.0;
    for (const auto& e : encoded) words_per_epoch += static_cast<double>(e.size());
    const double total = words_per_epoch * static_cast<double>(config.epochs);
    double processed = 0.0;

    Trainer trainer(m, rng, Trainer::WordTables{m.word_in.data(), m.word_out.data()});
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        double loss = 0.0;
        std::size_t predictions = 0;
        for (std::size_t d = 0; d < encoded.size(); ++d) {
            std::span<double> doc(m.docs.data() + d * dim, dim);
            auto [l, p] = trainer.run_document(doc, encoded[d], processed, total);
            loss += l;
            predictions += p;
        }
        check_finite(m.docs, "document vectors");
        check_finite(m.word_out, "output vectors");
        check_finite(m.word_in, "input vectors");
        m.epoch_loss.push_back(predictions == 0 ? 0.0 : loss / static_cast<double>(predictions));
    }
    return m;
}

InferredVector infer_vector(const EmbeddingModel& model, const Document& doc, std::size_t epochs,
                            std::uint64_t seed) {
    const std::size_t dim = model.dim();
    InferredVector result;
    const auto encoded = encode(model, std::span<const Document>(&doc, 1));
    if (encoded.front().empty()) {
        result.vector.assign(dim, 0.0);
        result.missing = true;
        return result;
    }
    Rng rng(seed);
    result.vector.assign(dim, 0.0);
    init_rows(result.vector, dim, rng);
    Trainer trainer(model, rng, {});
    const double total = static_cast<double>(encoded.front().size() * epochs);
    double processed = 0.0;
    for (std::size_t e = 0; e < epochs; ++e) {
        trainer.run_document(result.vector, encoded.front(), processed, total);
    }
    check_finite(result.vector, "inferred vector");
    return result;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / std::sqrt(na * nb);
}

nlohmann::json embedding_model_to_json(const EmbeddingModel& m) {
    const auto& c = m.config;
    return {{"format", kFormat},
            {"version", kVersion},
            {"config",
             {{"dim", c.dim},
              {"window", c.window},
              {"epochs", c.epochs},
              {"negatives", c.negatives},
              {"min_count", c.min_count},
              {"start_lr", c.start_lr},
              {"end_lr", c.end_lr},
              {"mode", c.mode == EmbeddingMode::Dbow ? "dbow" : "dm"},
              {"seed", c.seed}}},
            {"vocab", m.vocab},
            {"counts", m.counts},
            {"word_in", m.word_in},
            {"word_out", m.word_out},
            {"docs", m.docs},
            {"epoch_loss", m.epoch_loss}};
}

EmbeddingModel embedding_model_from_json(const nlohmann::json& j) {
    check_container(j, kFormat, kVersion);
    try {
        EmbeddingModel m;
        const auto& c = j.at("config");
        m.config.dim = c.at("dim").get<std::size_t>();
        m.config.window = c.at("window").get<std::size_t>();
        m.config.epochs = c.at("epochs").get<std::size_t>();
        m.config.negatives = c.at("negatives").get<std::size_t>();
        m.config.min_count = c.at("min_count").get<std::size_t>();
        m.config.start_lr = c.at("start_lr").get<double>();
        m.config.end_lr = c.at("end_lr").get<double>();
        m.config.mode = c.at("mode").get<std::string>() == "dm" ? EmbeddingMode::Dm : EmbeddingMode::Dbow;
        m.config.seed = c.at("seed").get<std::uint64_t>();
        m.vocab = j.at("vocab").get<std::vector<std::string>>();
        m.counts = j.at("counts").get<std::vector<std::uint64_t>>();
        m.word_in = j.at("word_in").get<std::vector<double>>();
        m.word_out = j.at("word_out").get<std::vector<double>>();
        m.docs = j.at("docs").get<std::vector<double>>();
        m.epoch_loss = j.at("epoch_loss").get<std::vector<double>>();
        const std::size_t v = m.vocab.size();
        if (m.config.dim == 0 || m.counts.size() != v || m.word_in.size() != v * m.config.dim ||
            m.word_out.size() != v * m.config.dim || m.docs.size() % m.config.dim != 0) {
            throw SchemaError("embedding model: inconsistent array sizes");
        }
        for (std::size_t i = 0; i < v; ++i) m.index.emplace(m.vocab[i], i);
        m.noise_cdf = build_noise_cdf(m.counts);
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("embedding model: ") + e.what());
    }
}

void save_embedding_model(const EmbeddingModel& model, std::ostream& out) {
    out << embedding_model_to_json(model).dump() << '\n';
}

EmbeddingModel load_embedding_model(std::istream& in) {
    return embedding_model_from_json(read_json(in, "embedding model"));
}

}  // namespace unfollow
