#include "unfollow/config.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "unfollow/error.h"
#include "unfollow/parallel.h"

namespace unfollow {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_integer(const std::string& key, const std::string& v) {
    T out{};
    const auto* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) throw ConfigError("invalid integer for '" + key + "': " + v);
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw ConfigError("");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("invalid number for '" + key + "': " + v);
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("invalid boolean for '" + key + "': " + v);
}

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<std::size_t> parse_sizes(const std::string& key, const std::string& v) {
    std::vector<std::size_t> out;
    std::stringstream ss(v);
    std::string part;
    while (std::getline(ss, part, ',')) {
        part = trim(part);
        if (part.empty()) continue;
        const auto n = parse_integer<std::size_t>(key, part);
        if (n == 0) throw ConfigError("hidden layer widths must be positive");
        out.push_back(n);
    }
    return out;
}

std::string join_sizes(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

struct Field {
    std::string help;
    std::function<void(PipelineConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const PipelineConfig&)> get;
};

template <typename T, typename Access>
Field integer_field(std::string help, Access access) {
    return {std::move(help),
            [access](PipelineConfig& c, const std::string& k, const std::string& v) {
                access(c) = parse_integer<T>(k, v);
            },
            [access](const PipelineConfig& c) {
                return std::to_string(access(c));
            }};
}

template <typename Access>
Field double_field(std::string help, Access access) {
    return {std::move(help),
            [access](PipelineConfig& c, const std::string& k, const std::string& v) { access(c) = parse_double(k, v); },
            [access](const PipelineConfig& c) { return fmt_double(access(c)); }};
}

template <typename Access>
Field string_field(std::string help, Access access) {
    return {std::move(help),
            [access](PipelineConfig& c, const std::string&, const std::string& v) { access(c) = v; },
            [access](const PipelineConfig& c) { return access(c); }};
}

template <typename Access>
Field bool_field(std::string help, Access access) {
    return {std::move(help),
            [access](PipelineConfig& c, const std::string& k, const std::string& v) { access(c) = parse_bool(k, v); },
            [access](const PipelineConfig& c) {
                return std::string(access(c) ? "true" : "false");
            }};
}

const std::map<std::string, Field>& fields() {
    using C = PipelineConfig;
    static const std::map<std::string, Field> table = [] {
        std::map<std::string, Field> t;
        t["seed"] = integer_field<std::uint64_t>("global random seed", [](auto& c) -> auto& { return c.seed; });
        t["workers"] = integer_field<unsigned>("worker threads", [](auto& c) -> auto& { return c.workers; });
        t["folds"] = integer_field<std::size_t>("cross-validation folds", [](auto& c) -> auto& { return c.folds; });
        t["burst_gap_seconds"] = integer_field<std::int64_t>(
            "max gap between consecutive tweets of one burst", [](auto& c) -> auto& { return c.pipeline.burst.gap_threshold; });
        t["burst_min_length"] = integer_field<std::size_t>(
            "shortest run counted as a burst (1 keeps singletons)", [](auto& c) -> auto& { return c.pipeline.burst.min_length; });
        t["short_len"] = integer_field<std::size_t>(
            "tweets shorter than this are short", [](auto& c) -> auto& { return c.pipeline.lengths.short_len; });
        t["near_max_len"] = integer_field<std::size_t>(
            "tweets at least this long are near the limit", [](auto& c) -> auto& { return c.pipeline.lengths.near_max_len; });
        t["min_followers"] = integer_field<std::int64_t>(
            "eligibility: minimum followers at the first snapshot", [](auto& c) -> auto& { return c.selection.rules.min_followers; });
        t["english_threshold"] = double_field(
            "eligibility: minimum stopword token ratio", [](auto& c) -> auto& { return c.selection.english_threshold; });
        t["balance_classes"] = bool_field(
            "downsample the larger class", [](auto& c) -> auto& { return c.selection.balance_classes; });
        t["topics"] = integer_field<std::size_t>("LDA topic count", [](auto& c) -> auto& { return c.pipeline.lda.topics; });
        t["lda_alpha"] = {"LDA document-topic prior (auto = 50/topics)",
                          [](C& c, const std::string& k, const std::string& v) {
                              if (v == "auto") {
                                  c.pipeline.lda.alpha.reset();
                              } else {
                                  const double a = parse_double(k, v);
                                  if (!(a > 0.0)) throw ConfigError("lda_alpha must be positive");
                                  c.pipeline.lda.alpha = a;
                              }
                          },
                          [](const C& c) {
                              return c.pipeline.lda.alpha ? fmt_double(*c.pipeline.lda.alpha) : std::string("auto");
                          }};
        t["lda_beta"] = double_field("LDA topic-word prior", [](auto& c) -> auto& { return c.pipeline.lda.beta; });
        t["lda_iters"] = integer_field<std::size_t>(
            "Gibbs sweeps", [](auto& c) -> auto& { return c.pipeline.lda.iterations; });
        t["lda_infer_iters"] = integer_field<std::size_t>(
            "Gibbs sweeps when folding in held-out users", [](auto& c) -> auto& { return c.pipeline.lda.infer_iterations; });
        t["embed_dim"] = integer_field<std::size_t>(
            "document vector dimension", [](auto& c) -> auto& { return c.pipeline.embedding.dim; });
        t["embed_window"] = integer_field<std::size_t>(
            "context half-width (dm mode)", [](auto& c) -> auto& { return c.pipeline.embedding.window; });
        t["embed_epochs"] = integer_field<std::size_t>(
            "embedding training epochs", [](auto& c) -> auto& { return c.pipeline.embedding.epochs; });
        t["embed_negatives"] = integer_field<std::size_t>(
            "negative samples per prediction", [](auto& c) -> auto& { return c.pipeline.embedding.negatives; });
        t["embed_min_count"] = integer_field<std::size_t>(
            "minimum word frequency kept in the embedding vocabulary", [](auto& c) -> auto& { return c.pipeline.embedding.min_count; });
        t["embed_infer_epochs"] = integer_field<std::size_t>(
            "epochs when inferring held-out vectors", [](auto& c) -> auto& { return c.pipeline.embed_infer_epochs; });
        t["embed_mode"] = {"dbow or dm",
                           [](C& c, const std::string&, const std::string& v) {
                               if (v == "dbow") {
                                   c.pipeline.embedding.mode = EmbeddingMode::Dbow;
                               } else if (v == "dm") {
                                   c.pipeline.embedding.mode = EmbeddingMode::Dm;
                               } else {
                                   throw ConfigError("embed_mode must be dbow or dm");
                               }
                           },
                           [](const C& c) {
                               return std::string(c.pipeline.embedding.mode == EmbeddingMode::Dbow ? "dbow" : "dm");
                           }};
        t["mlp_hidden"] = {"comma-separated hidden layer widths",
                           [](C& c, const std::string& k, const std::string& v) { c.pipeline.mlp.hidden = parse_sizes(k, v); },
                           [](const C& c) { return join_sizes(c.pipeline.mlp.hidden); }};
        t["mlp_activation"] = {"relu or tanh",
                               [](C& c, const std::string&, const std::string& v) {
                                   if (v == "relu") {
                                       c.pipeline.mlp.activation = Activation::Relu;
                                   } else if (v == "tanh") {
                                       c.pipeline.mlp.activation = Activation::Tanh;
                                   } else {
                                       throw ConfigError("mlp_activation must be relu or tanh");
                                   }
                               },
                               [](const C& c) {
                                   return std::string(c.pipeline.mlp.activation == Activation::Relu ? "relu" : "tanh");
                               }};
        t["mlp_lr"] = double_field("SGD learning rate", [](auto& c) -> auto& { return c.pipeline.mlp.learning_rate; });
        t["mlp_batch"] = integer_field<std::size_t>("mini-batch size", [](auto& c) -> auto& { return c.pipeline.mlp.batch_size; });
        t["mlp_epochs"] = integer_field<std::size_t>("training epochs", [](auto& c) -> auto& { return c.pipeline.mlp.epochs; });
        t["similarity_threshold"] = double_field(
            "Jaccard weight below which similarity edges are pruned", [](auto& c) -> auto& { return c.pipeline.similarity_threshold; });
        t["score_threshold"] = double_field(
            "probability at or above which a user is flagged", [](auto& c) -> auto& { return c.score_threshold; });
        t["strict"] = bool_field("fail on the first malformed corpus line", [](auto& c) -> auto& { return c.strict; });
        t["stopwords"] = string_field("stopword list file (empty: built-in)", [](auto& c) -> auto& { return c.stopwords; });
        t["badness_lexicon"] = string_field("badness lexicon file (none: empty)", [](auto& c) -> auto& { return c.badness_lexicon; });
        t["category_lexicon"] = string_field("category lexicon file (none: no categories)",
                                             [](auto& c) -> auto& { return c.category_lexicon; });
        t["corpus"] = string_field("input corpus (JSON Lines)", [](auto& c) -> auto& { return c.corpus; });
        t["out"] = string_field("output path", [](auto& c) -> auto& { return c.out; });
        t["model"] = string_field("trained pipeline bundle", [](auto& c) -> auto& { return c.model; });
        t["n_users"] = integer_field<std::size_t>("synth: users to generate", [](auto& c) -> auto& { return c.synth.n_users; });
        t["effect"] = double_field("synth: planted effect strength in [0, 1]", [](auto& c) -> auto& { return c.synth.effect; });
        t["loser_fraction"] = double_field("synth: fraction of losing users", [](auto& c) -> auto& { return c.synth.loser_fraction; });
        t["synth_topics"] = integer_field<std::size_t>("synth: vocabulary topics", [](auto& c) -> auto& { return c.synth.topics; });
        return t;
    }();
    return table;
}

}  // namespace

PipelineConfig::PipelineConfig()
    : workers(default_workers()),
      badness_lexicon(std::string(UNFOLLOW_DATA_DIR) + "/badness_demo.tsv"),
      category_lexicon(std::string(UNFOLLOW_DATA_DIR) + "/categories_demo.dic") {}

void PipelineConfig::set(const std::string& key, const std::string& value) {
    const auto& t = fields();
    auto it = t.find(key);
    if (it == t.end()) throw ConfigError("unknown config key: " + key);
    it->second.set(*this, key, trim(value));
}

std::string PipelineConfig::get(const std::string& key) const {
    const auto& t = fields();
    auto it = t.find(key);
    if (it == t.end()) throw ConfigError("unknown config key: " + key);
    return it->second.get(*this);
}

void PipelineConfig::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
        }
        try {
            set(trim(t.substr(0, eq)), t.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void PipelineConfig::finalize() {
    if (folds < 2) throw ConfigError("folds must be at least 2");
    if (workers == 0) workers = 1;
    if (pipeline.lda.topics < 2) throw ConfigError("topics must be at least 2");
    if (pipeline.embedding.dim < 2) throw ConfigError("embed_dim must be at least 2");
    if (pipeline.burst.gap_threshold < 0) throw ConfigError("burst_gap_seconds must be non-negative");
    if (pipeline.burst.min_length < 1) throw ConfigError("burst_min_length must be at least 1");
    if (pipeline.mlp.batch_size == 0) throw ConfigError("mlp_batch must be positive");
    pipeline.workers = workers;
    selection.seed = seed;
    synth.seed = seed;
}

nlohmann::json PipelineConfig::echo() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [key, field] : fields()) j[key] = field.get(*this);
    return j;
}

const std::vector<std::string>& PipelineConfig::keys() {
    static const std::vector<std::string> k = [] {
        std::vector<std::string> out;
        for (const auto& [key, _] : fields()) out.push_back(key);
        return out;
    }();
    return k;
}

std::string PipelineConfig::describe(const std::string& key) {
    const auto& t = fields();
    auto it = t.find(key);
    return it == t.end() ? std::string() : it->second.help;
}

Resources load_resources(const PipelineConfig& config) {
    Resources r;
    if (!config.stopwords.empty()) r.stopwords = Stopwords::load(config.stopwords);
    if (!config.badness_lexicon.empty() && config.badness_lexicon != "none") {
        r.badness = BadnessLexicon::load(config.badness_lexicon);
    }
    if (!config.category_lexicon.empty() && config.category_lexicon != "none") {
        r.categories = CategoryLexicon::load(config.category_lexicon);
    }
    return r;
}

}  // namespace unfollow
