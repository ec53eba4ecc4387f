#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>

#include "unfollow/corpus.h"

namespace unfollow {

// Offensive-word scores in [0, 1], keyed by lowercase word.
class BadnessLexicon {
public:
    BadnessLexicon() = default;
    // Throws InputError on a score outside [0, 1].
    explicit BadnessLexicon(std::unordered_map<std::string, double> scores);

    // `word<TAB>score` per line.
    static BadnessLexicon load(const std::filesystem::path& path);

    double score(const std::string& word) const;
    void set(const std::string& word, double score);
    std::size_t size() const { return scores_.size(); }

private:
    std::unordered_map<std::string, double> scores_;
};

struct LengthThresholds {
    std::size_t short_len = 30;      // strictly shorter counts as short
    std::size_t near_max_len = 126;  // at least this long counts as near the limit
};

struct TweetLengthFeatures {
    double mean_len = 0.0;
    double frac_short = 0.0;
    double frac_near_max = 0.0;
};

// Each feature is std::nullopt when it is undefined for the input.
struct LexicalFeatures {
    std::optional<double> badness_coeff;
    std::optional<double> content_div;
    std::optional<double> tweet_rate;
    std::optional<double> mention_coeff;
    std::optional<double> mention_entropy;
    std::optional<double> url_rate;
    std::optional<TweetLengthFeatures> length;
    double has_description = 0.0;
    double is_verified = 0.0;
};

std::optional<double> badness_coefficient(std::span<const Tweet> tweets, const BadnessLexicon& lexicon);
std::optional<double> content_diversity(std::span<const Tweet> tweets, const Stopwords& stopwords);
std::optional<double> tweet_rate(std::span<const Tweet> tweets);
std::optional<double> mention_coeff(std::span<const Tweet> tweets);
std::optional<double> mention_entropy(std::span<const Tweet> tweets);
std::optional<double> url_rate(std::span<const Tweet> tweets);
std::optional<TweetLengthFeatures> tweet_length_features(std::span<const Tweet> tweets,
                                                         const LengthThresholds& thresholds = {});

// Tokens with stopwords, mentions and urls removed; the input to the
// entropy, topic and embedding models.
std::vector<std::string> filtered_tokens(std::span<const Tweet> tweets, const Stopwords& stopwords);

// Character length in Unicode code points (UTF-8 continuation bytes skipped).
std::size_t text_length(std::string_view text);

LexicalFeatures extract_lexical(const UserRecord& user, const BadnessLexicon& lexicon,
                                const Stopwords& stopwords, const LengthThresholds& thresholds = {});

}  // namespace unfollow
