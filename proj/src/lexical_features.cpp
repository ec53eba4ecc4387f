#include "unfollow/lexical_features.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "unfollow/entropy.h"
#include "unfollow/error.h"

namespace unfollow {

BadnessLexicon::BadnessLexicon(std::unordered_map<std::string, double> scores) {
    for (auto& [word, s] : scores) set(word, s);
}

void BadnessLexicon::set(const std::string& word, double score) {
    if (!(score >= 0.0 && score <= 1.0)) {
        throw InputError("badness score for '" + word + "' outside [0, 1]");
    }
    std::string key = word;
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    scores_[key] = score;
}

double BadnessLexicon::score(const std::string& word) const {
    auto it = scores_.find(word);
    return it == scores_.end() ? 0.0 : it->second;
}

BadnessLexicon BadnessLexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open badness lexicon: " + path.string());
    BadnessLexicon lexicon;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw InputError(path.string() + ":" + std::to_string(line_no) + ": expected word<TAB>score");
        }
        double value = 0.0;
        std::istringstream field(line.substr(tab + 1));
        if (!(field >> value)) {
            throw InputError(path.string() + ":" + std::to_string(line_no) + ": unparsable score");
        }
        lexicon.set(line.substr(0, tab), value);
    }
    return lexicon;
}

std::size_t text_length(std::string_view text) {
    return static_cast<std::size_t>(std::count_if(text.begin(), text.end(), [](char c) {
        return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
    }));
}

std::vector<std::string> filtered_tokens(std::span<const Tweet> tweets, const Stopwords& stopwords) {
    std::vector<std::string> out;
    for (const auto& tweet : tweets) {
        for (auto& token : tokenize(tweet.text)) {
            if (is_mention_token(token) || is_url_token(token) || stopwords.contains(token)) continue;
            out.push_back(std::move(token));
        }
    }
    return out;
}

std::optional<double> badness_coefficient(std::span<const Tweet> tweets, const BadnessLexicon& lexicon) {
    double sum = 0.0;
    std::size_t usable = 0;
    for (const auto& tweet : tweets) {
        const auto tokens = tokenize(tweet.text);
        if (tokens.empty()) continue;
        double bad = 0.0;
        for (const auto& token : tokens) bad += lexicon.score(token);
        sum += bad / static_cast<double>(tokens.size());
        ++usable;
    }
    if (usable == 0) return std::nullopt;
    return sum / static_cast<double>(usable);
}

std::optional<double> content_diversity(std::span<const Tweet> tweets, const Stopwords& stopwords) {
    std::map<std::string, std::size_t> counts;
    for (auto& token : filtered_tokens(tweets, stopwords)) ++counts[std::move(token)];
    if (counts.empty()) return std::nullopt;
    std::vector<std::size_t> weights;
    weights.reserve(counts.size());
    for (const auto& [_, c] : counts) weights.push_back(c);
    return entropy_of_weights<std::size_t>(weights);
}

std::optional<double> tweet_rate(std::span<const Tweet> tweets) {
    if (tweets.size() < 2) return std::nullopt;
    const auto [lo, hi] = std::minmax_element(tweets.begin(), tweets.end(),
        [](const Tweet& a, const Tweet& b) { return a.timestamp < b.timestamp; });
    return static_cast<double>(hi->timestamp - lo->timestamp) / static_cast<double>(tweets.size());
}

std::optional<double> mention_coeff(std::span<const Tweet> tweets) {
    if (tweets.empty()) return std::nullopt;
    std::size_t mentions = 0;
    for (const auto& t : tweets) mentions += t.mentions.size();
    return static_cast<double>(mentions) / static_cast<double>(tweets.size());
}

std::optional<double> mention_entropy(std::span<const Tweet> tweets) {
    std::map<std::string, std::size_t> counts;
    for (const auto& t : tweets) {
        for (const auto& m : t.mentions) ++counts[m];
    }
    if (counts.empty()) return std::nullopt;
    std::vector<std::size_t> weights;
    weights.reserve(counts.size());
    for (const auto& [_, c] : counts) weights.push_back(c);
    return entropy_of_weights<std::size_t>(weights);
}

std::optional<double> url_rate(std::span<const Tweet> tweets) {
    if (tweets.empty()) return std::nullopt;
    std::size_t urls = 0;
    for (const auto& t : tweets) urls += t.urls.size();
    return static_cast<double>(urls) / static_cast<double>(tweets.size());
}

std::optional<TweetLengthFeatures> tweet_length_features(std::span<const Tweet> tweets,
                                                         const LengthThresholds& thresholds) {
    if (tweets.empty()) return std::nullopt;
    double total = 0.0;
    std::size_t short_count = 0;
    std::size_t near_max_count = 0;
    for (const auto& t : tweets) {
        const std::size_t len = text_length(t.text);
        total += static_cast<double>(len);
        if (len < thresholds.short_len) ++short_count;
        if (len >= thresholds.near_max_len) ++near_max_count;
    }
    const auto n = static_cast<double>(tweets.size());
    return TweetLengthFeatures{total / n, static_cast<double>(short_count) / n,
                               static_cast<double>(near_max_count) / n};
}

LexicalFeatures extract_lexical(const UserRecord& user, const BadnessLexicon& lexicon,
                                const Stopwords& stopwords, const LengthThresholds& thresholds) {
    const std::span<const Tweet> tweets(user.tweets);
    LexicalFeatures f;
    f.badness_coeff = badness_coefficient(tweets, lexicon);
    f.content_div = content_diversity(tweets, stopwords);
    f.tweet_rate = tweet_rate(tweets);
    f.mention_coeff = mention_coeff(tweets);
    f.mention_entropy = mention_entropy(tweets);
    f.url_rate = url_rate(tweets);
    f.length = tweet_length_features(tweets, thresholds);
    f.has_description = user.has_description ? 1.0 : 0.0;
    f.is_verified = user.is_verified ? 1.0 : 0.0;
    return f;
}

}  // namespace unfollow
