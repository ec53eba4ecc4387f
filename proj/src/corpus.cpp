#include "unfollow/corpus.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "unfollow/error.h"

namespace unfollow {
namespace {

using nlohmann::json;

bool is_separator(unsigned char c) {
    return c < 0x80 && (std::isspace(c) || std::ispunct(c));
}

char lower(char c) {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

bool starts_with_ci(std::string_view text, std::size_t pos, std::string_view prefix) {
    if (text.size() - pos < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (lower(text[pos + i]) != prefix[i]) return false;
    }
    return true;
}

constexpr std::string_view kTrailingUrlPunct = ".,;:!?)]}'\"";

constexpr const char* kEnglishStopwords[] = {
    "a", "about", "above", "after", "again", "against", "all", "am", "an", "and", "any", "are",
    "as", "at", "be", "because", "been", "before", "being", "below", "between", "both", "but",
    "by", "can", "could", "did", "do", "does", "doing", "don", "down", "during", "each", "few",
    "for", "from", "further", "get", "got", "had", "has", "have", "having", "he", "her", "here",
    "hers", "herself", "him", "himself", "his", "how", "i", "if", "in", "into", "is", "it",
    "its", "itself", "just", "ll", "me", "more", "most", "my", "myself", "no", "nor", "not",
    "now", "of", "off", "on", "once", "only", "or", "other", "our", "ours", "ourselves", "out",
    "over", "own", "re", "s", "same", "she", "should", "so", "some", "such", "t", "than",
    "that", "the", "their", "theirs", "them", "themselves", "then", "there", "these", "they",
    "this", "those", "through", "to", "too", "under", "until", "up", "ve", "very", "was", "we",
    "were", "what", "when", "where", "which", "while", "who", "whom", "why", "will", "with",
    "would", "you", "your", "yours", "yourself", "yourselves",
};

template <typename T>
T required(const json& obj, const char* field, std::string_view where) {
    auto it = obj.find(field);
    if (it == obj.end()) {
        throw InputError("missing required field '" + std::string(field) + "'" + std::string(where));
    }
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw InputError("field '" + std::string(field) + "' has the wrong type" + std::string(where));
    }
}

std::vector<std::string> string_list(const json& value, const char* field, std::string_view where) {
    if (!value.is_array()) {
        throw InputError("field '" + std::string(field) + "' must be an array" + std::string(where));
    }
    std::vector<std::string> out;
    out.reserve(value.size());
    for (const auto& item : value) {
        if (!item.is_string()) {
            throw InputError("field '" + std::string(field) + "' must contain strings" +
                             std::string(where));
        }
        out.push_back(item.get<std::string>());
    }
    return out;
}

std::string normalize_handle(std::string handle) {
    if (!handle.empty() && handle.front() == '@') handle.erase(0, 1);
    std::transform(handle.begin(), handle.end(), handle.begin(), lower);
    return handle;
}

Tweet parse_tweet(const json& obj, const std::string& author, std::size_t index) {
    const std::string where = " in tweets[" + std::to_string(index) + "]";
    if (!obj.is_object()) throw InputError("tweet entry is not an object" + where);
    Tweet t;
    t.id = required<std::string>(obj, "id", where);
    t.author_id = author;
    t.timestamp = required<std::int64_t>(obj, "timestamp", where);
    if (t.timestamp < 0) throw InputError("field 'timestamp' must be non-negative" + where);
    t.text = required<std::string>(obj, "text", where);

    const bool has_mentions = obj.contains("mentions");
    const bool has_urls = obj.contains("urls");
    if (has_mentions) {
        for (auto& m : string_list(obj["mentions"], "mentions", where)) {
            t.mentions.push_back(normalize_handle(std::move(m)));
        }
    }
    if (has_urls) t.urls = string_list(obj["urls"], "urls", where);
    if (!has_mentions || !has_urls) {
        for (auto& token : tokenize(t.text)) {
            if (!has_mentions && is_mention_token(token)) t.mentions.push_back(token.substr(1));
            if (!has_urls && is_url_token(token)) t.urls.push_back(std::move(token));
        }
    }
    return t;
}

}  // namespace

std::string_view to_string(Label label) {
    switch (label) {
        case Label::Loser: return "loser";
        case Label::Stable: return "stable";
        case Label::Excluded: return "excluded";
    }
    return "excluded";
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const auto c = static_cast<unsigned char>(text[i]);
        if (starts_with_ci(text, i, "http://") || starts_with_ci(text, i, "https://")) {
            std::size_t j = i;
            while (j < n && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
            std::size_t end = j;
            while (end > i && kTrailingUrlPunct.find(text[end - 1]) != std::string_view::npos) --end;
            std::string token(text.substr(i, end - i));
            std::transform(token.begin(), token.end(), token.begin(), lower);
            tokens.push_back(std::move(token));
            i = j;
            continue;
        }
        if (c == '@' && i + 1 < n && !is_separator(static_cast<unsigned char>(text[i + 1]))) {
            std::size_t j = i + 1;
            // '_' is punctuation to ispunct but is part of a handle.
            while (j < n && (!is_separator(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
            std::string token(text.substr(i, j - i));
            std::transform(token.begin(), token.end(), token.begin(), lower);
            tokens.push_back(std::move(token));
            i = j;
            continue;
        }
        if (is_separator(c)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && !is_separator(static_cast<unsigned char>(text[j]))) ++j;
        std::string token(text.substr(i, j - i));
        std::transform(token.begin(), token.end(), token.begin(), lower);
        tokens.push_back(std::move(token));
        i = j;
    }
    return tokens;
}

Label label_user(std::int64_t followers_t0, std::int64_t followers_t1) {
    if (followers_t0 <= 0) throw InputError("label_user: followers_t0 must be positive");
    // Integer comparisons keep the 30% and 2% boundaries exact.
    const std::int64_t delta = followers_t1 - followers_t0;
    if (-delta * 100 >= 30 * followers_t0) return Label::Loser;
    if ((delta < 0 ? -delta : delta) * 100 <= 2 * followers_t0) return Label::Stable;
    return Label::Excluded;
}

const Stopwords& Stopwords::english() {
    static const Stopwords words{std::unordered_set<std::string>(std::begin(kEnglishStopwords),
                                                                 std::end(kEnglishStopwords))};
    return words;
}

Stopwords Stopwords::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open stopword list: " + path.string());
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::transform(line.begin(), line.end(), line.begin(), lower);
        words.insert(line);
    }
    return Stopwords(std::move(words));
}

double StopwordRatioDetector::stopword_ratio(const UserRecord& user) const {
    std::size_t total = 0;
    std::size_t hits = 0;
    for (const auto& tweet : user.tweets) {
        for (const auto& token : tokenize(tweet.text)) {
            ++total;
            if (stopwords_->contains(token)) ++hits;
        }
    }
    return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

bool StopwordRatioDetector::is_english(const UserRecord& user) const {
    std::size_t total = 0;
    for (const auto& tweet : user.tweets) total += tokenize(tweet.text).size();
    return total > 0 && stopword_ratio(user) >= threshold_;
}

bool filter_eligible(const UserRecord& user, const LanguageDetector& detector,
                     const EligibilityRules& rules) {
    return user.followers_t0 >= rules.min_followers && detector.is_english(user);
}

bool filter_eligible(const UserRecord& user) {
    const StopwordRatioDetector detector(Stopwords::english());
    return filter_eligible(user, detector);
}

UserRecord parse_user_line(std::string_view line) {
    json obj;
    try {
        obj = json::parse(line);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw InputError("line is not a JSON object");

    UserRecord u;
    u.user_id = required<std::string>(obj, "user_id", "");
    u.followers_t0 = required<std::int64_t>(obj, "followers_t0", "");
    u.followers_t1 = required<std::int64_t>(obj, "followers_t1", "");
    u.followees_t0 = required<std::int64_t>(obj, "followees_t0", "");
    u.has_description = required<bool>(obj, "has_description", "");
    u.is_verified = required<bool>(obj, "is_verified", "");
    if (u.followers_t0 < 0 || u.followers_t1 < 0 || u.followees_t0 < 0) {
        throw InputError("follower and followee counts must be non-negative");
    }
    auto it = obj.find("tweets");
    if (it == obj.end()) throw InputError("missing required field 'tweets'");
    if (!it->is_array()) throw InputError("field 'tweets' must be an array");
    u.tweets.reserve(it->size());
    for (std::size_t i = 0; i < it->size(); ++i) u.tweets.push_back(parse_tweet((*it)[i], u.user_id, i));
    std::stable_sort(u.tweets.begin(), u.tweets.end(),
                     [](const Tweet& a, const Tweet& b) { return a.timestamp < b.timestamp; });
    return u;
}

IngestResult ingest(std::istream& in, bool strict) {
    IngestResult result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            result.users.push_back(parse_user_line(line));
        } catch (const InputError& e) {
            if (strict) throw InputError("line " + std::to_string(line_no) + ": " + e.what());
            result.errors.push_back({line_no, e.what()});
        }
    }
    return result;
}

IngestResult ingest(const std::filesystem::path& path, bool strict) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open corpus: " + path.string());
    return ingest(in, strict);
}

std::string serialize_user(const UserRecord& user) {
    json tweets = json::array();
    for (const auto& t : user.tweets) {
        tweets.push_back({{"id", t.id},
                          {"timestamp", t.timestamp},
                          {"text", t.text},
                          {"mentions", t.mentions},
                          {"urls", t.urls}});
    }
    const json obj = {{"user_id", user.user_id},
                      {"followers_t0", user.followers_t0},
                      {"followers_t1", user.followers_t1},
                      {"followees_t0", user.followees_t0},
                      {"has_description", user.has_description},
                      {"is_verified", user.is_verified},
                      {"tweets", std::move(tweets)}};
    return obj.dump();
}

void serialize(const std::vector<UserRecord>& users, std::ostream& out) {
    for (const auto& u : users) out << serialize_user(u) << '\n';
}

void serialize(const std::vector<UserRecord>& users, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write corpus: " + path.string());
    serialize(users, out);
    if (!out) throw IoError("failed writing corpus: " + path.string());
}

}  // namespace unfollow
