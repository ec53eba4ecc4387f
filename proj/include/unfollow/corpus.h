#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace unfollow {

struct Tweet {
    std::string id;
    std::string author_id;
    std::int64_t timestamp = 0;
    std::string text;
    std::vector<std::string> mentions;  // handles without the leading '@'
    std::vector<std::string> urls;

    bool operator==(const Tweet&) const = default;
};

struct UserRecord {
    std::string user_id;
    std::int64_t followers_t0 = 0;
    std::int64_t followers_t1 = 0;
    std::int64_t followees_t0 = 0;
    bool has_description = false;
    bool is_verified = false;
    std::vector<Tweet> tweets;  // ascending by timestamp

    bool operator==(const UserRecord&) const = default;
};

enum class Label { Loser, Stable, Excluded };

std::string_view to_string(Label label);

// Lowercases and splits on whitespace and ASCII punctuation. Tokens starting
// with '@' are mentions; tokens starting with http:// or https:// are urls and
// run to the next whitespace (trailing punctuation stripped). Bytes >= 0x80 are
// treated as word characters so UTF-8 sequences stay intact.
std::vector<std::string> tokenize(std::string_view text);

inline bool is_mention_token(std::string_view token) {
    return token.size() > 1 && token.front() == '@';
}

inline bool is_url_token(std::string_view token) {
    return token.starts_with("http://") || token.starts_with("https://");
}

// Throws InputError when followers_t0 <= 0. Both boundaries are inclusive.
Label label_user(std::int64_t followers_t0, std::int64_t followers_t1);

class Stopwords {
public:
    Stopwords() = default;
    explicit Stopwords(std::unordered_set<std::string> words) : words_(std::move(words)) {}

    // The built-in English list.
    static const Stopwords& english();
    // One lowercase word per line; blank lines and '#' comments ignored.
    static Stopwords load(const std::filesystem::path& path);

    bool contains(std::string_view word) const { return words_.contains(std::string(word)); }
    std::size_t size() const { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

class LanguageDetector {
public:
    virtual ~LanguageDetector() = default;
    virtual bool is_english(const UserRecord& user) const = 0;
};

// English iff the fraction of all tweet tokens that are stopwords is at least
// the threshold. Users without tokens are never English.
class StopwordRatioDetector : public LanguageDetector {
public:
    explicit StopwordRatioDetector(const Stopwords& stopwords, double threshold = 0.10)
        : stopwords_(&stopwords), threshold_(threshold) {}

    double stopword_ratio(const UserRecord& user) const;
    bool is_english(const UserRecord& user) const override;

private:
    const Stopwords* stopwords_;
    double threshold_;
};

struct EligibilityRules {
    std::int64_t min_followers = 1000;
};

bool filter_eligible(const UserRecord& user, const LanguageDetector& detector,
                     const EligibilityRules& rules = {});
// Uses the built-in stopword list and the default threshold.
bool filter_eligible(const UserRecord& user);

struct IngestError {
    std::size_t line = 0;  // 1-based
    std::string message;
};

struct IngestResult {
    std::vector<UserRecord> users;
    std::vector<IngestError> errors;
};

// Parses one JSON object per line. Malformed lines are collected in `errors`
// unless `strict` is set, in which case the first one throws InputError.
// Throws IoError when the file cannot be read.
IngestResult ingest(const std::filesystem::path& path, bool strict = false);
IngestResult ingest(std::istream& in, bool strict = false);

// Parses a single corpus line. Throws InputError naming the offending field.
UserRecord parse_user_line(std::string_view line);

// Writes records in the corpus JSON Lines format; ingest() reads them back
// unchanged. Object keys are emitted in sorted order.
void serialize(const std::vector<UserRecord>& users, std::ostream& out);
void serialize(const std::vector<UserRecord>& users, const std::filesystem::path& path);
std::string serialize_user(const UserRecord& user);

}  // namespace unfollow
