#include "unfollow/synth.h"

#include <cmath>
#include <cstdio>
#include <set>

#include "unfollow/error.h"
#include "unfollow/rng.h"

namespace unfollow {
namespace {

constexpr const char* kFiller[] = {"the", "and", "to", "of", "is", "in", "it", "for", "on", "with",
                                   "this", "that", "my", "we", "so", "at", "be", "just", "now", "you"};
constexpr const char* kOnset[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "br", "st"};
constexpr const char* kNucleus[] = {"a", "e", "i", "o", "u", "ai", "ou"};

std::string pseudo_word(std::uint64_t code) {
    std::string w;
    for (int s = 0; s < 3; ++s) {
        w += kOnset[code % std::size(kOnset)];
        code /= std::size(kOnset);
        w += kNucleus[code % std::size(kNucleus)];
        code /= std::size(kNucleus);
    }
    return w;
}

std::string user_id(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "u%05zu", i);
    return buf;
}

std::string url_token(Rng& rng) {
    static constexpr char kAlphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789";
    std::string s = "http://t.co/";
    for (int i = 0; i < 8; ++i) s += kAlphabet[rng.below(sizeof kAlphabet - 1)];
    return s;
}

struct ClassParams {
    double session_extra = 1.0;  // mean extra tweets per session beyond the first
    double primary_topic = 0.35;
    std::size_t circle = 8;      // distinct accounts the user mentions
    double url_prob = 0.15;
};

ClassParams params_for(double t) {
    ClassParams p;
    p.session_extra = 1.0 + 4.0 * t;
    p.primary_topic = 0.35 + 0.6 * t;
    p.circle = static_cast<std::size_t>(std::lround(8.0 - 6.0 * t));
    p.url_prob = 0.15 + 0.35 * t;
    return p;
}

std::int64_t follower_t1(Rng& rng, std::int64_t t0, bool loser) {
    for (;;) {
        std::int64_t t1;
        if (loser) {
            t1 = static_cast<std::int64_t>(std::floor(static_cast<double>(t0) * (1.0 - rng.uniform(0.3, 0.9))));
        } else {
            t1 = t0 + static_cast<std::int64_t>(std::lround(static_cast<double>(t0) * rng.uniform(-0.02, 0.02)));
        }
        if (label_user(t0, t1) == (loser ? Label::Loser : Label::Stable)) return t1;
    }
}

}  // namespace

std::vector<std::string> synth_topic_words(std::size_t topic, std::size_t count) {
    std::vector<std::string> words;
    std::set<std::string> seen;
    // Disjoint code ranges per topic keep topic vocabularies apart.
    std::uint64_t code = 7919ULL * (topic + 1) * 1000;
    while (words.size() < count) {
        std::string w = pseudo_word(derive_seed(code++, 0));
        if (seen.insert(w).second) words.push_back(w);
    }
    return words;
}

void validate(const SynthConfig& c) {
    if (c.n_users < 2) throw InputError("synth: n_users must be at least 2");
    if (!(c.loser_fraction > 0.0 && c.loser_fraction < 1.0)) throw InputError("synth: class balance must be in (0, 1)");
    if (!(c.effect >= 0.0 && c.effect <= 1.0)) throw InputError("synth: effect must be in [0, 1]");
    if (c.topics < 1 || c.words_per_topic < 2) throw InputError("synth: need at least one topic of two words");
    if (c.span_seconds <= 0 || c.start_time < 0) throw InputError("synth: invalid time range");
}

std::vector<UserRecord> generate(const SynthConfig& config) {
    validate(config);
    Rng rng(config.seed);

    std::vector<std::vector<std::string>> vocab;
    std::set<std::string> used;
    for (std::size_t k = 0; k < config.topics; ++k) {
        auto words = synth_topic_words(k, config.words_per_topic + 8);
        std::vector<std::string> kept;
        for (auto& w : words) {
            if (kept.size() < config.words_per_topic && used.insert(w).second) kept.push_back(w);
        }
        vocab.push_back(std::move(kept));
    }

    const auto n = config.n_users;
    const auto n_losers = static_cast<std::size_t>(std::llround(static_cast<double>(n) * config.loser_fraction));
    std::vector<int> labels(n, 0);
    for (std::size_t i = 0; i < n_losers && i < n; ++i) labels[i] = 1;
    rng.shuffle(labels);

    std::vector<UserRecord> users(n);
    for (std::size_t u = 0; u < n; ++u) {
        const bool loser = labels[u] == 1;
        const ClassParams p = params_for(loser ? config.effect : 0.0);
        UserRecord& rec = users[u];
        rec.user_id = user_id(u);
        rec.followers_t0 = static_cast<std::int64_t>(std::lround(std::exp(rng.uniform(std::log(1000.0), std::log(100000.0)))));
        rec.followers_t0 = std::max<std::int64_t>(rec.followers_t0, 1000);
        rec.followers_t1 = follower_t1(rng, rec.followers_t0, loser);
        rec.followees_t0 = rng.range(0, 5000);
        rec.has_description = rng.bernoulli(0.7);
        rec.is_verified = rng.bernoulli(0.1);

        std::vector<std::size_t> circle;
        while (circle.size() < p.circle) {
            const std::size_t other = rng.below(n);
            if (other != u) circle.push_back(other);
        }
        const std::size_t primary = rng.below(config.topics);

        const auto sessions = static_cast<std::size_t>(rng.range(4, 12));
        const double mean_break = static_cast<double>(config.span_seconds) / static_cast<double>(sessions);
        std::int64_t now = config.start_time + rng.range(0, 5 * 86400);
        std::size_t tweet_no = 0;
        for (std::size_t s = 0; s < sessions; ++s) {
            if (s > 0) now += 1001 + static_cast<std::int64_t>(rng.exponential(mean_break));
            const std::size_t length = 1 + static_cast<std::size_t>(rng.poisson(p.session_extra));
            for (std::size_t k = 0; k < length; ++k) {
                if (k > 0) now += rng.range(60, 900);
                Tweet t;
                t.id = rec.user_id + "-" + std::to_string(tweet_no++);
                t.author_id = rec.user_id;
                t.timestamp = now;
                const std::size_t topic = rng.bernoulli(p.primary_topic) ? primary : rng.below(config.topics);
                const auto content = static_cast<std::size_t>(rng.range(4, 8));
                const auto fillers = static_cast<std::size_t>(rng.range(2, 4));
                std::vector<std::string> words;
                for (std::size_t w = 0; w < content; ++w) words.push_back(vocab[topic][rng.below(vocab[topic].size())]);
                for (std::size_t w = 0; w < fillers; ++w) {
                    words.insert(words.begin() + static_cast<std::ptrdiff_t>(rng.below(words.size() + 1)),
                                 kFiller[rng.below(std::size(kFiller))]);
                }
                if (rng.bernoulli(0.4)) {
                    const std::string handle = user_id(circle[rng.below(circle.size())]);
                    words.insert(words.begin(), "@" + handle);
                    t.mentions.push_back(handle);
                }
                if (rng.bernoulli(p.url_prob)) {
                    std::string url = url_token(rng);
                    words.push_back(url);
                    t.urls.push_back(std::move(url));
                }
                for (std::size_t w = 0; w < words.size(); ++w) {
                    if (w) t.text += ' ';
                    t.text += words[w];
                }
                rec.tweets.push_back(std::move(t));
            }
        }
    }
    return users;
}

void generate_file(const SynthConfig& config, const std::filesystem::path& out) {
    serialize(generate(config), out);
}

}  // namespace unfollow
