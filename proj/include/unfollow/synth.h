#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "unfollow/corpus.h"

namespace unfollow {

// Synthetic corpus with signal planted in the burst, tweet-frequency,
// mention-entropy, topic-diversity, and url features. `effect` scales every
// planted difference; at 0 both classes come from the same distributions.
struct SynthConfig {
    std::size_t n_users = 2000;
    double loser_fraction = 0.5;
    double effect = 1.0;
    std::size_t topics = 5;
    std::size_t words_per_topic = 40;
    std::int64_t start_time = 1400000000;
    std::int64_t span_seconds = 30 * 86400;
    std::uint64_t seed = 1;
};

// Throws InputError on an invalid config.
void validate(const SynthConfig& config);

std::vector<UserRecord> generate(const SynthConfig& config);
void generate_file(const SynthConfig& config, const std::filesystem::path& out);

// The vocabulary of one synthetic topic (independent of the seed).
std::vector<std::string> synth_topic_words(std::size_t topic, std::size_t count);

}  // namespace unfollow
