#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace unfollow {

struct Burst {
    std::size_t start_index = 0;
    std::size_t end_index = 0;  // inclusive
    std::int64_t start_time = 0;
    std::int64_t end_time = 0;

    std::int64_t period() const { return end_time - start_time; }
    std::size_t length() const { return end_index - start_index + 1; }
    bool operator==(const Burst&) const = default;
};

struct BurstFeatures {
    double mean_inter_burst_gap = 0.0;
    double mean_period = 0.0;
    double max_period = 0.0;
    double min_period = 0.0;
    double burst_count = 0.0;
};

struct BurstOptions {
    std::int64_t gap_threshold = 1000;  // seconds
    // Runs shorter than this are not counted as bursts. 1 keeps singletons.
    std::size_t min_length = 1;
};

// Splits ascending timestamps into maximal runs whose consecutive gaps are all
// <= gap_threshold. Throws InputError on unsorted input.
std::vector<Burst> detect_bursts(std::span<const std::int64_t> timestamps,
                                 std::int64_t gap_threshold = 1000);

// std::nullopt for an empty burst list.
std::optional<BurstFeatures> burst_features(std::span<const Burst> bursts);

// detect_bursts, drops runs shorter than min_length, then burst_features.
std::optional<BurstFeatures> extract_bursts(std::span<const std::int64_t> timestamps,
                                            const BurstOptions& options = {});

}  // namespace unfollow
