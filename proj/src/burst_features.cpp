#include "unfollow/burst_features.h"

#include <algorithm>

#include "unfollow/error.h"

namespace unfollow {

std::vector<Burst> detect_bursts(std::span<const std::int64_t> timestamps, std::int64_t gap_threshold) {
    std::vector<Burst> bursts;
    if (timestamps.empty()) return bursts;
    if (!std::is_sorted(timestamps.begin(), timestamps.end())) {
        throw InputError("detect_bursts: timestamps must be ascending");
    }
    std::size_t start = 0;
    for (std::size_t k = 1; k <= timestamps.size(); ++k) {
        if (k == timestamps.size() || timestamps[k] - timestamps[k - 1] > gap_threshold) {
            bursts.push_back({start, k - 1, timestamps[start], timestamps[k - 1]});
            start = k;
        }
    }
    return bursts;
}

std::optional<BurstFeatures> burst_features(std::span<const Burst> bursts) {
    if (bursts.empty()) return std::nullopt;
    BurstFeatures f;
    double period_sum = 0.0;
    auto lo = bursts.front().period();
    auto hi = lo;
    for (const auto& b : bursts) {
        period_sum += static_cast<double>(b.period());
        lo = std::min(lo, b.period());
        hi = std::max(hi, b.period());
    }
    double gap_sum = 0.0;
    for (std::size_t i = 1; i < bursts.size(); ++i) {
        gap_sum += static_cast<double>(bursts[i].start_time - bursts[i - 1].end_time);
    }
    const auto count = static_cast<double>(bursts.size());
    f.mean_inter_burst_gap = bursts.size() > 1 ? gap_sum / (count - 1.0) : 0.0;
    f.mean_period = period_sum / count;
    f.max_period = static_cast<double>(hi);
    f.min_period = static_cast<double>(lo);
    f.burst_count = count;
    return f;
}

std::optional<BurstFeatures> extract_bursts(std::span<const std::int64_t> timestamps,
                                            const BurstOptions& options) {
    auto bursts = detect_bursts(timestamps, options.gap_threshold);
    std::erase_if(bursts, [&](const Burst& b) { return b.length() < options.min_length; });
    return burst_features(bursts);
}

}  // namespace unfollow
