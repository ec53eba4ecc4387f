#pragma once

#include <cmath>
#include <span>

namespace unfollow {

// Shannon entropy in nats of the distribution proportional to `weights`.
// Zero weights contribute nothing. Returns 0 for an all-zero input.
template <typename T>
double entropy_of_weights(std::span<const T> weights) {
    double total = 0.0;
    for (T w : weights) total += static_cast<double>(w);
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    for (T w : weights) {
        if (w <= 0) continue;
        const double p = static_cast<double>(w) / total;
        h -= p * std::log(p);
    }
    return h < 0.0 ? 0.0 : h;
}

}  // namespace unfollow
