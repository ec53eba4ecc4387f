#pragma once

#include <vector>

namespace unfollow {

using Matrix = std::vector<std::vector<double>>;

// Per-column min-max scaling to [0, 1]. Constant training columns map to 0
// and values seen outside the training range are clipped.
struct MinMaxScaler {
    std::vector<double> mins;
    std::vector<double> maxs;

    bool fitted() const { return !mins.empty(); }
    bool operator==(const MinMaxScaler&) const = default;
};

// Throws InputError on an empty or ragged matrix.
MinMaxScaler minmax_scale_fit(const Matrix& train);
// Throws SchemaError when the column count differs from the fitted one.
Matrix minmax_scale_apply(const MinMaxScaler& params, const Matrix& rows);
std::vector<double> minmax_scale_row(const MinMaxScaler& params, const std::vector<double>& row);

}  // namespace unfollow
