#include "unfollow/scaling.h"

#include <algorithm>

#include "unfollow/error.h"

namespace unfollow {

MinMaxScaler minmax_scale_fit(const Matrix& train) {
    if (train.empty() || train.front().empty()) throw InputError("minmax_scale_fit: empty matrix");
    const std::size_t cols = train.front().size();
    MinMaxScaler s;
    s.mins = train.front();
    s.maxs = train.front();
    for (const auto& row : train) {
        if (row.size() != cols) throw InputError("minmax_scale_fit: ragged matrix");
        for (std::size_t c = 0; c < cols; ++c) {
            s.mins[c] = std::min(s.mins[c], row[c]);
            s.maxs[c] = std::max(s.maxs[c], row[c]);
        }
    }
    return s;
}

std::vector<double> minmax_scale_row(const MinMaxScaler& params, const std::vector<double>& row) {
    if (row.size() != params.mins.size()) throw SchemaError("minmax_scale_apply: column count mismatch");
    std::vector<double> out(row.size());
    for (std::size_t c = 0; c < row.size(); ++c) {
        const double range = params.maxs[c] - params.mins[c];
        if (range <= 0.0) {
            out[c] = 0.0;
            continue;
        }
        out[c] = std::clamp((row[c] - params.mins[c]) / range, 0.0, 1.0);
    }
    return out;
}

Matrix minmax_scale_apply(const MinMaxScaler& params, const Matrix& rows) {
    Matrix out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(minmax_scale_row(params, row));
    return out;
}

}  // namespace unfollow
