#include "unfollow/chi2.h"

#include <algorithm>
#include <array>

#include "unfollow/error.h"

namespace unfollow {

std::vector<std::size_t> quartile_bins(const std::vector<double>& column) {
    const std::size_t n = column.size();
    std::vector<std::size_t> bins(n, 0);
    if (n == 0) return bins;
    std::vector<double> sorted = column;
    std::sort(sorted.begin(), sorted.end());
    std::array<double, 3> cuts{};
    for (std::size_t q = 1; q <= 3; ++q) {
        // ceil(q n / 4) - 1, the q-th quartile order statistic
        const std::size_t pos = (q * n + 3) / 4;
        cuts[q - 1] = sorted[pos == 0 ? 0 : pos - 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t b = 0;
        while (b < 3 && column[i] > cuts[b]) ++b;
        bins[i] = b;
    }
    return bins;
}

double chi2_statistic(const std::vector<std::size_t>& bins, const std::vector<int>& labels) {
    if (bins.size() != labels.size()) throw InputError("chi2_statistic: length mismatch");
    const std::size_t n_bins = bins.empty() ? 0 : *std::max_element(bins.begin(), bins.end()) + 1;
    std::vector<std::array<double, 2>> table(n_bins, {0.0, 0.0});
    std::array<double, 2> class_total{0.0, 0.0};
    for (std::size_t i = 0; i < bins.size(); ++i) {
        const std::size_t c = labels[i] == 1 ? 1 : 0;
        table[bins[i]][c] += 1.0;
        class_total[c] += 1.0;
    }
    const double n = class_total[0] + class_total[1];
    double chi2 = 0.0;
    for (const auto& row : table) {
        const double row_total = row[0] + row[1];
        if (row_total == 0.0) continue;
        for (std::size_t c = 0; c < 2; ++c) {
            if (class_total[c] == 0.0) continue;
            const double expected = row_total * class_total[c] / n;
            const double d = row[c] - expected;
            chi2 += d * d / expected;
        }
    }
    return chi2;
}

std::vector<RankedFeature> chi2_rank(const Matrix& x, const std::vector<int>& y,
                                     const std::vector<std::string>& names) {
    if (x.size() != y.size()) throw InputError("chi2_rank: row and label counts differ");
    const bool has_pos = std::find(y.begin(), y.end(), 1) != y.end();
    const bool has_neg = std::find_if(y.begin(), y.end(), [](int v) { return v != 1; }) != y.end();
    if (!has_pos || !has_neg) throw InputError("chi2_rank: need both classes");
    const std::size_t cols = names.size();
    std::vector<RankedFeature> ranked;
    ranked.reserve(cols);
    std::vector<double> column(x.size());
    for (std::size_t c = 0; c < cols; ++c) {
        for (std::size_t r = 0; r < x.size(); ++r) {
            if (x[r].size() != cols) throw SchemaError("chi2_rank: row width does not match names");
            column[r] = x[r][c];
        }
        ranked.push_back({names[c], c, chi2_statistic(quartile_bins(column), y)});
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RankedFeature& a, const RankedFeature& b) { return a.chi2 > b.chi2; });
    return ranked;
}

}  // namespace unfollow
