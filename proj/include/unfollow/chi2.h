#pragma once

#include <string>
#include <vector>

#include "unfollow/scaling.h"

namespace unfollow {

struct RankedFeature {
    std::string name;
    std::size_t column = 0;
    double chi2 = 0.0;
};

// Bin index 0..3 for each value: quartile cut points are order statistics of
// the column, so any strictly increasing transform gives the same bins.
std::vector<std::size_t> quartile_bins(const std::vector<double>& column);

// Pearson chi-square of the bins x classes contingency table, expected
// counts from the marginals. Empty bins and classes are dropped.
double chi2_statistic(const std::vector<std::size_t>& bins, const std::vector<int>& labels);

// Columns sorted by descending chi-square; ties keep column order. Throws
// InputError unless both classes are present.
std::vector<RankedFeature> chi2_rank(const Matrix& x, const std::vector<int>& y,
                                     const std::vector<std::string>& names);

}  // namespace unfollow
