#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "burst_oracle.h"
#include "unfollow/burst_features.h"
#include "unfollow/error.h"

using namespace unfollow;

TEST(DetectBursts, Examples) {
    EXPECT_TRUE(detect_bursts(std::vector<std::int64_t>{}).empty());
    const std::vector<std::int64_t> a = {0, 500, 900, 3000, 3500};
    const auto b = detect_bursts(a);
    ASSERT_EQ(b.size(), 2u);
    EXPECT_EQ(b[0], (Burst{0, 2, 0, 900}));
    EXPECT_EQ(b[1], (Burst{3, 4, 3000, 3500}));
    EXPECT_EQ(b[0].period(), 900);
    EXPECT_EQ(b[1].period(), 500);
    const std::vector<std::int64_t> c = {0, 5000, 10000};
    const auto s = detect_bursts(c);
    ASSERT_EQ(s.size(), 3u);
    for (const auto& x : s) EXPECT_EQ(x.period(), 0);
}

TEST(DetectBursts, ThresholdInclusiveAndUnsorted) {
    const std::vector<std::int64_t> a = {0, 1000, 2001};
    const auto b = detect_bursts(a);
    ASSERT_EQ(b.size(), 2u);
    EXPECT_EQ(b[0].length(), 2u);
    const std::vector<std::int64_t> bad = {5, 3};
    EXPECT_THROW(detect_bursts(bad), InputError);
}

TEST(BurstFeatures, Examples) {
    const std::vector<Burst> one = {{0, 3, 100, 1000}};
    auto f = *burst_features(one);
    EXPECT_DOUBLE_EQ(f.mean_inter_burst_gap, 0.0);
    EXPECT_DOUBLE_EQ(f.mean_period, 900.0);
    EXPECT_DOUBLE_EQ(f.max_period, 900.0);
    EXPECT_DOUBLE_EQ(f.min_period, 900.0);
    EXPECT_DOUBLE_EQ(f.burst_count, 1.0);

    const std::vector<std::int64_t> a = {0, 500, 900, 3000, 3500};
    f = *extract_bursts(a);
    EXPECT_DOUBLE_EQ(f.mean_inter_burst_gap, 2100.0);
    EXPECT_DOUBLE_EQ(f.mean_period, 700.0);
    EXPECT_DOUBLE_EQ(f.max_period, 900.0);
    EXPECT_DOUBLE_EQ(f.min_period, 500.0);
    EXPECT_DOUBLE_EQ(f.burst_count, 2.0);

    const std::vector<std::int64_t> c = {0, 5000, 10000};
    f = *extract_bursts(c);
    EXPECT_DOUBLE_EQ(f.mean_inter_burst_gap, 5000.0);
    EXPECT_DOUBLE_EQ(f.mean_period, 0.0);
    EXPECT_DOUBLE_EQ(f.max_period, 0.0);
    EXPECT_DOUBLE_EQ(f.burst_count, 3.0);

    EXPECT_FALSE(burst_features(std::vector<Burst>{}).has_value());
    EXPECT_FALSE(extract_bursts(std::vector<std::int64_t>{}).has_value());
}

TEST(BurstFeatures, MinLengthDropsSingletons) {
    const std::vector<std::int64_t> a = {0, 100, 5000, 9000, 9500};
    BurstOptions opt;
    opt.min_length = 2;
    const auto f = *extract_bursts(a, opt);
    EXPECT_DOUBLE_EQ(f.burst_count, 2.0);
    EXPECT_DOUBLE_EQ(f.mean_inter_burst_gap, 8900.0);
    const std::vector<std::int64_t> lonely = {0, 5000};
    EXPECT_FALSE(extract_bursts(lonely, opt).has_value());
}

TEST(DetectBursts, MatchesBruteForceAndInvariants) {
    std::mt19937_64 gen(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = gen() % 201;
        const std::int64_t spread = 1 + static_cast<std::int64_t>(gen() % 5000);
        std::vector<std::int64_t> ts(n);
        for (auto& t : ts) t = static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(spread * 10));
        std::sort(ts.begin(), ts.end());
        const std::int64_t threshold = static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(spread * 2));
        const auto got = detect_bursts(ts, threshold);
        ASSERT_EQ(got, testutil::brute_force_bursts(ts, threshold)) << "trial " << trial;

        std::size_t next = 0;
        for (const auto& b : got) {
            ASSERT_EQ(b.start_index, next);
            ASSERT_LE(b.start_index, b.end_index);
            for (std::size_t k = b.start_index; k < b.end_index; ++k) ASSERT_LE(ts[k + 1] - ts[k], threshold);
            if (b.end_index + 1 < n) {
                ASSERT_GT(ts[b.end_index + 1] - ts[b.end_index], threshold);
            }
            next = b.end_index + 1;
        }
        ASSERT_EQ(next, n);

        const std::int64_t higher = threshold + static_cast<std::int64_t>(gen() % 1000);
        ASSERT_LE(detect_bursts(ts, higher).size(), got.size());

        if (auto f = burst_features(got)) {
            ASSERT_LE(f->min_period, f->mean_period + 1e-9);
            ASSERT_LE(f->mean_period, f->max_period + 1e-9);
            ASSERT_GE(f->burst_count, 1.0);
        }
    }
}
