#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gradient_check.h"
#include "unfollow/error.h"
#include "unfollow/mlp.h"
#include "unfollow/rng.h"
#include "unfollow/scaling.h"

using namespace unfollow;

namespace {

struct Dataset {
    Matrix x;
    std::vector<int> y;
};

// Two features in [0,1]; label is which side of x0 + x1 = 1 the point falls,
// with an empty band of half-width `margin`.
Dataset separable(std::size_t n, std::uint64_t seed, double margin = 0.05) {
    Rng rng(seed);
    Dataset d;
    while (d.x.size() < n) {
        const double a = rng.uniform(), b = rng.uniform();
        if (std::abs(a + b - 1.0) < margin) continue;
        d.x.push_back({a, b});
        d.y.push_back(a + b > 1.0 ? 1 : 0);
    }
    return d;
}

}  // namespace

TEST(Mlp, ZeroWeightsGiveHalf) {
    MlpConfig c;
    c.hidden = {3};
    auto m = init_mlp(2, c);
    assign_parameters(m, std::vector<double>(m.parameter_count(), 0.0));
    for (double p : predict_proba(m, {{1.0, 2.0}, {-5.0, 0.0}})) EXPECT_DOUBLE_EQ(p, 0.5);
    EXPECT_EQ(predict(m, {{1.0, 2.0}}, 0.5), std::vector<int>{1});
    EXPECT_EQ(predict(m, {{1.0, 2.0}}, 0.5000001), std::vector<int>{0});
}

TEST(Mlp, HandComputedForwardPass) {
    MlpConfig c;
    c.hidden = {2};
    auto m = init_mlp(2, c);
    // Layer 1: W = [[1, -1], [0.5, 2]], b = [0, -1]; layer 2: w = [1, -2], b = 0.5.
    assign_parameters(m, {1, -1, 0.5, 2, 0, -1, 1, -2, 0.5});
    // x = (2, 1): z1 = (1, 2), relu -> (1, 2); z2 = 1 - 4 + 0.5 = -2.5.
    EXPECT_DOUBLE_EQ(forward_logit(m, {2.0, 1.0}), -2.5);
    EXPECT_NEAR(predict_proba(m, {{2.0, 1.0}})[0], 1.0 / (1.0 + std::exp(2.5)), 1e-15);
    // x = (0, 1): z1 = (-1, 1) -> (0, 1); z2 = -2 + 0.5 = -1.5.
    EXPECT_DOUBLE_EQ(forward_logit(m, {0.0, 1.0}), -1.5);
    m.activation = Activation::Tanh;
    EXPECT_NEAR(forward_logit(m, {0.0, 1.0}), std::tanh(-1.0) - 2 * std::tanh(1.0) + 0.5, 1e-15);
}

TEST(Mlp, XavierInitWithinBounds) {
    MlpConfig c;
    c.hidden = {64, 32};
    const auto m = init_mlp(10, c);
    ASSERT_EQ(m.layers.size(), 3u);
    const std::size_t sizes[] = {10, 64, 32, 1};
    for (std::size_t l = 0; l < 3; ++l) {
        const double limit = std::sqrt(6.0 / static_cast<double>(sizes[l] + sizes[l + 1]));
        for (double w : m.layers[l].weights) EXPECT_LE(std::abs(w), limit);
        for (double b : m.layers[l].bias) EXPECT_EQ(b, 0.0);
    }
}

TEST(Mlp, GradientCheckFiveFourOne) {
    for (auto act : {Activation::Relu, Activation::Tanh}) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto net = testutil::random_net(seed, 5, {4}, act);
            EXPECT_LT(testutil::max_gradient_error(net.model, net.x, net.y), 1e-4) << "seed " << seed;
        }
    }
    const auto deep = testutil::random_net(3, 4, {5, 3}, Activation::Tanh);
    EXPECT_LT(testutil::max_gradient_error(deep.model, deep.x, deep.y), 1e-4);
}

TEST(Mlp, SeparableDataLearned) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto d = separable(500, seed, 0.2);
        MlpConfig c;
        c.seed = seed + 10;
        const auto m = train_mlp(d.x, d.y, c);
        const auto pred = predict(m, d.x);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == d.y[i];
        EXPECT_GE(static_cast<double>(correct) / 500.0, 0.98) << "seed " << seed;
    }
}

TEST(Mlp, DeterministicTraining) {
    const auto d = separable(100, 5);
    MlpConfig c;
    c.epochs = 5;
    c.seed = 3;
    EXPECT_TRUE(train_mlp(d.x, d.y, c) == train_mlp(d.x, d.y, c));
    auto c2 = c;
    c2.seed = 4;
    EXPECT_FALSE(train_mlp(d.x, d.y, c) == train_mlp(d.x, d.y, c2));
}

TEST(Mlp, Errors) {
    Matrix x = {{0.0}, {1.0}, {2.0}, {3.0}};
    EXPECT_THROW(train_mlp(x, {1, 1, 1, 1}, MlpConfig{}), InputError);
    EXPECT_THROW(train_mlp(x, {1, 0, 0, 0}, MlpConfig{}), InputError);
    EXPECT_THROW(train_mlp(x, {1, 0, 2, 0}, MlpConfig{}), InputError);
    const auto m = train_mlp(x, {1, 1, 0, 0}, MlpConfig{});
    EXPECT_THROW(predict_proba(m, {{1.0, 2.0}}), SchemaError);
}

TEST(Mlp, ThresholdMonotone) {
    const auto d = separable(200, 6);
    MlpConfig c;
    c.epochs = 3;
    const auto m = train_mlp(d.x, d.y, c);
    std::vector<int> prev = predict(m, d.x, 0.0);
    for (double t = 0.05; t <= 1.0; t += 0.05) {
        const auto cur = predict(m, d.x, t);
        for (std::size_t i = 0; i < cur.size(); ++i) EXPECT_LE(cur[i], prev[i]);
        prev = cur;
    }
}

TEST(Mlp, FitClassifierScalesAndRoundTrips) {
    auto d = separable(200, 7);
    for (auto& row : d.x) row[1] = row[1] * 1000 + 50;
    MlpConfig c;
    c.epochs = 5;
    const auto m = fit_classifier(d.x, d.y, c, {"a", "b"});
    ASSERT_TRUE(m.scaler.fitted());
    double col_max = d.x[0][1];
    for (const auto& row : d.x) col_max = std::max(col_max, row[1]);
    EXPECT_EQ(m.scaler.maxs[1], col_max);
    std::stringstream io;
    save_mlp(m, io);
    const std::string first = io.str();
    const auto back = load_mlp(io);
    EXPECT_TRUE(back == m);
    EXPECT_EQ(predict_proba(back, d.x), predict_proba(m, d.x));
    std::stringstream again;
    save_mlp(back, again);
    EXPECT_EQ(again.str(), first);
    std::stringstream junk("{not json");
    EXPECT_THROW(load_mlp(junk), SchemaError);
}

TEST(Scaling, Examples) {
    const Matrix train = {{0.0, 7.0}, {5.0, 7.0}, {10.0, 7.0}};
    const auto s = minmax_scale_fit(train);
    const auto scaled = minmax_scale_apply(s, train);
    EXPECT_EQ(scaled, (Matrix{{0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}}));
    EXPECT_EQ(minmax_scale_row(s, {12.0, 9.0}), (std::vector<double>{1.0, 0.0}));
    EXPECT_EQ(minmax_scale_row(s, {-3.0, 7.0}), (std::vector<double>{0.0, 0.0}));
    EXPECT_THROW(minmax_scale_fit({}), InputError);
    EXPECT_THROW(minmax_scale_row(s, {1.0}), SchemaError);
}
