#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "stump.h"
#include "unfollow/burst_features.h"
#include "unfollow/corpus.h"
#include "unfollow/error.h"
#include "unfollow/synth.h"

using namespace unfollow;

namespace {

std::string file_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST(Synth, DeterministicBytes) {
    SynthConfig c;
    c.n_users = 50;
    c.seed = 12;
    const auto dir = std::filesystem::temp_directory_path();
    generate_file(c, dir / "unfollow_synth_a.jsonl");
    generate_file(c, dir / "unfollow_synth_b.jsonl");
    const auto a = file_bytes(dir / "unfollow_synth_a.jsonl");
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, file_bytes(dir / "unfollow_synth_b.jsonl"));
    c.seed = 13;
    generate_file(c, dir / "unfollow_synth_b.jsonl");
    EXPECT_NE(a, file_bytes(dir / "unfollow_synth_b.jsonl"));
    std::filesystem::remove(dir / "unfollow_synth_a.jsonl");
    std::filesystem::remove(dir / "unfollow_synth_b.jsonl");
}

TEST(Synth, IngestsCleanlyWithConfiguredProportions) {
    for (double frac : {0.5, 0.3}) {
        SynthConfig c;
        c.n_users = 301;
        c.loser_fraction = frac;
        c.seed = 2;
        const auto users = generate(c);
        std::ostringstream out;
        serialize(users, out);
        std::istringstream in(out.str());
        const auto r = ingest(in);
        EXPECT_TRUE(r.errors.empty());
        ASSERT_EQ(r.users.size(), 301u);
        EXPECT_EQ(r.users, users);
        std::size_t losers = 0;
        for (const auto& u : users) {
            const Label l = label_user(u.followers_t0, u.followers_t1);
            ASSERT_NE(l, Label::Excluded);
            losers += l == Label::Loser;
            EXPECT_TRUE(filter_eligible(u));
        }
        EXPECT_LE(std::abs(static_cast<double>(losers) - frac * 301.0), 1.0);
    }
}

TEST(Synth, StumpOnMeanBurstPeriod) {
    SynthConfig c;
    c.n_users = 2000;
    c.effect = 1.0;
    c.seed = 7;
    std::vector<double> x;
    std::vector<int> y;
    for (const auto& u : generate(c)) {
        std::vector<std::int64_t> ts;
        for (const auto& t : u.tweets) ts.push_back(t.timestamp);
        const auto f = extract_bursts(ts);
        x.push_back(f ? f->mean_period : 0.0);
        y.push_back(label_user(u.followers_t0, u.followers_t1) == Label::Loser ? 1 : 0);
    }
    EXPECT_GE(testutil::best_stump_accuracy(x, y), 0.8);
}

TEST(Synth, InvalidConfig) {
    SynthConfig c;
    c.effect = 1.5;
    EXPECT_THROW(generate(c), InputError);
    c = SynthConfig{};
    c.loser_fraction = 1.0;
    EXPECT_THROW(generate(c), InputError);
    c = SynthConfig{};
    c.n_users = 1;
    EXPECT_THROW(generate(c), InputError);
}
