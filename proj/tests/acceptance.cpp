// One PASS/FAIL line per acceptance criterion; exit status 0 only if all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "auc_oracle.h"
#include "burst_oracle.h"
#include "gradient_check.h"
#include "graph_oracle.h"
#include "lda_fixtures.h"
#include "unfollow/burst_features.h"
#include "unfollow/chi2.h"
#include "unfollow/config.h"
#include "unfollow/cross_validation.h"
#include "unfollow/entropy.h"
#include "unfollow/graph_features.h"
#include "unfollow/json_io.h"
#include "unfollow/lexical_features.h"
#include "unfollow/metrics.h"
#include "unfollow/pipeline.h"
#include "unfollow/synth.h"
#include "unfollow/topic_model.h"

using namespace unfollow;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::vector<std::size_t> everyone(std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return idx;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

PipelineConfig planted_config(std::uint64_t seed, double effect) {
    PipelineConfig c;
    c.set("n_users", "2000");
    c.set("effect", std::to_string(effect));
    c.set("seed", std::to_string(seed));
    return c;
}

PreparedCorpus prepare(const PipelineConfig& c, const Resources& r) {
    const auto users = generate(c.synth);
    auto labeled = select_labeled(users, r.stopwords, c.selection);
    return PreparedCorpus(std::move(labeled.users), std::move(labeled.labels), r, c.pipeline);
}

std::string report_bytes(const EvaluationReport& r, const PipelineConfig& c) {
    std::ostringstream s;
    write_report_json(report_to_json(r, c.echo()), s);
    return s.str();
}

// Shared by the end-to-end and ranking criteria.
struct Planted {
    PipelineConfig config;
    Resources resources;
    PreparedCorpus corpus;
};

Planted& planted() {
    static Planted p = [] {
        auto c = planted_config(1, 1.0);
        c.finalize();
        auto r = load_resources(c);
        auto corpus = prepare(c, r);
        return Planted{c, r, std::move(corpus)};
    }();
    return p;
}

Outcome end_to_end() {
    const auto t0 = std::chrono::steady_clock::now();
    auto& p = planted();
    const auto report = cross_validate(p.corpus, p.config.pipeline, p.config.cv_options());
    const double secs = seconds_since(t0);
    const auto& m = report.model_mean;
    const auto& b = report.baseline_mean;
    Outcome o;
    o.pass = report.folds.size() == 10 && m.accuracy >= 0.90 && m.accuracy > b.accuracy &&
             m.precision > b.precision && m.recall > b.recall && secs < 600.0;
    o.detail = "n=" + std::to_string(p.corpus.size()) + " model acc/prec/rec " + fmt("%.4f", m.accuracy) + "/" +
               fmt("%.4f", m.precision) + "/" + fmt("%.4f", m.recall) + " baseline " + fmt("%.4f", b.accuracy) +
               "/" + fmt("%.4f", b.precision) + "/" + fmt("%.4f", b.recall) + " in " + fmt("%.0fs", secs);
    return o;
}

Outcome null_signal() {
    Outcome o;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto c = planted_config(seed, 0.0);
        c.set("lda_iters", "100");
        c.set("embed_epochs", "5");
        c.finalize();
        const auto r = load_resources(c);
        const auto corpus = prepare(c, r);
        const double acc = cross_validate(corpus, c.pipeline, c.cv_options()).model_mean.accuracy;
        o.pass = o.pass && acc >= 0.45 && acc <= 0.55;
        o.detail += (seed > 1 ? " " : "accuracy ") + fmt("%.4f", acc);
    }
    return o;
}

Outcome chi2_ranking() {
    auto& p = planted();
    const auto trained = train_pipeline(p.corpus, everyone(p.corpus.size()), p.config.pipeline,
                                        PipelineSeeds::from(p.config.seed));
    const auto ranked = chi2_rank(trained.features.rows, trained.features.labels, trained.features.columns);
    Outcome o;
    o.pass = false;
    for (std::size_t i = 0; i < 3 && i < ranked.size(); ++i) {
        const auto& n = ranked[i].name;
        if (n == "burst_mean_period" || n == "burst_max_period" || n == "burst_min_period") o.pass = true;
        o.detail += (i ? ", " : "top 3: ") + n;
    }
    return o;
}

Outcome burst_oracle() {
    std::mt19937_64 gen(7001);
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = gen() % 201;
        const auto spread = 1 + gen() % 5000;
        std::vector<std::int64_t> ts(n);
        for (auto& t : ts) t = static_cast<std::int64_t>(gen() % (spread * 10));
        std::sort(ts.begin(), ts.end());
        const auto threshold = static_cast<std::int64_t>(gen() % (spread * 2));
        mismatches += detect_bursts(ts, threshold) != testutil::brute_force_bursts(ts, threshold);
    }
    return {mismatches == 0, std::to_string(mismatches) + " mismatches in 1000 instances"};
}

std::string word(std::size_t i) {
    std::string w = "zq";
    do {
        w += static_cast<char>('a' + i % 26);
        i /= 26;
    } while (i);
    return w;
}

// Tweets whose filtered tokens and mentions follow the given counts.
std::vector<Tweet> tweets_with(const std::vector<std::size_t>& counts) {
    std::vector<Tweet> out;
    Tweet t;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        for (std::size_t c = 0; c < counts[i]; ++c) {
            t.text += word(i) + " ";
            t.mentions.push_back(word(i));
        }
    }
    out.push_back(t);
    return out;
}

Outcome entropy_suite() {
    const auto& sw = Stopwords::english();
    double worst = 0.0;
    bool ok = true;
    auto check_exact = [&](std::optional<double> got, double want) {
        ok = ok && got.has_value();
        if (got) worst = std::max(worst, std::abs(*got - want));
    };
    for (std::size_t m : {1, 2, 3, 7, 16, 50}) {
        const double want = std::log(static_cast<double>(m));
        const auto tw = tweets_with(std::vector<std::size_t>(m, 3));
        check_exact(content_diversity(tw, sw), want);
        check_exact(mention_entropy(tw), want);
        std::vector<double> theta(m, 1.0 / static_cast<double>(m));
        check_exact(topic_diversity(theta), want);
    }
    ok = ok && worst <= 1e-9;

    std::mt19937_64 gen(7002);
    std::size_t violations = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t m = 1 + gen() % 30;
        std::vector<std::size_t> counts(m);
        for (auto& c : counts) c = 1 + gen() % 6;
        const auto tw = tweets_with(counts);
        const double bound = std::log(static_cast<double>(m)) + 1e-12;
        violations += !(*content_diversity(tw, sw) <= bound);
        violations += !(*mention_entropy(tw) <= bound);
        std::vector<double> theta(m);
        std::exponential_distribution<double> e(1.0);
        for (auto& x : theta) x = e(gen);
        const double s = std::accumulate(theta.begin(), theta.end(), 0.0);
        for (auto& x : theta) x /= s;
        violations += !(topic_diversity(theta) <= bound);
    }
    ok = ok && violations == 0;
    return {ok, "max exact-case error " + fmt("%.2e", worst) + ", " + std::to_string(violations) +
                    " bound violations in 3x10^4 random cases"};
}

Outcome lda() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    double worst_norm = 0.0, worst_frac = 1.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto docs = testutil::disjoint_corpus(100, 150, 20, seed);
        LdaConfig c;
        c.topics = 2;
        c.iterations = 500;
        c.seed = seed + 100;
        const auto m = train_lda(docs, c);
        for (std::size_t k = 0; k < m.topics; ++k) {
            double s = 0.0;
            for (std::size_t w = 0; w < m.vocab_size(); ++w) s += m.phi_at(k, w);
            worst_norm = std::max(worst_norm, std::abs(s - 1.0));
        }
        std::size_t confident = 0;
        for (const auto& t : m.theta) {
            worst_norm = std::max(worst_norm, std::abs(std::accumulate(t.begin(), t.end(), 0.0) - 1.0));
            confident += *std::max_element(t.begin(), t.end()) > 0.8;
        }
        const double frac = static_cast<double>(confident) / static_cast<double>(m.theta.size());
        worst_frac = std::min(worst_frac, frac);
        ok = ok && m.theta.size() == 200 && frac >= 0.95;
    }
    const double secs = seconds_since(t0);
    ok = ok && worst_norm <= 1e-9 && secs < 60.0;
    return {ok, "worst confident fraction " + fmt("%.3f", worst_frac) + ", normalization error " +
                    fmt("%.2e", worst_norm) + ", " + fmt("%.1fs", secs)};
}

Outcome gradient_check() {
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto act = seed % 2 ? Activation::Relu : Activation::Tanh;
        const std::vector<std::size_t> hidden = seed % 5 == 0 ? std::vector<std::size_t>{4, 3}
                                                              : std::vector<std::size_t>{4};
        const auto net = testutil::random_net(seed + 500, 5, hidden, act);
        worst = std::max(worst, testutil::max_gradient_error(net.model, net.x, net.y));
    }
    return {worst < 1e-4, "max relative error " + fmt("%.2e", worst) + " over 20 nets"};
}

Outcome metrics_oracles() {
    std::mt19937_64 gen(7003);
    std::size_t failures = 0;
    double worst_auc = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + gen() % 150;
        std::vector<int> y(n), pred(n);
        std::vector<double> s(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = static_cast<int>(gen() % 2);
            pred[i] = static_cast<int>(gen() % 2);
            s[i] = trial % 3 ? std::uniform_real_distribution<double>(0, 1)(gen) : static_cast<double>(gen() % 5);
        }
        y[0] = 1;
        y[1] = 0;
        const auto m = compute_metrics(y, pred, s);
        std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
        for (std::size_t i = 0; i < n; ++i) {
            tp += y[i] && pred[i];
            fp += !y[i] && pred[i];
            tn += !y[i] && !pred[i];
            fn += y[i] && !pred[i];
        }
        const auto d = [](std::size_t a, std::size_t b) { return static_cast<double>(a) / static_cast<double>(b); };
        bool ok = m.confusion == ConfusionMatrix{tp, fp, tn, fn} && m.accuracy == d(tp + tn, n) &&
                  m.recall == d(tp, tp + fn) && (tp + fp == 0 || m.precision == d(tp, tp + fp));
        failures += !ok;
        worst_auc = std::max(worst_auc, std::abs(m.roc_auc - testutil::pairwise_auc(y, s)));
    }
    return {failures == 0 && worst_auc <= 1e-9, std::to_string(failures) + " identity failures, max AUC error " +
                                                    fmt("%.2e", worst_auc) + " over 500 cases"};
}

double eigen_residual(const std::vector<std::vector<std::size_t>>& adj, const EigenResult& r) {
    double s = 0.0;
    for (std::size_t i = 0; i < adj.size(); ++i) {
        double ax = 0.0;
        for (auto j : adj[i]) ax += r.vector[j];
        s += std::pow(ax - r.eigenvalue * r.vector[i], 2);
    }
    return std::sqrt(s);
}

Outcome graph_oracles() {
    std::mt19937_64 gen(7004);
    double worst_b = 0.0, worst_r = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + gen() % 29;
        const double p = std::uniform_real_distribution<double>(0.03, 0.3)(gen);
        std::vector<std::string> ids;
        for (std::size_t i = 0; i < n; ++i) ids.push_back("v" + std::to_string(i));
        std::vector<std::vector<std::string>> h(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j && std::uniform_real_distribution<double>(0, 1)(gen) < p) h[i].push_back(ids[j]);
            }
        }
        const auto g = build_mention_graph(ids, h);
        const auto got = betweenness_centrality(g);
        const auto want = testutil::brute_force_betweenness(g.out);
        for (std::size_t v = 0; v < got.size(); ++v) worst_b = std::max(worst_b, std::abs(got[v] - want[v]));
        const auto adj = undirected_projection(g);
        worst_r = std::max(worst_r, eigen_residual(adj, eigenvector_centrality(adj)));
    }
    std::vector<std::size_t> a = {0, 1, 2, 3, 4, 5, 6}, b = {0, 1, 2, 7, 8, 9};
    std::vector<std::size_t> c, d;
    for (std::size_t i = 0; i < 29; ++i) c.push_back(i + 100), d.push_back(i + 100);
    for (std::size_t i = 0; i < 35; ++i) c.push_back(i + 200);
    for (std::size_t i = 0; i < 36; ++i) d.push_back(i + 300);
    std::vector<std::vector<std::size_t>> sets = {a, b, c, d};
    const auto sim = build_similarity_graph(sets, 0.3);
    const bool boundary = jaccard(a, b) == 0.3 && jaccard(c, d) < 0.3 && sim.edge_count() == 1 &&
                          sim.adjacency[0].size() == 1 && sim.adjacency[2].empty();
    return {worst_b <= 1e-9 && worst_r < 1e-6 && boundary,
            "betweenness error " + fmt("%.2e", worst_b) + ", eigen residual " + fmt("%.2e", worst_r) +
                ", 0.3 boundary " + (boundary ? "exact" : "wrong")};
}

Outcome determinism() {
    auto c = planted_config(9, 1.0);
    c.set("n_users", "300");
    c.set("topics", "5");
    c.set("lda_iters", "40");
    c.set("embed_dim", "12");
    c.set("embed_epochs", "4");
    c.set("mlp_epochs", "15");
    c.set("folds", "5");
    c.finalize();
    const auto r = load_resources(c);
    const auto corpus = prepare(c, r);
    auto bundle_bytes = [&] {
        auto trained = train_pipeline(corpus, everyone(corpus.size()), c.pipeline, PipelineSeeds::from(c.seed));
        std::ostringstream s;
        save_bundle(make_bundle(corpus, std::move(trained.models), c.pipeline, PipelineSeeds::from(c.seed), c.echo()),
                    s);
        return s.str();
    };
    const bool models = bundle_bytes() == bundle_bytes();
    auto cv = c.cv_options();
    cv.workers = 1;
    const auto serial = report_bytes(cross_validate(corpus, c.pipeline, cv), c);
    cv.workers = 4;
    const bool reports = serial == report_bytes(cross_validate(corpus, c.pipeline, cv), c);
    return {models && reports, std::string("bundles ") + (models ? "identical" : "differ") + ", reports " +
                                   (reports ? "identical" : "differ") + " across 1 and 4 workers"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"burst_oracle", burst_oracle},
        {"entropy_suite", entropy_suite},
        {"lda_disjoint_topics", lda},
        {"mlp_gradient_check", gradient_check},
        {"metrics_oracles", metrics_oracles},
        {"graph_oracles", graph_oracles},
        {"determinism", determinism},
        {"end_to_end_planted_signal", end_to_end},
        {"chi2_burst_period_top3", chi2_ranking},
        {"null_signal", null_signal},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
