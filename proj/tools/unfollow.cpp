#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "unfollow/chi2.h"
#include "unfollow/config.h"
#include "unfollow/corpus.h"
#include "unfollow/cross_validation.h"
#include "unfollow/error.h"
#include "unfollow/json_io.h"
#include "unfollow/pipeline.h"
#include "unfollow/synth.h"
#include "unfollow/version.h"

namespace {

using namespace unfollow;

enum ExitCode { kOk = 0, kOther = 1, kUsage = 2, kIo = 3, kSchema = 4, kInput = 5 };

// Writes to the named file, or stdout for an empty name or "-".
class Output {
public:
    explicit Output(const std::string& path) : path_(path) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw IoError("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    void close() {
        stream().flush();
        if (!stream()) throw IoError("write failed: " + (path_.empty() ? std::string("stdout") : path_));
    }

private:
    std::string path_;
    std::unique_ptr<std::ofstream> file_;
};

std::string require(const std::string& value, const char* key) {
    if (value.empty()) throw ConfigError(std::string("missing required setting: ") + key);
    return value;
}

std::vector<UserRecord> read_corpus(const PipelineConfig& config) {
    const std::string path = require(config.corpus, "corpus");
    auto result = ingest(path, config.strict);
    for (const auto& e : result.errors) {
        std::cerr << "warning: " << path << ":" << e.line << ": " << e.message << "\n";
    }
    if (!result.errors.empty()) {
        std::cerr << "warning: skipped " << result.errors.size() << " malformed line(s)\n";
    }
    return std::move(result.users);
}

PreparedCorpus prepare(const PipelineConfig& config, const Resources& resources) {
    const auto users = read_corpus(config);
    auto labeled = select_labeled(users, resources.stopwords, config.selection);
    std::cerr << "selected " << labeled.users.size() << " of " << users.size() << " users\n";
    return PreparedCorpus(std::move(labeled.users), std::move(labeled.labels), resources, config.pipeline);
}

std::vector<std::size_t> everyone(std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return idx;
}

int cmd_ingest(const PipelineConfig& config) {
    const auto users = read_corpus(config);
    Output out(config.out);
    serialize(users, out.stream());
    out.close();
    return kOk;
}

int cmd_label(const PipelineConfig& config) {
    const auto resources = load_resources(config);
    const auto users = read_corpus(config);
    const StopwordRatioDetector detector(resources.stopwords, config.selection.english_threshold);
    Output out(config.out);
    for (const auto& u : users) {
        Label label = Label::Excluded;
        try {
            label = label_user(u.followers_t0, u.followers_t1);
        } catch (const InputError&) {
        }
        const bool eligible = filter_eligible(u, detector, config.selection.rules);
        out.stream() << u.user_id << '\t' << to_string(label) << '\t' << (eligible ? 1 : 0) << '\n';
    }
    out.close();
    return kOk;
}

TrainingOutput train_all(const PreparedCorpus& corpus, const PipelineConfig& config) {
    const auto all = everyone(corpus.size());
    return train_pipeline(corpus, all, config.pipeline, PipelineSeeds::from(config.seed));
}

int cmd_extract(const PipelineConfig& config) {
    const auto resources = load_resources(config);
    const auto corpus = prepare(config, resources);
    const auto trained = train_all(corpus, config);
    Output out(config.out);
    write_feature_csv(trained.features, out.stream());
    out.close();
    return kOk;
}

int cmd_train(const PipelineConfig& config) {
    const auto resources = load_resources(config);
    const auto corpus = prepare(config, resources);
    auto trained = train_all(corpus, config);
    const auto bundle = make_bundle(corpus, std::move(trained.models), config.pipeline,
                                    PipelineSeeds::from(config.seed), config.echo());
    Output out(config.out);
    save_bundle(bundle, out.stream());
    out.close();
    return kOk;
}

int cmd_evaluate(const PipelineConfig& config) {
    const auto resources = load_resources(config);
    const auto corpus = prepare(config, resources);
    const auto report = cross_validate(corpus, config.pipeline, config.cv_options());
    Output out(config.out);
    write_report_json(report_to_json(report, config.echo()), out.stream());
    out.close();
    const auto& m = report.model_mean;
    const auto& b = report.baseline_mean;
    std::fprintf(stderr, "model    accuracy %.4f precision %.4f recall %.4f f1 %.4f auc %.4f\n", m.accuracy,
                 m.precision, m.recall, m.f1, m.roc_auc);
    std::fprintf(stderr, "baseline accuracy %.4f precision %.4f recall %.4f f1 %.4f auc %.4f\n", b.accuracy,
                 b.precision, b.recall, b.f1, b.roc_auc);
    return kOk;
}

int cmd_rank(const PipelineConfig& config) {
    const auto resources = load_resources(config);
    const auto corpus = prepare(config, resources);
    const auto trained = train_all(corpus, config);
    const auto ranked = chi2_rank(trained.features.rows, trained.features.labels, trained.features.columns);
    Output out(config.out);
    char buf[64];
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", ranked[i].chi2);
        out.stream() << (i + 1) << '\t' << ranked[i].name << '\t' << buf << '\n';
    }
    out.close();
    return kOk;
}

int cmd_score(const PipelineConfig& config) {
    const std::string model_path = require(config.model, "model");
    std::ifstream in(model_path, std::ios::binary);
    if (!in) throw IoError("cannot open model bundle: " + model_path);
    const auto bundle = load_bundle(in);
    const auto resources = load_resources(config);
    const auto users = read_corpus(config);
    const auto scored = score_users(bundle, users, resources, config.score_threshold);
    Output out(config.out);
    for (const auto& s : scored) {
        nlohmann::json line = {{"user_id", s.user_id},
                               {"probability", s.probability},
                               {"label", s.label},
                               {"missing", s.missing}};
        out.stream() << line.dump() << '\n';
    }
    out.close();
    return kOk;
}

int cmd_synth(const PipelineConfig& config) {
    const auto users = generate(config.synth);
    Output out(config.out);
    serialize(users, out.stream());
    out.close();
    return kOk;
}

std::string flag_name(std::string key) {
    for (auto& c : key) {
        if (c == '_') c = '-';
    }
    return "--" + key;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Predicts which accounts are about to lose a large share of their followers."};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path, "flat key = value config file; flags override it");

    std::map<std::string, std::string> flag_values;
    std::map<std::string, CLI::Option*> flags;
    for (const auto& key : PipelineConfig::keys()) {
        flags[key] = app.add_option(flag_name(key), flag_values[key], PipelineConfig::describe(key));
    }

    using Command = int (*)(const PipelineConfig&);
    const std::vector<std::tuple<std::string, std::string, Command>> commands = {
        {"ingest", "validate a corpus and write it back normalized", cmd_ingest},
        {"label", "write user_id, label, and eligibility per user", cmd_label},
        {"extract", "write the feature matrix as CSV", cmd_extract},
        {"train", "train on the whole labeled corpus and write a model bundle", cmd_train},
        {"evaluate", "cross-validate the full and baseline models and write a JSON report", cmd_evaluate},
        {"rank", "rank features by chi-square", cmd_rank},
        {"score", "apply a model bundle to new users", cmd_score},
        {"synth", "generate a synthetic labeled corpus", cmd_synth},
    };
    std::map<CLI::App*, Command> handlers;
    for (const auto& [name, help, fn] : commands) handlers[app.add_subcommand(name, help)] = fn;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        PipelineConfig config;
        if (!config_path.empty()) config.load_file(config_path);
        for (const auto& key : PipelineConfig::keys()) {
            if (flags[key]->count() > 0) config.set(key, flag_values[key]);
        }
        config.finalize();
        for (auto* sub : app.get_subcommands()) return handlers.at(sub)(config);
        return kUsage;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kUsage;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kIo;
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kSchema;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kOther;
    }
}
