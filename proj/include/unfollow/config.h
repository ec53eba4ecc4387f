#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "unfollow/cross_validation.h"
#include "unfollow/pipeline.h"
#include "unfollow/synth.h"

namespace unfollow {

// Every tunable of the pipeline under one flat key space. Values are set
// from strings so that a config file and command-line flags share one
// parser; flags are applied after the file and win.
struct PipelineConfig {
    PipelineOptions pipeline;
    SelectionOptions selection;
    SynthConfig synth;
    std::size_t folds = 10;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    double score_threshold = 0.5;
    bool strict = false;
    std::string stopwords;         // empty: the built-in list
    std::string badness_lexicon;   // "none": empty lexicon
    std::string category_lexicon;  // "none": no categories
    std::string corpus;
    std::string out;
    std::string model;

    PipelineConfig();

    // Throws ConfigError for an unknown key or an unparsable value.
    void set(const std::string& key, const std::string& value);
    std::string get(const std::string& key) const;

    // `key = value` lines; blank lines and lines starting with '#' ignored.
    // Throws IoError when unreadable, ConfigError on bad content.
    void load_file(const std::filesystem::path& path);

    // Pushes the global seed and worker count into the component configs.
    void finalize();

    // All keys with their effective values, sorted by key.
    nlohmann::json echo() const;

    CrossValidationOptions cv_options() const { return {folds, seed, workers}; }

    static const std::vector<std::string>& keys();
    static std::string describe(const std::string& key);
};

// Loads stopword, badness, and category resources named by the config.
Resources load_resources(const PipelineConfig& config);

}  // namespace unfollow
