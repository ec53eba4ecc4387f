#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unfollow/corpus.h"

namespace unfollow {

// Word lists per psycholinguistic category in the LIWC .dic layout. A
// pattern ending in '*' matches any token with that prefix.
//
// A token is looked up as a literal first; failing that, the longest matching
// prefix pattern applies. The matched entry may belong to several categories.
class CategoryLexicon {
public:
    CategoryLexicon() = default;

    static CategoryLexicon load(const std::filesystem::path& path);
    static CategoryLexicon parse(std::string_view text);

    // Returns the index of the new category. Throws InputError on a duplicate name.
    std::size_t add_category(const std::string& name);
    void add_pattern(std::size_t category, std::string_view pattern);

    const std::vector<std::string>& categories() const { return names_; }
    std::size_t size() const { return names_.size(); }

    // Category indices matched by a token; empty when none.
    const std::vector<std::size_t>& match(std::string_view token) const;

private:
    std::vector<std::string> names_;
    std::map<std::string, std::vector<std::size_t>, std::less<>> literals_;
    std::map<std::string, std::vector<std::size_t>, std::less<>> prefixes_;
    std::size_t longest_prefix_ = 0;
};

// Per category: matching tokens across all tweets divided by the tweet count.
// std::nullopt for zero tweets.
std::optional<std::vector<double>> category_scores(std::span<const Tweet> tweets,
                                                   const CategoryLexicon& lexicon);

}  // namespace unfollow
