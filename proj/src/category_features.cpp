#include "unfollow/category_features.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "unfollow/error.h"

namespace unfollow {
namespace {

const std::vector<std::size_t> kNoMatch;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

void add_unique(std::vector<std::size_t>& cats, std::size_t c) {
    if (std::find(cats.begin(), cats.end(), c) == cats.end()) cats.push_back(c);
}

}  // namespace

std::size_t CategoryLexicon::add_category(const std::string& name) {
    if (std::find(names_.begin(), names_.end(), name) != names_.end()) {
        throw InputError("duplicate category name: " + name);
    }
    names_.push_back(name);
    return names_.size() - 1;
}

void CategoryLexicon::add_pattern(std::size_t category, std::string_view pattern) {
    if (category >= names_.size()) throw InputError("category index out of range");
    std::string p(pattern);
    std::transform(p.begin(), p.end(), p.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (p.empty() || p == "*") throw InputError("empty lexicon pattern");
    if (p.back() == '*') {
        p.pop_back();
        longest_prefix_ = std::max(longest_prefix_, p.size());
        add_unique(prefixes_[p], category);
    } else {
        add_unique(literals_[p], category);
    }
}

const std::vector<std::size_t>& CategoryLexicon::match(std::string_view token) const {
    if (auto it = literals_.find(token); it != literals_.end()) return it->second;
    for (std::size_t len = std::min(token.size(), longest_prefix_); len > 0; --len) {
        if (auto it = prefixes_.find(token.substr(0, len)); it != prefixes_.end()) return it->second;
    }
    return kNoMatch;
}

CategoryLexicon CategoryLexicon::parse(std::string_view text) {
    CategoryLexicon lexicon;
    std::unordered_map<std::string, std::size_t> ids;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    int section = 0;  // 0 before header, 1 in category block, 2 in word block
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        const std::string where = "category lexicon line " + std::to_string(line_no);
        if (t == "%") {
            if (section == 2) throw InputError(where + ": unexpected '%'");
            ++section;
            continue;
        }
        if (section == 0) throw InputError(where + ": expected '%' header");
        const auto tab = t.find_first_of("\t ");
        if (tab == std::string::npos) throw InputError(where + ": expected two tab-separated fields");
        const std::string key = t.substr(0, tab);
        const std::string rest = trim(t.substr(tab + 1));
        if (section == 1) {
            if (ids.contains(key)) throw InputError(where + ": duplicate category id " + key);
            ids.emplace(key, lexicon.add_category(rest));
        } else {
            std::string list = rest;
            std::replace_if(list.begin(), list.end(), [](char c) { return c == ',' || c == '\t'; }, ' ');
            std::istringstream fields(list);
            std::string id;
            bool any = false;
            while (fields >> id) {
                auto it = ids.find(id);
                if (it == ids.end()) throw InputError(where + ": unknown category id " + id);
                lexicon.add_pattern(it->second, key);
                any = true;
            }
            if (!any) throw InputError(where + ": word has no category ids");
        }
    }
    if (section < 2) throw InputError("category lexicon: missing '%' section delimiters");
    return lexicon;
}

CategoryLexicon CategoryLexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open category lexicon: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

std::optional<std::vector<double>> category_scores(std::span<const Tweet> tweets,
                                                   const CategoryLexicon& lexicon) {
    if (tweets.empty()) return std::nullopt;
    std::vector<double> counts(lexicon.size(), 0.0);
    for (const auto& tweet : tweets) {
        for (const auto& token : tokenize(tweet.text)) {
            for (std::size_t c : lexicon.match(token)) counts[c] += 1.0;
        }
    }
    for (auto& c : counts) c /= static_cast<double>(tweets.size());
    return counts;
}

}  // namespace unfollow
