#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hopeclf/corpus.hpp"

namespace hopeclf {

struct CleaningConfig {
    bool lowercase = true;
    bool strip_urls = true;
    bool strip_emoji = true;
    bool strip_placeholders = true;
    bool strip_numbers = true;
    bool strip_special = true;
    bool remove_stopwords = true;
    bool lemmatize = true;
    // Resource ids are either explicit paths or file names resolved against
    // the bundled data directory.
    std::string stopword_list_id = "stopwords_en.txt";
    std::string lemma_table_id = "lemmas_en.txt";
};

struct StopwordList {
    std::string version;
    std::unordered_set<std::string> words;

    bool contains(const std::string& token) const {
        return words.count(token) != 0;
    }
};

// Suffix rewrite applied when the token keeps at least min_stem characters
// before the suffix. Rules are ordered; the first applicable one wins.
struct SuffixRule {
    std::string suffix;
    std::string replacement;
    std::size_t min_stem;
};

struct LemmaTable {
    std::string version;
    std::unordered_map<std::string, std::string> dictionary;
    std::vector<SuffixRule> rules;

    std::string lemma_of(const std::string& token) const;
};

const std::vector<SuffixRule>& default_suffix_rules();

StopwordList load_stopwords(const std::string& path);
LemmaTable load_lemma_table(const std::string& path); // dictionary + default rules

// Resolves a resource id: used as-is when it names an existing file,
// otherwise looked up in the compiled-in data directory.
std::string resolve_resource(const std::string& id);
std::string default_data_dir();

struct CleaningResources {
    StopwordList stopwords;
    LemmaTable lemmas;
};

CleaningResources load_resources(const CleaningConfig& config);

// Individual pipeline stages. All are deterministic pure functions.
std::string strip_urls(const std::string& text);
std::string strip_placeholders(const std::string& text);
std::string strip_emoji(const std::string& text);
std::string lowercase_ascii(const std::string& text);
std::string strip_numbers(const std::string& text);
std::string strip_special(const std::string& text);
std::vector<std::string> split_whitespace(const std::string& text);
std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const StopwordList& stopwords);
std::vector<std::string> lemmatize(const std::vector<std::string>& tokens,
                                   const LemmaTable& table);

// Full cleaning pipeline. Stages run in a fixed order (URLs, placeholders,
// emoji, lowercasing, digits, special characters, tokenization, stopwords,
// lemmas); stopwords are filtered again after lemmatization so the output is
// stable under re-cleaning. Output is lowercase a-z words joined by single
// spaces, possibly empty.
std::string clean(const std::string& text, const CleaningConfig& config,
                  const CleaningResources& resources);

// Applies clean() to every document, preserving ids and labels.
Dataset clean_dataset(const Dataset& dataset, const CleaningConfig& config,
                      const CleaningResources& resources);

} // namespace hopeclf
