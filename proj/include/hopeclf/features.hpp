#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hopeclf/sparse.hpp"
#include "hopeclf/errors.hpp"

namespace hopeclf {

struct NGramConfig {
    std::uint32_t min_n = 1;
    std::uint32_t max_n = 8;
    std::uint32_t min_df = 1;                    // keep terms in >= min_df docs
    std::optional<std::uint32_t> max_features;   // cap by corpus frequency

    void validate() const; // throws DataError on nonsense ranges
};

// Feature tokenizer: maximal runs of two or more ASCII alphanumerics.
// Distinct from the cleaning tokenizer, which keeps single characters.
std::vector<std::string> tokenize(const std::string& text);

// All contiguous word n-grams for n in [min_n, min(max_n, len)], joined with
// single spaces; unigrams first, then bigrams, and so on.
std::vector<std::string> ngrams(const std::vector<std::string>& tokens,
                                const NGramConfig& config);

struct Vocabulary {
    std::vector<std::string> terms; // strictly increasing lexicographic order
    std::unordered_map<std::string, std::uint32_t> index;
    NGramConfig config;

    std::size_t size() const { return terms.size(); }
    std::optional<std::uint32_t> index_of(const std::string& term) const;
};

// Builds the vocabulary from cleaned documents: collects n-grams, drops terms
// below min_df, optionally keeps only the max_features most frequent terms
// (ties broken lexicographically), and assigns indices in lexicographic
// order. Throws DataError when the corpus is empty or no term survives.
Vocabulary fit_vocabulary(const std::vector<std::string>& cleaned_docs,
                          const NGramConfig& config);

// Raw term counts for one document against a fitted vocabulary.
SparseVector count_transform(const std::vector<std::string>& tokens,
                             const Vocabulary& vocab);
SparseVector count_transform(const std::string& cleaned_text,
                             const Vocabulary& vocab);

struct TfidfModel {
    std::uint32_t dimension = 0;
    std::vector<double> idf; // idf[t] = ln((1+N)/(1+df_t)) + 1, always >= 1

    // Count vector -> idf-weighted, L2-normalized vector. The zero vector
    // stays zero. Throws DataError on dimension mismatch.
    SparseVector transform(const SparseVector& counts) const;
};

// Smoothed document frequencies over a count matrix. N must be >= 1.
TfidfModel fit_tfidf(const std::vector<SparseVector>& counts,
                     std::uint32_t dimension);

// Plain-text vocabulary export: a version header line, then one
// term<TAB>index line per term in index order.
void save_vocabulary(const Vocabulary& vocab, const std::string& path);
Vocabulary load_vocabulary(const std::string& path);

} // namespace hopeclf
