#include "hopeclf/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

namespace hopeclf {

void NGramConfig::validate() const {
    if (min_n < 1)
        throw DataError("ngram min_n must be at least 1");
    if (max_n < min_n)
        throw DataError("ngram max_n must be >= min_n");
    if (min_df < 1)
        throw DataError("ngram min_df must be at least 1");
    if (max_features && *max_features < 1)
        throw DataError("ngram max_features must be at least 1");
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    auto is_alnum = [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
               (c >= '0' && c <= '9');
    };
    for (char c : text) {
        if (is_alnum(c)) {
            cur.push_back(c);
        } else if (!cur.empty()) {
            if (cur.size() >= 2) tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (cur.size() >= 2) tokens.push_back(std::move(cur));
    return tokens;
}

std::vector<std::string> ngrams(const std::vector<std::string>& tokens,
                                const NGramConfig& config) {
    config.validate();
    std::vector<std::string> out;
    const std::size_t count = tokens.size();
    std::size_t top = std::min<std::size_t>(config.max_n, count);
    for (std::size_t n = config.min_n; n <= top; ++n) {
        for (std::size_t start = 0; start + n <= count; ++start) {
            std::string gram = tokens[start];
            for (std::size_t k = 1; k < n; ++k) {
                gram.push_back(' ');
                gram += tokens[start + k];
            }
            out.push_back(std::move(gram));
        }
    }
    return out;
}

std::optional<std::uint32_t> Vocabulary::index_of(const std::string& term) const {
    auto it = index.find(term);
    if (it == index.end()) return std::nullopt;
    return it->second;
}

Vocabulary fit_vocabulary(const std::vector<std::string>& cleaned_docs,
                          const NGramConfig& config) {
    config.validate();
    if (cleaned_docs.empty())
        throw DataError("cannot fit a vocabulary on an empty corpus");

    struct TermStats {
        std::int64_t doc_freq = 0;
        std::int64_t total_count = 0;
    };
    std::unordered_map<std::string, TermStats> stats;
    std::unordered_map<std::string, std::int64_t> doc_counts;
    for (const std::string& doc : cleaned_docs) {
        doc_counts.clear();
        for (std::string& gram : ngrams(tokenize(doc), config))
            ++doc_counts[std::move(gram)];
        for (auto& [term, count] : doc_counts) {
            TermStats& ts = stats[term];
            ts.doc_freq += 1;
            ts.total_count += count;
        }
    }

    std::vector<std::pair<std::string, TermStats>> kept;
    kept.reserve(stats.size());
    for (auto& [term, ts] : stats)
        if (ts.doc_freq >= config.min_df) kept.emplace_back(term, ts);
    if (kept.empty())
        throw DataError("empty vocabulary: no term appears in at least " +
                        std::to_string(config.min_df) + " document(s)");

    if (config.max_features && kept.size() > *config.max_features) {
        // Most frequent first, lexicographic tie-break, then trim.
        std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
            if (a.second.total_count != b.second.total_count)
                return a.second.total_count > b.second.total_count;
            return a.first < b.first;
        });
        kept.resize(*config.max_features);
    }
    std::sort(kept.begin(), kept.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    Vocabulary vocab;
    vocab.config = config;
    vocab.terms.reserve(kept.size());
    for (auto& [term, ts] : kept) vocab.terms.push_back(term);
    vocab.index.reserve(vocab.terms.size());
    for (std::uint32_t i = 0; i < vocab.terms.size(); ++i)
        vocab.index.emplace(vocab.terms[i], i);
    return vocab;
}

SparseVector count_transform(const std::vector<std::string>& tokens,
                             const Vocabulary& vocab) {
    std::map<std::uint32_t, double> counts; // ordered for sorted output
    for (const std::string& gram : ngrams(tokens, vocab.config)) {
        auto it = vocab.index.find(gram);
        if (it != vocab.index.end()) counts[it->second] += 1.0;
    }
    SparseVector vec;
    vec.indices.reserve(counts.size());
    vec.values.reserve(counts.size());
    for (const auto& [idx, val] : counts) vec.push(idx, val);
    return vec;
}

SparseVector count_transform(const std::string& cleaned_text,
                             const Vocabulary& vocab) {
    return count_transform(tokenize(cleaned_text), vocab);
}

TfidfModel fit_tfidf(const std::vector<SparseVector>& counts,
                     std::uint32_t dimension) {
    if (counts.empty())
        throw DataError("cannot fit tf-idf weights on an empty corpus");
    std::vector<std::int64_t> df(dimension, 0);
    for (const SparseVector& row : counts) {
        for (std::size_t k = 0; k < row.indices.size(); ++k) {
            if (row.indices[k] >= dimension)
                throw DataError("count vector index " +
                                std::to_string(row.indices[k]) +
                                " out of range for dimension " +
                                std::to_string(dimension));
            if (row.values[k] > 0.0) df[row.indices[k]] += 1;
        }
    }
    TfidfModel model;
    model.dimension = dimension;
    model.idf.resize(dimension);
    const double n_docs = static_cast<double>(counts.size());
    for (std::uint32_t t = 0; t < dimension; ++t)
        model.idf[t] =
            std::log((1.0 + n_docs) / (1.0 + static_cast<double>(df[t]))) + 1.0;
    return model;
}

SparseVector TfidfModel::transform(const SparseVector& counts) const {
    SparseVector out;
    out.indices = counts.indices;
    out.values.resize(counts.values.size());
    for (std::size_t k = 0; k < counts.indices.size(); ++k) {
        if (counts.indices[k] >= dimension)
            throw DataError("count vector index " +
                            std::to_string(counts.indices[k]) +
                            " out of range for dimension " +
                            std::to_string(dimension));
        out.values[k] = counts.values[k] * idf[counts.indices[k]];
    }
    double norm = out.l2_norm();
    if (norm > 0.0) out.scale(1.0 / norm);
    return out;
}

void save_vocabulary(const Vocabulary& vocab, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << "hopeclf-vocabulary v1\n";
    for (std::size_t i = 0; i < vocab.terms.size(); ++i)
        out << vocab.terms[i] << '\t' << i << '\n';
}

Vocabulary load_vocabulary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open vocabulary: " + path);
    Vocabulary vocab;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1) {
            if (line != "hopeclf-vocabulary v1")
                throw DataError(path + ": missing vocabulary version header");
            continue;
        }
        if (line.empty()) continue;
        std::size_t tab = line.rfind('\t');
        if (tab == std::string::npos)
            throw DataError(path + ": line " + std::to_string(lineno) +
                            ": expected \"term<TAB>index\"");
        std::string term = line.substr(0, tab);
        std::size_t idx = 0;
        try {
            idx = std::stoul(line.substr(tab + 1));
        } catch (const std::exception&) {
            throw DataError(path + ": line " + std::to_string(lineno) +
                            ": bad index");
        }
        if (idx != vocab.terms.size())
            throw DataError(path + ": line " + std::to_string(lineno) +
                            ": indices must be consecutive from 0");
        if (!vocab.terms.empty() && !(vocab.terms.back() < term))
            throw DataError(path + ": line " + std::to_string(lineno) +
                            ": terms must be in increasing lexicographic order");
        vocab.index.emplace(term, static_cast<std::uint32_t>(idx));
        vocab.terms.push_back(std::move(term));
    }
    if (vocab.terms.empty())
        throw DataError(path + ": vocabulary is empty");
    return vocab;
}

} // namespace hopeclf
