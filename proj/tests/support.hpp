#pragma once

// Shared helpers for the test suites. The vectorizer oracle here is written
// independently of src/features.cpp (different containers, different control
// flow) so the two implementations can check each other.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "hopeclf/corpus.hpp"
#include "hopeclf/features.hpp"
#include "hopeclf/sparse.hpp"

namespace testsup {

// splitmix64: fixed, platform-independent stream.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, n)
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    double real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("hopeclf-test-" + tag + "-" + std::to_string(::getpid()));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const {
        return (path / name).string();
    }
};

inline void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    out << body;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- independent vectorizer oracle ----

struct OracleResult {
    std::vector<std::string> terms;
    std::vector<std::map<std::string, double>> counts;
    std::map<std::string, double> idf;
    std::vector<std::map<std::string, double>> tfidf;
};

inline std::vector<std::string> oracle_split(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        bool alnum = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                     (c >= '0' && c <= '9');
        if (alnum) {
            cur += c;
        } else {
            if (cur.size() >= 2) out.push_back(cur);
            cur.clear();
        }
    }
    if (cur.size() >= 2) out.push_back(cur);
    return out;
}

inline OracleResult oracle_vectorize(const std::vector<std::string>& docs,
                                     std::uint32_t min_n, std::uint32_t max_n,
                                     std::uint32_t min_df,
                                     std::optional<std::uint32_t> max_features) {
    OracleResult res;
    std::vector<std::map<std::string, double>> raw;
    std::map<std::string, std::uint64_t> df;
    std::map<std::string, double> total;
    for (const std::string& doc : docs) {
        std::vector<std::string> toks = oracle_split(doc);
        std::map<std::string, double> bag;
        for (std::uint32_t n = min_n; n <= max_n && n <= toks.size(); ++n)
            for (std::size_t i = 0; i + n <= toks.size(); ++i) {
                std::string gram = toks[i];
                for (std::uint32_t k = 1; k < n; ++k)
                    gram += " " + toks[i + k];
                bag[gram] += 1.0;
            }
        for (const auto& [term, count] : bag) {
            df[term] += 1;
            total[term] += count;
        }
        raw.push_back(std::move(bag));
    }

    std::set<std::string> kept;
    for (const auto& [term, d] : df)
        if (d >= min_df) kept.insert(term);
    if (max_features && kept.size() > *max_features) {
        std::vector<std::string> ranked(kept.begin(), kept.end());
        std::sort(ranked.begin(), ranked.end(),
                  [&](const std::string& a, const std::string& b) {
                      if (total[a] != total[b]) return total[a] > total[b];
                      return a < b;
                  });
        ranked.resize(*max_features);
        kept = std::set<std::string>(ranked.begin(), ranked.end());
    }
    res.terms.assign(kept.begin(), kept.end());

    for (const auto& bag : raw) {
        std::map<std::string, double> row;
        for (const auto& [term, count] : bag)
            if (kept.count(term)) row[term] = count;
        res.counts.push_back(std::move(row));
    }

    const double n_docs = static_cast<double>(docs.size());
    for (const std::string& term : res.terms) {
        std::uint64_t d = 0;
        for (const auto& row : res.counts)
            if (row.count(term)) ++d;
        res.idf[term] =
            std::log((1.0 + n_docs) / (1.0 + static_cast<double>(d))) + 1.0;
    }

    for (const auto& row : res.counts) {
        std::map<std::string, double> weighted;
        double sumsq = 0.0;
        for (const auto& [term, count] : row) {
            double v = count * res.idf.at(term);
            weighted[term] = v;
            sumsq += v * v;
        }
        if (sumsq > 0.0) {
            double norm = std::sqrt(sumsq);
            for (auto& [term, v] : weighted) v /= norm;
        }
        res.tfidf.push_back(std::move(weighted));
    }
    return res;
}

inline std::map<std::string, double>
sparse_to_terms(const hopeclf::SparseVector& v,
                const hopeclf::Vocabulary& vocab) {
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < v.indices.size(); ++i)
        out[vocab.terms[v.indices[i]]] = v.values[i];
    return out;
}

// Random cleaned documents over a tiny alphabet so terms collide across docs.
inline std::vector<std::string> random_corpus(Rng& rng, std::size_t min_docs,
                                              std::size_t max_docs) {
    std::size_t n_docs = min_docs + rng.below(max_docs - min_docs + 1);
    std::vector<std::string> docs;
    for (std::size_t d = 0; d < n_docs; ++d) {
        std::size_t len = rng.below(13);
        std::string doc;
        for (std::size_t t = 0; t < len; ++t) {
            std::size_t wlen = 2 + rng.below(4);
            std::string word;
            for (std::size_t k = 0; k < wlen; ++k)
                word += static_cast<char>('a' + rng.below(5));
            if (!doc.empty()) doc += ' ';
            doc += word;
        }
        docs.push_back(doc);
    }
    // make sure at least one term survives any min_df <= 2
    if (docs.size() >= 2) {
        for (int i = 0; i < 2; ++i)
            docs[i] = docs[i].empty() ? "aa" : docs[i] + " aa";
    }
    return docs;
}

// ---- synthetic classification corpus ----
//
// Class signal comes from disjoint keyword pools; the prefixes keep every
// token out of the stopword list and away from every lemmatizer rule.

struct SyntheticCorpus {
    std::vector<std::string> texts;
    std::vector<hopeclf::Label> labels;
};

inline SyntheticCorpus make_synthetic(std::uint64_t seed, std::size_t per_class) {
    static const char* const kSuffixes[] = {"ab", "ac", "af", "ak", "am",
                                            "ap", "ar", "at", "ob", "oc"};
    std::vector<std::string> shared, hope, nothope;
    for (const char* s : kSuffixes) {
        shared.push_back(std::string("com") + s);
        hope.push_back(std::string("pos") + s);
        nothope.push_back(std::string("neg") + s);
    }
    Rng rng(seed);
    SyntheticCorpus corpus;
    for (std::size_t i = 0; i < 2 * per_class; ++i) {
        hopeclf::Label label =
            i < per_class ? hopeclf::Label::Hope : hopeclf::Label::NotHope;
        const std::vector<std::string>& pool =
            label == hopeclf::Label::Hope ? hope : nothope;
        std::size_t len = 8 + rng.below(7);
        std::string text;
        for (std::size_t t = 0; t < len; ++t) {
            const std::vector<std::string>& src =
                rng.below(2) == 0 ? shared : pool;
            if (!text.empty()) text += ' ';
            text += src[rng.below(src.size())];
        }
        corpus.texts.push_back(std::move(text));
        corpus.labels.push_back(label);
    }
    // deterministic shuffle
    for (std::size_t i = corpus.texts.size(); i > 1; --i) {
        std::size_t j = rng.below(i);
        std::swap(corpus.texts[i - 1], corpus.texts[j]);
        std::swap(corpus.labels[i - 1], corpus.labels[j]);
    }
    return corpus;
}

inline std::string to_csv(const SyntheticCorpus& corpus, std::size_t begin,
                          std::size_t end, bool with_labels = true) {
    std::ostringstream out;
    out << (with_labels ? "text,label\n" : "text\n");
    for (std::size_t i = begin; i < end; ++i) {
        out << corpus.texts[i];
        if (with_labels)
            out << ',' << hopeclf::label_name(corpus.labels[i]);
        out << '\n';
    }
    return out.str();
}

} // namespace testsup
