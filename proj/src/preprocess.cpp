#include "hopeclf/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <sys/stat.h>

namespace hopeclf {

namespace {

struct CodePointRange {
    std::uint32_t first;
    std::uint32_t last;
};

#include "pictographic_ranges.inc"

bool is_pictographic(std::uint32_t cp) {
    std::size_t lo = 0, hi = std::size(kPictographicRanges);
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (cp < kPictographicRanges[mid].first) hi = mid;
        else if (cp > kPictographicRanges[mid].last) lo = mid + 1;
        else return true;
    }
    return false;
}

constexpr std::uint32_t kZwj = 0x200D;

// Code points dropped by strip_emoji on their own: pictographs, variation
// selectors, and skin tone modifiers.
bool is_emoji_component(std::uint32_t cp) {
    if (cp == 0xFE0E || cp == 0xFE0F) return true;              // variation selectors
    if (cp >= 0x1F3FB && cp <= 0x1F3FF) return true;            // skin tones
    return is_pictographic(cp);
}

// Lenient UTF-8 decoder: an invalid byte becomes a unit carrying its own
// value, flagged raw so re-encoding can pass it through untouched.
struct CodeUnit {
    std::uint32_t cp;
    bool raw;
};

std::vector<CodeUnit> decode_utf8(const std::string& text) {
    std::vector<CodeUnit> cps;
    cps.reserve(text.size());
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        unsigned char b0 = static_cast<unsigned char>(text[i]);
        std::size_t len = 1;
        if (b0 >= 0xF0) len = 4;
        else if (b0 >= 0xE0) len = 3;
        else if (b0 >= 0xC0) len = 2;
        if (len > 1 && i + len <= n) {
            std::uint32_t acc = b0 & (0x7F >> len);
            bool ok = true;
            for (std::size_t k = 1; k < len; ++k) {
                unsigned char bk = static_cast<unsigned char>(text[i + k]);
                if ((bk & 0xC0) != 0x80) {
                    ok = false;
                    break;
                }
                acc = (acc << 6) | (bk & 0x3F);
            }
            if (ok) {
                cps.push_back({acc, false});
                i += len;
                continue;
            }
        }
        cps.push_back({b0, b0 >= 0x80});
        ++i;
    }
    return cps;
}

void encode_utf8(std::uint32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool is_word_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_';
}

bool matches_icase(const std::string& text, std::size_t pos,
                   const char* token) {
    for (std::size_t k = 0; token[k]; ++k) {
        if (pos + k >= text.size()) return false;
        char c = text[pos + k];
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        if (c != token[k]) return false;
    }
    return true;
}

bool file_exists(const std::string& path) {
    struct stat st {};
    return ::stat(path.c_str(), &st) == 0 && S_ISREG(st.st_mode);
}

std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

} // namespace

std::string strip_urls(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        bool url = matches_icase(text, i, "http://") ||
                   matches_icase(text, i, "https://") ||
                   matches_icase(text, i, "ftp://") ||
                   matches_icase(text, i, "www.");
        if (url) {
            while (i < n && !std::isspace(static_cast<unsigned char>(text[i])))
                ++i;
        } else {
            out.push_back(text[i]);
            ++i;
        }
    }
    return out;
}

std::string strip_placeholders(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        char c = text[i];
        if (c == '#') {
            std::size_t j = i + 1;
            while (j < n && is_word_char(text[j])) ++j;
            if (j > i + 1 && j < n && text[j] == '#') {
                i = j + 1; // drop "#WORD#"
                continue;
            }
        } else if (c == '[' || c == '{') {
            char close = c == '[' ? ']' : '}';
            std::size_t j = i + 1;
            while (j < n && text[j] != close && text[j] != '\n') ++j;
            if (j < n && text[j] == close) {
                i = j + 1; // drop bracketed span on one line
                continue;
            }
        }
        out.push_back(c);
        ++i;
    }
    return out;
}

std::string strip_emoji(const std::string& text) {
    std::vector<CodeUnit> cps = decode_utf8(text);
    const std::size_t n = cps.size();
    std::vector<bool> base(n, false);
    for (std::size_t i = 0; i < n; ++i)
        base[i] = !cps[i].raw && is_emoji_component(cps[i].cp);
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < n; ++i) {
        bool drop = base[i];
        if (!drop && !cps[i].raw && cps[i].cp == kZwj) {
            // A joiner goes with whatever it was gluing together.
            drop = (i > 0 && base[i - 1]) || (i + 1 < n && base[i + 1]);
        }
        if (drop) continue;
        if (cps[i].raw)
            out.push_back(static_cast<char>(cps[i].cp));
        else
            encode_utf8(cps[i].cp, out);
    }
    return out;
}

std::string lowercase_ascii(const std::string& text) {
    std::string out = text;
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

std::string strip_numbers(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text)
        if (c < '0' || c > '9') out.push_back(c);
    return out;
}

std::string strip_special(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') ||
                    std::isspace(static_cast<unsigned char>(c));
        if (keep) out.push_back(c);
    }
    return out;
}

std::vector<std::string> split_whitespace(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) {
                tokens.push_back(std::move(cur));
                cur.clear();
            }
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const StopwordList& stopwords) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const std::string& t : tokens)
        if (!stopwords.contains(t)) out.push_back(t);
    return out;
}

const std::vector<SuffixRule>& default_suffix_rules() {
    // Ordered; a rule fires only when at least min_stem characters precede
    // the suffix, otherwise later rules get a chance. The ss/us/is entries
    // are identities protecting words like "bless", "status", "basis".
    static const std::vector<SuffixRule> rules = {
        {"ies", "y", 3},  {"sses", "ss", 2}, {"shes", "sh", 2},
        {"ches", "ch", 2}, {"xes", "x", 2},   {"oes", "o", 2},
        {"ss", "ss", 1},  {"us", "us", 1},   {"is", "is", 1},
        {"s", "", 3},     {"ing", "", 3},    {"ed", "", 3},
    };
    return rules;
}

std::string LemmaTable::lemma_of(const std::string& token) const {
    // Apply dictionary-then-rules passes until the token stops changing, so
    // outputs are themselves lemmas (e.g. "blessings" -> "blessing" ->
    // "bless"). Dictionary values are fixed points, which bounds the loop.
    std::string cur = token;
    for (std::size_t pass = 0; pass < 32; ++pass) {
        auto hit = dictionary.find(cur);
        if (hit != dictionary.end()) {
            if (hit->second == cur) return cur;
            cur = hit->second;
            continue;
        }
        bool changed = false;
        for (const SuffixRule& rule : rules) {
            if (cur.size() < rule.suffix.size()) continue;
            std::size_t stem_len = cur.size() - rule.suffix.size();
            if (stem_len < rule.min_stem) continue;
            if (cur.compare(stem_len, rule.suffix.size(), rule.suffix) != 0)
                continue;
            std::string next = cur.substr(0, stem_len) + rule.replacement;
            if (next != cur) {
                cur = std::move(next);
                changed = true;
            }
            break; // first matching rule decides this pass
        }
        if (!changed) return cur;
    }
    return cur;
}

std::vector<std::string> lemmatize(const std::vector<std::string>& tokens,
                                   const LemmaTable& table) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const std::string& t : tokens) out.push_back(table.lemma_of(t));
    return out;
}

StopwordList load_stopwords(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open stopword list: " + path);
    StopwordList list;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1) {
            if (line.rfind("hopeclf-stopwords v", 0) != 0)
                throw DataError(path + ": missing stopword version header");
            list.version = line.substr(std::string("hopeclf-stopwords ").size());
            continue;
        }
        if (line.empty() || line[0] == '#') continue;
        for (char c : line)
            if (!(c >= 'a' && c <= 'z'))
                throw DataError(path + ": line " + std::to_string(lineno) +
                                ": stopwords must be lowercase a-z, got \"" +
                                line + "\"");
        list.words.insert(line);
    }
    if (list.words.empty())
        throw DataError(path + ": stopword list is empty");
    return list;
}

LemmaTable load_lemma_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open lemma table: " + path);
    LemmaTable table;
    table.rules = default_suffix_rules();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1) {
            if (line.rfind("hopeclf-lemmas v", 0) != 0)
                throw DataError(path + ": missing lemma table version header");
            table.version = line.substr(std::string("hopeclf-lemmas ").size());
            continue;
        }
        if (line.empty() || line[0] == '#') continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
            throw DataError(path + ": line " + std::to_string(lineno) +
                            ": expected \"inflected<TAB>lemma\"");
        std::string key = line.substr(0, tab);
        std::string value = line.substr(tab + 1);
        auto [it, inserted] = table.dictionary.emplace(key, value);
        if (!inserted && it->second != value)
            throw DataError(path + ": line " + std::to_string(lineno) +
                            ": duplicate entry for \"" + key + "\"");
    }
    return table;
}

std::string default_data_dir() {
#ifdef HOPECLF_DATA_DIR
    return HOPECLF_DATA_DIR;
#else
    return "data";
#endif
}

std::string resolve_resource(const std::string& id) {
    if (file_exists(id)) return id;
    std::string bundled = default_data_dir() + "/" + id;
    if (file_exists(bundled)) return bundled;
    throw DataError("cannot find resource \"" + id + "\" (also tried " +
                    bundled + ")");
}

CleaningResources load_resources(const CleaningConfig& config) {
    CleaningResources res;
    if (config.remove_stopwords)
        res.stopwords = load_stopwords(resolve_resource(config.stopword_list_id));
    if (config.lemmatize)
        res.lemmas = load_lemma_table(resolve_resource(config.lemma_table_id));
    else
        res.lemmas.rules = default_suffix_rules();
    return res;
}

std::string clean(const std::string& text, const CleaningConfig& config,
                  const CleaningResources& resources) {
    std::string working = text;
    if (config.strip_urls) working = strip_urls(working);
    if (config.strip_placeholders) working = strip_placeholders(working);
    if (config.strip_emoji) working = strip_emoji(working);
    if (config.lowercase) working = lowercase_ascii(working);
    if (config.strip_numbers) working = strip_numbers(working);
    if (config.strip_special) working = strip_special(working);
    std::vector<std::string> tokens = split_whitespace(working);
    if (config.remove_stopwords)
        tokens = remove_stopwords(tokens, resources.stopwords);
    if (config.lemmatize) {
        tokens = lemmatize(tokens, resources.lemmas);
        // A lemma can itself be a stopword ("done" -> "do"); filter again so
        // cleaning twice equals cleaning once.
        if (config.remove_stopwords)
            tokens = remove_stopwords(tokens, resources.stopwords);
    }
    return join_tokens(tokens);
}

Dataset clean_dataset(const Dataset& dataset, const CleaningConfig& config,
                      const CleaningResources& resources) {
    Dataset out = dataset;
    for (Document& d : out.documents) d.text = clean(d.text, config, resources);
    return out;
}

} // namespace hopeclf
