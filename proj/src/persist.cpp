#include "hopeclf/persist.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hopeclf/metrics.hpp" // format_real

namespace hopeclf {

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

const char* vectorizer_name(VectorizerKind v) {
    return v == VectorizerKind::Count ? "count" : "tfidf";
}

const char* model_name(ModelKind m) {
    switch (m) {
    case ModelKind::Nb: return "nb";
    case ModelKind::Logreg: return "logreg";
    case ModelKind::SvmLinear: return "svm-linear";
    default: return "svm-rbf";
    }
}

VectorizerKind parse_vectorizer(const std::string& name) {
    if (name == "count") return VectorizerKind::Count;
    if (name == "tfidf") return VectorizerKind::Tfidf;
    throw DataError("unknown vectorizer: \"" + name +
                    "\" (expected count or tfidf)");
}

ModelKind parse_model(const std::string& name) {
    if (name == "nb") return ModelKind::Nb;
    if (name == "logreg") return ModelKind::Logreg;
    if (name == "svm-linear") return ModelKind::SvmLinear;
    if (name == "svm-rbf") return ModelKind::SvmRbf;
    throw DataError("unknown model: \"" + name +
                    "\" (expected nb, logreg, svm-linear or svm-rbf)");
}

ModelKind ModelBundle::model_kind() const {
    int present = (nb ? 1 : 0) + (linear ? 1 : 0) + (svm ? 1 : 0);
    if (present != 1)
        throw DataError("bundle must contain exactly one model, has " +
                        std::to_string(present));
    if (nb) return ModelKind::Nb;
    if (linear)
        return linear->kind == LinearKind::Logistic ? ModelKind::Logreg
                                                    : ModelKind::SvmLinear;
    return svm->kernel.kind == KernelKind::Linear ? ModelKind::SvmLinear
                                                  : ModelKind::SvmRbf;
}

namespace {

constexpr char kMagic[] = "hopeclf-bundle v1";

void validate_for_save(const ModelBundle& b) {
    b.model_kind(); // exactly one model
    const std::size_t dim = b.vocabulary.size();
    if (dim == 0) throw DataError("bundle vocabulary is empty");
    for (std::size_t i = 0; i < b.vocabulary.terms.size(); ++i) {
        const std::string& t = b.vocabulary.terms[i];
        if (t.find('\t') != std::string::npos ||
            t.find('\n') != std::string::npos)
            throw DataError("vocabulary term contains control characters");
        if (i > 0 && !(b.vocabulary.terms[i - 1] < t))
            throw DataError("vocabulary terms are not in lexicographic order");
    }
    if (b.tfidf && b.tfidf->dimension != dim)
        throw DataError("tf-idf dimension " +
                        std::to_string(b.tfidf->dimension) +
                        " does not match vocabulary size " +
                        std::to_string(dim));
    if (b.nb) {
        if (b.nb->dimension != dim)
            throw DataError("model dimension " +
                            std::to_string(b.nb->dimension) +
                            " does not match vocabulary size " +
                            std::to_string(dim));
        for (const auto& row : b.nb->log_likelihood)
            if (row.size() != dim)
                throw DataError("model likelihood table has wrong width");
    }
    if (b.linear && b.linear->weights.size() != dim)
        throw DataError("model dimension " +
                        std::to_string(b.linear->weights.size()) +
                        " does not match vocabulary size " +
                        std::to_string(dim));
    if (b.svm) {
        if (b.svm->support_vectors.size() != b.svm->dual_coef.size())
            throw DataError("support vector/coefficient count mismatch");
        for (std::size_t k = 0; k < b.svm->support_vectors.size(); ++k) {
            const SparseVector& sv = b.svm->support_vectors[k];
            if (!sv.well_formed())
                throw DataError("support vector " + std::to_string(k) +
                                " is malformed");
            if (!sv.empty() && sv.max_index() >= dim)
                throw DataError("support vector index out of range");
            double a = std::abs(b.svm->dual_coef[k]);
            if (a == 0.0 || a > b.svm->c + 1e-9)
                throw DataError("dual coefficient " + std::to_string(k) +
                                " outside (0, C]");
        }
    }
}

std::string bool_str(bool v) { return v ? "1" : "0"; }

} // namespace

std::string serialize_bundle(const ModelBundle& b) {
    validate_for_save(b);
    std::ostringstream out;
    out << kMagic << '\n';

    const CleaningConfig& cl = b.cleaning;
    out << "[cleaning]\n";
    out << "lowercase\t" << bool_str(cl.lowercase) << '\n';
    out << "strip_urls\t" << bool_str(cl.strip_urls) << '\n';
    out << "strip_emoji\t" << bool_str(cl.strip_emoji) << '\n';
    out << "strip_placeholders\t" << bool_str(cl.strip_placeholders) << '\n';
    out << "strip_numbers\t" << bool_str(cl.strip_numbers) << '\n';
    out << "strip_special\t" << bool_str(cl.strip_special) << '\n';
    out << "remove_stopwords\t" << bool_str(cl.remove_stopwords) << '\n';
    out << "lemmatize\t" << bool_str(cl.lemmatize) << '\n';
    out << "stopword_list_id\t" << cl.stopword_list_id << '\n';
    out << "lemma_table_id\t" << cl.lemma_table_id << '\n';

    const NGramConfig& ng = b.vocabulary.config;
    out << "[ngram]\n";
    out << "min_n\t" << ng.min_n << '\n';
    out << "max_n\t" << ng.max_n << '\n';
    out << "min_df\t" << ng.min_df << '\n';
    out << "max_features\t";
    if (ng.max_features) out << *ng.max_features;
    else out << "none";
    out << '\n';

    out << "[vocabulary]\n";
    out << "size\t" << b.vocabulary.size() << '\n';
    for (const std::string& term : b.vocabulary.terms)
        out << "t\t" << term << '\n';

    if (b.tfidf) {
        out << "[tfidf]\n";
        out << "dimension\t" << b.tfidf->dimension << '\n';
        for (double v : b.tfidf->idf) out << "i\t" << format_real(v) << '\n';
    }

    out << "[model]\n";
    if (b.nb) {
        out << "kind\tnb\n";
        out << "alpha\t" << format_real(b.nb->alpha) << '\n';
        out << "dimension\t" << b.nb->dimension << '\n';
        out << "prior\t" << format_real(b.nb->log_prior[0]) << '\t'
            << format_real(b.nb->log_prior[1]) << '\n';
        for (std::uint32_t t = 0; t < b.nb->dimension; ++t)
            out << "f\t" << format_real(b.nb->log_likelihood[0][t]) << '\t'
                << format_real(b.nb->log_likelihood[1][t]) << '\n';
    } else if (b.linear) {
        out << "kind\tlinear\n";
        out << "linear_kind\t"
            << (b.linear->kind == LinearKind::Logistic ? "logistic"
                                                       : "svm-linear")
            << '\n';
        out << "c\t" << format_real(b.linear->c) << '\n';
        out << "bias\t" << format_real(b.linear->bias) << '\n';
        out << "dimension\t" << b.linear->weights.size() << '\n';
        for (double w : b.linear->weights)
            out << "w\t" << format_real(w) << '\n';
    } else {
        out << "kind\tsvm\n";
        out << "kernel\t"
            << (b.svm->kernel.kind == KernelKind::Linear ? "linear" : "rbf")
            << '\n';
        if (b.svm->kernel.kind == KernelKind::Rbf)
            out << "gamma\t" << format_real(b.svm->kernel.gamma) << '\n';
        out << "c\t" << format_real(b.svm->c) << '\n';
        out << "bias\t" << format_real(b.svm->bias) << '\n';
        out << "support_vectors\t" << b.svm->support_vectors.size() << '\n';
        for (std::size_t k = 0; k < b.svm->support_vectors.size(); ++k) {
            const SparseVector& sv = b.svm->support_vectors[k];
            out << "v\t" << format_real(b.svm->dual_coef[k]) << '\t'
                << sv.nnz();
            for (std::size_t e = 0; e < sv.nnz(); ++e)
                out << '\t' << sv.indices[e] << '\t'
                    << format_real(sv.values[e]);
            out << '\n';
        }
    }

    out << "[checksum]\n";
    std::string body = out.str();
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(body)));
    body += "fnv1a64\t";
    body += hex;
    body += '\n';
    return body;
}

void save_bundle(const ModelBundle& bundle, const std::string& path) {
    std::string data = serialize_bundle(bundle);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << data;
    if (!out) throw DataError("failed writing bundle to " + path);
}

namespace {

// Sequential line reader with context-carrying errors.
class LineReader {
public:
    explicit LineReader(const std::string& data) {
        std::istringstream in(data);
        std::string line;
        while (std::getline(in, line)) lines_.push_back(line);
    }

    bool done() const { return pos_ >= lines_.size(); }

    const std::string& peek() const {
        if (done()) throw DataError("bundle truncated at line " +
                                    std::to_string(pos_ + 1));
        return lines_[pos_];
    }

    std::string next() {
        std::string line = peek();
        ++pos_;
        return line;
    }

    std::size_t lineno() const { return pos_; }

private:
    std::vector<std::string> lines_;
    std::size_t pos_ = 0;
};

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            parts.push_back(line.substr(start));
            break;
        }
        parts.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return parts;
}

[[noreturn]] void bad_line(const LineReader& reader, const std::string& what) {
    throw DataError("bundle line " + std::to_string(reader.lineno() + 1) +
                    ": " + what);
}

std::vector<std::string> expect_kv(LineReader& reader, const std::string& key,
                                   std::size_t n_values) {
    std::vector<std::string> parts = split_tabs(reader.peek());
    if (parts.empty() || parts[0] != key)
        bad_line(reader, "expected \"" + key + "\" entry");
    if (parts.size() != n_values + 1)
        bad_line(reader, "\"" + key + "\" entry has wrong field count");
    reader.next();
    return {parts.begin() + 1, parts.end()};
}

void expect_section(LineReader& reader, const std::string& name) {
    if (reader.peek() != "[" + name + "]")
        bad_line(reader, "expected section [" + name + "]");
    reader.next();
}

double parse_real(const LineReader& reader, const std::string& text) {
    char* end = nullptr;
    double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0' || !std::isfinite(v))
        bad_line(reader, "bad real number \"" + text + "\"");
    return v;
}

std::uint64_t parse_uint(const LineReader& reader, const std::string& text) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (end == text.c_str() || *end != '\0')
        bad_line(reader, "bad integer \"" + text + "\"");
    return v;
}

bool parse_bool(const LineReader& reader, const std::string& text) {
    if (text == "1") return true;
    if (text == "0") return false;
    bad_line(reader, "bad boolean \"" + text + "\"");
}

void validate_loaded(const ModelBundle& b) {
    const std::size_t dim = b.vocabulary.size();
    if (b.tfidf) {
        for (double v : b.tfidf->idf)
            if (v < 1.0 - 1e-12)
                throw DataError("bundle invariant violated: idf below 1");
    }
    if (b.nb) {
        for (int c = 0; c < kNumLabels; ++c) {
            double sum = 0.0;
            for (double ll : b.nb->log_likelihood[c]) sum += std::exp(ll);
            if (std::abs(sum - 1.0) > 1e-9)
                throw DataError(
                    "bundle invariant violated: class likelihoods do not "
                    "normalize (sum " +
                    format_real(sum) + ")");
        }
    }
    if (b.svm) {
        for (double coef : b.svm->dual_coef) {
            double a = std::abs(coef);
            if (a == 0.0 || a > b.svm->c + 1e-9)
                throw DataError(
                    "bundle invariant violated: dual coefficient outside "
                    "(0, C]");
        }
        for (const SparseVector& sv : b.svm->support_vectors)
            if (!sv.empty() && sv.max_index() >= dim)
                throw DataError(
                    "bundle invariant violated: support vector index out of "
                    "range");
    }
}

} // namespace

ModelBundle deserialize_bundle(const std::string& data) {
    // Checksum first: the last line covers everything before it.
    std::size_t marker = data.rfind("fnv1a64\t");
    if (marker == std::string::npos || data.empty() || data.back() != '\n')
        throw DataError("bundle has no checksum line");
    std::string stored = data.substr(marker + 8);
    if (!stored.empty() && stored.back() == '\n') stored.pop_back();
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(
                      fnv1a64(std::string_view(data).substr(0, marker))));
    if (stored != hex)
        throw DataError("bundle checksum mismatch: stored " + stored +
                        ", computed " + hex);

    LineReader reader(data.substr(0, marker));
    std::string magic = reader.next();
    if (magic != kMagic) {
        if (magic.rfind("hopeclf-bundle v", 0) == 0)
            throw DataError("unsupported bundle version \"" + magic + "\"");
        throw DataError("not a model bundle (bad header line)");
    }

    ModelBundle b;
    expect_section(reader, "cleaning");
    CleaningConfig& cl = b.cleaning;
    cl.lowercase = parse_bool(reader, expect_kv(reader, "lowercase", 1)[0]);
    cl.strip_urls = parse_bool(reader, expect_kv(reader, "strip_urls", 1)[0]);
    cl.strip_emoji = parse_bool(reader, expect_kv(reader, "strip_emoji", 1)[0]);
    cl.strip_placeholders =
        parse_bool(reader, expect_kv(reader, "strip_placeholders", 1)[0]);
    cl.strip_numbers =
        parse_bool(reader, expect_kv(reader, "strip_numbers", 1)[0]);
    cl.strip_special =
        parse_bool(reader, expect_kv(reader, "strip_special", 1)[0]);
    cl.remove_stopwords =
        parse_bool(reader, expect_kv(reader, "remove_stopwords", 1)[0]);
    cl.lemmatize = parse_bool(reader, expect_kv(reader, "lemmatize", 1)[0]);
    cl.stopword_list_id = expect_kv(reader, "stopword_list_id", 1)[0];
    cl.lemma_table_id = expect_kv(reader, "lemma_table_id", 1)[0];

    expect_section(reader, "ngram");
    NGramConfig& ng = b.vocabulary.config;
    ng.min_n =
        static_cast<std::uint32_t>(parse_uint(reader, expect_kv(reader, "min_n", 1)[0]));
    ng.max_n =
        static_cast<std::uint32_t>(parse_uint(reader, expect_kv(reader, "max_n", 1)[0]));
    ng.min_df =
        static_cast<std::uint32_t>(parse_uint(reader, expect_kv(reader, "min_df", 1)[0]));
    std::string maxf = expect_kv(reader, "max_features", 1)[0];
    if (maxf == "none") ng.max_features.reset();
    else
        ng.max_features =
            static_cast<std::uint32_t>(parse_uint(reader, maxf));
    ng.validate();

    expect_section(reader, "vocabulary");
    std::uint64_t vocab_size =
        parse_uint(reader, expect_kv(reader, "size", 1)[0]);
    b.vocabulary.terms.reserve(vocab_size);
    for (std::uint64_t i = 0; i < vocab_size; ++i) {
        std::vector<std::string> parts = split_tabs(reader.peek());
        if (parts.size() != 2 || parts[0] != "t")
            bad_line(reader, "expected \"t\" vocabulary entry");
        if (!b.vocabulary.terms.empty() &&
            !(b.vocabulary.terms.back() < parts[1]))
            bad_line(reader, "vocabulary terms out of lexicographic order");
        b.vocabulary.terms.push_back(parts[1]);
        reader.next();
    }
    if (b.vocabulary.terms.empty())
        throw DataError("bundle vocabulary is empty");
    for (std::uint32_t i = 0; i < b.vocabulary.terms.size(); ++i)
        b.vocabulary.index.emplace(b.vocabulary.terms[i], i);

    if (reader.peek() == "[tfidf]") {
        reader.next();
        TfidfModel tfidf;
        tfidf.dimension = static_cast<std::uint32_t>(
            parse_uint(reader, expect_kv(reader, "dimension", 1)[0]));
        if (tfidf.dimension != b.vocabulary.size())
            bad_line(reader, "tf-idf dimension does not match vocabulary");
        tfidf.idf.reserve(tfidf.dimension);
        for (std::uint32_t i = 0; i < tfidf.dimension; ++i)
            tfidf.idf.push_back(
                parse_real(reader, expect_kv(reader, "i", 1)[0]));
        b.tfidf = std::move(tfidf);
    }

    expect_section(reader, "model");
    std::string kind = expect_kv(reader, "kind", 1)[0];
    const std::size_t dim = b.vocabulary.size();
    if (kind == "nb") {
        NBModel nb;
        nb.alpha = parse_real(reader, expect_kv(reader, "alpha", 1)[0]);
        nb.dimension = static_cast<std::uint32_t>(
            parse_uint(reader, expect_kv(reader, "dimension", 1)[0]));
        if (nb.dimension != dim)
            bad_line(reader, "model dimension does not match vocabulary");
        std::vector<std::string> prior = expect_kv(reader, "prior", 2);
        nb.log_prior[0] = parse_real(reader, prior[0]);
        nb.log_prior[1] = parse_real(reader, prior[1]);
        nb.log_likelihood[0].reserve(dim);
        nb.log_likelihood[1].reserve(dim);
        for (std::uint32_t t = 0; t < nb.dimension; ++t) {
            std::vector<std::string> f = expect_kv(reader, "f", 2);
            nb.log_likelihood[0].push_back(parse_real(reader, f[0]));
            nb.log_likelihood[1].push_back(parse_real(reader, f[1]));
        }
        b.nb = std::move(nb);
    } else if (kind == "linear") {
        LinearModel lin;
        std::string lk = expect_kv(reader, "linear_kind", 1)[0];
        if (lk == "logistic") lin.kind = LinearKind::Logistic;
        else if (lk == "svm-linear") lin.kind = LinearKind::SvmLinear;
        else bad_line(reader, "unknown linear kind \"" + lk + "\"");
        lin.c = parse_real(reader, expect_kv(reader, "c", 1)[0]);
        lin.bias = parse_real(reader, expect_kv(reader, "bias", 1)[0]);
        std::uint64_t wdim =
            parse_uint(reader, expect_kv(reader, "dimension", 1)[0]);
        if (wdim != dim)
            bad_line(reader, "model dimension does not match vocabulary");
        lin.weights.reserve(wdim);
        for (std::uint64_t t = 0; t < wdim; ++t)
            lin.weights.push_back(
                parse_real(reader, expect_kv(reader, "w", 1)[0]));
        b.linear = std::move(lin);
    } else if (kind == "svm") {
        SvmModel svm;
        std::string kernel = expect_kv(reader, "kernel", 1)[0];
        if (kernel == "linear") {
            svm.kernel.kind = KernelKind::Linear;
        } else if (kernel == "rbf") {
            svm.kernel.kind = KernelKind::Rbf;
            svm.kernel.gamma =
                parse_real(reader, expect_kv(reader, "gamma", 1)[0]);
        } else {
            bad_line(reader, "unknown kernel \"" + kernel + "\"");
        }
        svm.c = parse_real(reader, expect_kv(reader, "c", 1)[0]);
        svm.bias = parse_real(reader, expect_kv(reader, "bias", 1)[0]);
        std::uint64_t n_sv =
            parse_uint(reader, expect_kv(reader, "support_vectors", 1)[0]);
        for (std::uint64_t k = 0; k < n_sv; ++k) {
            std::vector<std::string> parts = split_tabs(reader.peek());
            if (parts.size() < 3 || parts[0] != "v")
                bad_line(reader, "expected \"v\" support vector entry");
            double coef = parse_real(reader, parts[1]);
            std::uint64_t nnz = parse_uint(reader, parts[2]);
            if (parts.size() != 3 + 2 * nnz)
                bad_line(reader, "support vector entry has wrong field count");
            SparseVector sv;
            for (std::uint64_t e = 0; e < nnz; ++e) {
                std::uint32_t idx = static_cast<std::uint32_t>(
                    parse_uint(reader, parts[3 + 2 * e]));
                double val = parse_real(reader, parts[4 + 2 * e]);
                if (!sv.indices.empty() && idx <= sv.indices.back())
                    bad_line(reader, "support vector indices not increasing");
                sv.push(idx, val);
            }
            svm.dual_coef.push_back(coef);
            svm.support_vectors.push_back(std::move(sv));
            reader.next();
        }
        b.svm = std::move(svm);
    } else {
        bad_line(reader, "unknown model kind \"" + kind + "\"");
    }

    expect_section(reader, "checksum");
    if (!reader.done())
        bad_line(reader, "unexpected trailing content");

    validate_loaded(b);
    return b;
}

ModelBundle load_bundle(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open bundle: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize_bundle(ss.str());
}

} // namespace hopeclf
