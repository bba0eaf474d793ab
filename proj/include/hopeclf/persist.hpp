#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "hopeclf/features.hpp"
#include "hopeclf/linear.hpp"
#include "hopeclf/nb.hpp"
#include "hopeclf/preprocess.hpp"
#include "hopeclf/svm.hpp"

namespace hopeclf {

enum class VectorizerKind { Count, Tfidf };
enum class ModelKind { Nb, Logreg, SvmLinear, SvmRbf };

const char* vectorizer_name(VectorizerKind v); // "count" / "tfidf"
const char* model_name(ModelKind m); // "nb" / "logreg" / "svm-linear" / "svm-rbf"
VectorizerKind parse_vectorizer(const std::string& name);
ModelKind parse_model(const std::string& name);

// Everything needed to score raw text: cleaning configuration, vocabulary,
// optional tf-idf weights, and exactly one trained model.
struct ModelBundle {
    int version = 1;
    CleaningConfig cleaning;
    Vocabulary vocabulary;
    std::optional<TfidfModel> tfidf;

    std::optional<NBModel> nb;
    std::optional<LinearModel> linear;
    std::optional<SvmModel> svm;

    VectorizerKind vectorizer() const {
        return tfidf ? VectorizerKind::Tfidf : VectorizerKind::Count;
    }
    ModelKind model_kind() const; // throws DataError unless exactly one model set
};

// Serializes to the versioned sectioned text format: fixed section order,
// decimal reals at full precision, and a trailing FNV-1a 64 checksum over
// every preceding byte. Identical bundles produce identical bytes.
// Throws DataError when dimensions disagree before anything is written.
std::string serialize_bundle(const ModelBundle& bundle);
void save_bundle(const ModelBundle& bundle, const std::string& path);

// Parses and validates: version, checksum, and structural invariants
// (vocabulary order, idf floor, likelihood normalization, multiplier bounds)
// are checked separately so failures name the actual problem.
ModelBundle deserialize_bundle(const std::string& data);
ModelBundle load_bundle(const std::string& path);

std::uint64_t fnv1a64(std::string_view data);

} // namespace hopeclf
