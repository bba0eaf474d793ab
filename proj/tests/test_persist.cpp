#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <string>

#include "hopeclf/errors.hpp"
#include "hopeclf/harness.hpp"
#include "hopeclf/persist.hpp"
#include "support.hpp"

using namespace hopeclf;

namespace {

Dataset tiny_train() {
    Dataset ds;
    ds.split = Split::Train;
    const char* texts[] = {"hope and light will win",  "stay strong my friend",
                           "bright days are coming",   "life finds a way",
                           "nothing works anymore",    "this is truly awful",
                           "dark clouds everywhere",   "pain and fear remain"};
    for (int i = 0; i < 8; ++i) {
        Document d;
        d.id = "train-" + std::to_string(i);
        d.text = texts[i];
        d.label = i < 4 ? Label::Hope : Label::NotHope;
        ds.documents.push_back(std::move(d));
    }
    return ds;
}

ModelBundle make_bundle(VectorizerKind v, ModelKind m) {
    NGramConfig ngram;
    ngram.max_n = 2;
    HyperParams hyper;
    hyper.svm_gamma = 0.5; // fixed so rbf bundles are reproducible
    return train_pipeline(tiny_train(), v, m, CleaningConfig{}, ngram, hyper);
}

// re-sign a tampered bundle so only the named invariant is broken
std::string resign(std::string text) {
    const std::string marker = "[checksum]\n";
    std::size_t pos = text.find(marker);
    REQUIRE(pos != std::string::npos);
    std::string body = text.substr(0, pos + marker.size());
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(body)));
    return body + "fnv1a64\t" + buf + "\n";
}

std::string replace_once(std::string text, const std::string& from,
                         const std::string& to) {
    std::size_t pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, from.size(), to);
    return text;
}

void check_error_contains(const std::string& data, const std::string& needle) {
    try {
        deserialize_bundle(data);
        FAIL_CHECK("expected DataError containing \"", needle, "\"");
    } catch (const DataError& e) {
        CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos,
                      "got: ", e.what());
    }
}

} // namespace

TEST_CASE("bundles round-trip byte for byte") {
    for (VectorizerKind v : {VectorizerKind::Count, VectorizerKind::Tfidf})
        for (ModelKind m : {ModelKind::Nb, ModelKind::Logreg,
                            ModelKind::SvmLinear, ModelKind::SvmRbf}) {
            CAPTURE(vectorizer_name(v));
            CAPTURE(model_name(m));
            ModelBundle bundle = make_bundle(v, m);
            CHECK(bundle.vectorizer() == v);
            CHECK(bundle.model_kind() == m);
            std::string first = serialize_bundle(bundle);
            ModelBundle loaded = deserialize_bundle(first);
            CHECK(serialize_bundle(loaded) == first);
            // the reloaded pipeline scores identically
            std::vector<std::string> probe = {"hope will win the day",
                                              "awful dark pain"};
            CHECK(bundle_predict(loaded, probe) ==
                  bundle_predict(bundle, probe));
            // serialization is deterministic across calls
            CHECK(serialize_bundle(bundle) == first);
        }
}

TEST_CASE("bundle file save and load") {
    testsup::TempDir dir("bundle");
    ModelBundle bundle = make_bundle(VectorizerKind::Tfidf, ModelKind::Nb);
    std::string path = dir.file("m.bundle");
    save_bundle(bundle, path);
    ModelBundle loaded = load_bundle(path);
    CHECK(serialize_bundle(loaded) == serialize_bundle(bundle));
    CHECK_THROWS_AS(load_bundle(dir.file("missing.bundle")), DataError);
}

TEST_CASE("corrupted checksum is reported as such") {
    std::string text =
        serialize_bundle(make_bundle(VectorizerKind::Count, ModelKind::Nb));
    std::string flipped = text;
    std::size_t tail = flipped.rfind('\t') + 1;
    flipped[tail] = flipped[tail] == '0' ? '1' : '0';
    check_error_contains(flipped, "checksum");
    // content edit without re-signing also trips the checksum first
    check_error_contains(replace_once(text, "alpha\t1", "alpha\t2"),
                         "checksum");
}

TEST_CASE("unknown version is reported as such") {
    std::string text =
        serialize_bundle(make_bundle(VectorizerKind::Count, ModelKind::Nb));
    std::string bumped =
        resign(replace_once(text, "hopeclf-bundle v1", "hopeclf-bundle v2"));
    check_error_contains(bumped, "version");
}

TEST_CASE("invariant violations name the problem") {
    std::string nb_text =
        serialize_bundle(make_bundle(VectorizerKind::Tfidf, ModelKind::Nb));

    SUBCASE("idf floor") {
        std::size_t i = nb_text.find("\ni\t");
        std::size_t end = nb_text.find('\n', i + 1);
        std::string line = nb_text.substr(i, end - i);
        check_error_contains(resign(replace_once(nb_text, line, "\ni\t0.5")),
                             "idf");
    }
    SUBCASE("vocabulary order") {
        // swap the first two vocabulary lines
        std::size_t a = nb_text.find("t\t");
        std::size_t a_end = nb_text.find('\n', a);
        std::size_t b_end = nb_text.find('\n', a_end + 1);
        std::string first = nb_text.substr(a, a_end - a);
        std::string second = nb_text.substr(a_end + 1, b_end - a_end - 1);
        std::string swapped = nb_text.substr(0, a) + second + "\n" + first +
                              nb_text.substr(a_end);
        check_error_contains(resign(swapped), "order");
    }
    SUBCASE("likelihoods must normalize") {
        std::size_t f = nb_text.find("\nf\t");
        std::size_t end = nb_text.find('\n', f + 1);
        std::string line = nb_text.substr(f, end - f);
        check_error_contains(
            resign(replace_once(nb_text, line, "\nf\t-0.001\t-0.001")),
            "likelihood");
    }

    std::string svm_text =
        serialize_bundle(make_bundle(VectorizerKind::Count, ModelKind::SvmLinear));
    SUBCASE("multiplier bound") {
        std::size_t v = svm_text.find("v\t");
        std::size_t tab2 = svm_text.find('\t', v + 2);
        std::string head = svm_text.substr(v, tab2 - v);
        check_error_contains(resign(replace_once(svm_text, head, "v\t99")),
                             "coefficient");
    }
}

TEST_CASE("truncated and malformed bundles") {
    std::string text =
        serialize_bundle(make_bundle(VectorizerKind::Count, ModelKind::Logreg));
    CHECK_THROWS_AS(deserialize_bundle(""), DataError);
    CHECK_THROWS_AS(deserialize_bundle("not a bundle at all\n"), DataError);
    CHECK_THROWS_AS(deserialize_bundle(text.substr(0, text.size() / 2)),
                    DataError);
    check_error_contains(resign(replace_once(text, "[model]\n", "[extra]\n")),
                         "model");
}

TEST_CASE("serialization validates dimensions up front") {
    ModelBundle bundle = make_bundle(VectorizerKind::Tfidf, ModelKind::Nb);
    bundle.tfidf->idf.pop_back();
    bundle.tfidf->dimension -= 1;
    CHECK_THROWS_AS(serialize_bundle(bundle), DataError);

    ModelBundle no_model = make_bundle(VectorizerKind::Count, ModelKind::Nb);
    no_model.nb.reset();
    CHECK_THROWS_AS(serialize_bundle(no_model), DataError);

    ModelBundle two_models = make_bundle(VectorizerKind::Count, ModelKind::Nb);
    two_models.linear = LinearModel{};
    CHECK_THROWS_AS(two_models.model_kind(), DataError);
}

TEST_CASE("kind names parse both ways") {
    CHECK(parse_model("nb") == ModelKind::Nb);
    CHECK(parse_model("logreg") == ModelKind::Logreg);
    CHECK(parse_model("svm-linear") == ModelKind::SvmLinear);
    CHECK(parse_model("svm-rbf") == ModelKind::SvmRbf);
    CHECK(parse_vectorizer("count") == VectorizerKind::Count);
    CHECK(parse_vectorizer("tfidf") == VectorizerKind::Tfidf);
    CHECK_THROWS_AS(parse_model("tree"), DataError);
    CHECK_THROWS_AS(parse_vectorizer("hashing"), DataError);
    for (ModelKind m : {ModelKind::Nb, ModelKind::Logreg, ModelKind::SvmLinear,
                        ModelKind::SvmRbf})
        CHECK(parse_model(model_name(m)) == m);
}
