#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hopeclf/corpus.hpp"
#include "hopeclf/errors.hpp"
#include "hopeclf/features.hpp"
#include "hopeclf/harness.hpp"
#include "hopeclf/metrics.hpp"
#include "hopeclf/nb.hpp"
#include "hopeclf/persist.hpp"
#include "hopeclf/preprocess.hpp"

namespace py = pybind11;
using namespace hopeclf;

namespace {

// Keeps the stopword/lemma files loaded so repeated clean() calls from
// python do not reread them.
struct TextCleaner {
    CleaningConfig config;
    CleaningResources resources;

    explicit TextCleaner(CleaningConfig cfg)
        : config(std::move(cfg)), resources(load_resources(config)) {}

    std::string operator()(const std::string& text) const {
        return clean(text, config, resources);
    }
};

std::vector<std::pair<std::uint32_t, double>>
sparse_items(const SparseVector& v) {
    std::vector<std::pair<std::uint32_t, double>> out;
    out.reserve(v.indices.size());
    for (std::size_t i = 0; i < v.indices.size(); ++i)
        out.emplace_back(v.indices[i], v.values[i]);
    return out;
}

std::vector<Label> to_labels(const std::vector<int>& ys) {
    std::vector<Label> out;
    out.reserve(ys.size());
    for (int y : ys) out.push_back(label_from_index(y));
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "hope-speech classification core";

    py::register_exception<DataError>(m, "DataError");
    py::register_exception<TrainError>(m, "TrainError");

    py::enum_<Label>(m, "Label")
        .value("Hope", Label::Hope)
        .value("NotHope", Label::NotHope);
    m.def("label_name", &label_name);
    m.def("parse_label", &parse_label);

    py::class_<CleaningConfig>(m, "CleaningConfig")
        .def(py::init<>())
        .def_readwrite("lowercase", &CleaningConfig::lowercase)
        .def_readwrite("strip_urls", &CleaningConfig::strip_urls)
        .def_readwrite("strip_emoji", &CleaningConfig::strip_emoji)
        .def_readwrite("strip_placeholders", &CleaningConfig::strip_placeholders)
        .def_readwrite("strip_numbers", &CleaningConfig::strip_numbers)
        .def_readwrite("strip_special", &CleaningConfig::strip_special)
        .def_readwrite("remove_stopwords", &CleaningConfig::remove_stopwords)
        .def_readwrite("lemmatize", &CleaningConfig::lemmatize)
        .def_readwrite("stopword_list_id", &CleaningConfig::stopword_list_id)
        .def_readwrite("lemma_table_id", &CleaningConfig::lemma_table_id);

    py::class_<TextCleaner>(m, "TextCleaner")
        .def(py::init<CleaningConfig>(), py::arg("config") = CleaningConfig{})
        .def("__call__", &TextCleaner::operator());

    m.def("default_data_dir", &default_data_dir);
    m.def("tokenize", &tokenize);
    m.def(
        "ngrams",
        [](const std::vector<std::string>& tokens, std::uint32_t min_n,
           std::uint32_t max_n) {
            NGramConfig config;
            config.min_n = min_n;
            config.max_n = max_n;
            config.validate();
            return ngrams(tokens, config);
        },
        py::arg("tokens"), py::arg("min_n") = 1, py::arg("max_n") = 8);

    py::class_<NGramConfig>(m, "NGramConfig")
        .def(py::init<>())
        .def_readwrite("min_n", &NGramConfig::min_n)
        .def_readwrite("max_n", &NGramConfig::max_n)
        .def_readwrite("min_df", &NGramConfig::min_df)
        .def_readwrite("max_features", &NGramConfig::max_features);

    py::class_<SparseVector>(m, "SparseVector")
        .def(py::init<>())
        .def("items", &sparse_items)
        .def("l2_norm", &SparseVector::l2_norm)
        .def("__len__",
             [](const SparseVector& v) { return v.indices.size(); });

    py::class_<Vocabulary>(m, "Vocabulary")
        .def("__len__", &Vocabulary::size)
        .def_readonly("terms", &Vocabulary::terms)
        .def("index_of", [](const Vocabulary& v, const std::string& term) {
            std::optional<std::uint32_t> idx = v.index_of(term);
            return idx ? py::cast(*idx) : py::none().cast<py::object>();
        });

    m.def("fit_vocabulary", &fit_vocabulary, py::arg("documents"),
          py::arg("config") = NGramConfig{});
    m.def(
        "count_transform",
        [](const std::string& cleaned, const Vocabulary& vocab) {
            return count_transform(cleaned, vocab);
        },
        py::arg("cleaned_text"), py::arg("vocabulary"));

    py::class_<TfidfModel>(m, "TfidfModel")
        .def_readonly("dimension", &TfidfModel::dimension)
        .def_readonly("idf", &TfidfModel::idf)
        .def("transform", &TfidfModel::transform);
    m.def("fit_tfidf", &fit_tfidf);

    py::class_<EvalReport>(m, "EvalReport")
        .def_readonly("accuracy", &EvalReport::accuracy)
        .def_readonly("macro_precision", &EvalReport::macro_precision)
        .def_readonly("macro_recall", &EvalReport::macro_recall)
        .def_readonly("macro_f1", &EvalReport::macro_f1)
        .def_readonly("weighted_precision", &EvalReport::weighted_precision)
        .def_readonly("weighted_recall", &EvalReport::weighted_recall)
        .def_readonly("weighted_f1", &EvalReport::weighted_f1)
        .def_readonly("zero_division", &EvalReport::zero_division);
    m.def("evaluate", [](const std::vector<int>& gold,
                         const std::vector<int>& predicted) {
        return evaluate(to_labels(gold), to_labels(predicted));
    });
    m.def(
        "format_report",
        [](const EvalReport& report, const std::string& style) {
            if (style == "table")
                return format_report(report, ReportStyle::Table);
            if (style == "machine")
                return format_report(report, ReportStyle::Machine);
            throw DataError("style must be \"table\" or \"machine\"");
        },
        py::arg("report"), py::arg("style") = "table");

    py::class_<ModelBundle>(m, "ModelBundle")
        .def_property_readonly("model",
                               [](const ModelBundle& b) {
                                   return std::string(
                                       model_name(b.model_kind()));
                               })
        .def_property_readonly("vectorizer",
                               [](const ModelBundle& b) {
                                   return std::string(
                                       vectorizer_name(b.vectorizer()));
                               })
        .def_property_readonly("num_features", [](const ModelBundle& b) {
            return b.vocabulary.size();
        });
    m.def("save_bundle", &save_bundle);
    m.def("load_bundle", &load_bundle);
    m.def("bundle_predict",
          [](const ModelBundle& bundle, const std::vector<std::string>& texts) {
              std::vector<std::string> names;
              for (Label label : bundle_predict(bundle, texts))
                  names.emplace_back(label_name(label));
              return names;
          });
    m.def("bundle_decision", &bundle_decision);

    m.def(
        "train_pipeline",
        [](const std::vector<std::string>& texts, const std::vector<int>& ys,
           const std::string& vectorizer, const std::string& model,
           const CleaningConfig& cleaning, const NGramConfig& ngram) {
            Dataset ds;
            ds.split = Split::Train;
            for (std::size_t i = 0; i < texts.size(); ++i) {
                Document doc;
                doc.id = "train-" + std::to_string(i);
                doc.text = texts[i];
                if (i < ys.size()) doc.label = label_from_index(ys[i]);
                ds.documents.push_back(std::move(doc));
            }
            return train_pipeline(ds, parse_vectorizer(vectorizer),
                                  parse_model(model), cleaning, ngram,
                                  HyperParams{});
        },
        py::arg("texts"), py::arg("labels"), py::arg("vectorizer") = "tfidf",
        py::arg("model") = "svm-linear",
        py::arg("cleaning") = CleaningConfig{},
        py::arg("ngram") = NGramConfig{});

    m.def("run_experiment",
          [](const std::string& config_path, const std::string& out_dir) {
              ExperimentResult result =
                  run_experiment(load_experiment_config(config_path));
              write_experiment_artifacts(result, out_dir);
              return format_leaderboard_table(result);
          });
}
