#include "hopeclf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hopeclf/preprocess.hpp"

namespace hopeclf {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const char* where,
                         std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                ok = true;
                break;
            }
        if (!ok)
            throw DataError(std::string("config: unknown key \"") +
                            item.key() + "\" in " + where);
    }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key) || obj[key].is_null()) return fallback;
    try {
        return obj[key].get<T>();
    } catch (const json::exception&) {
        throw DataError(std::string("config: bad value for \"") + key + "\"");
    }
}

} // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw DataError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw DataError("config must be a JSON object");
    reject_unknown_keys(root, "the top level",
                        {"data", "cleaning", "ngram", "vectorizers", "models",
                         "hyper", "seed", "jobs"});

    ExperimentConfig cfg;
    if (!root.contains("data") || !root["data"].is_object())
        throw DataError("config needs a \"data\" object");
    const json& data = root["data"];
    reject_unknown_keys(data, "\"data\"",
                        {"train", "dev", "test", "format", "text_column",
                         "label_column"});
    if (!data.contains("train"))
        throw DataError("config: \"data.train\" is required");
    if (!data.contains("dev"))
        throw DataError("config: \"data.dev\" is required");
    cfg.train_path = data["train"].get<std::string>();
    cfg.dev_path = data["dev"].get<std::string>();
    cfg.test_path = get_or<std::string>(data, "test", "");
    cfg.format = parse_format(get_or<std::string>(data, "format", "csv"));
    cfg.schema.text_column =
        get_or<std::string>(data, "text_column", "text");
    cfg.schema.label_column =
        get_or<std::string>(data, "label_column", "label");

    if (root.contains("cleaning")) {
        const json& cl = root["cleaning"];
        if (!cl.is_object())
            throw DataError("config: \"cleaning\" must be an object");
        reject_unknown_keys(cl, "\"cleaning\"",
                            {"lowercase", "strip_urls", "strip_emoji",
                             "strip_placeholders", "strip_numbers",
                             "strip_special", "remove_stopwords", "lemmatize",
                             "stopword_list_id", "lemma_table_id"});
        CleaningConfig& c = cfg.cleaning;
        c.lowercase = get_or(cl, "lowercase", c.lowercase);
        c.strip_urls = get_or(cl, "strip_urls", c.strip_urls);
        c.strip_emoji = get_or(cl, "strip_emoji", c.strip_emoji);
        c.strip_placeholders =
            get_or(cl, "strip_placeholders", c.strip_placeholders);
        c.strip_numbers = get_or(cl, "strip_numbers", c.strip_numbers);
        c.strip_special = get_or(cl, "strip_special", c.strip_special);
        c.remove_stopwords = get_or(cl, "remove_stopwords", c.remove_stopwords);
        c.lemmatize = get_or(cl, "lemmatize", c.lemmatize);
        c.stopword_list_id =
            get_or<std::string>(cl, "stopword_list_id", c.stopword_list_id);
        c.lemma_table_id =
            get_or<std::string>(cl, "lemma_table_id", c.lemma_table_id);
    }

    if (root.contains("ngram")) {
        const json& ng = root["ngram"];
        if (!ng.is_object())
            throw DataError("config: \"ngram\" must be an object");
        reject_unknown_keys(ng, "\"ngram\"",
                            {"min_n", "max_n", "min_df", "max_features"});
        cfg.ngram.min_n = get_or<std::uint32_t>(ng, "min_n", cfg.ngram.min_n);
        cfg.ngram.max_n = get_or<std::uint32_t>(ng, "max_n", cfg.ngram.max_n);
        cfg.ngram.min_df =
            get_or<std::uint32_t>(ng, "min_df", cfg.ngram.min_df);
        if (ng.contains("max_features") && !ng["max_features"].is_null())
            cfg.ngram.max_features = get_or<std::uint32_t>(ng, "max_features", 0);
    }
    cfg.ngram.validate();

    auto parse_list = [&](const char* key, auto parser, auto& out) {
        if (!root.contains(key)) return;
        const json& arr = root[key];
        if (!arr.is_array() || arr.empty())
            throw DataError(std::string("config: \"") + key +
                            "\" must be a non-empty array");
        out.clear();
        for (const json& item : arr) {
            if (!item.is_string())
                throw DataError(std::string("config: \"") + key +
                                "\" entries must be strings");
            auto parsed = parser(item.get<std::string>());
            if (std::find(out.begin(), out.end(), parsed) != out.end())
                throw DataError(std::string("config: duplicate entry in \"") +
                                key + "\"");
            out.push_back(parsed);
        }
    };
    parse_list("vectorizers", parse_vectorizer, cfg.vectorizers);
    parse_list("models", parse_model, cfg.models);

    if (root.contains("hyper")) {
        const json& hy = root["hyper"];
        if (!hy.is_object())
            throw DataError("config: \"hyper\" must be an object");
        reject_unknown_keys(hy, "\"hyper\"",
                            {"nb_alpha", "logreg_c", "logreg_tol",
                             "logreg_max_iter", "svm_c", "svm_tol",
                             "svm_gamma"});
        HyperParams& h = cfg.hyper;
        h.nb_alpha = get_or(hy, "nb_alpha", h.nb_alpha);
        h.logreg_c = get_or(hy, "logreg_c", h.logreg_c);
        h.logreg_tol = get_or(hy, "logreg_tol", h.logreg_tol);
        h.logreg_max_iter =
            get_or<std::size_t>(hy, "logreg_max_iter", h.logreg_max_iter);
        h.svm_c = get_or(hy, "svm_c", h.svm_c);
        h.svm_tol = get_or(hy, "svm_tol", h.svm_tol);
        if (hy.contains("svm_gamma") && !hy["svm_gamma"].is_null()) {
            const json& g = hy["svm_gamma"];
            if (g.is_string()) {
                if (g.get<std::string>() != "scale")
                    throw DataError(
                        "config: svm_gamma must be a number or \"scale\"");
                h.svm_gamma.reset();
            } else if (g.is_number()) {
                h.svm_gamma = g.get<double>();
            } else {
                throw DataError(
                    "config: svm_gamma must be a number or \"scale\"");
            }
        }
    }

    cfg.seed = get_or<std::uint64_t>(root, "seed", 0);
    cfg.jobs = get_or<std::size_t>(root, "jobs", 1);
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open config: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_experiment_config(ss.str());
}

ModelBundle fit_cell(const std::vector<SparseVector>& train_features,
                     const std::vector<Label>& train_labels,
                     const Vocabulary& vocab,
                     const std::optional<TfidfModel>& tfidf,
                     VectorizerKind vectorizer, ModelKind model,
                     const CleaningConfig& cleaning, const HyperParams& hyper) {
    ModelBundle bundle;
    bundle.cleaning = cleaning;
    bundle.vocabulary = vocab;
    if (vectorizer == VectorizerKind::Tfidf) {
        if (!tfidf)
            throw TrainError("tf-idf weights were not fitted for this grid");
        bundle.tfidf = *tfidf;
    }
    const std::uint32_t dim = static_cast<std::uint32_t>(vocab.size());
    switch (model) {
    case ModelKind::Nb:
        bundle.nb =
            train_nb(train_features, train_labels, dim, hyper.nb_alpha);
        break;
    case ModelKind::Logreg: {
        LogRegResult res =
            train_logreg(train_features, train_labels, dim, hyper.logreg_c,
                         hyper.logreg_tol, hyper.logreg_max_iter);
        bundle.linear = std::move(res.model);
        break;
    }
    case ModelKind::SvmLinear: {
        KernelConfig kernel;
        kernel.kind = KernelKind::Linear;
        SvmTrainResult res = train_svm(train_features, train_labels, kernel,
                                       hyper.svm_c, hyper.svm_tol);
        bundle.svm = std::move(res.model);
        break;
    }
    case ModelKind::SvmRbf: {
        KernelConfig kernel;
        kernel.kind = KernelKind::Rbf;
        kernel.gamma = hyper.svm_gamma
                           ? *hyper.svm_gamma
                           : gamma_scale(train_features, dim);
        SvmTrainResult res = train_svm(train_features, train_labels, kernel,
                                       hyper.svm_c, hyper.svm_tol);
        bundle.svm = std::move(res.model);
        break;
    }
    }
    return bundle;
}

namespace {

std::vector<Label> predict_matrix(const ModelBundle& bundle,
                                  const std::vector<SparseVector>& rows) {
    std::vector<Label> out;
    out.reserve(rows.size());
    for (const SparseVector& row : rows) {
        if (bundle.nb) out.push_back(predict_nb(*bundle.nb, row).label);
        else if (bundle.linear) out.push_back(predict(*bundle.linear, row));
        else if (bundle.svm) out.push_back(predict(*bundle.svm, row));
        else throw DataError("bundle has no model");
    }
    return out;
}

std::vector<double> decision_matrix(const ModelBundle& bundle,
                                    const std::vector<SparseVector>& rows) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const SparseVector& row : rows) {
        if (bundle.nb) {
            NBPrediction p = predict_nb(*bundle.nb, row);
            out.push_back(p.posterior[0] - p.posterior[1]);
        } else if (bundle.linear) {
            out.push_back(decision_function(*bundle.linear, row));
        } else if (bundle.svm) {
            out.push_back(decision_function(*bundle.svm, row));
        } else {
            throw DataError("bundle has no model");
        }
    }
    return out;
}

std::vector<SparseVector> vectorize(const ModelBundle& bundle,
                                    const std::vector<std::string>& cleaned) {
    std::vector<SparseVector> rows;
    rows.reserve(cleaned.size());
    for (const std::string& doc : cleaned) {
        SparseVector counts = count_transform(doc, bundle.vocabulary);
        rows.push_back(bundle.tfidf ? bundle.tfidf->transform(counts)
                                    : std::move(counts));
    }
    return rows;
}

} // namespace

ModelBundle train_pipeline(const Dataset& train, VectorizerKind vectorizer,
                           ModelKind model, const CleaningConfig& cleaning,
                           const NGramConfig& ngram, const HyperParams& hyper) {
    ngram.validate();
    std::vector<Label> labels = train.labels();
    CleaningResources resources = load_resources(cleaning);
    std::vector<std::string> cleaned;
    cleaned.reserve(train.size());
    for (const Document& d : train.documents)
        cleaned.push_back(clean(d.text, cleaning, resources));

    Vocabulary vocab = fit_vocabulary(cleaned, ngram);
    std::vector<SparseVector> counts;
    counts.reserve(cleaned.size());
    for (const std::string& doc : cleaned)
        counts.push_back(count_transform(doc, vocab));

    std::optional<TfidfModel> tfidf;
    std::vector<SparseVector> features;
    if (vectorizer == VectorizerKind::Tfidf) {
        tfidf = fit_tfidf(counts, static_cast<std::uint32_t>(vocab.size()));
        features.reserve(counts.size());
        for (const SparseVector& row : counts)
            features.push_back(tfidf->transform(row));
    } else {
        features = std::move(counts);
    }
    return fit_cell(features, labels, vocab, tfidf, vectorizer, model,
                    cleaning, hyper);
}

std::vector<Label> bundle_predict(const ModelBundle& bundle,
                                  const std::vector<std::string>& texts) {
    CleaningResources resources = load_resources(bundle.cleaning);
    std::vector<std::string> cleaned;
    cleaned.reserve(texts.size());
    for (const std::string& t : texts)
        cleaned.push_back(clean(t, bundle.cleaning, resources));
    return predict_matrix(bundle, vectorize(bundle, cleaned));
}

std::vector<double> bundle_decision(const ModelBundle& bundle,
                                    const std::vector<std::string>& texts) {
    CleaningResources resources = load_resources(bundle.cleaning);
    std::vector<std::string> cleaned;
    cleaned.reserve(texts.size());
    for (const std::string& t : texts)
        cleaned.push_back(clean(t, bundle.cleaning, resources));
    return decision_matrix(bundle, vectorize(bundle, cleaned));
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.ngram.validate();
    if (config.vectorizers.empty() || config.models.empty())
        throw DataError("experiment grid is empty");

    LoadSchema labeled_schema = config.schema;
    labeled_schema.require_label = true;
    Dataset train = load_dataset(config.train_path, config.format,
                                 labeled_schema, Split::Train);
    Dataset dev = load_dataset(config.dev_path, config.format, labeled_schema,
                               Split::Dev);
    if (train.size() == 0) throw DataError("training split is empty");
    if (dev.size() == 0) throw DataError("dev split is empty");

    ExperimentResult result;
    result.seed = config.seed;

    Dataset test;
    if (!config.test_path.empty()) {
        test = load_dataset(config.test_path, config.format, config.schema,
                            Split::Test);
        result.has_test = true;
        result.test_labeled = test.size() > 0 && test.fully_labeled();
    }

    std::vector<Label> train_labels = train.labels();
    std::vector<Label> dev_labels = dev.labels();

    // Everything fitted below sees the training split only.
    CleaningResources resources = load_resources(config.cleaning);
    auto clean_all = [&](const Dataset& ds) {
        std::vector<std::string> out;
        out.reserve(ds.size());
        for (const Document& d : ds.documents)
            out.push_back(clean(d.text, config.cleaning, resources));
        return out;
    };
    std::vector<std::string> train_cleaned = clean_all(train);
    std::vector<std::string> dev_cleaned = clean_all(dev);
    std::vector<std::string> test_cleaned = clean_all(test);

    Vocabulary vocab = fit_vocabulary(train_cleaned, config.ngram);
    const std::uint32_t dim = static_cast<std::uint32_t>(vocab.size());
    auto count_all = [&](const std::vector<std::string>& docs) {
        std::vector<SparseVector> rows;
        rows.reserve(docs.size());
        for (const std::string& doc : docs)
            rows.push_back(count_transform(doc, vocab));
        return rows;
    };
    std::vector<SparseVector> train_counts = count_all(train_cleaned);
    std::vector<SparseVector> dev_counts = count_all(dev_cleaned);
    std::vector<SparseVector> test_counts = count_all(test_cleaned);

    bool wants_tfidf =
        std::find(config.vectorizers.begin(), config.vectorizers.end(),
                  VectorizerKind::Tfidf) != config.vectorizers.end();
    std::optional<TfidfModel> tfidf;
    std::vector<SparseVector> train_tfidf, dev_tfidf, test_tfidf;
    if (wants_tfidf) {
        tfidf = fit_tfidf(train_counts, dim);
        auto transform_all = [&](const std::vector<SparseVector>& rows) {
            std::vector<SparseVector> out;
            out.reserve(rows.size());
            for (const SparseVector& row : rows)
                out.push_back(tfidf->transform(row));
            return out;
        };
        train_tfidf = transform_all(train_counts);
        dev_tfidf = transform_all(dev_counts);
        test_tfidf = transform_all(test_counts);
    }

    auto features_for = [&](VectorizerKind v)
        -> const std::vector<SparseVector>& {
        return v == VectorizerKind::Count ? train_counts : train_tfidf;
    };
    auto dev_features_for = [&](VectorizerKind v)
        -> const std::vector<SparseVector>& {
        return v == VectorizerKind::Count ? dev_counts : dev_tfidf;
    };

    for (VectorizerKind v : config.vectorizers)
        for (ModelKind m : config.models) {
            LeaderboardRow row;
            row.vectorizer = v;
            row.model = m;
            result.rows.push_back(std::move(row));
        }

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t idx = next.fetch_add(1);
            if (idx >= result.rows.size()) break;
            LeaderboardRow& row = result.rows[idx];
            auto started = std::chrono::steady_clock::now();
            try {
                std::optional<TfidfModel> cell_tfidf;
                if (row.vectorizer == VectorizerKind::Tfidf)
                    cell_tfidf = tfidf;
                ModelBundle bundle = fit_cell(
                    features_for(row.vectorizer), train_labels, vocab,
                    cell_tfidf, row.vectorizer, row.model, config.cleaning,
                    config.hyper);
                row.bundle = std::make_shared<ModelBundle>(std::move(bundle));
                std::vector<Label> dev_pred =
                    predict_matrix(*row.bundle,
                                   dev_features_for(row.vectorizer));
                row.dev_report = evaluate(dev_labels, dev_pred);
            } catch (const std::exception& e) {
                row.error = e.what();
                row.bundle.reset();
                row.dev_report.reset();
            }
            row.train_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              started)
                    .count();
        }
    };
    std::size_t jobs = std::max<std::size_t>(1, config.jobs);
    jobs = std::min(jobs, result.rows.size());
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    std::sort(result.rows.begin(), result.rows.end(),
              [](const LeaderboardRow& a, const LeaderboardRow& b) {
                  double fa = a.error.empty() ? a.dev_report->macro_f1 : -1.0;
                  double fb = b.error.empty() ? b.dev_report->macro_f1 : -1.0;
                  if (fa != fb) return fa > fb;
                  int mc = std::string(model_name(a.model))
                               .compare(model_name(b.model));
                  if (mc != 0) return mc < 0;
                  return std::string(vectorizer_name(a.vectorizer)) <
                         vectorizer_name(b.vectorizer);
              });

    if (result.has_test && test.size() > 0) {
        std::size_t best = select_best(result);
        LeaderboardRow& top = result.rows[best];
        const std::vector<SparseVector>& test_features =
            top.vectorizer == VectorizerKind::Count ? test_counts : test_tfidf;
        std::vector<Label> test_pred =
            predict_matrix(*top.bundle, test_features);
        if (result.test_labeled) {
            top.test_report = evaluate(test.labels(), test_pred);
        } else {
            result.test_predictions.reserve(test.size());
            for (std::size_t i = 0; i < test.size(); ++i)
                result.test_predictions.emplace_back(test.documents[i].id,
                                                     test_pred[i]);
        }
    }
    return result;
}

std::size_t select_best(const ExperimentResult& result) {
    for (std::size_t i = 0; i < result.rows.size(); ++i)
        if (result.rows[i].error.empty()) return i;
    throw TrainError("every grid cell failed to train");
}

namespace {

std::string prefixed_report(const EvalReport& report,
                            const std::string& prefix) {
    std::istringstream in(format_report(report, ReportStyle::Machine));
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) out << prefix << line << '\n';
    return out.str();
}

} // namespace

std::string format_leaderboard_machine(const ExperimentResult& result) {
    std::ostringstream out;
    out << "hopeclf-leaderboard v1\n";
    out << "seed\t" << result.seed << '\n';
    out << "rows\t" << result.rows.size() << '\n';
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const LeaderboardRow& row = result.rows[i];
        out << "row\t" << i << '\n';
        out << "model\t" << model_name(row.model) << '\n';
        out << "vectorizer\t" << vectorizer_name(row.vectorizer) << '\n';
        if (!row.error.empty()) {
            out << "status\terror\n";
            std::string msg = row.error;
            for (char& c : msg)
                if (c == '\t' || c == '\n') c = ' ';
            out << "error\t" << msg << '\n';
            continue;
        }
        out << "status\tok\n";
        out << prefixed_report(*row.dev_report, "dev_");
        if (row.test_report) out << prefixed_report(*row.test_report, "test_");
    }
    return out.str();
}

std::string format_leaderboard_table(const ExperimentResult& result) {
    std::vector<std::array<std::string, 6>> cells;
    cells.push_back(
        {"rank", "model", "vectorizer", "dev_macro_f1", "dev_accuracy",
         "status"});
    auto fixed4 = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4f", v);
        return std::string(buf);
    };
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const LeaderboardRow& row = result.rows[i];
        std::array<std::string, 6> line;
        line[0] = std::to_string(i + 1);
        line[1] = model_name(row.model);
        line[2] = vectorizer_name(row.vectorizer);
        if (row.error.empty()) {
            line[3] = fixed4(row.dev_report->macro_f1);
            line[4] = fixed4(row.dev_report->accuracy);
            line[5] = "ok";
        } else {
            line[3] = "-";
            line[4] = "-";
            line[5] = "error: " + row.error;
        }
        cells.push_back(std::move(line));
    }
    std::array<std::size_t, 6> width{};
    for (const auto& line : cells)
        for (std::size_t c = 0; c < line.size(); ++c)
            width[c] = std::max(width[c], line[c].size());
    std::ostringstream out;
    for (const auto& line : cells) {
        for (std::size_t c = 0; c < line.size(); ++c) {
            if (c) out << "  ";
            out << line[c];
            if (c + 1 < line.size())
                out << std::string(width[c] - line[c].size(), ' ');
        }
        out << '\n';
    }
    return out.str();
}

std::string format_predictions(
    const std::vector<std::pair<std::string, Label>>& predictions) {
    std::ostringstream out;
    out << "id\tlabel\n";
    for (const auto& [id, label] : predictions)
        out << id << '\t' << label_name(label) << '\n';
    return out.str();
}

void write_experiment_artifacts(const ExperimentResult& result,
                                const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw DataError("cannot create output directory " + out_dir + ": " +
                        ec.message());
    auto write_file = [&](const std::string& name, const std::string& body) {
        std::string path = out_dir + "/" + name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DataError("cannot write file: " + path);
        out << body;
    };
    write_file("leaderboard.tsv", format_leaderboard_machine(result));
    write_file("leaderboard.txt", format_leaderboard_table(result));

    // Wall-clock timings are environment-dependent by nature and are kept
    // out of the deterministic leaderboard files.
    std::ostringstream timings;
    timings << "model\tvectorizer\tseconds\n";
    for (const LeaderboardRow& row : result.rows) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", row.train_seconds);
        timings << model_name(row.model) << '\t'
                << vectorizer_name(row.vectorizer) << '\t' << buf << '\n';
    }
    write_file("timings.tsv", timings.str());

    std::size_t best = select_best(result);
    save_bundle(*result.rows[best].bundle, out_dir + "/best_model.bundle");
    if (result.rows[best].test_report)
        write_file("test_report.tsv",
                   format_report(*result.rows[best].test_report,
                                 ReportStyle::Machine));
    if (!result.test_predictions.empty())
        write_file("test_predictions.tsv",
                   format_predictions(result.test_predictions));
}

} // namespace hopeclf
