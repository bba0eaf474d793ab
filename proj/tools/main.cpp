#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hopeclf/corpus.hpp"
#include "hopeclf/errors.hpp"
#include "hopeclf/harness.hpp"
#include "hopeclf/metrics.hpp"
#include "hopeclf/persist.hpp"
#include "hopeclf/preprocess.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitTrain = 3;

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw hopeclf::DataError("cannot write file: " + path);
    out << body;
}

void emit(const std::string& body, const std::string& output_path) {
    if (output_path.empty())
        std::cout << body;
    else
        write_text(output_path, body);
}

hopeclf::Dataset load_split(const std::string& path, hopeclf::FileFormat fmt,
                            bool require_label, hopeclf::Split split) {
    hopeclf::LoadSchema schema;
    schema.require_label = require_label;
    hopeclf::Dataset ds = hopeclf::load_dataset(path, fmt, schema, split);
    for (const std::string& w : ds.warnings)
        std::cerr << "warning: " << w << '\n';
    return ds;
}

std::vector<std::string> texts_of(const hopeclf::Dataset& ds) {
    return ds.texts();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hope-speech text classification toolkit"};
    app.require_subcommand(1);

    std::string input_path, dev_path, test_path, config_path;
    std::string output_path, model_path, format_name = "csv";
    std::string vectorizer_name = "tfidf", model_kind_name = "svm-linear";
    std::size_t jobs = 1;

    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format_name, "Input format")
            ->check(CLI::IsMember({"csv", "tsv", "jsonl"}));
    };

    CLI::App* cmd_stats = app.add_subcommand("stats", "Label counts of a split");
    cmd_stats->add_option("--input", input_path, "Data file")->required();
    add_format(cmd_stats);

    CLI::App* cmd_clean =
        app.add_subcommand("clean", "Apply the cleaning pipeline to a split");
    cmd_clean->add_option("--input", input_path, "Data file")->required();
    cmd_clean->add_option("--output", output_path, "Destination file");
    add_format(cmd_clean);

    CLI::App* cmd_train =
        app.add_subcommand("train", "Fit one pipeline and save the bundle");
    cmd_train->add_option("--input", input_path, "Labeled training file")
        ->required();
    cmd_train->add_option("--model", model_kind_name, "Classifier")
        ->check(CLI::IsMember({"nb", "logreg", "svm-linear", "svm-rbf"}));
    cmd_train->add_option("--vectorizer", vectorizer_name, "Vectorizer")
        ->check(CLI::IsMember({"count", "tfidf"}));
    cmd_train->add_option("--output", output_path, "Bundle path")->required();
    add_format(cmd_train);

    CLI::App* cmd_eval =
        app.add_subcommand("eval", "Score a saved bundle on a labeled split");
    cmd_eval->add_option("--input", input_path, "Labeled data file")
        ->required();
    cmd_eval->add_option("--bundle", model_path, "Saved bundle")->required();
    cmd_eval->add_option("--output", output_path,
                         "Write the machine-readable report here");
    add_format(cmd_eval);

    CLI::App* cmd_predict =
        app.add_subcommand("predict", "Label a split with a saved bundle");
    cmd_predict->add_option("--input", input_path, "Data file")->required();
    cmd_predict->add_option("--bundle", model_path, "Saved bundle")->required();
    cmd_predict->add_option("--output", output_path, "Destination file");
    add_format(cmd_predict);

    CLI::App* cmd_exp =
        app.add_subcommand("experiment", "Run the full model/vectorizer grid");
    cmd_exp->add_option("--config", config_path, "Experiment config (JSON)")
        ->required();
    cmd_exp->add_option("--output", output_path, "Artifact directory")
        ->required();
    cmd_exp->add_option("--jobs", jobs, "Grid cells trained in parallel");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        hopeclf::FileFormat fmt = hopeclf::parse_format(format_name);

        if (cmd_stats->parsed()) {
            hopeclf::Dataset ds =
                load_split(input_path, fmt, false, hopeclf::Split::Train);
            hopeclf::ClassCounts counts = hopeclf::stats(ds);
            std::cout << hopeclf::label_name(hopeclf::Label::Hope) << '\t'
                      << counts.hope << '\n';
            std::cout << hopeclf::label_name(hopeclf::Label::NotHope) << '\t'
                      << counts.not_hope << '\n';
            std::cout << "total\t" << ds.size() << '\n';
            if (counts.unlabeled)
                std::cout << "unlabeled\t" << counts.unlabeled << '\n';
            return 0;
        }

        if (cmd_clean->parsed()) {
            hopeclf::Dataset ds =
                load_split(input_path, fmt, false, hopeclf::Split::Train);
            hopeclf::CleaningConfig config;
            hopeclf::CleaningResources resources =
                hopeclf::load_resources(config);
            std::ostringstream out;
            for (const hopeclf::Document& doc : ds.documents)
                out << doc.id << '\t'
                    << hopeclf::clean(doc.text, config, resources) << '\n';
            emit(out.str(), output_path);
            return 0;
        }

        if (cmd_train->parsed()) {
            hopeclf::Dataset ds =
                load_split(input_path, fmt, true, hopeclf::Split::Train);
            hopeclf::ModelBundle bundle = hopeclf::train_pipeline(
                ds, hopeclf::parse_vectorizer(vectorizer_name),
                hopeclf::parse_model(model_kind_name), hopeclf::CleaningConfig{},
                hopeclf::NGramConfig{}, hopeclf::HyperParams{});
            hopeclf::save_bundle(bundle, output_path);
            std::cerr << "saved " << model_kind_name << " + " << vectorizer_name
                      << " bundle (" << bundle.vocabulary.size()
                      << " features) to " << output_path << '\n';
            return 0;
        }

        if (cmd_eval->parsed()) {
            hopeclf::Dataset ds =
                load_split(input_path, fmt, true, hopeclf::Split::Dev);
            hopeclf::ModelBundle bundle = hopeclf::load_bundle(model_path);
            std::vector<hopeclf::Label> predicted =
                hopeclf::bundle_predict(bundle, texts_of(ds));
            hopeclf::EvalReport report =
                hopeclf::evaluate(ds.labels(), predicted);
            std::cout << hopeclf::format_report(report,
                                                hopeclf::ReportStyle::Table);
            if (!output_path.empty())
                write_text(output_path,
                           hopeclf::format_report(
                               report, hopeclf::ReportStyle::Machine));
            return 0;
        }

        if (cmd_predict->parsed()) {
            hopeclf::Dataset ds =
                load_split(input_path, fmt, false, hopeclf::Split::Test);
            hopeclf::ModelBundle bundle = hopeclf::load_bundle(model_path);
            std::vector<hopeclf::Label> predicted =
                hopeclf::bundle_predict(bundle, texts_of(ds));
            std::vector<std::pair<std::string, hopeclf::Label>> rows;
            rows.reserve(ds.size());
            for (std::size_t i = 0; i < ds.size(); ++i)
                rows.emplace_back(ds.documents[i].id, predicted[i]);
            emit(hopeclf::format_predictions(rows), output_path);
            return 0;
        }

        if (cmd_exp->parsed()) {
            hopeclf::ExperimentConfig config =
                hopeclf::load_experiment_config(config_path);
            if (cmd_exp->count("--jobs")) config.jobs = jobs;
            hopeclf::ExperimentResult result = hopeclf::run_experiment(config);
            hopeclf::write_experiment_artifacts(result, output_path);
            std::size_t best = hopeclf::select_best(result);
            const hopeclf::LeaderboardRow& top = result.rows[best];
            std::cerr << "best: " << hopeclf::model_name(top.model) << " + "
                      << hopeclf::vectorizer_name(top.vectorizer)
                      << " (dev macro-F1 ";
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.4f",
                          top.dev_report->macro_f1);
            std::cerr << buf << ")\n";
            std::cout << hopeclf::format_leaderboard_table(result);
            return 0;
        }
    } catch (const hopeclf::TrainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitTrain;
    } catch (const hopeclf::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
