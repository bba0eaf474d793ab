#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hopeclf/corpus.hpp"
#include "hopeclf/metrics.hpp"
#include "hopeclf/persist.hpp"

namespace hopeclf {

struct HyperParams {
    double nb_alpha = 1.0;
    double logreg_c = 1.0;
    double logreg_tol = 1e-6;
    std::size_t logreg_max_iter = 1000;
    double svm_c = 1.0;
    double svm_tol = 1e-3;
    std::optional<double> svm_gamma; // unset = data-driven "scale"
};

struct ExperimentConfig {
    std::string train_path;
    std::string dev_path;
    std::string test_path; // empty = no test evaluation
    FileFormat format = FileFormat::Csv;
    LoadSchema schema;
    CleaningConfig cleaning;
    NGramConfig ngram;
    std::vector<VectorizerKind> vectorizers{VectorizerKind::Count,
                                            VectorizerKind::Tfidf};
    std::vector<ModelKind> models{ModelKind::Nb, ModelKind::Logreg,
                                  ModelKind::SvmLinear, ModelKind::SvmRbf};
    HyperParams hyper;
    std::uint64_t seed = 0; // recorded in outputs; the pipeline is deterministic
    std::size_t jobs = 1;
};

// Reads an ExperimentConfig from JSON. Unknown keys are rejected so typos
// fail loudly. Only data.train and data.dev are required.
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const std::string& json_text);

struct LeaderboardRow {
    ModelKind model = ModelKind::Nb;
    VectorizerKind vectorizer = VectorizerKind::Count;
    std::string error; // nonempty = this cell failed; reports absent
    std::optional<EvalReport> dev_report;
    std::optional<EvalReport> test_report; // filled for the best row only
    double train_seconds = 0.0; // wall clock; kept out of deterministic artifacts
    std::shared_ptr<ModelBundle> bundle;
};

struct ExperimentResult {
    std::vector<LeaderboardRow> rows; // sorted: dev macro-F1 desc, then names
    std::uint64_t seed = 0;
    // Predictions of the best model on an unlabeled test split (id, label).
    std::vector<std::pair<std::string, Label>> test_predictions;
    bool has_test = false;
    bool test_labeled = false;
};

// Trains one (vectorizer, model) cell on pre-vectorized training data and
// wraps it in a bundle. Used by the grid, the CLI train command, and the
// python bindings.
ModelBundle fit_cell(const std::vector<SparseVector>& train_counts,
                     const std::vector<Label>& train_labels,
                     const Vocabulary& vocab,
                     const std::optional<TfidfModel>& tfidf,
                     VectorizerKind vectorizer, ModelKind model,
                     const CleaningConfig& cleaning, const HyperParams& hyper);

// Convenience single-model fit from raw labeled text.
ModelBundle train_pipeline(const Dataset& train, VectorizerKind vectorizer,
                           ModelKind model, const CleaningConfig& cleaning,
                           const NGramConfig& ngram, const HyperParams& hyper);

// Applies a bundle's full pipeline (clean, vectorize, score) to raw texts.
std::vector<Label> bundle_predict(const ModelBundle& bundle,
                                  const std::vector<std::string>& texts);
std::vector<double> bundle_decision(const ModelBundle& bundle,
                                    const std::vector<std::string>& texts);

// Runs the whole grid: cleaning, vocabulary, and tf-idf weights are fitted on
// the training split only and shared across cells; each cell trains its model
// and is scored on dev. Rows are ranked by dev macro-F1 (descending), ties
// broken by model then vectorizer name. The best row is evaluated on the test
// split when one is present (labeled: report; unlabeled: predictions).
// Per-cell training failures are recorded in the row and do not abort the
// grid. jobs > 1 trains cells in parallel with identical results.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Index into result.rows of the best successful row; throws TrainError when
// every cell failed.
std::size_t select_best(const ExperimentResult& result);

// Writes leaderboard.tsv (machine), leaderboard.txt (aligned table),
// timings.tsv (wall clock, not byte-stable), best_model.bundle, and either
// test_report.tsv or test_predictions.tsv when a test split was given.
void write_experiment_artifacts(const ExperimentResult& result,
                                const std::string& out_dir);

// Machine leaderboard text (deterministic; excludes timings).
std::string format_leaderboard_machine(const ExperimentResult& result);
// Aligned human-readable summary table.
std::string format_leaderboard_table(const ExperimentResult& result);

// Prediction file body: "id<TAB>label" header then one row per document.
std::string format_predictions(
    const std::vector<std::pair<std::string, Label>>& predictions);

} // namespace hopeclf
