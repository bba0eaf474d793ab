#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hopeclf/corpus.hpp"
#include "hopeclf/sparse.hpp"

namespace hopeclf {

// Multinomial naive Bayes with Lidstone smoothing. Accepts fractional
// feature values, so it works on both raw counts and tf-idf weights.
struct NBModel {
    double alpha = 1.0;
    std::uint32_t dimension = 0;
    std::array<double, kNumLabels> log_prior{};
    std::array<std::vector<double>, kNumLabels> log_likelihood; // [class][term]
};

// Priors are ln(N_c / N); per-term log-likelihoods are
// ln((count_{c,t} + alpha) / (total_c + alpha * V)). Throws TrainError when a
// class has no documents or a feature value is negative.
NBModel train_nb(const std::vector<SparseVector>& x,
                 const std::vector<Label>& y, std::uint32_t dimension,
                 double alpha = 1.0);

struct NBPrediction {
    Label label;
    std::array<double, kNumLabels> posterior{}; // normalized, sums to 1
};

// Joint log-scores normalized with log-sum-exp; ties go to the first label in
// canonical order (Hope).
NBPrediction predict_nb(const NBModel& model, const SparseVector& x);

} // namespace hopeclf
