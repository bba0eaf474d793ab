#include "hopeclf/nb.hpp"

#include <algorithm>
#include <cmath>

#include "hopeclf/errors.hpp"

namespace hopeclf {

NBModel train_nb(const std::vector<SparseVector>& x,
                 const std::vector<Label>& y, std::uint32_t dimension,
                 double alpha) {
    if (x.empty())
        throw TrainError("cannot train on an empty dataset");
    if (x.size() != y.size())
        throw TrainError("feature/label count mismatch");
    if (alpha <= 0.0)
        throw TrainError("smoothing alpha must be positive");

    NBModel model;
    model.alpha = alpha;
    model.dimension = dimension;

    std::array<std::int64_t, kNumLabels> class_docs{};
    std::array<std::vector<double>, kNumLabels> counts;
    std::array<double, kNumLabels> totals{};
    for (auto& c : counts) c.assign(dimension, 0.0);

    for (std::size_t i = 0; i < x.size(); ++i) {
        int c = label_index(y[i]);
        ++class_docs[c];
        const SparseVector& row = x[i];
        for (std::size_t k = 0; k < row.indices.size(); ++k) {
            if (row.indices[k] >= dimension)
                throw TrainError("feature index out of range");
            if (row.values[k] < 0.0)
                throw TrainError("negative feature value at document " +
                                 std::to_string(i));
            counts[c][row.indices[k]] += row.values[k];
            totals[c] += row.values[k];
        }
    }
    for (int c = 0; c < kNumLabels; ++c)
        if (class_docs[c] == 0)
            throw TrainError(std::string("class \"") +
                             label_name(label_from_index(c)) +
                             "\" has no training documents");

    double n_docs = static_cast<double>(x.size());
    for (int c = 0; c < kNumLabels; ++c) {
        model.log_prior[c] =
            std::log(static_cast<double>(class_docs[c]) / n_docs);
        model.log_likelihood[c].resize(dimension);
        double denom = totals[c] + alpha * static_cast<double>(dimension);
        for (std::uint32_t t = 0; t < dimension; ++t)
            model.log_likelihood[c][t] =
                std::log((counts[c][t] + alpha) / denom);
    }
    return model;
}

NBPrediction predict_nb(const NBModel& model, const SparseVector& x) {
    std::array<double, kNumLabels> joint{};
    for (int c = 0; c < kNumLabels; ++c) {
        double score = model.log_prior[c];
        for (std::size_t k = 0; k < x.indices.size(); ++k) {
            if (x.indices[k] >= model.dimension)
                throw DataError("feature index " +
                                std::to_string(x.indices[k]) +
                                " out of range for model dimension " +
                                std::to_string(model.dimension));
            score += x.values[k] * model.log_likelihood[c][x.indices[k]];
        }
        joint[c] = score;
    }
    // Normalize with log-sum-exp for stable posteriors.
    double hi = *std::max_element(joint.begin(), joint.end());
    double sum = 0.0;
    for (double j : joint) sum += std::exp(j - hi);
    double log_z = hi + std::log(sum);

    NBPrediction pred;
    for (int c = 0; c < kNumLabels; ++c)
        pred.posterior[c] = std::exp(joint[c] - log_z);
    // Ties go to the first label in canonical order.
    pred.label = joint[0] >= joint[1] ? Label::Hope : Label::NotHope;
    return pred;
}

} // namespace hopeclf
