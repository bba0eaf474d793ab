#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hopeclf/corpus.hpp"
#include "hopeclf/sparse.hpp"

namespace hopeclf {

enum class LinearKind { Logistic, SvmLinear };

struct LinearModel {
    LinearKind kind = LinearKind::Logistic;
    std::vector<double> weights; // dense, length = feature dimension
    double bias = 0.0;
    double c = 1.0;

    std::uint32_t dimension() const {
        return static_cast<std::uint32_t>(weights.size());
    }
};

double decision_function(const LinearModel& model, const SparseVector& x);
Label predict(const LinearModel& model, const SparseVector& x);
// P(Hope | x) = sigmoid(decision). Meaningful for logistic models.
double logistic_probability(const LinearModel& model, const SparseVector& x);

struct OptimizerTrace {
    std::size_t iterations = 0;
    bool converged = false;
    double grad_inf_norm = 0.0;
    double objective = 0.0;
    std::vector<double> objectives; // value after each accepted step
};

struct LogRegResult {
    LinearModel model;
    OptimizerTrace trace;
};

// L2-regularized logistic regression:
//   f(w, b) = 0.5 ||w||^2 + C * sum_i log(1 + exp(-s_i (w.x_i + b)))
// with s_i = +1 for Hope and -1 for Not Hope; the bias is not penalized.
// Minimized with limited-memory BFGS (history 10) and Armijo backtracking
// from w = 0, b = 0. Stops when the gradient infinity norm drops to tol or
// after max_iter iterations (reported in the trace, not an error).
// Throws TrainError when only one class is present.
LogRegResult train_logreg(const std::vector<SparseVector>& x,
                          const std::vector<Label>& y, std::uint32_t dimension,
                          double c = 1.0, double tol = 1e-6,
                          std::size_t max_iter = 1000);

// Objective and gradient at (weights, bias), exposed for testing.
double logreg_objective(const std::vector<SparseVector>& x,
                        const std::vector<Label>& y,
                        const std::vector<double>& weights, double bias,
                        double c);
void logreg_gradient(const std::vector<SparseVector>& x,
                     const std::vector<Label>& y,
                     const std::vector<double>& weights, double bias, double c,
                     std::vector<double>& grad_w, double& grad_b);

} // namespace hopeclf
