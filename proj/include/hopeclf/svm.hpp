#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hopeclf/corpus.hpp"
#include "hopeclf/linear.hpp"
#include "hopeclf/sparse.hpp"

namespace hopeclf {

enum class KernelKind { Linear, Rbf };

struct KernelConfig {
    KernelKind kind = KernelKind::Linear;
    double gamma = 1.0; // rbf only
};

double kernel_value(const KernelConfig& k, const SparseVector& a,
                    const SparseVector& b);

// Data-driven rbf bandwidth: 1 / (dimension * mean per-feature variance),
// with variances taken over all rows including implicit zeros. Falls back to
// 1.0 when the data has no variance.
double gamma_scale(const std::vector<SparseVector>& x, std::uint32_t dimension);

struct SvmModel {
    KernelConfig kernel;
    double c = 1.0;
    double bias = 0.0;
    std::vector<SparseVector> support_vectors; // rows with alpha > 0 only
    std::vector<double> dual_coef;             // alpha_i * s_i per support vector
};

struct SvmTrainResult {
    SvmModel model;
    std::size_t iterations = 0;
    double kkt_violation = 0.0; // final max violating-pair gap
};

// Soft-margin SVM trained by sequential minimal optimization on the dual
//   min 0.5 a'Qa - e'a   s.t. 0 <= a_i <= C, s'a = 0,
// Q_ij = s_i s_j K(x_i, x_j), s = +1 for Hope, -1 for Not Hope. Each step
// picks the maximal violating pair; training stops when every multiplier
// satisfies the KKT conditions at tolerance tol with the computed bias.
// max_iter 0 picks a cap from the data size; exceeding the cap throws
// TrainError carrying the remaining violation gap. Throws TrainError when
// only one class is present.
SvmTrainResult train_svm(const std::vector<SparseVector>& x,
                         const std::vector<Label>& y, KernelConfig kernel,
                         double c = 1.0, double tol = 1e-3,
                         std::size_t max_iter = 0);

double decision_function(const SvmModel& model, const SparseVector& x);
Label predict(const SvmModel& model, const SparseVector& x);

// Collapses a linear-kernel model to primal form: w = sum_i coef_i x_i.
LinearModel collapse_linear(const SvmModel& model, std::uint32_t dimension);

// Dual objective 0.5 a'Qa - e'a for a trained model (support vectors carry
// the nonzero multipliers). Exposed for optimality checks.
double svm_dual_objective(const SvmModel& model);
// Primal objective 0.5 ||w||^2 + C * sum_i hinge(x_i) for linear kernels.
double svm_primal_objective(const SvmModel& model,
                            const std::vector<SparseVector>& x,
                            const std::vector<Label>& y,
                            std::uint32_t dimension);

} // namespace hopeclf
