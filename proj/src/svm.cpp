#include "hopeclf/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>

#include "hopeclf/errors.hpp"

namespace hopeclf {

namespace {

constexpr double kTau = 1e-12; // floor for near-singular pair curvature

inline double sign_of(Label l) { return l == Label::Hope ? 1.0 : -1.0; }

// LRU cache of kernel matrix rows, capped by memory.
class KernelRowCache {
public:
    KernelRowCache(const std::vector<SparseVector>& x, KernelConfig kernel,
                   std::size_t max_bytes)
        : x_(x), kernel_(kernel) {
        std::size_t row_bytes = sizeof(double) * std::max<std::size_t>(x.size(), 1);
        max_rows_ = std::max<std::size_t>(2, max_bytes / row_bytes);
    }

    const std::vector<double>& row(std::size_t i) {
        auto it = map_.find(i);
        if (it != map_.end()) {
            order_.splice(order_.begin(), order_, it->second.order_it);
            return it->second.values;
        }
        if (map_.size() >= max_rows_) {
            std::size_t evict = order_.back();
            order_.pop_back();
            map_.erase(evict);
        }
        order_.push_front(i);
        Entry entry;
        entry.order_it = order_.begin();
        entry.values.resize(x_.size());
        for (std::size_t j = 0; j < x_.size(); ++j)
            entry.values[j] = kernel_value(kernel_, x_[i], x_[j]);
        auto [pos, inserted] = map_.emplace(i, std::move(entry));
        return pos->second.values;
    }

private:
    struct Entry {
        std::vector<double> values;
        std::list<std::size_t>::iterator order_it;
    };
    const std::vector<SparseVector>& x_;
    KernelConfig kernel_;
    std::size_t max_rows_;
    std::unordered_map<std::size_t, Entry> map_;
    std::list<std::size_t> order_;
};

} // namespace

double kernel_value(const KernelConfig& k, const SparseVector& a,
                    const SparseVector& b) {
    if (k.kind == KernelKind::Linear) return dot(a, b);
    return std::exp(-k.gamma * squared_distance(a, b));
}

double gamma_scale(const std::vector<SparseVector>& x,
                   std::uint32_t dimension) {
    if (x.empty() || dimension == 0) return 1.0;
    std::vector<double> sum(dimension, 0.0), sum_sq(dimension, 0.0);
    for (const SparseVector& row : x) {
        for (std::size_t k = 0; k < row.indices.size(); ++k) {
            sum[row.indices[k]] += row.values[k];
            sum_sq[row.indices[k]] += row.values[k] * row.values[k];
        }
    }
    const double n = static_cast<double>(x.size());
    double var_total = 0.0;
    for (std::uint32_t t = 0; t < dimension; ++t) {
        double mean = sum[t] / n;
        var_total += sum_sq[t] / n - mean * mean;
    }
    double mean_var = var_total / static_cast<double>(dimension);
    if (!(mean_var > 0.0)) return 1.0;
    return 1.0 / (static_cast<double>(dimension) * mean_var);
}

SvmTrainResult train_svm(const std::vector<SparseVector>& x,
                         const std::vector<Label>& y, KernelConfig kernel,
                         double c, double tol, std::size_t max_iter) {
    const std::size_t n = x.size();
    if (n == 0) throw TrainError("cannot train on an empty dataset");
    if (x.size() != y.size()) throw TrainError("feature/label count mismatch");
    if (c <= 0.0) throw TrainError("regularization C must be positive");
    bool has_hope = false, has_other = false;
    for (Label l : y) (l == Label::Hope ? has_hope : has_other) = true;
    if (!has_hope || !has_other)
        throw TrainError("training data must contain both classes");
    if (max_iter == 0) max_iter = std::max<std::size_t>(200000, 100 * n);

    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = sign_of(y[i]);

    // Dual state: alpha in [0, C]^n and the gradient G = Q*alpha - e.
    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);
    KernelRowCache cache(x, kernel, std::size_t(256) << 20);

    const double inf = std::numeric_limits<double>::infinity();
    auto in_up = [&](std::size_t t) {
        return (s[t] > 0.0 && alpha[t] < c) || (s[t] < 0.0 && alpha[t] > 0.0);
    };
    auto in_low = [&](std::size_t t) {
        return (s[t] > 0.0 && alpha[t] > 0.0) || (s[t] < 0.0 && alpha[t] < c);
    };

    std::size_t iter = 0;
    double gap = inf;
    double m_up = -inf, m_low = inf;
    while (true) {
        // Maximal violating pair over v_t = -s_t * G_t.
        m_up = -inf;
        m_low = inf;
        std::size_t i = n, j = n;
        for (std::size_t t = 0; t < n; ++t) {
            double v = -s[t] * grad[t];
            if (in_up(t) && v > m_up) {
                m_up = v;
                i = t;
            }
            if (in_low(t) && v < m_low) {
                m_low = v;
                j = t;
            }
        }
        gap = m_up - m_low;
        if (i == n || j == n || gap <= tol) break;
        if (iter >= max_iter)
            throw TrainError(
                "SMO did not converge in " + std::to_string(max_iter) +
                " iterations; remaining KKT violation " + std::to_string(gap));

        const std::vector<double>& row_i = cache.row(i);
        const std::vector<double>& row_j = cache.row(j);
        double old_ai = alpha[i], old_aj = alpha[j];

        // Two-variable subproblem along the equality constraint. The
        // curvature in feature space is ||phi(x_i) - phi(x_j)||^2 for either
        // sign combination.
        double quad = row_i[i] + row_j[j] - 2.0 * row_i[j];
        if (quad <= 0.0) quad = kTau;
        if (s[i] != s[j]) {
            double delta = (-grad[i] - grad[j]) / quad;
            double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0 && alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = diff;
            } else if (diff <= 0.0 && alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > 0.0 && alpha[i] > c) {
                alpha[i] = c;
                alpha[j] = c - diff;
            } else if (diff <= 0.0 && alpha[j] > c) {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            double delta = (grad[i] - grad[j]) / quad;
            double total = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (total > c && alpha[i] > c) {
                alpha[i] = c;
                alpha[j] = total - c;
            } else if (total <= c && alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = total;
            }
            if (total > c && alpha[j] > c) {
                alpha[j] = c;
                alpha[i] = total - c;
            } else if (total <= c && alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = total;
            }
        }

        double delta_i = alpha[i] - old_ai;
        double delta_j = alpha[j] - old_aj;
        if (delta_i == 0.0 && delta_j == 0.0) {
            // Numerically stuck pair; accept the current iterate.
            break;
        }
        for (std::size_t t = 0; t < n; ++t)
            grad[t] += s[t] * (s[i] * row_i[t] * delta_i +
                               s[j] * row_j[t] * delta_j);
        ++iter;
    }

    // Bias making every multiplier satisfy its KKT condition at tolerance:
    // feasible b lies in [m_up - tol, m_low + tol]; the midpoint is safest.
    double bias;
    if (m_up == -inf && m_low == inf) bias = 0.0;
    else if (m_up == -inf) bias = m_low;
    else if (m_low == inf) bias = m_up;
    else bias = 0.5 * (m_up + m_low);

    SvmTrainResult result;
    result.iterations = iter;
    result.kkt_violation = std::max(0.0, gap);
    result.model.kernel = kernel;
    result.model.c = c;
    result.model.bias = bias;
    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] > 0.0) {
            result.model.support_vectors.push_back(x[t]);
            result.model.dual_coef.push_back(alpha[t] * s[t]);
        }
    }
    return result;
}

double decision_function(const SvmModel& model, const SparseVector& x) {
    double f = model.bias;
    for (std::size_t k = 0; k < model.support_vectors.size(); ++k)
        f += model.dual_coef[k] *
             kernel_value(model.kernel, model.support_vectors[k], x);
    return f;
}

Label predict(const SvmModel& model, const SparseVector& x) {
    return decision_function(model, x) >= 0.0 ? Label::Hope : Label::NotHope;
}

LinearModel collapse_linear(const SvmModel& model, std::uint32_t dimension) {
    if (model.kernel.kind != KernelKind::Linear)
        throw DataError("only linear-kernel models collapse to primal form");
    LinearModel out;
    out.kind = LinearKind::SvmLinear;
    out.bias = model.bias;
    out.c = model.c;
    out.weights.assign(dimension, 0.0);
    for (std::size_t k = 0; k < model.support_vectors.size(); ++k) {
        const SparseVector& sv = model.support_vectors[k];
        for (std::size_t t = 0; t < sv.indices.size(); ++t) {
            if (sv.indices[t] >= dimension)
                throw DataError("support vector index out of range");
            out.weights[sv.indices[t]] += model.dual_coef[k] * sv.values[t];
        }
    }
    return out;
}

double svm_dual_objective(const SvmModel& model) {
    const auto& sv = model.support_vectors;
    double quad = 0.0, lin = 0.0;
    for (std::size_t i = 0; i < sv.size(); ++i) {
        lin += std::abs(model.dual_coef[i]);
        for (std::size_t j = 0; j < sv.size(); ++j)
            quad += model.dual_coef[i] * model.dual_coef[j] *
                    kernel_value(model.kernel, sv[i], sv[j]);
    }
    return 0.5 * quad - lin;
}

double svm_primal_objective(const SvmModel& model,
                            const std::vector<SparseVector>& x,
                            const std::vector<Label>& y,
                            std::uint32_t dimension) {
    LinearModel primal = collapse_linear(model, dimension);
    double obj = 0.0;
    for (double w : primal.weights) obj += 0.5 * w * w;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double margin = sign_of(y[i]) * decision_function(primal, x[i]);
        obj += model.c * std::max(0.0, 1.0 - margin);
    }
    return obj;
}

} // namespace hopeclf
