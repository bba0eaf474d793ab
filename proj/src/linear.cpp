#include "hopeclf/linear.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "hopeclf/errors.hpp"

namespace hopeclf {

namespace {

inline double sigmoid(double u) {
    if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
    double e = std::exp(u);
    return e / (1.0 + e);
}

// log(1 + exp(u)) without overflow.
inline double softplus(double u) {
    if (u > 0.0) return u + std::log1p(std::exp(-u));
    return std::log1p(std::exp(u));
}

inline double sign_of(Label l) { return l == Label::Hope ? 1.0 : -1.0; }

// Objective and gradient in one pass over the data. theta holds the weights
// with the bias appended; only the weights are regularized.
double eval_objective(const std::vector<SparseVector>& x,
                      const std::vector<Label>& y, double c,
                      const std::vector<double>& theta,
                      std::vector<double>* grad) {
    const std::size_t dim = theta.size() - 1;
    if (grad) {
        grad->assign(theta.size(), 0.0);
        for (std::size_t t = 0; t < dim; ++t) (*grad)[t] = theta[t];
    }
    double obj = 0.0;
    for (std::size_t t = 0; t < dim; ++t) obj += 0.5 * theta[t] * theta[t];

    for (std::size_t i = 0; i < x.size(); ++i) {
        const SparseVector& row = x[i];
        double z = theta[dim];
        for (std::size_t k = 0; k < row.indices.size(); ++k)
            z += theta[row.indices[k]] * row.values[k];
        double s = sign_of(y[i]);
        obj += c * softplus(-s * z);
        if (grad) {
            double coef = c * -s * sigmoid(-s * z);
            for (std::size_t k = 0; k < row.indices.size(); ++k)
                (*grad)[row.indices[k]] += coef * row.values[k];
            (*grad)[dim] += coef;
        }
    }
    return obj;
}

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double dot_dense(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace

double decision_function(const LinearModel& model, const SparseVector& x) {
    double z = model.bias;
    for (std::size_t k = 0; k < x.indices.size(); ++k) {
        if (x.indices[k] >= model.weights.size())
            throw DataError("feature index " + std::to_string(x.indices[k]) +
                            " out of range for model dimension " +
                            std::to_string(model.weights.size()));
        z += model.weights[x.indices[k]] * x.values[k];
    }
    return z;
}

Label predict(const LinearModel& model, const SparseVector& x) {
    return decision_function(model, x) >= 0.0 ? Label::Hope : Label::NotHope;
}

double logistic_probability(const LinearModel& model, const SparseVector& x) {
    return sigmoid(decision_function(model, x));
}

double logreg_objective(const std::vector<SparseVector>& x,
                        const std::vector<Label>& y,
                        const std::vector<double>& weights, double bias,
                        double c) {
    std::vector<double> theta = weights;
    theta.push_back(bias);
    return eval_objective(x, y, c, theta, nullptr);
}

void logreg_gradient(const std::vector<SparseVector>& x,
                     const std::vector<Label>& y,
                     const std::vector<double>& weights, double bias, double c,
                     std::vector<double>& grad_w, double& grad_b) {
    std::vector<double> theta = weights;
    theta.push_back(bias);
    std::vector<double> grad;
    eval_objective(x, y, c, theta, &grad);
    grad_b = grad.back();
    grad.pop_back();
    grad_w = std::move(grad);
}

LogRegResult train_logreg(const std::vector<SparseVector>& x,
                          const std::vector<Label>& y, std::uint32_t dimension,
                          double c, double tol, std::size_t max_iter) {
    if (x.empty()) throw TrainError("cannot train on an empty dataset");
    if (x.size() != y.size()) throw TrainError("feature/label count mismatch");
    if (c <= 0.0) throw TrainError("regularization C must be positive");
    bool has_hope = false, has_other = false;
    for (Label l : y) (l == Label::Hope ? has_hope : has_other) = true;
    if (!has_hope || !has_other)
        throw TrainError("training data must contain both classes");
    for (const SparseVector& row : x)
        if (!row.empty() && row.max_index() >= dimension)
            throw TrainError("feature index out of range");

    const std::size_t n_vars = static_cast<std::size_t>(dimension) + 1;
    std::vector<double> theta(n_vars, 0.0);
    std::vector<double> grad;
    double obj = eval_objective(x, y, c, theta, &grad);

    LogRegResult result;
    result.trace.objectives.push_back(obj);

    // Limited-memory BFGS with history 10 and Armijo backtracking.
    constexpr std::size_t kHistory = 10;
    constexpr double kArmijo = 1e-4;
    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;

    std::vector<double> direction(n_vars), new_grad(n_vars);
    std::size_t iter = 0;
    while (iter < max_iter) {
        if (inf_norm(grad) <= tol) break;

        // Two-loop recursion: direction = -H * grad.
        direction = grad;
        std::vector<double> alpha_hist(s_hist.size());
        for (std::size_t j = s_hist.size(); j-- > 0;) {
            alpha_hist[j] = rho_hist[j] * dot_dense(s_hist[j], direction);
            for (std::size_t t = 0; t < n_vars; ++t)
                direction[t] -= alpha_hist[j] * y_hist[j][t];
        }
        if (!s_hist.empty()) {
            double yy = dot_dense(y_hist.back(), y_hist.back());
            double sy = dot_dense(s_hist.back(), y_hist.back());
            double gamma = sy / yy;
            for (double& d : direction) d *= gamma;
        }
        for (std::size_t j = 0; j < s_hist.size(); ++j) {
            double beta = rho_hist[j] * dot_dense(y_hist[j], direction);
            for (std::size_t t = 0; t < n_vars; ++t)
                direction[t] += (alpha_hist[j] - beta) * s_hist[j][t];
        }
        for (double& d : direction) d = -d;

        double slope = dot_dense(grad, direction);
        if (slope >= 0.0) {
            // Curvature went bad; restart from steepest descent.
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            for (std::size_t t = 0; t < n_vars; ++t) direction[t] = -grad[t];
            slope = dot_dense(grad, direction);
        }

        double step = 1.0;
        double new_obj = obj;
        std::vector<double> new_theta(n_vars);
        bool accepted = false;
        for (int back = 0; back < 60; ++back) {
            for (std::size_t t = 0; t < n_vars; ++t)
                new_theta[t] = theta[t] + step * direction[t];
            new_obj = eval_objective(x, y, c, new_theta, &new_grad);
            if (new_obj <= obj + kArmijo * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break; // no further progress at machine precision

        std::vector<double> s_vec(n_vars), y_vec(n_vars);
        for (std::size_t t = 0; t < n_vars; ++t) {
            s_vec[t] = new_theta[t] - theta[t];
            y_vec[t] = new_grad[t] - grad[t];
        }
        double sy = dot_dense(s_vec, y_vec);
        if (sy > 1e-12) {
            if (s_hist.size() == kHistory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
            s_hist.push_back(std::move(s_vec));
            y_hist.push_back(std::move(y_vec));
            rho_hist.push_back(1.0 / sy);
        }

        theta = std::move(new_theta);
        new_theta.resize(n_vars);
        grad = new_grad;
        obj = new_obj;
        ++iter;
        result.trace.objectives.push_back(obj);
    }

    result.trace.iterations = iter;
    result.trace.grad_inf_norm = inf_norm(grad);
    result.trace.converged = result.trace.grad_inf_norm <= tol;
    result.trace.objective = obj;

    result.model.kind = LinearKind::Logistic;
    result.model.bias = theta.back();
    theta.pop_back();
    result.model.weights = std::move(theta);
    result.model.c = c;
    return result;
}

} // namespace hopeclf
