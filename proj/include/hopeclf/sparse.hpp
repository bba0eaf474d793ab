#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace hopeclf {

// Sparse feature vector. Indices are strictly increasing and stored values are
// nonzero; parallel arrays keep the footprint small for high-dimensional
// n-gram spaces.
struct SparseVector {
    std::vector<std::uint32_t> indices;
    std::vector<double> values;

    std::size_t nnz() const { return indices.size(); }
    bool empty() const { return indices.empty(); }

    // Appends an entry; the caller is responsible for index order.
    void push(std::uint32_t index, double value) {
        if (value == 0.0) return;
        indices.push_back(index);
        values.push_back(value);
    }

    bool well_formed() const {
        if (indices.size() != values.size()) return false;
        for (std::size_t i = 0; i < indices.size(); ++i) {
            if (values[i] == 0.0 || !std::isfinite(values[i])) return false;
            if (i > 0 && indices[i] <= indices[i - 1]) return false;
        }
        return true;
    }

    std::uint32_t max_index() const {
        return indices.empty() ? 0 : indices.back();
    }

    double l2_norm() const {
        double sum = 0.0;
        for (double v : values) sum += v * v;
        return std::sqrt(sum);
    }

    void scale(double factor) {
        for (double& v : values) v *= factor;
    }
};

inline double dot(const SparseVector& a, const SparseVector& b) {
    double sum = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.indices.size() && j < b.indices.size()) {
        if (a.indices[i] == b.indices[j]) {
            sum += a.values[i] * b.values[j];
            ++i;
            ++j;
        } else if (a.indices[i] < b.indices[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return sum;
}

// ||a - b||^2, computed sparsely.
inline double squared_distance(const SparseVector& a, const SparseVector& b) {
    double sum = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.indices.size() || j < b.indices.size()) {
        if (j >= b.indices.size() ||
            (i < a.indices.size() && a.indices[i] < b.indices[j])) {
            sum += a.values[i] * a.values[i];
            ++i;
        } else if (i >= a.indices.size() || b.indices[j] < a.indices[i]) {
            sum += b.values[j] * b.values[j];
            ++j;
        } else {
            double d = a.values[i] - b.values[j];
            sum += d * d;
            ++i;
            ++j;
        }
    }
    return sum;
}

} // namespace hopeclf
