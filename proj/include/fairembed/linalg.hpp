#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace fairembed {

// Dense row-major matrix of doubles. Deliberately minimal; rows are exposed
// as spans and all numerics in this project run on top of them.
class Mat {
  public:
    Mat() : rows_(0), cols_(0) {}
    Mat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

    std::span<double> row_span(std::size_t i) { return {row(i), cols_}; }
    std::span<const double> row_span(std::size_t i) const {
        return {row(i), cols_};
    }

    double& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double at(std::size_t i, std::size_t j) const {
        return data_[i * cols_ + j];
    }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool operator==(const Mat& other) const = default;

  private:
    std::size_t rows_, cols_;
    std::vector<double> data_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// Cosine similarity; 0 when either vector is zero.
inline double cosine(std::span<const double> a, std::span<const double> b) {
    double na = norm(a), nb = norm(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot(a, b) / (na * nb);
}

// Scales `a` to unit L2 norm in place; returns false for a zero vector.
inline bool normalize(std::span<double> a) {
    double n = norm(a);
    if (n == 0.0) return false;
    for (double& x : a) x /= n;
    return true;
}

struct EigenResult {
    std::vector<double> values;  // descending
    Mat vectors;                 // row i is the eigenvector for values[i]
};

// Full eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
// Eigenvalues sorted descending, eigenvectors unit-norm.
EigenResult symmetric_eigen(const Mat& sym);

// Top-k principal components of a set of row vectors. Rows are used as given
// (callers center them if they want centered PCA); components are the leading
// eigenvectors of rows^T * rows, returned one per Mat row, unit-norm, ordered
// by descending eigenvalue. `eigenvalues` (optional) receives the k values.
Mat principal_components(const Mat& rows, std::size_t k,
                         std::vector<double>* eigenvalues = nullptr);

}  // namespace fairembed
