#include "fairembed/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fairembed {

EigenResult symmetric_eigen(const Mat& sym) {
    const std::size_t n = sym.rows();
    if (n != sym.cols()) throw std::invalid_argument("matrix not square");

    Mat a = sym;
    Mat v(n, n);
    for (std::size_t i = 0; i < n; ++i) v.at(i, i) = 1.0;

    auto off_diag_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                s += a.at(i, j) * a.at(i, j);
        return std::sqrt(2.0 * s);
    };

    double frob = 0.0;
    for (double x : a.data()) frob += x * x;
    frob = std::sqrt(frob);
    const double tol = (frob > 0.0 ? frob : 1.0) * 1e-15;

    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps && off_diag_norm() > tol; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a.at(p, q);
                if (apq == 0.0) continue;
                double app = a.at(p, p), aqq = a.at(q, q);
                double theta = (aqq - app) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) +
                            std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a.at(k, p), akq = a.at(k, q);
                    a.at(k, p) = c * akp - s * akq;
                    a.at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a.at(p, k), aqk = a.at(q, k);
                    a.at(p, k) = c * apk - s * aqk;
                    a.at(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double vkp = v.at(k, p), vkq = v.at(k, q);
                    v.at(k, p) = c * vkp - s * vkq;
                    v.at(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a.at(i, i) > a.at(j, j);
    });

    EigenResult res;
    res.values.resize(n);
    res.vectors = Mat(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        std::size_t col = order[r];
        res.values[r] = a.at(col, col);
        for (std::size_t k = 0; k < n; ++k)
            res.vectors.at(r, k) = v.at(k, col);
        normalize(res.vectors.row_span(r));
    }
    return res;
}

Mat principal_components(const Mat& rows, std::size_t k,
                         std::vector<double>* eigenvalues) {
    const std::size_t dim = rows.cols();
    if (k > dim) throw std::invalid_argument("k exceeds dimensionality");

    Mat cov(dim, dim);
    for (std::size_t r = 0; r < rows.rows(); ++r) {
        const double* x = rows.row(r);
        for (std::size_t i = 0; i < dim; ++i) {
            if (x[i] == 0.0) continue;
            for (std::size_t j = i; j < dim; ++j)
                cov.at(i, j) += x[i] * x[j];
        }
    }
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < i; ++j) cov.at(i, j) = cov.at(j, i);

    EigenResult eig = symmetric_eigen(cov);
    Mat pcs(k, dim);
    if (eigenvalues) eigenvalues->assign(eig.values.begin(),
                                         eig.values.begin() + k);
    for (std::size_t r = 0; r < k; ++r)
        std::copy(eig.vectors.row(r), eig.vectors.row(r) + dim, pcs.row(r));
    return pcs;
}

}  // namespace fairembed
