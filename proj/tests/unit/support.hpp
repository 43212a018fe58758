#pragma once

#include "awf/linalg.hpp"
#include "awf/random.hpp"

#include <doctest.h>

#include <cmath>

namespace awf::test {

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index r = 0;
    for (const auto& row : rows) {
        Eigen::Index c = 0;
        for (double v : row) {
            m(r, c++) = v;
        }
        ++r;
    }
    return m;
}

inline Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) {
        v[i++] = x;
    }
    return v;
}

inline Matrix random_matrix(Rng& rng, int d, double lo, double hi) {
    Matrix m(d, d);
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            m(r, c) = rng.uniform(lo, hi);
        }
    }
    return m;
}

/// Random matrix with condition number below `max_cond`.
inline Matrix well_conditioned(Rng& rng, int d, double max_cond = 10.0) {
    while (true) {
        Matrix m = random_matrix(rng, d, -1.0, 1.0) + 1.5 * Matrix::Identity(d, d);
        Eigen::JacobiSVD<Matrix> svd(m);
        const auto& s = svd.singularValues();
        if (s[d - 1] > 0 && s[0] / s[d - 1] < max_cond) {
            return m;
        }
    }
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace awf::test
