#include "awf/linalg.hpp"

#include "awf/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace awf {

namespace {

void sort_descending(std::vector<double>& v) { std::sort(v.begin(), v.end(), std::greater<>()); }

// Roots of x^2 + b x + c, returned as moduli.
void quadratic_moduli(double b, double c, std::vector<double>& out) {
    const double disc = b * b - 4.0 * c;
    if (disc < 0.0) {
        const double m = std::sqrt(std::max(c, 0.0));
        out.push_back(m);
        out.push_back(m);
        return;
    }
    const double s = std::sqrt(disc);
    const double q = -0.5 * (b + std::copysign(s, b));
    if (q == 0.0) {
        out.push_back(0.0);
        out.push_back(0.0);
        return;
    }
    out.push_back(std::abs(q));
    out.push_back(std::abs(c / q));
}

double cubic_real_root(double a, double b, double c) {
    // x^3 + a x^2 + b x + c = 0, depressed with x = t - a/3
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double disc = q * q / 4.0 + p * p * p / 27.0;
    double t = 0.0;
    if (disc > 0.0) {
        const double s = std::sqrt(disc);
        t = std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s);
    } else if (p < 0.0) {
        const double r = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
        t = r * std::cos(std::acos(arg) / 3.0);
    } else {
        t = std::cbrt(-q);
    }
    double x = t - a / 3.0;
    for (int it = 0; it < 4; ++it) {
        const double f = ((x + a) * x + b) * x + c;
        const double df = (3.0 * x + 2.0 * a) * x + b;
        if (df == 0.0) {
            break;
        }
        const double step = f / df;
        x -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) {
            break;
        }
    }
    return x;
}

}  // namespace

std::string_view to_string(DilationClass c) {
    switch (c) {
        case DilationClass::expansive:
            return "expansive";
        case DilationClass::contractive:
            return "contractive";
        case DilationClass::mixed:
            return "mixed";
        case DilationClass::boundary:
            return "boundary";
    }
    return "unknown";
}

std::vector<double> eigen_moduli_charpoly(const Matrix& m) {
    const auto d = m.rows();
    std::vector<double> out;
    if (d == 1) {
        out.push_back(std::abs(m(0, 0)));
    } else if (d == 2) {
        quadratic_moduli(-m.trace(), m.determinant(), out);
    } else if (d == 3) {
        const double tr = m.trace();
        const double minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) -
                              m(0, 2) * m(2, 0) + m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
        const double det = m.determinant();
        const double a = -tr;
        const double b = minors;
        const double c = -det;
        const double r = cubic_real_root(a, b, c);
        out.push_back(std::abs(r));
        // deflate: x^2 + (a + r) x + (b + (a + r) r)
        quadratic_moduli(a + r, b + (a + r) * r, out);
    } else {
        throw ArgumentError("characteristic-polynomial route supports d <= 3, got d = " + std::to_string(d));
    }
    sort_descending(out);
    return out;
}

std::vector<double> eigen_moduli_qr(const Matrix& m) {
    Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigenvalue iteration did not converge");
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        out.push_back(std::abs(solver.eigenvalues()[i]));
    }
    sort_descending(out);
    return out;
}

DilationDescriptor::DilationDescriptor(Matrix m, LinalgOptions options)
    : matrix_(std::move(m)), options_(options) {
    if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
        throw ArgumentError("matrix must be square and non-empty");
    }
    if (!matrix_.allFinite()) {
        throw ArgumentError("matrix entries must be finite");
    }
    if (options_.power_cap < 0) {
        throw ArgumentError("power cap must be nonnegative");
    }
    const Eigen::PartialPivLU<Matrix> lu(matrix_);
    det_ = lu.determinant();
    if (!(std::abs(det_) > 0.0) || !std::isfinite(det_)) {
        throw ArgumentError("matrix is singular");
    }
    inverse_ = lu.inverse();
    const Matrix residual = matrix_ * inverse_ - Matrix::Identity(dim(), dim());
    if (residual.cwiseAbs().maxCoeff() > 1e-10) {
        throw ArgumentError("matrix is numerically singular (A * inv(A) deviates from I by more than 1e-10)");
    }
    eig_moduli_ = dim() <= 3 ? eigen_moduli_charpoly(matrix_) : eigen_moduli_qr(matrix_);

    const int cap = options_.power_cap;
    const auto n = static_cast<std::size_t>(2 * cap + 1);
    powers_.assign(n, Matrix::Identity(dim(), dim()));
    for (int j = 1; j <= cap; ++j) {
        powers_[static_cast<std::size_t>(cap + j)] = powers_[static_cast<std::size_t>(cap + j - 1)] * matrix_;
        powers_[static_cast<std::size_t>(cap - j)] = powers_[static_cast<std::size_t>(cap - j + 1)] * inverse_;
    }
    transpose_powers_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        transpose_powers_[i] = powers_[i].transpose();
    }
}

DilationDescriptor DilationDescriptor::scalar(double a, LinalgOptions options) {
    return DilationDescriptor(Matrix::Constant(1, 1, a), options);
}

DilationDescriptor DilationDescriptor::identity(int dim, LinalgOptions options) {
    return DilationDescriptor(Matrix::Identity(dim, dim), options);
}

void DilationDescriptor::check_power(int j) const {
    if (j > options_.power_cap || j < -options_.power_cap) {
        throw TruncationRangeError("dilation power " + std::to_string(j) + " exceeds the power cap " +
                                   std::to_string(options_.power_cap));
    }
}

const Matrix& DilationDescriptor::power(int j) const {
    check_power(j);
    const Matrix& p = powers_[static_cast<std::size_t>(j + options_.power_cap)];
    if (!p.allFinite()) {
        throw NumericError("A^" + std::to_string(j) + " overflows double precision");
    }
    return p;
}

const Matrix& DilationDescriptor::transpose_power(int j) const {
    check_power(j);
    const Matrix& p = transpose_powers_[static_cast<std::size_t>(j + options_.power_cap)];
    if (!p.allFinite()) {
        throw NumericError("(A^t)^" + std::to_string(j) + " overflows double precision");
    }
    return p;
}

Matrix matrix_power(const DilationDescriptor& a, int j) { return a.power(j); }

DilationClass classify_dilation(const DilationDescriptor& a) {
    return classify_dilation(a, a.options().boundary_tol);
}

DilationClass classify_dilation(const DilationDescriptor& a, double tau) {
    const auto& mod = a.eig_moduli();
    for (double m : mod) {
        if (std::abs(m - 1.0) <= tau) {
            return DilationClass::boundary;
        }
    }
    if (mod.back() > 1.0 + tau) {
        return DilationClass::expansive;
    }
    if (mod.front() < 1.0 - tau) {
        return DilationClass::contractive;
    }
    return DilationClass::mixed;
}

bool preserves_integer_lattice(const DilationDescriptor& a) {
    const Matrix& m = a.matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (std::abs(m(r, c) - std::round(m(r, c))) > 1e-9) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace awf
