#pragma once

#include <Eigen/Dense>

#include <string_view>
#include <vector>

namespace awf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct LinalgOptions {
    int power_cap = 64;
    /// Eigenvalue moduli within this distance of 1 classify a dilation as `boundary`.
    double boundary_tol = 1e-9;
};

enum class DilationClass { expansive, contractive, mixed, boundary };

std::string_view to_string(DilationClass c);

/// An invertible d x d real matrix with cached determinant, inverse, powers and
/// eigenvalue moduli. Used both for dilations A and translation matrices P.
///
/// Powers A^j and (A^t)^j for |j| <= power_cap are computed eagerly at
/// construction; negative powers come from the explicit inverse. The object is
/// immutable afterwards and can be shared across threads.
class DilationDescriptor {
public:
    explicit DilationDescriptor(Matrix m, LinalgOptions options = {});

    /// Scalar convenience for d = 1.
    static DilationDescriptor scalar(double a, LinalgOptions options = {});
    static DilationDescriptor identity(int dim, LinalgOptions options = {});

    int dim() const noexcept { return static_cast<int>(matrix_.rows()); }
    const Matrix& matrix() const noexcept { return matrix_; }
    const Matrix& inverse() const noexcept { return inverse_; }
    double det() const noexcept { return det_; }
    double abs_det() const noexcept { return std::abs(det_); }
    /// Moduli of the eigenvalues, sorted descending.
    const std::vector<double>& eig_moduli() const noexcept { return eig_moduli_; }
    const LinalgOptions& options() const noexcept { return options_; }
    int power_cap() const noexcept { return options_.power_cap; }

    /// A^j; throws TruncationRangeError for |j| > power_cap.
    const Matrix& power(int j) const;
    /// (A^t)^j; same range rules as power().
    const Matrix& transpose_power(int j) const;

    /// Throws TruncationRangeError unless |j| <= power_cap.
    void check_power(int j) const;

private:
    Matrix matrix_;
    Matrix inverse_;
    double det_ = 0.0;
    std::vector<double> eig_moduli_;
    LinalgOptions options_;
    // index i holds exponent i - power_cap
    std::vector<Matrix> powers_;
    std::vector<Matrix> transpose_powers_;
};

Matrix matrix_power(const DilationDescriptor& a, int j);

DilationClass classify_dilation(const DilationDescriptor& a);
DilationClass classify_dilation(const DilationDescriptor& a, double tau);

/// True iff every entry is within 1e-9 of an integer.
bool preserves_integer_lattice(const DilationDescriptor& a);

/// Eigenvalue moduli (descending) from the characteristic polynomial; d <= 3 only.
std::vector<double> eigen_moduli_charpoly(const Matrix& m);
/// Eigenvalue moduli (descending) from a real-Schur (QR iteration) eigensolver.
std::vector<double> eigen_moduli_qr(const Matrix& m);

}  // namespace awf
