#pragma once

#include "awf/linalg.hpp"

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace awf {

using Complex = std::complex<double>;

/// Periodic sampling lattice on [-L, L)^d: N samples per axis, spacing 2L/N.
/// Flat indices are row-major with the last axis fastest. The same spec
/// describes the dual frequency lattice with spacing 1/(2L); frequency arrays
/// use FFT ordering (index n < N/2 is frequency n/(2L), the rest (n-N)/(2L)).
struct GridSpec {
    std::vector<double> half_width;
    std::vector<int> samples;

    static GridSpec uniform(int dim, double half_width, int samples);

    int dim() const { return static_cast<int>(samples.size()); }
    std::size_t size() const;
    double spacing(int axis) const;
    double max_spacing() const;
    /// Product of spacings (rectangle-rule weight in x).
    double cell_volume() const;
    /// Product of 1/(2L) (rectangle-rule weight in frequency).
    double frequency_cell_volume() const;

    /// Throws ArgumentError unless every N is a power of two >= 8 and every L > 0.
    void validate() const;

    std::vector<int> unravel(std::size_t flat) const;
    std::size_t ravel(const std::vector<int>& index) const;

    /// Sample location -L + n h.
    Vector point(std::size_t flat) const;
    /// Frequency of FFT-ordered index.
    Vector frequency(std::size_t flat) const;
    /// Signed frequency index m with xi = m / (2L), per axis.
    std::vector<int> frequency_index(std::size_t flat) const;

    bool operator==(const GridSpec&) const = default;
};

/// Complex samples f(x_n) of a function on the periodic grid.
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(GridSpec grid, std::vector<Complex> values);

    static GridFunction zeros(const GridSpec& grid);
    static GridFunction from_function(const GridSpec& grid, const std::function<Complex(const Vector&)>& f);
    /// Inverse of spectrum(): samples whose grid Fourier transform is `spectrum` (FFT order).
    static GridFunction from_spectrum(const GridSpec& grid, const std::vector<Complex>& spectrum);
    /// Convenience: spectrum given pointwise as a function of frequency.
    static GridFunction from_spectrum(const GridSpec& grid, const std::function<Complex(const Vector&)>& fhat);

    const GridSpec& grid() const noexcept { return grid_; }
    const std::vector<Complex>& values() const noexcept { return values_; }
    /// Rectangle rule: h^d * sum |f|^2.
    double norm_sq() const noexcept { return norm_sq_; }

    /// F[m] = h^d sum_n f(x_n) exp(-2 pi i x_n . xi_m), FFT order.
    std::vector<Complex> spectrum() const;

    GridFunction scaled(Complex c) const;

private:
    GridSpec grid_;
    std::vector<Complex> values_;
    double norm_sq_ = 0.0;
};

/// d-dimensional complex FFT on a GridSpec with the continuous-transform
/// normalisation used throughout:
///   forward: F[m] = h^d sum_n f[n] exp(-2 pi i x_n . xi_m)
///   inverse: f[n] = (2L)^{-d} sum_m F[m] exp(+2 pi i x_n . xi_m)
/// Plans are created with FFTW_ESTIMATE so results are reproducible run to run.
class GridFft {
public:
    explicit GridFft(const GridSpec& grid);
    ~GridFft();
    GridFft(const GridFft&) = delete;
    GridFft& operator=(const GridFft&) = delete;

    std::vector<Complex> forward(const std::vector<Complex>& samples) const;
    std::vector<Complex> inverse(const std::vector<Complex>& spectrum) const;

    const GridSpec& grid() const noexcept { return grid_; }

private:
    struct Plans;
    GridSpec grid_;
    std::vector<double> sign_;  // (-1)^{sum m}, the shift from x_0 = -L
    std::unique_ptr<Plans> plans_;
};

}  // namespace awf
