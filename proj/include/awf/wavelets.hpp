#pragma once

#include "awf/grid.hpp"
#include "awf/linalg.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace awf {

/// Half-open box [lo, hi) in frequency space.
struct FrequencyBox {
    Vector lo;
    Vector hi;

    bool contains(const Vector& xi) const;
    double volume() const;
};

enum class WaveletKind { closed_form, indicator_union, sampled };

enum class OutsidePolicy { error, zero };

/// psi-hat evaluated at a point, with a flag for nearest-neighbour lookups that
/// hit the outermost layer of a sampled grid.
struct SpectrumSample {
    Complex value;
    bool at_grid_boundary = false;
};

/// A wavelet described by its Fourier transform
///   psi-hat(xi) = integral psi(t) exp(-2 pi i t . xi) dt.
/// Copies are cheap; sampled data is shared.
class FrequencyWavelet {
public:
    /// Haar psi = 1_[0,1/2) - 1_[1/2,1); closed form on R.
    static FrequencyWavelet haar();
    /// Meyer wavelet on R with a polynomial bell of degree 3, 5 or 7.
    static FrequencyWavelet meyer(int bell_degree = 3);
    /// Shannon wavelet set [-1,-1/2) u [1/2,1), amplitude 1.
    static FrequencyWavelet shannon();
    static FrequencyWavelet zero(int dim);
    /// Boxes must be pairwise disjoint and share a dimension; amplitude > 0.
    static FrequencyWavelet indicator(std::vector<FrequencyBox> boxes, double amplitude = 1.0);
    /// Samples on the frequency grid [-L, L)^d (natural order, xi_n = -L + n h).
    static FrequencyWavelet sampled(GridSpec grid, std::vector<Complex> values,
                                    OutsidePolicy outside = OutsidePolicy::error);

    int dim() const noexcept { return dim_; }
    WaveletKind kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }
    /// ||psi||_2 (equal to ||psi-hat||_2).
    double norm_l2() const noexcept { return norm_l2_; }
    double gain() const noexcept { return gain_; }

    /// Same wavelet multiplied by c.
    FrequencyWavelet scaled(double c) const;

    Complex evaluate(const Vector& xi) const;
    SpectrumSample evaluate_flagged(const Vector& xi) const;
    /// |psi-hat(xi)|^2.
    double power(const Vector& xi) const { return std::norm(evaluate(xi)); }

    /// True when psi-hat vanishes outside the annulus inner_radius() <= |xi| <= outer_radius().
    bool compact_support() const noexcept { return compact_; }
    double inner_radius() const noexcept { return inner_radius_; }
    double outer_radius() const noexcept { return outer_radius_; }

    /// For indicator unions: xi lies within tol of a box face. Always false otherwise.
    bool near_boundary(const Vector& xi, double tol = 1e-12) const;

    const std::vector<FrequencyBox>& boxes() const noexcept { return boxes_; }
    double amplitude() const noexcept { return amplitude_; }
    int bell_degree() const noexcept { return bell_degree_; }
    const GridSpec* sample_grid() const noexcept { return sampled_ ? &sampled_->grid : nullptr; }
    const std::vector<Complex>* sample_values() const noexcept { return sampled_ ? &sampled_->values : nullptr; }
    OutsidePolicy outside_policy() const noexcept { return sampled_ ? sampled_->outside : OutsidePolicy::error; }

private:
    struct SampledData {
        GridSpec grid;
        std::vector<Complex> values;
        OutsidePolicy outside;
    };

    FrequencyWavelet() = default;
    Complex evaluate_unscaled(const Vector& xi, bool* at_boundary) const;

    int dim_ = 1;
    WaveletKind kind_ = WaveletKind::closed_form;
    std::string name_;
    double gain_ = 1.0;
    double norm_l2_ = 0.0;
    bool compact_ = false;
    double inner_radius_ = 0.0;
    double outer_radius_ = 0.0;
    int bell_degree_ = 0;
    std::vector<FrequencyBox> boxes_;
    double amplitude_ = 0.0;
    std::shared_ptr<const SampledData> sampled_;
};

struct BuiltinParams {
    int bell_degree = 3;
};

/// "haar", "shannon_1d" or "meyer_1d" (also "zero" for the 1D zero wavelet).
FrequencyWavelet builtin_wavelet(const std::string& name, const BuiltinParams& params = {});

/// Polynomial Meyer bell nu with nu(x) = 0 for x <= 0, 1 for x >= 1, nu(x) + nu(1-x) = 1.
double meyer_bell(double x, int degree);

struct TilingReport {
    std::size_t points_total = 0;
    std::size_t points_checked = 0;
    std::size_t excluded = 0;
    std::size_t dilation_violations = 0;
    std::size_t translation_violations = 0;
    double dilation_violation_fraction = 0.0;
    double translation_violation_fraction = 0.0;
    bool dilation_pass = false;
    bool translation_pass = false;
    /// |det P|^{1/2}: the amplitude making amp * 1_W satisfy the Calderon identity.
    double amplitude = 0.0;
    int truncation = 0;
};

struct TilingOptions {
    /// Points with |xi| below this many grid spacings are skipped.
    double origin_exclusion_spacings = 2.0;
    double boundary_tol = 1e-12;
};

/// Checks on the frequency grid (points off box boundaries) that
///   sum_{|j|<=J} 1_W((A^t)^j xi) = 1   and   sum_k 1_W(xi + (P^t)^{-1} k) = 1.
/// A must be expansive or contractive.
TilingReport verify_wavelet_set(const FrequencyWavelet& w, const DilationDescriptor& a, const DilationDescriptor& p,
                                const GridSpec& grid, int truncation, const TilingOptions& options = {});

}  // namespace awf
