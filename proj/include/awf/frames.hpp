#pragma once

#include "awf/calderon.hpp"
#include "awf/group.hpp"
#include "awf/wavelets.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace awf {

// All transforms below work on the torus [-L, L)^d of a GridSpec. Inner
// products use the rectangle rule in x and the (exactly equivalent) discrete
// Plancherel identity in frequency; psi-hat is evaluated pointwise on the grid
// frequencies.

/// pi(x, A^j) psi, built from its spectrum |det A|^{j/2} e^{-2 pi i x.xi} psi-hat((A^t)^j xi).
GridFunction atom(const FrequencyWavelet& psi, const DilationDescriptor& a, const Vector& x, int j,
                  const GridSpec& grid);

/// C_psi f(x_n, A^j) on every grid point for each scale in a range.
struct TransformSlices {
    GridSpec grid;
    JRange scales;
    std::vector<std::vector<Complex>> slices;  // slices[j - scales.lo]
};

TransformSlices transform_slices(const FrequencyWavelet& psi, const DilationDescriptor& a, const GridFunction& f,
                                 JRange scales);

struct CoefficientEntry {
    int j = 0;
    std::vector<std::int64_t> k;
    Complex value;
};

struct ScaleSampling {
    int j = 0;
    std::size_t translates = 0;
    /// Largest distance between A^j P k and the grid point it was read from.
    double max_offset = 0.0;
};

struct CoefficientTable {
    std::vector<CoefficientEntry> entries;  // j ascending, k lexicographic
    std::vector<ScaleSampling> scales;

    double energy() const;
};

/// Throws ScaleRangeError unless 4h <= sigma_min(A^j P) and sigma_max(A^j P) < 2L.
void check_scale_resolved(const DilationDescriptor& a, const DilationDescriptor& p, const GridSpec& grid, int j);

/// Longest run of scales inside `within` that pass check_scale_resolved.
/// Throws ScaleRangeError when there is none.
JRange resolved_scales(const DilationDescriptor& a, const DilationDescriptor& p, const GridSpec& grid, JRange within);

/// Translation indices k whose points A^j P k fall in [-L, L)^d.
std::vector<std::vector<std::int64_t>> torus_translates(const DilationDescriptor& a, const DilationDescriptor& p,
                                                        const GridSpec& grid, int j);

/// coef(j, k) = <f, pi(A^j P k, A^j) psi>, read off C_psi f at the nearest grid
/// point. Without a k-box every translate inside the torus is used.
CoefficientTable analysis_coefficients(const FrequencyWavelet& psi, const DilationDescriptor& a,
                                       const DilationDescriptor& p, const GridFunction& f, JRange scales,
                                       const std::optional<KBox>& k_box = std::nullopt);

/// Spectrum of sum coef(j,k) pi(x_{n(j,k)}, A^j) psi (synthesis with the sampled positions).
std::vector<Complex> synthesis_spectrum(const FrequencyWavelet& psi, const DilationDescriptor& a,
                                        const DilationDescriptor& p, const GridSpec& grid,
                                        const CoefficientTable& table);

/// Orthonormal test functions spanning a band-limited subspace.
struct TestSpace {
    GridSpec grid;
    std::vector<GridFunction> basis;
    std::vector<Vector> frequencies;
};

/// M torus Fourier modes with band_lo <= |xi| <= band_hi, picked evenly from
/// the band ordered by (|xi|, signed index).
TestSpace fourier_test_space(const GridSpec& grid, std::size_t m, double band_lo, double band_hi);

struct FrameBoundsEstimate {
    double c1 = 0.0;
    double c2 = 0.0;
    double parseval_defect = 0.0;
    std::vector<double> eigenvalues;  // ascending
    std::size_t dimension = 0;
    /// Always "restricted-subspace estimate": bounds of S compressed to the test space.
    std::string kind = "restricted-subspace estimate";
};

FrameBoundsEstimate frame_bounds_estimate(const FrequencyWavelet& psi, const DilationDescriptor& a,
                                          const DilationDescriptor& p, JRange scales,
                                          const std::optional<KBox>& k_box, const TestSpace& space);

/// Seeded random functions with spectrum uniform in [-1,1] + i[-1,1] on the
/// grid frequencies band_lo <= |xi| <= band_hi, normalised to ||f|| = 1.
std::vector<GridFunction> random_band_limited(const GridSpec& grid, std::size_t count, double band_lo,
                                              double band_hi, std::uint64_t seed);

/// ||C_psi f||^2 = sum_j |det A|^{-j} h^d sum_x |C_psi f(x, A^j)|^2 over the scale range.
double continuous_transform_norm(const FrequencyWavelet& psi, const DilationDescriptor& a, const GridFunction& f,
                                 JRange scales);

/// (2L)^{-d} sum_xi |f-hat(xi)|^2 * sum_{j in range} |psi-hat((A^t)^j xi)|^2.
double frequency_side_integral(const FrequencyWavelet& psi, const DilationDescriptor& a, const GridFunction& f,
                               JRange scales);

struct PlancherelCheck {
    double ratio = 0.0;
    double transform_norm_sq = 0.0;
    double frequency_integral = 0.0;
};

/// Ratio of the space-side transform norm to the frequency-side integral.
PlancherelCheck plancherel_identity_check(const FrequencyWavelet& psi, const DilationDescriptor& a,
                                          const GridFunction& f, JRange scales);

struct InequalityVerdict {
    std::vector<double> ratios;  // ||C_psi f||^2 / (|det P| ||f||^2)
    double c1 = 0.0;
    double c2 = 0.0;
    double allowance = 0.0;
    bool pass = false;
};

/// Checks C1 - eps <= ||C_psi f||^2 / (|det P| ||f||^2) <= C2 + eps for every test function.
InequalityVerdict covolume_inequality_check(const FrequencyWavelet& psi, const DilationDescriptor& a,
                                            const DilationDescriptor& p, const std::vector<GridFunction>& tests,
                                            double c1, double c2, JRange scales, double allowance = 0.05);

/// Left-Haar L^2 norm of the local maximal function MF(x, j) = sup_{q in Q} |F((x, j) q)|,
/// discretised with the grid offsets lying in A^j Q_x at each scale (Q taken closed).
double amalgam_maximal_norm(const TransformSlices& f, const GroupBox& q, const DilationDescriptor& a);

struct FrameReport {
    std::string wavelet;
    Matrix dilation;
    Matrix translation;
    JRange scales;
    JRange continuous_scales;
    std::optional<KBox> k_box;
    std::uint64_t seed = 0;
    std::vector<double> bessel_ratios;
    FrameBoundsEstimate bounds;
    std::vector<double> continuous_norm_ratios;
    InequalityVerdict inequality;
    std::vector<ScaleSampling> sampling;
    bool bessel_pass = false;
    bool pass = false;
};

/// Frame bounds on the test space and Bessel ratios use the discrete scales;
/// the continuous-norm inequality uses `continuous_scales`. One allowance for both.
FrameReport frame_report(const FrequencyWavelet& psi, const DilationDescriptor& a, const DilationDescriptor& p,
                         JRange scales, JRange continuous_scales, const std::optional<KBox>& k_box,
                         const TestSpace& space, const std::vector<GridFunction>& tests, double allowance,
                         std::uint64_t seed);

}  // namespace awf
