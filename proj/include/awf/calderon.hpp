#pragma once

#include "awf/group.hpp"
#include "awf/wavelets.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace awf {

struct CalderonSum {
    /// sum_{|j| <= J} |psi-hat((A^t)^j xi)|^2
    double value = 0.0;
    /// Heuristic estimate of the omitted terms |j| > J (may be +inf when the terms do not decay).
    double tail_estimate = 0.0;
    /// Some orbit point lies on an indicator-box face (the identity only holds a.e.).
    bool near_boundary = false;
};

/// Terms are accumulated outward from j = 0 (j = 0, 1, -1, 2, -2, ...), so the
/// value is non-decreasing in J bit for bit.
CalderonSum calderon_sum(const FrequencyWavelet& psi, const DilationDescriptor& a, const Vector& xi, int truncation,
                         double boundary_tol = 1e-12);

/// sum_{j in range} |psi-hat((A^t)^j xi)|^2 with no tail handling.
double calderon_partial_sum(const FrequencyWavelet& psi, const DilationDescriptor& a, const Vector& xi, JRange range);

struct CalderonOptions {
    double tolerance = 1e-6;
    double origin_exclusion_spacings = 2.0;
    double boundary_tol = 1e-12;
    /// When set, the verdict checks [ess_inf, ess_sup] / |det P| against [C1, C2].
    std::optional<std::pair<double, double>> frame_bounds;
};

struct CalderonReport {
    GridSpec grid;
    int truncation = 0;
    /// Per grid point (canonical order); entries for excluded points are 0 and flagged in `retained`.
    std::vector<double> values;
    std::vector<std::uint8_t> retained;
    std::size_t excluded = 0;
    std::size_t excluded_origin = 0;
    std::size_t excluded_boundary = 0;
    double ess_inf = 0.0;
    double ess_sup = 0.0;
    double target = 0.0;
    double ratio_inf = 0.0;
    double ratio_sup = 0.0;
    double tail_bound = 0.0;
    double tolerance = 0.0;
    std::optional<std::pair<double, double>> frame_bounds;
    bool pass = false;
};

/// Sweeps the frequency grid [-L, L)^d, skipping an origin ball and indicator-face points.
CalderonReport calderon_report(const FrequencyWavelet& psi, const DilationDescriptor& a, const DilationDescriptor& p,
                               const GridSpec& grid, int truncation, const CalderonOptions& options = {});

}  // namespace awf
