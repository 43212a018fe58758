#include "awf/calderon.hpp"

#include "awf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace awf {

namespace {

constexpr int kTailWindow = 10;
constexpr int kExitLookahead = 8;

// Terms t_1..t_J on one side (index 0 holds j = +-1).
double side_tail(const std::vector<double>& terms, const FrequencyWavelet& psi, const DilationDescriptor& a,
                 const Vector& xi, int truncation, int direction) {
    if (terms.empty()) {
        return std::numeric_limits<double>::infinity();
    }
    if (psi.compact_support() && terms.back() == 0.0) {
        // orbit has left the support annulus and stays out for a while
        bool exited = true;
        const double r_in = psi.inner_radius();
        const double r_out = psi.outer_radius();
        for (int s = 1; s <= kExitLookahead && exited; ++s) {
            const int j = direction * (truncation + s);
            if (j > a.power_cap() || j < -a.power_cap()) {
                break;
            }
            const double r = (a.transpose_power(j) * xi).norm();
            exited = r > r_out || r < r_in;
        }
        if (exited) {
            return 0.0;
        }
    }
    // least-squares fit of log t_j against j over the last nonzero terms
    const int n = static_cast<int>(terms.size());
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    int used = 0;
    for (int i = std::max(0, n - kTailWindow); i < n; ++i) {
        if (terms[static_cast<std::size_t>(i)] > 0.0) {
            const double x = i;
            const double y = std::log(terms[static_cast<std::size_t>(i)]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++used;
        }
    }
    if (used == 0) {
        return 0.0;
    }
    if (used == 1) {
        return std::numeric_limits<double>::infinity();
    }
    const double denom = used * sxx - sx * sx;
    const double slope = (used * sxy - sx * sy) / denom;
    const double ratio = std::exp(slope);
    if (!(ratio < 1.0)) {
        return std::numeric_limits<double>::infinity();
    }
    // Upper envelope: every window term carried forward at the fitted ratio. Oscillating
    // factors (Haar's sin^4) make the plain fit undershoot the next term.
    double envelope = 0.0;
    for (int i = std::max(0, n - kTailWindow); i < n; ++i) {
        envelope = std::max(envelope, terms[static_cast<std::size_t>(i)] * std::pow(ratio, n - 1 - i));
    }
    return envelope * ratio / (1.0 - ratio);
}

}  // namespace

CalderonSum calderon_sum(const FrequencyWavelet& psi, const DilationDescriptor& a, const Vector& xi, int truncation,
                         double boundary_tol) {
    if (truncation < 0) {
        throw ArgumentError("truncation J must be nonnegative");
    }
    a.check_power(truncation);
    if (xi.size() != psi.dim() || a.dim() != psi.dim()) {
        throw ArgumentError("frequency, dilation and wavelet dimensions must agree");
    }
    CalderonSum out;
    const auto term = [&](int j) {
        const Vector eta = a.transpose_power(j) * xi;
        if (psi.near_boundary(eta, boundary_tol)) {
            out.near_boundary = true;
        }
        const double t = psi.power(eta);
        if (std::isnan(t)) {
            throw NumericError("spectrum is NaN");
        }
        return t;
    };
    std::vector<double> pos;
    std::vector<double> neg;
    pos.reserve(static_cast<std::size_t>(truncation));
    neg.reserve(static_cast<std::size_t>(truncation));
    double s = term(0);
    for (int i = 1; i <= truncation; ++i) {
        const double tp = term(i);
        const double tn = term(-i);
        s += tp;
        s += tn;
        pos.push_back(tp);
        neg.push_back(tn);
    }
    out.value = s;
    if (truncation == 0) {
        out.tail_estimate = psi.compact_support() && psi.norm_l2() == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        return out;
    }
    out.tail_estimate = side_tail(pos, psi, a, xi, truncation, +1) + side_tail(neg, psi, a, xi, truncation, -1);
    return out;
}

double calderon_partial_sum(const FrequencyWavelet& psi, const DilationDescriptor& a, const Vector& xi, JRange range) {
    a.check_power(range.lo);
    a.check_power(range.hi);
    double s = 0.0;
    for (int j = range.lo; j <= range.hi; ++j) {
        s += psi.power(a.transpose_power(j) * xi);
    }
    return s;
}

CalderonReport calderon_report(const FrequencyWavelet& psi, const DilationDescriptor& a, const DilationDescriptor& p,
                               const GridSpec& grid, int truncation, const CalderonOptions& options) {
    grid.validate();
    if (!(options.tolerance > 0.0)) {
        throw ArgumentError("tolerance must be positive");
    }
    if (grid.dim() != psi.dim() || p.dim() != psi.dim()) {
        throw ArgumentError("grid, translation and wavelet dimensions must agree");
    }
    CalderonReport r;
    r.grid = grid;
    r.truncation = truncation;
    r.target = p.abs_det();
    r.tolerance = options.tolerance;
    r.frame_bounds = options.frame_bounds;
    r.values.assign(grid.size(), 0.0);
    r.retained.assign(grid.size(), 0);

    const double origin_radius = options.origin_exclusion_spacings * grid.max_spacing();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double tail = 0.0;
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const Vector xi = grid.point(n);
        if (xi.norm() <= origin_radius) {
            ++r.excluded_origin;
            continue;
        }
        const CalderonSum cs = calderon_sum(psi, a, xi, truncation, options.boundary_tol);
        if (cs.near_boundary) {
            ++r.excluded_boundary;
            continue;
        }
        r.values[n] = cs.value;
        r.retained[n] = 1;
        lo = std::min(lo, cs.value);
        hi = std::max(hi, cs.value);
        tail = std::max(tail, cs.tail_estimate);
    }
    r.excluded = r.excluded_origin + r.excluded_boundary;
    if (r.excluded == grid.size()) {
        throw ArgumentError("every grid point was excluded from the Calderon sweep");
    }
    r.ess_inf = lo;
    r.ess_sup = hi;
    r.tail_bound = tail;
    r.ratio_inf = lo / r.target;
    r.ratio_sup = hi / r.target;
    if (r.frame_bounds) {
        const auto [c1, c2] = *r.frame_bounds;
        r.pass = r.ratio_inf >= c1 - options.tolerance && r.ratio_sup <= c2 + options.tolerance;
    } else {
        r.pass = lo >= r.target - options.tolerance && hi <= r.target + options.tolerance;
    }
    return r;
}

}  // namespace awf
