#pragma once

#include "awf/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace awf {

/// Element (x, A^j) of G = R^d x| <A>.
struct GroupElement {
    Vector x;
    int j = 0;

    static GroupElement identity(int dim) { return {Vector::Zero(dim), 0}; }
};

/// Inclusive integer interval of scales.
struct JRange {
    int lo = 0;
    int hi = 0;

    int size() const { return hi >= lo ? hi - lo + 1 : 0; }
    bool contains(int j) const { return j >= lo && j <= hi; }
};

/// Inclusive per-axis integer box of translation indices.
struct KBox {
    std::vector<std::int64_t> lo;
    std::vector<std::int64_t> hi;

    int dim() const { return static_cast<int>(lo.size()); }
    std::size_t count() const;
    bool contains(const std::vector<std::int64_t>& k) const;
};

/// Relatively compact set in G of the form { (frame * u, j) : u in [lo, hi), j in [j_lo, j_hi] }.
/// With `closed` set the u-box is [lo, hi] instead. A frame other than the
/// identity describes parallelotopes such as P[0,1)^d.
struct GroupBox {
    Matrix frame;
    Vector lo;
    Vector hi;
    int j_lo = 0;
    int j_hi = 0;
    bool closed = false;

    static GroupBox axis_aligned(Vector lo, Vector hi, int j_lo = 0, int j_hi = 0, bool closed = false);

    int dim() const { return static_cast<int>(lo.size()); }
    /// Lebesgue measure of the x-part.
    double x_volume() const;
};

enum class Membership { inside, outside, boundary };

/// Classifies (x, j) against `box`; points within `tol` of a face of the u-box
/// (in u coordinates) report `boundary`.
Membership classify_point(const GroupBox& box, const Vector& x, int j, double tol = 1e-12);

enum class HaarSide { left, right };

GroupElement multiply(const GroupElement& g, const GroupElement& h, const DilationDescriptor& a);
GroupElement inverse(const GroupElement& g, const DilationDescriptor& a);

/// Density of the Haar measure on the j-th sheet: |det A|^{-j} for left, 1 for right.
double haar_weight(int j, const DilationDescriptor& a, HaarSide side);

/// Haar measure of a box: sum over its sheets of weight(j) * vol(x-part).
double haar_measure(const GroupBox& box, const DilationDescriptor& a, HaarSide side);

/// Finite window of the quasi-lattice { (A^j P k, j) }. Points may be edited
/// after generation (tests perturb them); j_range and k_box still describe the
/// region in which the window is complete.
struct QuasiLatticeWindow {
    DilationDescriptor a;
    DilationDescriptor p;
    JRange j_range;
    KBox k_box;
    std::vector<GroupElement> points;
};

inline constexpr std::size_t kDefaultMaxWindowPoints = 1'000'000;

/// Points ordered by j ascending, then k lexicographically.
QuasiLatticeWindow generate_quasilattice(const DilationDescriptor& a, const DilationDescriptor& p, JRange j_range,
                                         const KBox& k_box, std::size_t max_points = kDefaultMaxWindowPoints);

struct Decomposition {
    GroupElement lambda;
    std::vector<std::int64_t> k;
    Vector t;
};

/// Unique factorisation g = lambda * (P t, 0) with lambda = (A^j P k, j), t in [0,1)^d.
Decomposition decompose(const GroupElement& g, const DilationDescriptor& a, const DilationDescriptor& p);

/// #(points in g * box), brute force over the window.
struct TranslateCount {
    int count = 0;
    bool on_boundary = false;
};

TranslateCount count_in_translate(const QuasiLatticeWindow& window, const GroupElement& g, const GroupBox& box);

/// Probe maximum of #(window cap gQ). A lower bound for Rel_Q of the full quasi-lattice.
struct RelSepResult {
    int max_count = 0;
    std::size_t probes_used = 0;
    std::size_t excluded = 0;
    bool lower_bound = true;
};

RelSepResult rel_sep_count(const QuasiLatticeWindow& window, const GroupBox& q, const std::vector<GroupElement>& probes);

struct SeparationDensity {
    int min_count = 0;
    int max_count = 0;
    std::size_t probes_used = 0;
    std::size_t excluded = 0;
    bool separated = false;
    bool dense = false;
};

/// True iff every lattice point that could fall into g * box lies in the window's complete region.
bool probe_covered(const QuasiLatticeWindow& window, const GroupElement& g, const GroupBox& box);

/// Extremal counts of #(window cap gS) over probes. Every probe must be covered
/// by the window (see probe_covered); otherwise ArgumentError.
SeparationDensity separation_density_check(const QuasiLatticeWindow& window, const GroupBox& s,
                                           const std::vector<GroupElement>& probes);

/// `count` seeded random probes that satisfy probe_covered for `box`.
std::vector<GroupElement> interior_probes(const QuasiLatticeWindow& window, const GroupBox& box, std::size_t count,
                                          std::uint64_t seed);

/// The complement C = P[0,1)^d x {I} of the affine quasi-lattice.
GroupBox quasilattice_complement(const DilationDescriptor& p);
/// C^{-1} = (-P)[0,1)^d x {I}.
GroupBox quasilattice_complement_inverse(const DilationDescriptor& p);

/// rho_G(C) for C = P[0,1)^d x {I}, i.e. |det P|.
double covolume_quasilattice(const DilationDescriptor& p);

/// (mu_G(U), mu_G(K)) with the left Haar measure.
std::pair<double, double> covolume_bounds(const GroupBox& u, const GroupBox& k, const DilationDescriptor& a);

}  // namespace awf
