#include "awf/group.hpp"

#include "awf/errors.hpp"
#include "awf/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace awf {

std::size_t KBox::count() const {
    std::size_t n = 1;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (hi[i] < lo[i]) {
            return 0;
        }
        n *= static_cast<std::size_t>(hi[i] - lo[i] + 1);
    }
    return n;
}

bool KBox::contains(const std::vector<std::int64_t>& k) const {
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (k[i] < lo[i] || k[i] > hi[i]) {
            return false;
        }
    }
    return true;
}

GroupBox GroupBox::axis_aligned(Vector lo, Vector hi, int j_lo, int j_hi, bool closed) {
    const auto d = lo.size();
    return GroupBox{Matrix::Identity(d, d), std::move(lo), std::move(hi), j_lo, j_hi, closed};
}

double GroupBox::x_volume() const {
    double v = std::abs(frame.determinant());
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
        v *= std::max(0.0, hi[i] - lo[i]);
    }
    return v;
}

namespace {

Membership classify_u(const GroupBox& box, const Vector& u, double tol) {
    bool boundary = false;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const double lo_tol = tol * std::max(1.0, std::abs(box.lo[i]));
        const double hi_tol = tol * std::max(1.0, std::abs(box.hi[i]));
        if (u[i] < box.lo[i] - lo_tol || u[i] > box.hi[i] + hi_tol) {
            return Membership::outside;
        }
        if (std::abs(u[i] - box.lo[i]) <= lo_tol || std::abs(u[i] - box.hi[i]) <= hi_tol) {
            boundary = true;
        }
    }
    return boundary ? Membership::boundary : Membership::inside;
}

void check_dims(const GroupElement& g, const DilationDescriptor& a) {
    if (g.x.size() != a.dim()) {
        throw ArgumentError("group element dimension " + std::to_string(g.x.size()) +
                            " does not match dilation dimension " + std::to_string(a.dim()));
    }
}

// Points of a window grouped by sheet and sorted by first coordinate.
class SheetIndex {
public:
    explicit SheetIndex(const std::vector<GroupElement>& points) : points_(points) {
        order_.resize(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            order_[i] = i;
        }
        std::sort(order_.begin(), order_.end(), [&](std::size_t l, std::size_t r) {
            if (points[l].j != points[r].j) {
                return points[l].j < points[r].j;
            }
            return points[l].x[0] < points[r].x[0];
        });
    }

    template <class Fn>
    void for_each_in(int j, double x0_lo, double x0_hi, Fn&& fn) const {
        auto first = std::lower_bound(order_.begin(), order_.end(), std::pair{j, x0_lo},
                                      [&](std::size_t idx, const std::pair<int, double>& key) {
                                          const auto& p = points_[idx];
                                          return p.j < key.first || (p.j == key.first && p.x[0] < key.second);
                                      });
        for (auto it = first; it != order_.end(); ++it) {
            const auto& p = points_[*it];
            if (p.j != j || p.x[0] > x0_hi) {
                break;
            }
            fn(p);
        }
    }

private:
    const std::vector<GroupElement>& points_;
    std::vector<std::size_t> order_;
};

// Corners of the u-box, mapped by an affine map u -> offset + lin * u.
template <class Fn>
void for_each_corner(const GroupBox& box, Fn&& fn) {
    const auto d = box.dim();
    Vector u(d);
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
        for (int i = 0; i < d; ++i) {
            u[i] = (mask >> i) & 1u ? box.hi[i] : box.lo[i];
        }
        fn(u);
    }
}

TranslateCount count_indexed(const SheetIndex& index, const QuasiLatticeWindow& window, const GroupElement& g,
                             const GroupBox& box, const Matrix& frame_inv) {
    const auto& a = window.a;
    const Matrix& ag = a.power(g.j);
    const Matrix& ag_inv = a.power(-g.j);
    const Matrix lin = ag * box.frame;
    double x0_lo = std::numeric_limits<double>::infinity();
    double x0_hi = -x0_lo;
    for_each_corner(box, [&](const Vector& u) {
        const double x0 = g.x[0] + lin.row(0).dot(u);
        x0_lo = std::min(x0_lo, x0);
        x0_hi = std::max(x0_hi, x0);
    });
    const double pad = 1e-9 * std::max({1.0, std::abs(x0_lo), std::abs(x0_hi)});
    TranslateCount out;
    for (int i = box.j_lo; i <= box.j_hi; ++i) {
        index.for_each_in(g.j + i, x0_lo - pad, x0_hi + pad, [&](const GroupElement& lam) {
            const Vector u = frame_inv * (ag_inv * (lam.x - g.x));
            switch (classify_u(box, u, 1e-12)) {
                case Membership::inside:
                    ++out.count;
                    break;
                case Membership::boundary:
                    out.on_boundary = true;
                    if (box.closed) {
                        ++out.count;
                    }
                    break;
                case Membership::outside:
                    break;
            }
        });
    }
    return out;
}

Matrix checked_frame_inverse(const GroupBox& box) {
    const Eigen::FullPivLU<Matrix> lu(box.frame);
    if (!lu.isInvertible()) {
        throw ArgumentError("box frame must be invertible");
    }
    return lu.inverse();
}

}  // namespace

Membership classify_point(const GroupBox& box, const Vector& x, int j, double tol) {
    if (j < box.j_lo || j > box.j_hi) {
        return Membership::outside;
    }
    const Vector u = checked_frame_inverse(box) * x;
    const Membership m = classify_u(box, u, tol);
    return m;
}

GroupElement multiply(const GroupElement& g, const GroupElement& h, const DilationDescriptor& a) {
    check_dims(g, a);
    check_dims(h, a);
    a.check_power(g.j + h.j);
    return {g.x + a.power(g.j) * h.x, g.j + h.j};
}

GroupElement inverse(const GroupElement& g, const DilationDescriptor& a) {
    check_dims(g, a);
    return {-(a.power(-g.j) * g.x), -g.j};
}

double haar_weight(int j, const DilationDescriptor& a, HaarSide side) {
    if (side == HaarSide::right) {
        return 1.0;
    }
    return std::pow(a.abs_det(), -static_cast<double>(j));
}

double haar_measure(const GroupBox& box, const DilationDescriptor& a, HaarSide side) {
    const double vol = box.x_volume();
    double total = 0.0;
    for (int j = box.j_lo; j <= box.j_hi; ++j) {
        total += haar_weight(j, a, side) * vol;
    }
    return total;
}

QuasiLatticeWindow generate_quasilattice(const DilationDescriptor& a, const DilationDescriptor& p, JRange j_range,
                                         const KBox& k_box, std::size_t max_points) {
    if (a.dim() != p.dim() || k_box.dim() != a.dim() || k_box.hi.size() != k_box.lo.size()) {
        throw ArgumentError("dilation, translation and k-box dimensions must agree");
    }
    const std::size_t per_sheet = k_box.count();
    const auto sheets = static_cast<std::size_t>(std::max(0, j_range.size()));
    if (per_sheet != 0 && sheets > max_points / per_sheet) {
        throw ResourceError("quasi-lattice window would hold " + std::to_string(sheets) + " x " +
                            std::to_string(per_sheet) + " points, above the limit of " + std::to_string(max_points));
    }
    QuasiLatticeWindow w{a, p, j_range, k_box, {}};
    w.points.reserve(sheets * per_sheet);
    const int d = a.dim();
    std::vector<std::int64_t> k(k_box.lo);
    Vector kv(d);
    for (int j = j_range.lo; j <= j_range.hi; ++j) {
        const Matrix m = a.power(j) * p.matrix();
        if (per_sheet == 0) {
            continue;
        }
        k = k_box.lo;
        while (true) {
            for (int i = 0; i < d; ++i) {
                kv[i] = static_cast<double>(k[static_cast<std::size_t>(i)]);
            }
            w.points.push_back({m * kv, j});
            // lexicographic increment, last axis fastest
            int axis = d - 1;
            while (axis >= 0) {
                auto ax = static_cast<std::size_t>(axis);
                if (++k[ax] <= k_box.hi[ax]) {
                    break;
                }
                k[ax] = k_box.lo[ax];
                --axis;
            }
            if (axis < 0) {
                break;
            }
        }
    }
    return w;
}

Decomposition decompose(const GroupElement& g, const DilationDescriptor& a, const DilationDescriptor& p) {
    check_dims(g, a);
    const int d = a.dim();
    const Vector u = p.inverse() * (a.power(-g.j) * g.x);
    Decomposition out;
    out.k.resize(static_cast<std::size_t>(d));
    out.t.resize(d);
    Vector kv(d);
    for (int i = 0; i < d; ++i) {
        double k = std::floor(u[i]);
        double t = u[i] - k;
        if (t >= 1.0) {
            k += 1.0;
            t = 0.0;
        }
        out.k[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(k);
        kv[i] = k;
        out.t[i] = t;
    }
    out.lambda = {a.power(g.j) * (p.matrix() * kv), g.j};
    return out;
}

TranslateCount count_in_translate(const QuasiLatticeWindow& window, const GroupElement& g, const GroupBox& box) {
    check_dims(g, window.a);
    const SheetIndex index(window.points);
    return count_indexed(index, window, g, box, checked_frame_inverse(box));
}

RelSepResult rel_sep_count(const QuasiLatticeWindow& window, const GroupBox& q, const std::vector<GroupElement>& probes) {
    if (probes.empty()) {
        throw ArgumentError("rel_sep_count needs at least one probe");
    }
    const SheetIndex index(window.points);
    const Matrix frame_inv = checked_frame_inverse(q);
    RelSepResult out;
    for (const auto& g : probes) {
        check_dims(g, window.a);
        const TranslateCount c = count_indexed(index, window, g, q, frame_inv);
        if (c.on_boundary) {
            ++out.excluded;
            continue;
        }
        ++out.probes_used;
        out.max_count = std::max(out.max_count, c.count);
    }
    return out;
}

bool probe_covered(const QuasiLatticeWindow& window, const GroupElement& g, const GroupBox& box) {
    const auto& a = window.a;
    const Matrix lin_base = a.power(g.j) * box.frame;
    for (int i = box.j_lo; i <= box.j_hi; ++i) {
        const int j = g.j + i;
        if (!window.j_range.contains(j)) {
            return false;
        }
        const Matrix to_k = window.p.inverse() * a.power(-j);
        const Vector offset = to_k * g.x;
        const Matrix lin = to_k * lin_base;
        Vector kmin = Vector::Constant(box.dim(), std::numeric_limits<double>::infinity());
        Vector kmax = -kmin;
        for_each_corner(box, [&](const Vector& u) {
            const Vector w = offset + lin * u;
            kmin = kmin.cwiseMin(w);
            kmax = kmax.cwiseMax(w);
        });
        for (int ax = 0; ax < box.dim(); ++ax) {
            const auto axs = static_cast<std::size_t>(ax);
            const double lo = std::floor(kmin[ax] - 1e-9);
            const double hi = std::floor(kmax[ax] + 1e-9);
            if (lo < static_cast<double>(window.k_box.lo[axs]) || hi > static_cast<double>(window.k_box.hi[axs])) {
                return false;
            }
        }
    }
    return true;
}

SeparationDensity separation_density_check(const QuasiLatticeWindow& window, const GroupBox& s,
                                           const std::vector<GroupElement>& probes) {
    if (probes.empty()) {
        throw ArgumentError("separation_density_check needs at least one probe");
    }
    const SheetIndex index(window.points);
    const Matrix frame_inv = checked_frame_inverse(s);
    SeparationDensity out;
    out.min_count = std::numeric_limits<int>::max();
    for (std::size_t n = 0; n < probes.size(); ++n) {
        const auto& g = probes[n];
        check_dims(g, window.a);
        if (!probe_covered(window, g, s)) {
            throw ArgumentError("probe " + std::to_string(n) +
                                " lies outside the region where the window is complete; shrink the probe region");
        }
        const TranslateCount c = count_indexed(index, window, g, s, frame_inv);
        if (c.on_boundary) {
            ++out.excluded;
            continue;
        }
        ++out.probes_used;
        out.min_count = std::min(out.min_count, c.count);
        out.max_count = std::max(out.max_count, c.count);
    }
    if (out.probes_used == 0) {
        out.min_count = 0;
        return out;
    }
    out.separated = out.max_count <= 1;
    out.dense = out.min_count >= 1;
    return out;
}

std::vector<GroupElement> interior_probes(const QuasiLatticeWindow& window, const GroupBox& box, std::size_t count,
                                          std::uint64_t seed) {
    Rng rng(seed);
    const int d = window.a.dim();
    const int j_lo = window.j_range.lo - box.j_lo;
    const int j_hi = window.j_range.hi - box.j_hi;
    if (j_hi < j_lo) {
        throw ArgumentError("window j-range is too small for the probe box");
    }
    std::vector<GroupElement> out;
    out.reserve(count);
    const std::size_t max_attempts = 1000 * std::max<std::size_t>(count, 1);
    Vector u(d);
    for (std::size_t attempt = 0; out.size() < count; ++attempt) {
        if (attempt >= max_attempts) {
            throw ArgumentError("could not place interior probes; enlarge the window");
        }
        const int j = static_cast<int>(rng.uniform_int(j_lo, j_hi));
        for (int i = 0; i < d; ++i) {
            const auto is = static_cast<std::size_t>(i);
            u[i] = rng.uniform(static_cast<double>(window.k_box.lo[is]), static_cast<double>(window.k_box.hi[is]) + 1.0);
        }
        GroupElement g{window.a.power(j) * (window.p.matrix() * u), j};
        if (probe_covered(window, g, box)) {
            out.push_back(std::move(g));
        }
    }
    return out;
}

GroupBox quasilattice_complement(const DilationDescriptor& p) {
    const int d = p.dim();
    return GroupBox{p.matrix(), Vector::Zero(d), Vector::Ones(d), 0, 0, false};
}

GroupBox quasilattice_complement_inverse(const DilationDescriptor& p) {
    const int d = p.dim();
    return GroupBox{-p.matrix(), Vector::Zero(d), Vector::Ones(d), 0, 0, false};
}

double covolume_quasilattice(const DilationDescriptor& p) { return p.abs_det(); }

std::pair<double, double> covolume_bounds(const GroupBox& u, const GroupBox& k, const DilationDescriptor& a) {
    return {haar_measure(u, a, HaarSide::left), haar_measure(k, a, HaarSide::left)};
}

}  // namespace awf
