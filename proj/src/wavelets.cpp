#include "awf/wavelets.hpp"

#include "awf/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace awf {

namespace {

constexpr double kPi = std::numbers::pi;

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 8> kGaussNodes = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                               -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                               0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussWeights = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                                 0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                                 0.2223810344533745, 0.1012285362903763};

template <class Fn>
double gauss_legendre(Fn&& f, double a, double b, int panels) {
    const double w = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * w;
        for (std::size_t i = 0; i < kGaussNodes.size(); ++i) {
            total += kGaussWeights[i] * f(mid + 0.5 * w * kGaussNodes[i]);
        }
    }
    return 0.5 * w * total;
}

double meyer_modulus(double xi, int degree) {
    const double a = std::abs(xi);
    if (a < 1.0 / 3.0 || a > 4.0 / 3.0) {
        return 0.0;
    }
    if (a <= 2.0 / 3.0) {
        return std::sin(0.5 * kPi * meyer_bell(3.0 * a - 1.0, degree));
    }
    return std::cos(0.5 * kPi * meyer_bell(1.5 * a - 1.0, degree));
}

bool boxes_overlap(const FrequencyBox& l, const FrequencyBox& r) {
    for (Eigen::Index i = 0; i < l.lo.size(); ++i) {
        if (std::max(l.lo[i], r.lo[i]) >= std::min(l.hi[i], r.hi[i])) {
            return false;
        }
    }
    return true;
}

bool near_box_face(const FrequencyBox& b, const Vector& xi, double tol) {
    // within the closed, slightly inflated box and close to some face
    bool close = false;
    for (Eigen::Index i = 0; i < xi.size(); ++i) {
        const double tlo = tol * std::max(1.0, std::abs(b.lo[i]));
        const double thi = tol * std::max(1.0, std::abs(b.hi[i]));
        if (xi[i] < b.lo[i] - tlo || xi[i] > b.hi[i] + thi) {
            return false;
        }
        if (std::abs(xi[i] - b.lo[i]) <= tlo || std::abs(xi[i] - b.hi[i]) <= thi) {
            close = true;
        }
    }
    return close;
}

}  // namespace

bool FrequencyBox::contains(const Vector& xi) const {
    for (Eigen::Index i = 0; i < xi.size(); ++i) {
        if (!(xi[i] >= lo[i] && xi[i] < hi[i])) {
            return false;
        }
    }
    return true;
}

double FrequencyBox::volume() const {
    double v = 1.0;
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
        v *= std::max(0.0, hi[i] - lo[i]);
    }
    return v;
}

double meyer_bell(double x, int degree) {
    if (x <= 0.0) {
        return 0.0;
    }
    if (x >= 1.0) {
        return 1.0;
    }
    switch (degree) {
        case 3:
            return x * x * (3.0 - 2.0 * x);
        case 5:
            return x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
        case 7:
            return x * x * x * x * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x * x * x);
        default:
            throw ArgumentError("Meyer bell degree must be 3, 5 or 7");
    }
}

FrequencyWavelet FrequencyWavelet::haar() {
    FrequencyWavelet w;
    w.dim_ = 1;
    w.kind_ = WaveletKind::closed_form;
    w.name_ = "haar";
    w.norm_l2_ = 1.0;
    return w;
}

FrequencyWavelet FrequencyWavelet::meyer(int bell_degree) {
    meyer_bell(0.5, bell_degree);  // validates the degree
    FrequencyWavelet w;
    w.dim_ = 1;
    w.kind_ = WaveletKind::closed_form;
    w.name_ = "meyer_1d";
    w.bell_degree_ = bell_degree;
    w.compact_ = true;
    w.inner_radius_ = 1.0 / 3.0;
    w.outer_radius_ = 4.0 / 3.0;
    // the bell is only C^1 at the panel ends, so integrate piecewise
    const auto sq = [bell_degree](double x) {
        const double m = meyer_modulus(x, bell_degree);
        return m * m;
    };
    const double half = gauss_legendre(sq, 1.0 / 3.0, 2.0 / 3.0, 64) + gauss_legendre(sq, 2.0 / 3.0, 4.0 / 3.0, 128);
    w.norm_l2_ = std::sqrt(2.0 * half);
    return w;
}

FrequencyWavelet FrequencyWavelet::shannon() {
    std::vector<FrequencyBox> boxes;
    boxes.push_back({Vector::Constant(1, -1.0), Vector::Constant(1, -0.5)});
    boxes.push_back({Vector::Constant(1, 0.5), Vector::Constant(1, 1.0)});
    FrequencyWavelet w = indicator(std::move(boxes), 1.0);
    w.name_ = "shannon_1d";
    return w;
}

FrequencyWavelet FrequencyWavelet::zero(int dim) {
    if (dim < 1) {
        throw ArgumentError("dimension must be positive");
    }
    FrequencyWavelet w;
    w.dim_ = dim;
    w.kind_ = WaveletKind::closed_form;
    w.name_ = "zero";
    w.compact_ = true;
    return w;
}

FrequencyWavelet FrequencyWavelet::indicator(std::vector<FrequencyBox> boxes, double amplitude) {
    if (boxes.empty()) {
        throw ArgumentError("indicator union needs at least one box");
    }
    if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
        throw ArgumentError("indicator amplitude must be positive");
    }
    const auto d = boxes.front().lo.size();
    for (const auto& b : boxes) {
        if (b.lo.size() != d || b.hi.size() != d) {
            throw ArgumentError("all boxes must share one dimension");
        }
        if (!b.lo.allFinite() || !b.hi.allFinite() || (b.hi - b.lo).minCoeff() <= 0.0) {
            throw ArgumentError("box bounds must be finite with lo < hi");
        }
    }
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        for (std::size_t k = i + 1; k < boxes.size(); ++k) {
            if (boxes_overlap(boxes[i], boxes[k])) {
                throw ArgumentError("indicator boxes " + std::to_string(i) + " and " + std::to_string(k) + " overlap");
            }
        }
    }
    FrequencyWavelet w;
    w.dim_ = static_cast<int>(d);
    w.kind_ = WaveletKind::indicator_union;
    w.name_ = "indicator_union";
    w.amplitude_ = amplitude;
    w.compact_ = true;
    double measure = 0.0;
    double inner = std::numeric_limits<double>::infinity();
    double outer = 0.0;
    for (const auto& b : boxes) {
        measure += b.volume();
        // nearest and farthest points of the closed box from the origin
        const Vector nearest = Vector::Zero(static_cast<Eigen::Index>(d)).cwiseMax(b.lo).cwiseMin(b.hi);
        const Vector far = b.lo.cwiseAbs().cwiseMax(b.hi.cwiseAbs());
        inner = std::min(inner, nearest.norm());
        outer = std::max(outer, far.norm());
    }
    w.inner_radius_ = inner;
    w.outer_radius_ = outer;
    w.norm_l2_ = amplitude * std::sqrt(measure);
    w.boxes_ = std::move(boxes);
    return w;
}

FrequencyWavelet FrequencyWavelet::sampled(GridSpec grid, std::vector<Complex> values, OutsidePolicy outside) {
    grid.validate();
    if (values.size() != grid.size()) {
        throw ArgumentError("sampled spectrum needs one value per grid point");
    }
    double s = 0.0;
    for (const auto& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw NumericError("sampled spectrum contains non-finite values");
        }
        s += std::norm(v);
    }
    FrequencyWavelet w;
    w.dim_ = grid.dim();
    w.kind_ = WaveletKind::sampled;
    w.name_ = "sampled";
    w.norm_l2_ = std::sqrt(s * grid.cell_volume());
    if (outside == OutsidePolicy::zero) {
        double outer = 0.0;
        for (std::size_t a = 0; a < grid.half_width.size(); ++a) {
            outer += grid.half_width[a] * grid.half_width[a];
        }
        w.compact_ = true;
        w.outer_radius_ = std::sqrt(outer);
    }
    w.sampled_ = std::make_shared<const SampledData>(SampledData{std::move(grid), std::move(values), outside});
    return w;
}

FrequencyWavelet FrequencyWavelet::scaled(double c) const {
    if (!std::isfinite(c)) {
        throw ArgumentError("scale factor must be finite");
    }
    FrequencyWavelet w(*this);
    w.gain_ *= c;
    w.norm_l2_ *= std::abs(c);
    return w;
}

Complex FrequencyWavelet::evaluate_unscaled(const Vector& xi, bool* at_boundary) const {
    if (xi.size() != dim_) {
        throw ArgumentError("frequency has dimension " + std::to_string(xi.size()) + ", wavelet has " +
                            std::to_string(dim_));
    }
    switch (kind_) {
        case WaveletKind::closed_form: {
            if (name_ == "zero") {
                return {0.0, 0.0};
            }
            const double x = xi[0];
            if (name_ == "haar") {
                if (x == 0.0) {
                    return {0.0, 0.0};
                }
                // (1 - e^{-i pi x})^2 / (2 pi i x) = (2i / (pi x)) sin^2(pi x / 2) e^{-i pi x}
                const double s = std::sin(0.5 * kPi * x);
                return Complex(0.0, 2.0 * s * s / (kPi * x)) * std::polar(1.0, -kPi * x);
            }
            return std::polar(meyer_modulus(x, bell_degree_), kPi * x);
        }
        case WaveletKind::indicator_union:
            for (const auto& b : boxes_) {
                if (b.contains(xi)) {
                    return {amplitude_, 0.0};
                }
            }
            return {0.0, 0.0};
        case WaveletKind::sampled: {
            const auto& g = sampled_->grid;
            std::vector<int> idx(static_cast<std::size_t>(dim_));
            bool edge = false;
            for (int a = 0; a < dim_; ++a) {
                const auto as = static_cast<std::size_t>(a);
                const double l = g.half_width[as];
                if (!(xi[a] >= -l && xi[a] < l)) {
                    if (sampled_->outside == OutsidePolicy::zero) {
                        return {0.0, 0.0};
                    }
                    throw DomainError("frequency outside the sampled domain [-L, L)");
                }
                const int n = g.samples[as];
                int k = static_cast<int>(std::lround((xi[a] + l) / g.spacing(a)));
                k = std::clamp(k, 0, n - 1);
                edge = edge || k == 0 || k == n - 1;
                idx[as] = k;
            }
            if (at_boundary != nullptr) {
                *at_boundary = edge;
            }
            return sampled_->values[g.ravel(idx)];
        }
    }
    return {0.0, 0.0};
}

Complex FrequencyWavelet::evaluate(const Vector& xi) const {
    const Complex v = evaluate_unscaled(xi, nullptr) * gain_;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw NumericError("spectrum evaluated to a non-finite value");
    }
    return v;
}

SpectrumSample FrequencyWavelet::evaluate_flagged(const Vector& xi) const {
    SpectrumSample s;
    s.value = evaluate_unscaled(xi, &s.at_grid_boundary) * gain_;
    return s;
}

bool FrequencyWavelet::near_boundary(const Vector& xi, double tol) const {
    if (kind_ != WaveletKind::indicator_union) {
        return false;
    }
    for (const auto& b : boxes_) {
        if (near_box_face(b, xi, tol)) {
            return true;
        }
    }
    return false;
}

FrequencyWavelet builtin_wavelet(const std::string& name, const BuiltinParams& params) {
    if (name == "haar") {
        return FrequencyWavelet::haar();
    }
    if (name == "shannon_1d") {
        return FrequencyWavelet::shannon();
    }
    if (name == "meyer_1d") {
        return FrequencyWavelet::meyer(params.bell_degree);
    }
    if (name == "zero") {
        return FrequencyWavelet::zero(1);
    }
    throw ArgumentError("unknown builtin wavelet '" + name + "' (expected haar, shannon_1d or meyer_1d)");
}

TilingReport verify_wavelet_set(const FrequencyWavelet& w, const DilationDescriptor& a, const DilationDescriptor& p,
                                const GridSpec& grid, int truncation, const TilingOptions& options) {
    if (w.kind() != WaveletKind::indicator_union) {
        throw ArgumentError("verify_wavelet_set needs an indicator-union wavelet");
    }
    if (a.dim() != w.dim() || p.dim() != w.dim() || grid.dim() != w.dim()) {
        throw ArgumentError("wavelet, dilation, translation and grid dimensions must agree");
    }
    const DilationClass cls = classify_dilation(a);
    if (cls != DilationClass::expansive && cls != DilationClass::contractive) {
        throw UnsupportedDilationError("wavelet-set tiling needs an expansive or contractive dilation, got " +
                                       std::string(to_string(cls)));
    }
    grid.validate();
    a.check_power(truncation);

    const int d = w.dim();
    const auto& boxes = w.boxes();
    Vector bb_lo = boxes.front().lo;
    Vector bb_hi = boxes.front().hi;
    for (const auto& b : boxes) {
        bb_lo = bb_lo.cwiseMin(b.lo);
        bb_hi = bb_hi.cwiseMax(b.hi);
    }
    const Matrix dual = p.inverse().transpose();  // (P^t)^{-1}
    const Matrix& pt = p.matrix().transpose();
    const double origin_radius = options.origin_exclusion_spacings * grid.max_spacing();

    const auto inside = [&boxes](const Vector& eta) {
        return std::any_of(boxes.begin(), boxes.end(), [&eta](const FrequencyBox& b) { return b.contains(eta); });
    };

    TilingReport r;
    r.truncation = truncation;
    r.amplitude = std::sqrt(p.abs_det());
    r.points_total = grid.size();

    std::vector<std::int64_t> klo(static_cast<std::size_t>(d));
    std::vector<std::int64_t> khi(static_cast<std::size_t>(d));
    std::vector<std::int64_t> k(static_cast<std::size_t>(d));
    Vector corner(d);
    Vector kv(d);
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const Vector xi = grid.point(n);
        if (xi.norm() <= origin_radius) {
            ++r.excluded;
            continue;
        }
        bool boundary = false;
        int dil_count = 0;
        for (int j = -truncation; j <= truncation && !boundary; ++j) {
            const Vector eta = a.transpose_power(j) * xi;
            if (w.near_boundary(eta, options.boundary_tol)) {
                boundary = true;
            } else if (inside(eta)) {
                ++dil_count;
            }
        }
        if (boundary) {
            ++r.excluded;
            continue;
        }
        // k with xi + (P^t)^{-1} k in the bounding box lie in P^t (bbox - xi)
        Vector kmin = Vector::Constant(d, std::numeric_limits<double>::infinity());
        Vector kmax = -kmin;
        for (unsigned mask = 0; mask < (1u << d); ++mask) {
            for (int i = 0; i < d; ++i) {
                corner[i] = ((mask >> i) & 1u ? bb_hi[i] : bb_lo[i]) - xi[i];
            }
            const Vector kc = pt * corner;
            kmin = kmin.cwiseMin(kc);
            kmax = kmax.cwiseMax(kc);
        }
        for (int i = 0; i < d; ++i) {
            const auto is = static_cast<std::size_t>(i);
            klo[is] = static_cast<std::int64_t>(std::floor(kmin[i])) - 1;
            khi[is] = static_cast<std::int64_t>(std::ceil(kmax[i])) + 1;
        }
        int tr_count = 0;
        k = klo;
        while (!boundary) {
            for (int i = 0; i < d; ++i) {
                kv[i] = static_cast<double>(k[static_cast<std::size_t>(i)]);
            }
            const Vector eta = xi + dual * kv;
            if (w.near_boundary(eta, options.boundary_tol)) {
                boundary = true;
                break;
            }
            if (inside(eta)) {
                ++tr_count;
            }
            int axis = d - 1;
            while (axis >= 0) {
                const auto ax = static_cast<std::size_t>(axis);
                if (++k[ax] <= khi[ax]) {
                    break;
                }
                k[ax] = klo[ax];
                --axis;
            }
            if (axis < 0) {
                break;
            }
        }
        if (boundary) {
            ++r.excluded;
            continue;
        }
        ++r.points_checked;
        if (dil_count != 1) {
            ++r.dilation_violations;
        }
        if (tr_count != 1) {
            ++r.translation_violations;
        }
    }
    if (r.points_checked > 0) {
        const auto checked = static_cast<double>(r.points_checked);
        r.dilation_violation_fraction = static_cast<double>(r.dilation_violations) / checked;
        r.translation_violation_fraction = static_cast<double>(r.translation_violations) / checked;
    }
    r.dilation_pass = r.points_checked > 0 && r.dilation_violations == 0;
    r.translation_pass = r.points_checked > 0 && r.translation_violations == 0;
    return r;
}

}  // namespace awf
