#include "awf/frames.hpp"

#include "awf/errors.hpp"
#include "awf/random.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace awf {

namespace {

void require_dims(const FrequencyWavelet& psi, const DilationDescriptor& a, const GridSpec& grid) {
    if (psi.dim() != a.dim() || grid.dim() != a.dim()) {
        throw ArgumentError("wavelet, dilation and grid dimensions must agree");
    }
}

void require_range(const DilationDescriptor& a, JRange scales) {
    if (scales.hi < scales.lo) {
        throw ArgumentError("empty scale range");
    }
    a.check_power(scales.lo);
    a.check_power(scales.hi);
}

// conj(psi-hat((A^t)^j xi_m)) * |det A|^{j/2} on every grid frequency.
std::vector<Complex> dilated_filter(const FrequencyWavelet& psi, const DilationDescriptor& a, const GridSpec& grid,
                                    int j) {
    const Matrix& at = a.transpose_power(j);
    const double amp = std::pow(a.abs_det(), 0.5 * j);
    std::vector<Complex> h(grid.size());
    for (std::size_t m = 0; m < h.size(); ++m) {
        h[m] = std::conj(psi.evaluate(at * grid.frequency(m))) * amp;
    }
    return h;
}

// Nearest grid point of x on the torus and the distance to it.
std::size_t nearest_grid_point(const GridSpec& grid, const Vector& x, double& offset) {
    std::vector<int> idx(static_cast<std::size_t>(grid.dim()));
    double off2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) {
        const auto as = static_cast<std::size_t>(a);
        const double l = grid.half_width[as];
        const double h = grid.spacing(a);
        const double period = 2.0 * l;
        const double wrapped = x[a] - period * std::floor((x[a] + l) / period);
        const double pos = (wrapped + l) / h;
        const double r = std::round(pos);
        off2 += (pos - r) * (pos - r) * h * h;
        const int n = grid.samples[as];
        idx[as] = ((static_cast<int>(r) % n) + n) % n;
    }
    offset = std::sqrt(off2);
    return grid.ravel(idx);
}

std::vector<std::vector<std::int64_t>> enumerate_box(const KBox& box) {
    std::vector<std::vector<std::int64_t>> out;
    if (box.count() == 0) {
        return out;
    }
    out.reserve(box.count());
    std::vector<std::int64_t> k(box.lo);
    const int d = box.dim();
    while (true) {
        out.push_back(k);
        int axis = d - 1;
        while (axis >= 0) {
            const auto ax = static_cast<std::size_t>(axis);
            if (++k[ax] <= box.hi[ax]) {
                break;
            }
            k[ax] = box.lo[ax];
            --axis;
        }
        if (axis < 0) {
            break;
        }
    }
    return out;
}

Vector to_vector(const std::vector<std::int64_t>& k) {
    Vector v(static_cast<Eigen::Index>(k.size()));
    for (std::size_t i = 0; i < k.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = static_cast<double>(k[i]);
    }
    return v;
}

std::vector<std::size_t> band_indices(const GridSpec& grid, double band_lo, double band_hi) {
    std::vector<std::size_t> idx;
    for (std::size_t m = 0; m < grid.size(); ++m) {
        const double r = grid.frequency(m).norm();
        if (r >= band_lo && r <= band_hi) {
            idx.push_back(m);
        }
    }
    return idx;
}

}  // namespace

GridFunction atom(const FrequencyWavelet& psi, const DilationDescriptor& a, const Vector& x, int j,
                  const GridSpec& grid) {
    require_dims(psi, a, grid);
    const Matrix& at = a.transpose_power(j);
    const double amp = std::pow(a.abs_det(), 0.5 * j);
    return GridFunction::from_spectrum(grid, [&](const Vector& xi) {
        return amp * std::polar(1.0, -2.0 * std::numbers::pi * x.dot(xi)) * psi.evaluate(at * xi);
    });
}

TransformSlices transform_slices(const FrequencyWavelet& psi, const DilationDescriptor& a, const GridFunction& f,
                                 JRange scales) {
    const GridSpec& grid = f.grid();
    require_dims(psi, a, grid);
    require_range(a, scales);
    const GridFft fft(grid);
    const std::vector<Complex> spec = fft.forward(f.values());
    TransformSlices out{grid, scales, {}};
    out.slices.reserve(static_cast<std::size_t>(scales.size()));
    std::vector<Complex> g(grid.size());
    for (int j = scales.lo; j <= scales.hi; ++j) {
        const auto h = dilated_filter(psi, a, grid, j);
        for (std::size_t m = 0; m < g.size(); ++m) {
            g[m] = spec[m] * h[m];
        }
        out.slices.push_back(fft.inverse(g));
    }
    return out;
}

double CoefficientTable::energy() const {
    double s = 0.0;
    for (const auto& e : entries) {
        s += std::norm(e.value);
    }
    return s;
}

void check_scale_resolved(const DilationDescriptor& a, const DilationDescriptor& p, const GridSpec& grid, int j) {
    const Matrix m = a.power(j) * p.matrix();
    const Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    const double smin = sv[sv.size() - 1];
    const double smax = sv[0];
    const double h = grid.max_spacing();
    double period = std::numeric_limits<double>::infinity();
    for (double l : grid.half_width) {
        period = std::min(period, 2.0 * l);
    }
    if (smin < 4.0 * h * (1.0 - 1e-12)) {
        throw ScaleRangeError("scale j = " + std::to_string(j) + " is narrower than 4 grid samples (translation step " +
                              std::to_string(smin) + " < 4h = " + std::to_string(4.0 * h) + ")");
    }
    if (smax >= period) {
        throw ScaleRangeError("scale j = " + std::to_string(j) + " is wider than the grid period (translation step " +
                              std::to_string(smax) + " >= 2L = " + std::to_string(period) + ")");
    }
}

JRange resolved_scales(const DilationDescriptor& a, const DilationDescriptor& p, const GridSpec& grid, JRange within) {
    JRange best{0, -1};
    JRange run{0, -1};
    for (int j = within.lo; j <= within.hi; ++j) {
        bool ok = true;
        try {
            check_scale_resolved(a, p, grid, j);
        } catch (const ScaleRangeError&) {
            ok = false;
        }
        if (!ok) {
            run = {0, -1};
            continue;
        }
        run = run.size() == 0 ? JRange{j, j} : JRange{run.lo, j};
        if (run.size() > best.size()) {
            best = run;
        }
    }
    if (best.size() == 0) {
        throw ScaleRangeError("no scale in [" + std::to_string(within.lo) + ", " + std::to_string(within.hi) +
                              "] is resolved by the grid");
    }
    return best;
}

std::vector<std::vector<std::int64_t>> torus_translates(const DilationDescriptor& a, const DilationDescriptor& p,
                                                        const GridSpec& grid, int j) {
    const int d = a.dim();
    const Matrix m = a.power(j) * p.matrix();
    const Matrix minv = p.inverse() * a.power(-j);
    Vector kmin = Vector::Constant(d, std::numeric_limits<double>::infinity());
    Vector kmax = -kmin;
    Vector corner(d);
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
        for (int i = 0; i < d; ++i) {
            const double l = grid.half_width[static_cast<std::size_t>(i)];
            corner[i] = (mask >> i) & 1u ? l : -l;
        }
        const Vector k = minv * corner;
        kmin = kmin.cwiseMin(k);
        kmax = kmax.cwiseMax(k);
    }
    KBox box;
    for (int i = 0; i < d; ++i) {
        box.lo.push_back(static_cast<std::int64_t>(std::floor(kmin[i])) - 1);
        box.hi.push_back(static_cast<std::int64_t>(std::ceil(kmax[i])) + 1);
    }
    std::vector<std::vector<std::int64_t>> out;
    for (auto& k : enumerate_box(box)) {
        const Vector x = m * to_vector(k);
        bool inside = true;
        for (int i = 0; i < d && inside; ++i) {
            const double l = grid.half_width[static_cast<std::size_t>(i)];
            const double eps = 1e-12 * l;
            inside = x[i] >= -l - eps && x[i] < l - eps;
        }
        if (inside) {
            out.push_back(std::move(k));
        }
    }
    return out;
}

CoefficientTable analysis_coefficients(const FrequencyWavelet& psi, const DilationDescriptor& a,
                                       const DilationDescriptor& p, const GridFunction& f, JRange scales,
                                       const std::optional<KBox>& k_box) {
    const GridSpec& grid = f.grid();
    require_dims(psi, a, grid);
    require_range(a, scales);
    if (p.dim() != a.dim() || (k_box && k_box->dim() != a.dim())) {
        throw ArgumentError("translation matrix and k-box must match the dilation dimension");
    }
    for (int j = scales.lo; j <= scales.hi; ++j) {
        check_scale_resolved(a, p, grid, j);
    }
    const TransformSlices cf = transform_slices(psi, a, f, scales);
    CoefficientTable table;
    const auto fixed = k_box ? enumerate_box(*k_box) : std::vector<std::vector<std::int64_t>>{};
    for (int j = scales.lo; j <= scales.hi; ++j) {
        const auto& slice = cf.slices[static_cast<std::size_t>(j - scales.lo)];
        const Matrix m = a.power(j) * p.matrix();
        const auto ks = k_box ? fixed : torus_translates(a, p, grid, j);
        ScaleSampling info{j, ks.size(), 0.0};
        for (const auto& k : ks) {
            double off = 0.0;
            const std::size_t n = nearest_grid_point(grid, m * to_vector(k), off);
            info.max_offset = std::max(info.max_offset, off);
            table.entries.push_back({j, k, slice[n]});
        }
        table.scales.push_back(info);
    }
    return table;
}

std::vector<Complex> synthesis_spectrum(const FrequencyWavelet& psi, const DilationDescriptor& a,
                                        const DilationDescriptor& p, const GridSpec& grid,
                                        const CoefficientTable& table) {
    require_dims(psi, a, grid);
    const GridFft fft(grid);
    const double inv_cell = 1.0 / grid.cell_volume();
    std::vector<Complex> out(grid.size());
    std::vector<Complex> field(grid.size());
    std::size_t pos = 0;
    for (const auto& sc : table.scales) {
        std::fill(field.begin(), field.end(), Complex{});
        const Matrix m = a.power(sc.j) * p.matrix();
        for (std::size_t i = 0; i < sc.translates; ++i, ++pos) {
            const auto& e = table.entries[pos];
            double off = 0.0;
            field[nearest_grid_point(grid, m * to_vector(e.k), off)] += e.value;
        }
        // sum_k c_k e^{-2 pi i x_k . xi}
        const auto d = fft.forward(field);
        const auto h = dilated_filter(psi, a, grid, sc.j);
        for (std::size_t q = 0; q < out.size(); ++q) {
            out[q] += std::conj(h[q]) * d[q] * inv_cell;
        }
    }
    return out;
}

TestSpace fourier_test_space(const GridSpec& grid, std::size_t m, double band_lo, double band_hi) {
    grid.validate();
    if (m == 0) {
        throw ArgumentError("test space dimension must be positive");
    }
    auto idx = band_indices(grid, band_lo, band_hi);
    if (idx.size() < m) {
        throw ArgumentError("band holds only " + std::to_string(idx.size()) + " grid frequencies, fewer than M = " +
                            std::to_string(m));
    }
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t l, std::size_t r) {
        const double nl = grid.frequency(l).norm();
        const double nr = grid.frequency(r).norm();
        if (nl != nr) {
            return nl < nr;
        }
        return grid.frequency_index(l) < grid.frequency_index(r);
    });
    TestSpace space{grid, {}, {}};
    const double amp = std::sqrt(1.0 / grid.frequency_cell_volume());
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t q = idx[i * idx.size() / m];
        std::vector<Complex> spec(grid.size());
        spec[q] = amp;
        space.basis.push_back(GridFunction::from_spectrum(grid, spec));
        space.frequencies.push_back(grid.frequency(q));
    }
    return space;
}

FrameBoundsEstimate frame_bounds_estimate(const FrequencyWavelet& psi, const DilationDescriptor& a,
                                          const DilationDescriptor& p, JRange scales,
                                          const std::optional<KBox>& k_box, const TestSpace& space) {
    const std::size_t m = space.basis.size();
    if (m == 0) {
        throw ArgumentError("empty test space");
    }
    std::vector<CoefficientTable> tables;
    tables.reserve(m);
    for (const auto& e : space.basis) {
        tables.push_back(analysis_coefficients(psi, a, p, e, scales, k_box));
    }
    const std::size_t rows = tables.front().entries.size();
    Eigen::MatrixXcd coef(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(m));
    for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t r = 0; r < rows; ++r) {
            coef(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = tables[c].entries[r].value;
        }
    }
    // <S e_m, e_n> = sum c_m conj(c_n)
    const Eigen::MatrixXcd gram = coef.adjoint() * coef;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericError("frame-operator eigensolve failed");
    }
    FrameBoundsEstimate out;
    out.dimension = m;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        out.eigenvalues.push_back(std::max(0.0, solver.eigenvalues()[i]));
    }
    out.c1 = out.eigenvalues.front();
    out.c2 = out.eigenvalues.back();

    const GridSpec& grid = space.grid;
    const double w = grid.frequency_cell_volume();
    for (std::size_t c = 0; c < m; ++c) {
        const auto se = synthesis_spectrum(psi, a, p, grid, tables[c]);
        const auto ee = space.basis[c].spectrum();
        double diff = 0.0;
        for (std::size_t q = 0; q < se.size(); ++q) {
            diff += std::norm(se[q] - ee[q]);
        }
        const double rel = std::sqrt(diff * w / space.basis[c].norm_sq());
        out.parseval_defect = std::max(out.parseval_defect, rel);
    }
    return out;
}

std::vector<GridFunction> random_band_limited(const GridSpec& grid, std::size_t count, double band_lo,
                                              double band_hi, std::uint64_t seed) {
    grid.validate();
    const auto idx = band_indices(grid, band_lo, band_hi);
    if (idx.empty()) {
        throw ArgumentError("no grid frequencies inside the test-function band");
    }
    Rng rng(seed);
    std::vector<GridFunction> out;
    out.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        std::vector<Complex> spec(grid.size());
        double energy = 0.0;
        for (std::size_t q : idx) {
            const double re = rng.uniform(-1.0, 1.0);
            const double im = rng.uniform(-1.0, 1.0);
            spec[q] = {re, im};
            energy += re * re + im * im;
        }
        const double scale = 1.0 / std::sqrt(energy * grid.frequency_cell_volume());
        for (auto& v : spec) {
            v *= scale;
        }
        out.push_back(GridFunction::from_spectrum(grid, spec));
    }
    return out;
}

double continuous_transform_norm(const FrequencyWavelet& psi, const DilationDescriptor& a, const GridFunction& f,
                                 JRange scales) {
    const TransformSlices cf = transform_slices(psi, a, f, scales);
    const double cell = f.grid().cell_volume();
    double total = 0.0;
    for (int j = scales.lo; j <= scales.hi; ++j) {
        double s = 0.0;
        for (const auto& v : cf.slices[static_cast<std::size_t>(j - scales.lo)]) {
            s += std::norm(v);
        }
        total += haar_weight(j, a, HaarSide::left) * cell * s;
    }
    return total;
}

double frequency_side_integral(const FrequencyWavelet& psi, const DilationDescriptor& a, const GridFunction& f,
                               JRange scales) {
    const GridSpec& grid = f.grid();
    require_dims(psi, a, grid);
    require_range(a, scales);
    const auto spec = f.spectrum();
    double total = 0.0;
    for (std::size_t m = 0; m < spec.size(); ++m) {
        const double e = std::norm(spec[m]);
        if (e == 0.0) {
            continue;
        }
        total += e * calderon_partial_sum(psi, a, grid.frequency(m), scales);
    }
    return total * grid.frequency_cell_volume();
}

PlancherelCheck plancherel_identity_check(const FrequencyWavelet& psi, const DilationDescriptor& a,
                                          const GridFunction& f, JRange scales) {
    PlancherelCheck out;
    out.frequency_integral = frequency_side_integral(psi, a, f, scales);
    if (out.frequency_integral == 0.0) {
        throw ArgumentError("frequency-side integral vanishes (f = 0 or psi-hat = 0 on the support of f-hat)");
    }
    out.transform_norm_sq = continuous_transform_norm(psi, a, f, scales);
    out.ratio = out.transform_norm_sq / out.frequency_integral;
    return out;
}

InequalityVerdict covolume_inequality_check(const FrequencyWavelet& psi, const DilationDescriptor& a,
                                            const DilationDescriptor& p, const std::vector<GridFunction>& tests,
                                            double c1, double c2, JRange scales, double allowance) {
    if (c1 > c2) {
        throw ArgumentError("frame bounds must satisfy C1 <= C2");
    }
    InequalityVerdict v;
    v.c1 = c1;
    v.c2 = c2;
    v.allowance = allowance;
    v.pass = !tests.empty();
    for (const auto& f : tests) {
        if (!(f.norm_sq() > 0.0)) {
            throw ArgumentError("test functions must be nonzero");
        }
        const double ratio = continuous_transform_norm(psi, a, f, scales) / (p.abs_det() * f.norm_sq());
        v.ratios.push_back(ratio);
        v.pass = v.pass && ratio >= c1 - allowance && ratio <= c2 + allowance;
    }
    return v;
}

double amalgam_maximal_norm(const TransformSlices& f, const GroupBox& q, const DilationDescriptor& a) {
    const GridSpec& grid = f.grid;
    const int d = grid.dim();
    if (q.dim() != d || a.dim() != d) {
        throw ArgumentError("box, dilation and grid dimensions must agree");
    }
    const Eigen::FullPivLU<Matrix> lu(q.frame);
    if (!lu.isInvertible()) {
        throw ArgumentError("box frame must be invertible");
    }
    const Matrix frame_inv = lu.inverse();
    const std::size_t n = grid.size();
    const double cell = grid.cell_volume();
    Vector h(d);
    for (int i = 0; i < d; ++i) {
        h[i] = grid.spacing(i);
    }
    double total = 0.0;
    std::vector<double> mf(n);
    for (int j = f.scales.lo; j <= f.scales.hi; ++j) {
        // grid offsets o with A^{-j}(o h) in the closed box Q_x
        const Matrix lin = a.power(j) * q.frame;
        const Matrix back = frame_inv * a.power(-j);
        Vector omin = Vector::Constant(d, std::numeric_limits<double>::infinity());
        Vector omax = -omin;
        Vector u(d);
        for (unsigned mask = 0; mask < (1u << d); ++mask) {
            for (int i = 0; i < d; ++i) {
                u[i] = (mask >> i) & 1u ? q.hi[i] : q.lo[i];
            }
            const Vector y = (lin * u).cwiseQuotient(h);
            omin = omin.cwiseMin(y);
            omax = omax.cwiseMax(y);
        }
        KBox obox;
        for (int i = 0; i < d; ++i) {
            const auto lo = static_cast<std::int64_t>(std::floor(omin[i] - 1e-9));
            const auto hi = static_cast<std::int64_t>(std::ceil(omax[i] + 1e-9));
            if (hi - lo + 1 > grid.samples[static_cast<std::size_t>(i)]) {
                throw ArgumentError("maximal-function window at scale " + std::to_string(j) + " is larger than the grid");
            }
            obox.lo.push_back(lo);
            obox.hi.push_back(hi);
        }
        std::vector<std::vector<int>> offsets;
        for (const auto& o : enumerate_box(obox)) {
            const Vector uo = back * to_vector(o).cwiseProduct(h);
            bool inside = true;
            for (int i = 0; i < d && inside; ++i) {
                const double tol = 1e-9 * std::max(1.0, std::abs(q.hi[i] - q.lo[i]));
                inside = uo[i] >= q.lo[i] - tol && uo[i] <= q.hi[i] + tol;
            }
            if (inside) {
                offsets.emplace_back(o.begin(), o.end());
            }
        }
        std::fill(mf.begin(), mf.end(), 0.0);
        for (int i = q.j_lo; i <= q.j_hi; ++i) {
            const int js = j + i;
            if (!f.scales.contains(js)) {
                continue;
            }
            const auto& slice = f.slices[static_cast<std::size_t>(js - f.scales.lo)];
            for (std::size_t p = 0; p < n; ++p) {
                const auto idx = grid.unravel(p);
                std::vector<int> shifted(idx.size());
                for (const auto& o : offsets) {
                    for (std::size_t ax = 0; ax < idx.size(); ++ax) {
                        const int nn = grid.samples[ax];
                        shifted[ax] = ((idx[ax] + o[ax]) % nn + nn) % nn;
                    }
                    mf[p] = std::max(mf[p], std::abs(slice[grid.ravel(shifted)]));
                }
            }
        }
        double s = 0.0;
        for (double v : mf) {
            s += v * v;
        }
        total += haar_weight(j, a, HaarSide::left) * cell * s;
    }
    return std::sqrt(total);
}

FrameReport frame_report(const FrequencyWavelet& psi, const DilationDescriptor& a, const DilationDescriptor& p,
                         JRange scales, JRange continuous_scales, const std::optional<KBox>& k_box,
                         const TestSpace& space, const std::vector<GridFunction>& tests, double allowance,
                         std::uint64_t seed) {
    FrameReport r;
    r.wavelet = psi.name();
    r.dilation = a.matrix();
    r.translation = p.matrix();
    r.scales = scales;
    r.continuous_scales = continuous_scales;
    r.k_box = k_box;
    r.seed = seed;
    r.bounds = frame_bounds_estimate(psi, a, p, scales, k_box, space);
    r.bessel_pass = !tests.empty();
    for (const auto& f : tests) {
        const CoefficientTable t = analysis_coefficients(psi, a, p, f, scales, k_box);
        if (r.sampling.empty()) {
            r.sampling = t.scales;
        }
        const double ratio = t.energy() / f.norm_sq();
        r.bessel_ratios.push_back(ratio);
        r.bessel_pass = r.bessel_pass && ratio >= r.bounds.c1 - allowance && ratio <= r.bounds.c2 + allowance;
    }
    r.inequality = covolume_inequality_check(psi, a, p, tests, r.bounds.c1, r.bounds.c2, continuous_scales, allowance);
    r.continuous_norm_ratios = r.inequality.ratios;
    r.pass = r.bessel_pass && r.inequality.pass && r.bounds.c1 > 0.0;
    return r;
}

}  // namespace awf
