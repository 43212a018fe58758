#include "awf/grid.hpp"

#include "awf/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <string>

namespace awf {

namespace {

// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

GridSpec GridSpec::uniform(int dim, double half_width, int samples) {
    return GridSpec{std::vector<double>(static_cast<std::size_t>(dim), half_width),
                    std::vector<int>(static_cast<std::size_t>(dim), samples)};
}

std::size_t GridSpec::size() const {
    std::size_t n = 1;
    for (int s : samples) {
        n *= static_cast<std::size_t>(s);
    }
    return n;
}

double GridSpec::spacing(int axis) const {
    const auto a = static_cast<std::size_t>(axis);
    return 2.0 * half_width[a] / samples[a];
}

double GridSpec::max_spacing() const {
    double h = 0.0;
    for (int i = 0; i < dim(); ++i) {
        h = std::max(h, spacing(i));
    }
    return h;
}

double GridSpec::cell_volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) {
        v *= spacing(i);
    }
    return v;
}

double GridSpec::frequency_cell_volume() const {
    double v = 1.0;
    for (double l : half_width) {
        v /= 2.0 * l;
    }
    return v;
}

void GridSpec::validate() const {
    if (samples.empty() || samples.size() != half_width.size()) {
        throw ArgumentError("grid needs one (L, N) pair per axis");
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!is_power_of_two(samples[i]) || samples[i] < 8) {
            throw ArgumentError("grid N must be a power of two >= 8, got " + std::to_string(samples[i]));
        }
        if (!(half_width[i] > 0.0) || !std::isfinite(half_width[i])) {
            throw ArgumentError("grid half-width L must be positive and finite");
        }
    }
}

std::vector<int> GridSpec::unravel(std::size_t flat) const {
    std::vector<int> idx(samples.size());
    for (std::size_t a = samples.size(); a-- > 0;) {
        const auto n = static_cast<std::size_t>(samples[a]);
        idx[a] = static_cast<int>(flat % n);
        flat /= n;
    }
    return idx;
}

std::size_t GridSpec::ravel(const std::vector<int>& index) const {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < samples.size(); ++a) {
        flat = flat * static_cast<std::size_t>(samples[a]) + static_cast<std::size_t>(index[a]);
    }
    return flat;
}

Vector GridSpec::point(std::size_t flat) const {
    const auto idx = unravel(flat);
    Vector x(dim());
    for (int a = 0; a < dim(); ++a) {
        x[a] = -half_width[static_cast<std::size_t>(a)] + idx[static_cast<std::size_t>(a)] * spacing(a);
    }
    return x;
}

std::vector<int> GridSpec::frequency_index(std::size_t flat) const {
    auto idx = unravel(flat);
    for (std::size_t a = 0; a < idx.size(); ++a) {
        if (idx[a] >= samples[a] / 2) {
            idx[a] -= samples[a];
        }
    }
    return idx;
}

Vector GridSpec::frequency(std::size_t flat) const {
    const auto m = frequency_index(flat);
    Vector xi(dim());
    for (int a = 0; a < dim(); ++a) {
        const auto as = static_cast<std::size_t>(a);
        xi[a] = m[as] / (2.0 * half_width[as]);
    }
    return xi;
}

struct GridFft::Plans {
    fftw_complex* buffer = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

GridFft::GridFft(const GridSpec& grid) : grid_(grid), plans_(std::make_unique<Plans>()) {
    grid_.validate();
    const std::size_t n = grid_.size();
    sign_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        int parity = 0;
        for (int v : grid_.unravel(i)) {
            parity += v;
        }
        sign_[i] = (parity % 2 == 0) ? 1.0 : -1.0;
    }
    std::lock_guard lock(planner_mutex());
    plans_->buffer = fftw_alloc_complex(n);
    if (plans_->buffer == nullptr) {
        throw ResourceError("could not allocate FFT buffer");
    }
    const std::vector<int>& dims = grid_.samples;
    plans_->forward = fftw_plan_dft(grid_.dim(), dims.data(), plans_->buffer, plans_->buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    plans_->backward =
        fftw_plan_dft(grid_.dim(), dims.data(), plans_->buffer, plans_->buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (plans_->forward == nullptr || plans_->backward == nullptr) {
        throw NumericError("FFTW planner failed");
    }
}

GridFft::~GridFft() {
    if (!plans_) {
        return;
    }
    std::lock_guard lock(planner_mutex());
    if (plans_->forward != nullptr) {
        fftw_destroy_plan(plans_->forward);
    }
    if (plans_->backward != nullptr) {
        fftw_destroy_plan(plans_->backward);
    }
    fftw_free(plans_->buffer);
}

std::vector<Complex> GridFft::forward(const std::vector<Complex>& samples) const {
    const std::size_t n = grid_.size();
    if (samples.size() != n) {
        throw ArgumentError("sample count does not match the grid");
    }
    std::memcpy(plans_->buffer, samples.data(), n * sizeof(fftw_complex));
    fftw_execute_dft(plans_->forward, plans_->buffer, plans_->buffer);
    std::vector<Complex> out(n);
    const double w = grid_.cell_volume();
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = Complex(plans_->buffer[i][0], plans_->buffer[i][1]) * (w * sign_[i]);
    }
    return out;
}

std::vector<Complex> GridFft::inverse(const std::vector<Complex>& spectrum) const {
    const std::size_t n = grid_.size();
    if (spectrum.size() != n) {
        throw ArgumentError("spectrum size does not match the grid");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Complex v = spectrum[i] * sign_[i];
        plans_->buffer[i][0] = v.real();
        plans_->buffer[i][1] = v.imag();
    }
    fftw_execute_dft(plans_->backward, plans_->buffer, plans_->buffer);
    std::vector<Complex> out(n);
    const double w = grid_.frequency_cell_volume();
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = Complex(plans_->buffer[i][0], plans_->buffer[i][1]) * w;
    }
    return out;
}

GridFunction::GridFunction(GridSpec grid, std::vector<Complex> values) : grid_(std::move(grid)), values_(std::move(values)) {
    grid_.validate();
    if (values_.size() != grid_.size()) {
        throw ArgumentError("grid function needs exactly one sample per grid point");
    }
    double s = 0.0;
    for (const auto& v : values_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw NumericError("grid function samples must be finite");
        }
        s += std::norm(v);
    }
    norm_sq_ = s * grid_.cell_volume();
}

GridFunction GridFunction::zeros(const GridSpec& grid) {
    return GridFunction(grid, std::vector<Complex>(grid.size()));
}

GridFunction GridFunction::from_function(const GridSpec& grid, const std::function<Complex(const Vector&)>& f) {
    grid.validate();
    std::vector<Complex> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = f(grid.point(i));
    }
    return GridFunction(grid, std::move(v));
}

GridFunction GridFunction::from_spectrum(const GridSpec& grid, const std::vector<Complex>& spectrum) {
    const GridFft fft(grid);
    return GridFunction(grid, fft.inverse(spectrum));
}

GridFunction GridFunction::from_spectrum(const GridSpec& grid, const std::function<Complex(const Vector&)>& fhat) {
    grid.validate();
    std::vector<Complex> s(grid.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = fhat(grid.frequency(i));
    }
    return from_spectrum(grid, s);
}

std::vector<Complex> GridFunction::spectrum() const {
    const GridFft fft(grid_);
    return fft.forward(values_);
}

GridFunction GridFunction::scaled(Complex c) const {
    std::vector<Complex> v(values_);
    for (auto& x : v) {
        x *= c;
    }
    return GridFunction(grid_, std::move(v));
}

}  // namespace awf
