#include "awf/errors.hpp"
#include "awf/wavelets.hpp"
#include "support.hpp"

#include <numbers>

using namespace awf;
using awf::test::mat;
using awf::test::vec;

namespace {

constexpr double pi = std::numbers::pi;

// integral over [a, b) of exp(-2 pi i t xi) dt
Complex segment(double a, double b, double xi) {
    if (xi == 0.0) {
        return b - a;
    }
    const Complex num = std::polar(1.0, -2 * pi * a * xi) - std::polar(1.0, -2 * pi * b * xi);
    return num / Complex(0.0, 2 * pi * xi);
}

double bell3(double x) {
    x = std::clamp(x, 0.0, 1.0);
    return x * x * (3 - 2 * x);
}

// |psi-hat| of the Meyer wavelet with the cubic bell, written out directly
double meyer_modulus(double xi) {
    const double a = std::abs(xi);
    if (a >= 1.0 / 3 && a <= 2.0 / 3) {
        return std::sin(pi / 2 * bell3(3 * a - 1));
    }
    if (a > 2.0 / 3 && a <= 4.0 / 3) {
        return std::cos(pi / 2 * bell3(1.5 * a - 1));
    }
    return 0.0;
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    }
    return s * h / 3.0;
}

FrequencyBox box(std::initializer_list<double> lo, std::initializer_list<double> hi) { return {vec(lo), vec(hi)}; }

// [-2,2)^2 minus [-1,1)^2
std::vector<FrequencyBox> big_annulus() {
    return {box({-2, 1}, {2, 2}), box({-2, -2}, {2, -1}), box({-2, -1}, {-1, 1}), box({1, -1}, {2, 1})};
}

bool face_close(const std::vector<FrequencyBox>& boxes, const Vector& x, double tol) {
    for (const auto& b : boxes) {
        bool within = true, close = false;
        for (int i = 0; i < x.size(); ++i) {
            const double tl = tol * std::max(1.0, std::abs(b.lo[i]));
            const double th = tol * std::max(1.0, std::abs(b.hi[i]));
            within = within && x[i] >= b.lo[i] - tl && x[i] <= b.hi[i] + th;
            close = close || std::abs(x[i] - b.lo[i]) <= tl || std::abs(x[i] - b.hi[i]) <= th;
        }
        if (within && close) {
            return true;
        }
    }
    return false;
}

int member(const std::vector<FrequencyBox>& boxes, const Vector& x) {
    int c = 0;
    for (const auto& b : boxes) {
        bool in = true;
        for (int i = 0; i < x.size(); ++i) {
            in = in && b.lo[i] <= x[i] && x[i] < b.hi[i];
        }
        c += in;
    }
    return c;
}

// Independent per-point count: wide k range, explicit powers.
TilingReport brute_tiling(const std::vector<FrequencyBox>& boxes, const Matrix& a, const Matrix& p, const GridSpec& g,
                          int J, int kmax) {
    TilingReport r;
    const Matrix at = a.transpose();
    const Matrix dual = p.inverse().transpose();
    const int d = static_cast<int>(a.rows());
    for (std::size_t n = 0; n < g.size(); ++n) {
        const Vector xi = g.point(n);
        if (xi.norm() <= 2.0 * g.max_spacing()) {
            ++r.excluded;
            continue;
        }
        bool boundary = false;
        int dil = 0;
        Vector eta = xi;
        Matrix back = Matrix::Identity(d, d);
        for (int j = 0; j < J; ++j) {
            back = back * at.inverse();
        }
        // j = -J .. J
        Matrix pw = back;
        for (int j = -J; j <= J; ++j) {
            eta = pw * xi;
            boundary = boundary || face_close(boxes, eta, 1e-12);
            dil += member(boxes, eta);
            pw = at * pw;
        }
        int tr = 0;
        std::vector<int> k(static_cast<std::size_t>(d), -kmax);
        while (true) {
            Vector kv(d);
            for (int i = 0; i < d; ++i) {
                kv[i] = k[static_cast<std::size_t>(i)];
            }
            const Vector t = xi + dual * kv;
            boundary = boundary || face_close(boxes, t, 1e-12);
            tr += member(boxes, t);
            int ax = d - 1;
            while (ax >= 0 && ++k[static_cast<std::size_t>(ax)] > kmax) {
                k[static_cast<std::size_t>(ax)] = -kmax;
                --ax;
            }
            if (ax < 0) {
                break;
            }
        }
        if (boundary) {
            ++r.excluded;
            continue;
        }
        ++r.points_checked;
        r.dilation_violations += dil != 1;
        r.translation_violations += tr != 1;
    }
    return r;
}

}  // namespace

TEST_CASE("Haar spectrum against direct integration") {
    const auto haar = FrequencyWavelet::haar();
    CHECK(haar.power(vec({1.0})) == doctest::Approx(4.0 / (pi * pi)).epsilon(1e-14));
    Rng rng(41);
    for (int i = 0; i < 1000; ++i) {
        const double xi = rng.uniform(-20, 20);
        const Complex oracle = segment(0, 0.5, xi) - segment(0.5, 1, xi);
        CHECK(std::abs(haar.evaluate(vec({xi})) - oracle) <= 1e-13);
    }
    CHECK(std::abs(haar.evaluate(vec({0.0}))) == 0.0);
    CHECK(haar.norm_l2() == 1.0);
}

TEST_CASE("Shannon and zero wavelets") {
    const auto s = builtin_wavelet("shannon_1d");
    CHECK(s.kind() == WaveletKind::indicator_union);
    CHECK(s.boxes().size() == 2);
    CHECK(s.amplitude() == 1.0);
    CHECK(s.evaluate(vec({0.7})) == Complex{1.0});
    CHECK(s.evaluate(vec({-1.0})) == Complex{1.0});
    CHECK(s.evaluate(vec({1.0})) == Complex{0.0});
    CHECK(s.evaluate(vec({-0.5})) == Complex{0.0});
    CHECK(s.norm_l2() == doctest::Approx(1.0));
    const auto z = builtin_wavelet("zero");
    CHECK(z.norm_l2() == 0.0);
    for (double x : {-3.0, 0.0, 0.4, 7.0}) {
        CHECK(z.evaluate(vec({x})) == Complex{0.0});
    }
    CHECK_THROWS_AS(builtin_wavelet("morlet"), ArgumentError);
}

TEST_CASE("Meyer wavelet norm (Simpson oracle)") {
    const auto m = builtin_wavelet("meyer_1d");
    CHECK(m.norm_l2() == doctest::Approx(1.0).epsilon(1e-8));
    const auto sq = [](double x) { return meyer_modulus(x) * meyer_modulus(x); };
    const double oracle = 2.0 * (simpson(sq, 1.0 / 3, 2.0 / 3, 20000) + simpson(sq, 2.0 / 3, 4.0 / 3, 20000));
    CHECK(std::abs(std::sqrt(oracle) - 1.0) <= 1e-8);
    Rng rng(42);
    for (int i = 0; i < 1000; ++i) {
        const double xi = rng.uniform(-2, 2);
        CHECK(std::abs(std::abs(m.evaluate(vec({xi}))) - meyer_modulus(xi)) <= 1e-14);
    }
    for (int deg : {5, 7}) {
        CHECK(builtin_wavelet("meyer_1d", {deg}).norm_l2() == doctest::Approx(1.0).epsilon(1e-8));
    }
    CHECK_THROWS_AS(FrequencyWavelet::meyer(4), ArgumentError);
}

TEST_CASE("Meyer bells") {
    for (int deg : {3, 5, 7}) {
        CHECK(meyer_bell(-0.5, deg) == 0.0);
        CHECK(meyer_bell(1.5, deg) == 1.0);
        for (double x = 0.0; x <= 1.0; x += 0.01) {
            CHECK(meyer_bell(x, deg) + meyer_bell(1.0 - x, deg) == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("indicator unions") {
    const auto w = FrequencyWavelet::indicator(big_annulus(), 2.5);
    Rng rng(43);
    for (int i = 0; i < 1000; ++i) {
        const Complex v = w.evaluate(vec({rng.uniform(-3, 3), rng.uniform(-3, 3)}));
        CHECK((v == Complex{0.0} || v == Complex{2.5}));
    }
    CHECK(w.evaluate(vec({1.5, 0})) == Complex{2.5});
    CHECK(w.evaluate(vec({0.5, 0})) == Complex{0.0});
    CHECK(w.norm_l2() == doctest::Approx(2.5 * std::sqrt(12.0)));
    CHECK(w.near_boundary(vec({1.0, 0.3})));
    CHECK_FALSE(w.near_boundary(vec({1.5, 0.3})));
    CHECK_THROWS_AS(FrequencyWavelet::indicator({box({0}, {1}), box({0.5}, {2})}), ArgumentError);
    CHECK_THROWS_AS(FrequencyWavelet::indicator({box({0}, {1})}, 0.0), ArgumentError);
    CHECK_THROWS_AS(FrequencyWavelet::indicator({box({0}, {1}), box({0, 0}, {1, 1})}), ArgumentError);
    CHECK_NOTHROW(FrequencyWavelet::indicator({box({0}, {1}), box({1}, {2})}));
}

TEST_CASE("scaled wavelets") {
    const auto m = FrequencyWavelet::meyer().scaled(2.0);
    CHECK(m.norm_l2() == doctest::Approx(2.0));
    CHECK(m.evaluate(vec({0.5})) == 2.0 * FrequencyWavelet::meyer().evaluate(vec({0.5})));
}

TEST_CASE("sampled spectra") {
    const auto g = GridSpec::uniform(1, 2.0, 64);
    std::vector<Complex> vals(g.size());
    const auto meyer = FrequencyWavelet::meyer();
    for (std::size_t n = 0; n < g.size(); ++n) {
        vals[n] = meyer.evaluate(g.point(n));
    }
    const auto s = FrequencyWavelet::sampled(g, vals);
    for (std::size_t n = 0; n < g.size(); ++n) {
        CHECK(s.evaluate(g.point(n)) == vals[n]);
    }
    CHECK(s.evaluate(vec({0.51})) == meyer.evaluate(vec({0.5})));
    CHECK(s.evaluate_flagged(vec({-2.0})).at_grid_boundary);
    CHECK_FALSE(s.evaluate_flagged(vec({0.5})).at_grid_boundary);
    CHECK_THROWS_AS(s.evaluate(vec({5.0})), DomainError);
    const auto z = FrequencyWavelet::sampled(g, vals, OutsidePolicy::zero);
    CHECK(z.evaluate(vec({5.0})) == Complex{0.0});
    CHECK_THROWS_AS(FrequencyWavelet::sampled(g, {Complex{1.0}}), ArgumentError);
}

TEST_CASE("verify_wavelet_set: Shannon set tiles by dilation and translation") {
    const auto r = verify_wavelet_set(builtin_wavelet("shannon_1d"), DilationDescriptor::scalar(2.0),
                                      DilationDescriptor::scalar(1.0), GridSpec::uniform(1, 4.0, 1024), 40);
    CHECK(r.dilation_pass);
    CHECK(r.translation_pass);
    CHECK(r.dilation_violation_fraction == 0.0);
    CHECK(r.translation_violation_fraction == 0.0);
    CHECK(r.excluded > 0);
    CHECK(r.amplitude == 1.0);
}

TEST_CASE("verify_wavelet_set: [-2,2)^2 minus [-1,1)^2 under 2I") {
    const auto boxes = big_annulus();
    const auto g = GridSpec::uniform(2, 4.0, 64);
    const Matrix a = 2.0 * Matrix::Identity(2, 2);
    const Matrix p = Matrix::Identity(2, 2);
    const auto r = verify_wavelet_set(FrequencyWavelet::indicator(boxes), DilationDescriptor(a),
                                      DilationDescriptor(p), g, 40);
    CHECK(r.dilation_pass);
    CHECK_FALSE(r.translation_pass);
    CHECK(r.translation_violation_fraction == 1.0);  // every point is covered 12 times
    const auto o = brute_tiling(boxes, a, p, g, 40, 6);
    CHECK(r.points_checked == o.points_checked);
    CHECK(r.excluded == o.excluded);
    CHECK(r.dilation_violations == o.dilation_violations);
    CHECK(r.translation_violations == o.translation_violations);
}

TEST_CASE("verify_wavelet_set: quincunx matches brute force") {
    const Matrix a = mat({{1, 1}, {1, -1}});
    const auto g = GridSpec::uniform(2, 2.0, 32);
    const std::vector<std::vector<FrequencyBox>> cases{
        {box({-1, -1}, {-0.5, 1}), box({0.5, -1}, {1, 1})},
        {box({0.25, 0.25}, {1.0, 0.75}), box({-1.0, -0.75}, {-0.25, -0.25})},
        big_annulus(),
    };
    for (const auto& boxes : cases) {
        for (const Matrix& p : {Matrix(Matrix::Identity(2, 2)), mat({{1, 0.5}, {0, 1}})}) {
            const auto r = verify_wavelet_set(FrequencyWavelet::indicator(boxes), DilationDescriptor(a),
                                              DilationDescriptor(p), g, 40);
            const auto o = brute_tiling(boxes, a, p, g, 40, 8);
            CHECK(r.points_checked == o.points_checked);
            CHECK(r.excluded == o.excluded);
            CHECK(r.dilation_violations == o.dilation_violations);
            CHECK(r.translation_violations == o.translation_violations);
        }
    }
}

TEST_CASE("verify_wavelet_set rejects unsupported inputs") {
    const auto w = FrequencyWavelet::indicator(big_annulus());
    const auto g = GridSpec::uniform(2, 4.0, 16);
    CHECK_THROWS_AS(verify_wavelet_set(w, DilationDescriptor(mat({{2, 0}, {0, 0.5}})), DilationDescriptor::identity(2), g, 10),
                    UnsupportedDilationError);
    CHECK_THROWS_AS(verify_wavelet_set(FrequencyWavelet::meyer(), DilationDescriptor::scalar(2.0),
                                       DilationDescriptor::scalar(1.0), GridSpec::uniform(1, 4, 64), 10),
                    ArgumentError);
}
