#include "awf/errors.hpp"
#include "awf/group.hpp"
#include "support.hpp"

#include <set>

using namespace awf;
using awf::test::mat;
using awf::test::vec;

namespace {

GroupElement el(std::initializer_list<double> x, int j) { return {vec(x), j}; }

GroupElement random_element(Rng& rng, int d, int jmax) {
    Vector x(d);
    for (int i = 0; i < d; ++i) {
        x[i] = rng.uniform(-5.0, 5.0);
    }
    return {x, static_cast<int>(rng.uniform_int(-jmax, jmax))};
}

bool same(const GroupElement& g, const GroupElement& h, double tol) {
    return g.j == h.j && (g.x - h.x).cwiseAbs().maxCoeff() <= tol * std::max(1.0, h.x.cwiseAbs().maxCoeff());
}

struct Fixture {
    const char* name;
    DilationDescriptor a;
    DilationDescriptor p;
};

std::vector<Fixture> tiling_fixtures() {
    return {{"A=2, P=1", DilationDescriptor::scalar(2.0), DilationDescriptor::scalar(1.0)},
            {"quincunx, P=I", DilationDescriptor(mat({{1, 1}, {1, -1}})), DilationDescriptor::identity(2)},
            {"A=3, P=2", DilationDescriptor::scalar(3.0), DilationDescriptor::scalar(2.0)},
            {"A=1.5, P=0.7", DilationDescriptor::scalar(1.5), DilationDescriptor::scalar(0.7)},
            {"A=[[2,1],[0,2]], P=[[1,0.5],[0,1]]", DilationDescriptor(mat({{2, 1}, {0, 2}})),
             DilationDescriptor(mat({{1, 0.5}, {0, 1}}))}};
}

}  // namespace

TEST_CASE("multiply and inverse examples") {
    const auto two = DilationDescriptor::scalar(2.0);
    CHECK(same(multiply(el({1}, 1), el({1}, 0), two), el({3}, 1), 0.0));
    CHECK(same(multiply(el({1}, 1), GroupElement::identity(1), two), el({1}, 1), 0.0));
    CHECK(same(multiply(el({1}, 1), el({-0.5}, -1), two), GroupElement::identity(1), 0.0));
    CHECK(same(inverse(el({1}, 1), two), el({-0.5}, -1), 0.0));
    CHECK(same(inverse(GroupElement::identity(1), two), GroupElement::identity(1), 0.0));

    const DilationDescriptor q(mat({{1, 1}, {1, -1}}));
    const Matrix qinv = mat({{0.5, 0.5}, {0.5, -0.5}});
    CHECK(same(inverse(el({1, 0}, 1), q), GroupElement{-(qinv * vec({1, 0})), -1}, 1e-15));
}

TEST_CASE("haar_weight examples") {
    const auto two = DilationDescriptor::scalar(2.0);
    CHECK(haar_weight(1, two, HaarSide::left) == 0.5);
    CHECK(haar_weight(0, two, HaarSide::left) == 1.0);
    CHECK(haar_weight(5, DilationDescriptor(mat({{1, 1}, {1, -1}})), HaarSide::right) == 1.0);
    CHECK(haar_weight(-2, DilationDescriptor::scalar(3.0), HaarSide::left) == 9.0);
}

TEST_CASE("property: associativity and inverses") {
    Rng rng(21);
    const std::vector<DilationDescriptor> as{DilationDescriptor::scalar(2.0), DilationDescriptor::scalar(0.7),
                                             DilationDescriptor(mat({{1, 1}, {1, -1}})),
                                             DilationDescriptor(mat({{2, 1}, {0, 1.5}}))};
    for (const auto& a : as) {
        for (int trial = 0; trial < 1000; ++trial) {
            const auto g1 = random_element(rng, a.dim(), 10);
            const auto g2 = random_element(rng, a.dim(), 10);
            const auto g3 = random_element(rng, a.dim(), 10);
            const auto lhs = multiply(multiply(g1, g2, a), g3, a);
            const auto rhs = multiply(g1, multiply(g2, g3, a), a);
            CHECK(lhs.j == rhs.j);
            CHECK((lhs.x - rhs.x).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, rhs.x.cwiseAbs().maxCoeff()));
            const auto e1 = multiply(g1, inverse(g1, a), a);
            const auto e2 = multiply(inverse(g1, a), g1, a);
            CHECK(same(e1, GroupElement::identity(a.dim()), 1e-10));
            CHECK(same(e2, GroupElement::identity(a.dim()), 1e-10));
        }
    }
}

TEST_CASE("property: left Haar measure is left invariant") {
    // f = 1_[lo,hi) (x) 1_{j in [j0,j1]}; integrate f(g h) dmu(h) on a fine grid
    Rng rng(22);
    for (double av : {2.0, 3.0, 0.5}) {
        const auto a = DilationDescriptor::scalar(av);
        const double lo = -1.0, hi = 2.0;
        const int j0 = -1, j1 = 2;
        double exact = 0.0;
        for (int j = j0; j <= j1; ++j) {
            exact += haar_weight(j, a, HaarSide::left) * (hi - lo);
        }
        for (int trial = 0; trial < 20; ++trial) {
            const GroupElement g{vec({rng.uniform(-3.0, 3.0)}), static_cast<int>(rng.uniform_int(-2, 2))};
            double sum = 0.0;
            const double h = 1e-3;
            for (int j = j0 - g.j; j <= j1 - g.j; ++j) {
                // x with g.x + A^{g.j} x in [lo, hi)
                const double s = a.power(g.j)(0, 0);
                const double xa = std::min((lo - g.x[0]) / s, (hi - g.x[0]) / s) - 1.0;
                const double xb = std::max((lo - g.x[0]) / s, (hi - g.x[0]) / s) + 1.0;
                double inner = 0.0;
                for (double x = xa + 0.5 * h; x < xb; x += h) {
                    const double y = g.x[0] + s * x;
                    inner += (y >= lo && y < hi) ? h : 0.0;
                }
                sum += haar_weight(j, a, HaarSide::left) * inner;
            }
            CHECK(std::abs(sum - exact) <= 0.01 * exact);
        }
    }
}

TEST_CASE("haar_measure of boxes") {
    const auto two = DilationDescriptor::scalar(2.0);
    const auto u = GroupBox::axis_aligned(vec({0}), vec({1}));
    CHECK(haar_measure(u, two, HaarSide::left) == 1.0);
    const auto k = GroupBox::axis_aligned(vec({0}), vec({1}), 0, 1);
    CHECK(haar_measure(k, two, HaarSide::left) == 1.5);
    CHECK(haar_measure(k, two, HaarSide::right) == 2.0);
}

TEST_CASE("generate_quasilattice examples") {
    const auto two = DilationDescriptor::scalar(2.0);
    const auto one = DilationDescriptor::scalar(1.0);
    auto w = generate_quasilattice(two, one, {0, 0}, KBox{{-1}, {1}});
    REQUIRE(w.points.size() == 3);
    CHECK(same(w.points[0], el({-1}, 0), 0.0));
    CHECK(same(w.points[1], el({0}, 0), 0.0));
    CHECK(same(w.points[2], el({1}, 0), 0.0));

    w = generate_quasilattice(two, one, {1, 1}, KBox{{1}, {1}});
    REQUIRE(w.points.size() == 1);
    CHECK(same(w.points[0], el({2}, 1), 0.0));

    const DilationDescriptor q(mat({{1, 1}, {1, -1}}));
    w = generate_quasilattice(q, DilationDescriptor::identity(2), {1, 1}, KBox{{1, 0}, {1, 0}});
    REQUIRE(w.points.size() == 1);
    CHECK(same(w.points[0], el({1, 1}, 1), 0.0));
}

TEST_CASE("generate_quasilattice ordering and limits") {
    const DilationDescriptor q(mat({{1, 1}, {1, -1}}));
    const auto w = generate_quasilattice(q, DilationDescriptor::identity(2), {-1, 1}, KBox{{-1, -1}, {1, 1}});
    CHECK(w.points.size() == 27);
    CHECK(w.points.front().j == -1);
    CHECK(w.points.back().j == 1);
    // last axis fastest: (k1, k2) = (-1,-1), (-1,0), ...
    CHECK(same(w.points[1], GroupElement{q.power(-1) * vec({-1, 0}), -1}, 0.0));
    CHECK_THROWS_AS(
        generate_quasilattice(DilationDescriptor::scalar(2.0), DilationDescriptor::scalar(1.0), {0, 10}, KBox{{0}, {99}}, 100),
        ResourceError);
}

TEST_CASE("decompose examples") {
    const auto two = DilationDescriptor::scalar(2.0);
    const auto one = DilationDescriptor::scalar(1.0);
    auto d = decompose(el({2.75}, 1), two, one);
    CHECK(same(d.lambda, el({2}, 1), 0.0));
    CHECK(d.t[0] == 0.375);
    d = decompose(el({0.25}, 0), two, one);
    CHECK(same(d.lambda, el({0}, 0), 0.0));
    CHECK(d.t[0] == 0.25);
    const DilationDescriptor q(mat({{1, 1}, {1, -1}}));
    const Vector x = q.power(3) * vec({2, -5});
    d = decompose({x, 3}, q, DilationDescriptor::identity(2));
    CHECK(d.k == std::vector<std::int64_t>{2, -5});
    CHECK(d.t.isZero());
}

TEST_CASE("property: unique factorisation over the window (brute force)") {
    for (const auto& fx : tiling_fixtures()) {
        CAPTURE(fx.name);
        const int d = fx.a.dim();
        KBox kb{std::vector<std::int64_t>(static_cast<std::size_t>(d), -6),
                std::vector<std::int64_t>(static_cast<std::size_t>(d), 6)};
        const auto w = generate_quasilattice(fx.a, fx.p, {-3, 3}, kb);
        const auto c = quasilattice_complement(fx.p);
        const auto cinv = quasilattice_complement_inverse(fx.p);
        const auto probes = interior_probes(w, cinv, 10000, 23);
        for (const auto& g : probes) {
            const auto dec = decompose(g, fx.a, fx.p);
            for (int i = 0; i < d; ++i) {
                REQUIRE(dec.t[i] >= 0.0);
                REQUIRE(dec.t[i] < 1.0);
            }
            const auto back = multiply(dec.lambda, {fx.p.matrix() * dec.t, 0}, fx.a);
            CHECK(same(back, g, 1e-10));
            int hits = 0;
            bool self = false;
            for (const auto& lam : w.points) {
                const auto h = multiply(inverse(lam, fx.a), g, fx.a);
                if (classify_point(c, h.x, h.j, 0.0) == Membership::inside) {
                    ++hits;
                    self = self || same(lam, dec.lambda, 1e-12);
                }
            }
            CHECK(hits == 1);
            CHECK(self);
        }
    }
}

TEST_CASE("property: quasi-lattice tiles G (separation and density)") {
    for (const auto& fx : tiling_fixtures()) {
        CAPTURE(fx.name);
        const int d = fx.a.dim();
        KBox kb{std::vector<std::int64_t>(static_cast<std::size_t>(d), -6),
                std::vector<std::int64_t>(static_cast<std::size_t>(d), 6)};
        const auto w = generate_quasilattice(fx.a, fx.p, {-3, 3}, kb);
        const auto cinv = quasilattice_complement_inverse(fx.p);
        const auto probes = interior_probes(w, cinv, 2000, 24);
        const auto sd = separation_density_check(w, cinv, probes);
        CHECK(sd.min_count == 1);
        CHECK(sd.max_count == 1);
        CHECK(sd.separated);
        CHECK(sd.dense);
    }
}

TEST_CASE("rel_sep_count examples") {
    const auto two = DilationDescriptor::scalar(2.0);
    const auto one = DilationDescriptor::scalar(1.0);
    auto w = generate_quasilattice(two, one, {-2, 2}, KBox{{-20}, {20}});
    const auto q = GroupBox::axis_aligned(vec({0}), vec({1}));
    std::vector<GroupElement> probes;
    for (int n = -50; n <= 50; ++n) {
        probes.push_back(el({0.0937 * n + 0.01}, 0));
    }
    const auto r = rel_sep_count(w, q, probes);
    CHECK(r.max_count == 1);
    CHECK(r.lower_bound);

    // set semantics: removing a duplicate leaves the count unchanged
    auto dup = w;
    dup.points.push_back(w.points[50]);
    dup.points.pop_back();
    CHECK(rel_sep_count(dup, q, probes).max_count == 1);

    auto empty = w;
    empty.points.clear();
    CHECK(rel_sep_count(empty, q, probes).max_count == 0);
    CHECK_THROWS_AS(rel_sep_count(w, q, {}), ArgumentError);
}

TEST_CASE("separation_density_check detects doubled and missing points") {
    const auto two = DilationDescriptor::scalar(2.0);
    const auto one = DilationDescriptor::scalar(1.0);
    const auto w = generate_quasilattice(two, one, {-2, 2}, KBox{{-10}, {10}});
    const auto cinv = quasilattice_complement_inverse(one);

    auto doubled = w;
    for (const auto& p : w.points) {
        doubled.points.push_back({p.x.array() + 1e-3, p.j});
    }
    const auto probes = interior_probes(w, cinv, 500, 25);
    const auto sd = separation_density_check(doubled, cinv, probes);
    CHECK(sd.max_count >= 2);
    CHECK_FALSE(sd.separated);

    // delete (3, 0) and probe inside its cell: g C^{-1} = (x - 1, x] must contain 3
    auto holed = w;
    std::erase_if(holed.points, [](const GroupElement& p) { return p.j == 0 && p.x[0] == 3.0; });
    const auto sd2 = separation_density_check(holed, cinv, {el({3.5}, 0), el({0.5}, 0)});
    CHECK(sd2.min_count == 0);
    CHECK_FALSE(sd2.dense);
}

TEST_CASE("separation_density_check rejects uncovered probes") {
    const auto w = generate_quasilattice(DilationDescriptor::scalar(2.0), DilationDescriptor::scalar(1.0), {0, 0},
                                         KBox{{-2}, {2}});
    const auto cinv = quasilattice_complement_inverse(DilationDescriptor::scalar(1.0));
    CHECK_THROWS_AS(separation_density_check(w, cinv, {el({50.5}, 0)}), ArgumentError);
}

TEST_CASE("covolume examples") {
    CHECK(covolume_quasilattice(DilationDescriptor(mat({{2, 0}, {0, 3}}))) == 6.0);
    CHECK(covolume_quasilattice(DilationDescriptor::identity(2)) == 1.0);
    CHECK(covolume_quasilattice(DilationDescriptor(mat({{1, 1}, {0, 1}}))) == 1.0);

    const auto two = DilationDescriptor::scalar(2.0);
    const auto u = GroupBox::axis_aligned(vec({0}), vec({1}));
    const auto k = GroupBox::axis_aligned(vec({0}), vec({1}), 0, 1);
    const auto [lower, upper] = covolume_bounds(u, k, two);
    CHECK(lower == 1.0);
    CHECK(upper == 1.5);
    CHECK(lower <= upper);
    const DilationDescriptor q(mat({{1, 1}, {1, -1}}));
    CHECK(covolume_bounds(GroupBox::axis_aligned(vec({0, 0}), vec({1, 1})), GroupBox::axis_aligned(vec({0, 0}), vec({1, 1})), q)
              .first == 1.0);
}

TEST_CASE("covolume sandwich around the complement") {
    for (const auto& fx : tiling_fixtures()) {
        const int d = fx.a.dim();
        const double delta = 1.0 / 64.0;
        const GroupBox u{fx.p.matrix(), Vector::Constant(d, delta), Vector::Constant(d, 1 - delta), 0, 0, false};
        const GroupBox k{fx.p.matrix(), Vector::Constant(d, -delta), Vector::Constant(d, 1 + delta), 0, 0, false};
        const auto [lower, upper] = covolume_bounds(u, k, fx.a);
        const double c = covolume_quasilattice(fx.p);
        CHECK(c == fx.p.abs_det());
        CHECK(lower <= c);
        CHECK(c <= upper);
        CHECK(haar_measure(quasilattice_complement(fx.p), fx.a, HaarSide::right) == doctest::Approx(c).epsilon(1e-14));
    }
}
