#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "archi/christoffel.hpp"
#include "archi/errors.hpp"
#include "archi/oracles.hpp"

using namespace archi;
using std::numbers::pi;

TEST_CASE("J kernel") {
    const Point w(0.3, -0.2), o(-0.1, 0.5);
    const auto disk = annulus_kernel_J(w, o, 0.0);
    CHECK(std::abs(disk.value - 1.0 / (pi * std::pow(1.0 - w * std::conj(o), 2))) < 1e-15);
    CHECK(disk.terms <= 2);
    for (double r : {0.1, 0.5, 0.9}) {
        const auto z = annulus_kernel_J(0, 0, r);
        CHECK(std::abs(z.value - 1.0 / (pi * (1 - r * r))) < 1e-13);
    }
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-0.65, 0.65);
    for (int t = 0; t < 100; ++t) {
        const Point a(u(rng), u(rng)), b(u(rng), u(rng));
        const auto ab = annulus_kernel_J(a, b, 0.5).value, ba = annulus_kernel_J(b, a, 0.5).value;
        CHECK(std::abs(ab - std::conj(ba)) < 1e-13 * std::abs(ab));
    }
    CHECK_THROWS_AS(annulus_kernel_J({1, 0}, {1, 0}, 0.5), RangeError);

    // the series equals the orthonormal-polynomial expansion
    const Point a(0.6, 0.1), b(0.2, -0.7);
    std::complex<double> s = 0;
    for (int n = 0; n < 400; ++n) s += std::pow(a * std::conj(b), n) / (pi / (n + 1) * (1 - std::pow(0.5, 2 * n + 2)));
    CHECK(std::abs(s - annulus_kernel_J(a, b, 0.5).value) < 1e-12 * std::abs(s));
}

TEST_CASE("K sharp") {
    const auto two = AnalyticScene::multi_disk({Disk{{0, 0}, 1}, Disk{{3, 0}, 1}}, 0.5);
    CHECK(k_sharp({0.2, 0}, {3.1, 0.2}, two) == std::complex<double>(0));
    const auto unit = AnalyticScene::annulus(0.5);
    const Point z(0.3, 0.2), e(-0.4, 0.1);
    CHECK(k_sharp(z, e, unit) == annulus_kernel_J(z, e, 0.5).value);
    const auto off = AnalyticScene::multi_disk({Disk{{2, 0}, 1}}, 0.5);
    CHECK(std::abs(k_sharp(z + 2.0, e + 2.0, off) - annulus_kernel_J(z, e, 0.5).value) < 1e-15);
    const auto small = AnalyticScene::multi_disk({Disk{{2, 0}, 0.5}}, 0.5);
    CHECK(std::abs(k_sharp(2.0 + z / 2.0, 2.0 + e / 2.0, small) - 4.0 * annulus_kernel_J(z, e, 0.5).value) < 1e-13);
    CHECK(k_sharp(z, z, unit).real() > 0);
    CHECK_THROWS_AS(k_sharp({5, 0}, z, unit), GeometryError);
}

TEST_CASE("green functions") {
    const auto d = AnalyticScene::unit_disk();
    CHECK(d.green({0, 1}) == doctest::Approx(0.0));
    CHECK(d.green({std::numbers::e, 0}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(d.green({0.5, 0}), RangeError);
    const auto l = AnalyticScene::lemniscate(2, 0.8);
    for (Point z : l.scene().islands()[0].boundary_samples(16)) CHECK(std::abs(l.green(z)) < 1e-10);
    // normalization at infinity
    for (const auto& s : {d, l, AnalyticScene::offset_disk({1, 1}, 0.5)}) {
        const Point z(1e6, 3e5);
        // the remainder is O(1/|z|)
        CHECK(std::abs(s.green(z) - std::log(std::abs(z)) - std::log(1 / *s.capacity())) < 5 / std::abs(z));
    }
    // harmonic outside: five-point Laplacian
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-3, 3);
    int tested = 0;
    while (tested < 50) {
        const Point z(u(rng), u(rng));
        if (std::abs(z * z - 1.0) < 0.64 + 0.1) continue;
        const double h = 1e-3;
        const double lap = (l.green(z + h) + l.green(z - h) + l.green(z + Point(0, h)) + l.green(z - Point(0, h)) -
                            4 * l.green(z)) / (h * h);
        CHECK(std::abs(lap) < 1e-4);
        ++tested;
    }
}

TEST_CASE("nth root and exterior checks on the disk") {
    const auto s = AnalyticScene::unit_disk();
    const auto b = orthogonalize(scene_moments(s.scene(), 80, PointSet::G), 80);
    const auto rep = check_nth_root(b, s, {{2, 0}, {0, -3}});
    for (int n : {10, 40, 80}) {
        const double want = std::pow((n + 1) / pi, 1.0 / (2 * n)) * 2;
        CHECK(rep.root[0][n - 1] == doctest::Approx(want).epsilon(1e-10));
        CHECK(rep.gamma_deviation[n - 1] == doctest::Approx(std::pow((n + 1) / pi, 1.0 / (2 * n)) - 1).epsilon(1e-9));
    }
    std::vector<Point> ring;
    for (int k = 0; k < 16; ++k) ring.push_back(std::polar(2.0, 2 * pi * k / 16));
    std::vector<int> ns;
    for (int n = 10; n <= 80; n += 5) ns.push_back(n);
    const auto ext = check_exterior_bounds(b, s, ring, ns);
    CHECK(ext.min > 0.5);
    CHECK(ext.max < 0.7);
    for (std::size_t i = 0; i < ns.size(); ++i)
        CHECK(ext.value[0][i] == doctest::Approx(std::sqrt((ns[i] + 1.0) / (ns[i] * pi))).epsilon(1e-9));

    // offset disk: identical normalized values after translation
    const auto so = AnalyticScene::offset_disk({1.5, -0.5}, 1.0);
    const auto bo = orthogonalize(scene_moments(so.scene(), 40, PointSet::G, Precision::Double, natural_frame(so.scene())), 40);
    std::vector<Point> shifted;
    for (Point p : ring) shifted.push_back(p + Point(1.5, -0.5));
    const std::vector<int> ns2{10, 20, 30, 40};
    const auto eo = check_exterior_bounds(bo, so, shifted, ns2);
    const auto e0 = check_exterior_bounds(b, s, ring, ns2);
    for (std::size_t p = 0; p < ring.size(); ++p)
        for (std::size_t i = 0; i < ns2.size(); ++i) CHECK(eo.value[p][i] == doctest::Approx(e0.value[p][i]).epsilon(1e-9));
}

TEST_CASE("closed forms") {
    CHECK(disk_gamma(3, 1.0) == doctest::Approx(std::sqrt(4 / pi)));
    CHECK(disk_gamma(3, 2.0) == doctest::Approx(std::sqrt(4 / pi) / 16));
    CHECK(annulus_gamma(4, 0.5) == doctest::Approx(std::sqrt(5 / (pi * (1 - std::pow(0.5, 10))))));
    CHECK(std::abs(disk_polynomial(3, {1, 0}) - std::sqrt(4 / pi)) < 1e-15);
    CHECK(fitted_ratio({1, 2, 3, 4}, {0.5, 0.25, 0.125, 0.0625}) == doctest::Approx(0.5));
}

TEST_CASE("lemniscate leading coefficients") {
    const auto l = AnalyticScene::lemniscate(2, 0.8);
    const Scene sc = l.scene();
    const auto b = orthogonalize(scene_moments(sc, 60, PointSet::G, Precision::Multi, natural_frame(sc)), 60);
    REQUIRE(b.degree() == 60);
    CHECK(b.max_residual() < 1e-10);
    // odd degrees: p_{2k+1} = sqrt((2k+2)/pi) z (z^2-1)^k / r^(2k+2), so the normalized value is 1
    const auto rep = gamma_ratio_report(b, b, 0.8);
    for (int n = 1; n <= 60; n += 2) CHECK(rep.normalized[n] == doctest::Approx(1.0).epsilon(1e-12));
    for (int n = 20; n <= 60; n += 2) CHECK(rep.normalized[n] == doctest::Approx(0.8).epsilon(0.05));

    // double-double agrees at moderate degree
    const auto bd = orthogonalize(scene_moments(sc, 40, PointSet::G, Precision::DoubleDouble, natural_frame(sc)), 40);
    REQUIRE(bd.degree() == 40);
    for (int n = 0; n <= 40; ++n) CHECK(bd.log_gamma(n) == doctest::Approx(b.log_gamma(n)).epsilon(1e-8));
}
