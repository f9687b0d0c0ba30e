#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "archi/errors.hpp"
#include "archi/moments.hpp"

using namespace archi;
using std::numbers::pi;

namespace {

bool close(std::complex<double> a, std::complex<double> b, double rel) {
    return std::abs(a - b) <= rel * std::max(1.0, std::abs(b));
}

Polygon regular_ngon(int n, double radius = 1.0) {
    std::vector<Point> v;
    for (int k = 0; k < n; ++k) v.push_back(std::polar(radius, 2 * pi * k / n));
    return Polygon(v);
}

// naive Cholesky on the leading block, true if every pivot is positive
bool cholesky_ok(const MomentMatrix& m, int n) {
    const auto a = m.dense<double>(n);
    const int d = n + 1;
    std::vector<std::complex<double>> l(static_cast<std::size_t>(d * d));
    for (int j = 0; j < d; ++j) {
        std::complex<double> s = to_std(a[j * d + j]);
        for (int k = 0; k < j; ++k) s -= l[j * d + k] * std::conj(l[j * d + k]);
        if (s.real() <= 0) return false;
        l[j * d + j] = std::sqrt(s.real());
        for (int i = j + 1; i < d; ++i) {
            std::complex<double> t = to_std(a[i * d + j]);
            for (int k = 0; k < j; ++k) t -= l[i * d + k] * std::conj(l[j * d + k]);
            l[i * d + j] = t / l[j * d + j];
        }
    }
    return true;
}

}  // namespace

TEST_CASE("disk moments") {
    CHECK(close(disk_moment({0, 0}, 1, 0, 0), pi, 1e-15));
    CHECK(close(disk_moment({0, 0}, 1, 1, 1), pi / 2, 1e-15));
    CHECK(std::abs(disk_moment({0, 0}, 1, 1, 0)) == 0.0);
    // centroid
    const auto c = disk_moment({0.3, -0.2}, 0.5, 1, 0) / disk_moment({0.3, -0.2}, 0.5, 0, 0);
    CHECK(close(c, {0.3, -0.2}, 1e-14));
    CHECK_THROWS_AS(disk_moment({0, 0}, 1, kMaxDegree + 1, 0), RangeError);
    CHECK_THROWS_AS(disk_moment({1e200, 0}, 1, 400, 0), RangeError);
}

TEST_CASE("polygon moments") {
    const Polygon sq({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK(close(polygon_moment(sq, 0, 0), 1.0, 1e-15));
    CHECK(close(polygon_moment(sq, 1, 0), {0.5, 0.5}, 1e-15));
    // int |z|^2 over the square = 2/3
    CHECK(close(polygon_moment(sq, 1, 1), 2.0 / 3.0, 1e-14));
    const Polygon tri({{0, 0}, {1, 0}, {0, 1}});
    CHECK(close(polygon_moment(tri, 0, 0), 0.5, 1e-15));

    const Polygon fine = regular_ngon(4096);
    for (int i = 0; i <= 10; ++i)
        for (int j = 0; i + j <= 10; ++j) {
            const auto ref = disk_moment({0, 0}, 1, i, j);
            CHECK(std::abs(polygon_moment(fine, i, j) - ref) < 1e-5 * std::max(std::abs(ref), 1.0));
        }
}

TEST_CASE("jordan moments") {
    const JordanRegion circle(CircleCurve{{0, 0}, 1});
    const auto q = jordan_moment(circle, 1, 1, 256);
    CHECK(std::abs(q.value - pi / 2) < 1e-12);
    CHECK(q.converged);

    const JordanRegion off(CircleCurve{{0.4, -0.3}, 0.7});
    for (int i = 0; i <= 20; ++i)
        for (int j = 0; i + j <= 40; ++j) {
            const auto ref = disk_moment({0.4, -0.3}, 0.7, i, j);
            const auto v = jordan_moment(off, i, j, 512).value;
            CHECK(std::abs(v - ref) <= 1e-12 * std::max(std::abs(ref), disk_moment({0.4, -0.3}, 0.7, 0, 0).real()));
        }

    // reversing orientation flips the sign of the area
    const CustomCurve rev{[](double t, Point& z, Point& dz) {
        z = std::polar(1.0, -t);
        dz = Point(0, -1) * z;
    }};
    CHECK_THROWS_AS(JordanRegion{rev}, GeometryError);  // clockwise rejected at construction

    CHECK_THROWS_AS(jordan_moment(circle, 0, 0, 8), RangeError);
}

TEST_CASE("lemniscate area against Monte Carlo") {
    const JordanRegion lobe(LemniscateLobe{2, 0.8, 0});
    const auto q = jordan_moment(lobe, 0, 0, 1024);
    CHECK(q.value.real() > 0);
    // stratified Monte Carlo: one jittered sample per cell
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int cells = 2000;
    const double h = 1.4 / cells;
    long hits = 0;
    for (int a = 0; a < cells; ++a)
        for (int b = 0; b < cells; ++b) {
            const Point z((a + u(rng)) * h, -0.7 + (b + u(rng)) * h);
            if (std::abs(z * z - 1.0) < 0.64) ++hits;
        }
    const double mc = 1.4 * 1.4 * static_cast<double>(hits) / (double(cells) * cells);
    CHECK(std::abs(q.value.real() - mc) < 1e-3);
    CHECK(std::abs(q.value.imag()) < 1e-13);

    const Scene lem({Region::jordan(LemniscateLobe{2, 0.8, 0}), Region::jordan(LemniscateLobe{2, 0.8, 1})}, {});
    const auto m = scene_moments(lem, 6, PointSet::G);
    for (int i = 0; i <= 6; ++i)
        for (int j = 0; j <= 6; ++j) CHECK(m.at(i, j) == std::conj(m.at(j, i)));
    CHECK(cholesky_ok(m, 6));
}

TEST_CASE("scene moments and additivity") {
    const Scene s({Region::disk({0, 0}, 1)}, {Region::disk({0, 0}, 0.25)});
    const auto gs = scene_moments(s, 8, PointSet::GStar);
    CHECK(close(gs.at(1, 1), pi / 2 - pi * std::pow(0.25, 4) / 2, 1e-14));

    const Scene plain({Region::disk({0, 0}, 1)}, {});
    const auto k = scene_moments(plain, 5, PointSet::K);
    for (int i = 0; i <= 5; ++i)
        for (int j = 0; j <= 5; ++j) CHECK(k.at(i, j) == 0.0);

    const Scene ex({Region::polygon({{1, 0}, {std::cos(2 * pi / 5), std::sin(2 * pi / 5)},
                                     {std::cos(4 * pi / 5), std::sin(4 * pi / 5)},
                                     {std::cos(6 * pi / 5), std::sin(6 * pi / 5)},
                                     {std::cos(8 * pi / 5), std::sin(8 * pi / 5)}}),
                    Region::disk({3.5, 0}, 2.0 / 3.0)},
                   {Region::disk({0.5, 0}, 0.25)});
    const auto g = scene_moments(ex, 10, PointSet::G);
    const auto st = scene_moments(ex, 10, PointSet::GStar);
    const auto kk = scene_moments(ex, 10, PointSet::K);
    for (int i = 0; i <= 10; ++i)
        for (int j = 0; j <= 10; ++j) CHECK(close(g.at(i, j), st.at(i, j) + kk.at(i, j), 1e-13));
    for (int n : {2, 5, 10}) CHECK(cholesky_ok(st, n));
}

TEST_CASE("translation covariance") {
    const Polygon tri({{0, 0}, {2, 0}, {0, 1}});
    const Polygon moved({{1, 1}, {3, 1}, {1, 2}});
    const auto c0 = polygon_moment(tri, 1, 0) / polygon_moment(tri, 0, 0);
    const auto c1 = polygon_moment(moved, 1, 0) / polygon_moment(moved, 0, 0);
    CHECK(close(c0, {2.0 / 3.0, 1.0 / 3.0}, 1e-14));
    CHECK(close(c1 - c0, {1, 1}, 1e-14));
}

TEST_CASE("frames and precisions") {
    const Scene s({Region::disk({2, 1}, 0.5)}, {});
    const MomentFrame f = natural_frame(s);
    CHECK(f.center == Point(2, 1));
    const auto local = scene_moments(s, 6, PointSet::G, Precision::Double, f);
    // in the local coordinate the disk is centered at 0
    CHECK(std::abs(local.at(1, 0)) < 1e-15);
    CHECK(close(local.at(1, 1), disk_moment({0, 0}, 0.5 / f.scale, 1, 1), 1e-14));

    const auto dd = scene_moments(s, 6, PointSet::G, Precision::DoubleDouble, f);
    const auto mp = scene_moments(s, 6, PointSet::G, Precision::Multi, f);
    for (int i = 0; i <= 6; ++i)
        for (int j = 0; j <= 6; ++j) {
            const MpReal d = abs(dd.get(i, j).re - mp.get(i, j).re) + abs(dd.get(i, j).im - mp.get(i, j).im);
            CHECK(d.convert_to<double>() < 1e-30);
        }

    const auto mj = region_moments(Region::jordan(CircleCurve{{0, 0}, 1}), 4, Precision::DoubleDouble);
    const MpReal err = abs(mj.get(2, 2).re - pi_of<MpReal>() / 3);
    CHECK(err.convert_to<double>() < 1e-28);
}

TEST_CASE("moment file round trip") {
    const Scene s({Region::disk({0.1, 0.2}, 0.9)}, {Region::disk({0.3, 0.2}, 0.2)});
    for (Precision p : {Precision::Double, Precision::DoubleDouble, Precision::Multi}) {
        const auto m = scene_moments(s, 7, PointSet::GStar, p, MomentFrame{{0.1, 0.2}, 0.9});
        std::stringstream ss;
        write_moments(ss, m);
        const auto r = read_moments(ss);
        CHECK(r.degree() == 7);
        CHECK(r.precision() == p);
        CHECK(r.frame() == m.frame());
        for (int i = 0; i <= 7; ++i)
            for (int j = 0; j <= 7; ++j) CHECK(r.get(i, j) == m.get(i, j));
    }

    const auto m = scene_moments(s, 2, PointSet::G);
    std::stringstream ss;
    write_moments(ss, m);
    const std::string text = ss.str();

    std::istringstream cut(text.substr(0, text.rfind('\n', text.size() - 2) + 1));
    try {
        read_moments(cut);
        FAIL("truncated file accepted");
    } catch (const ParseError& e) {
        CHECK(e.line() > 0);
    }

    std::string bad = text;
    bad.replace(bad.find("degree=2"), 8, "degree=3");
    std::istringstream wrong(bad);
    CHECK_THROWS_AS(read_moments(wrong), ParseError);

    std::istringstream junk("moments v1 degree=1 precision=double\n0 0 1 0\n0 1 x 0\n1 1 1 0\n");
    try {
        read_moments(junk);
        FAIL("junk accepted");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("reframe matches direct computation") {
    const Scene s({Region::disk({0.3, -0.2}, 0.7), Region::polygon({{2, 0}, {3, 0}, {2.5, 1}})}, {});
    const MomentFrame f{{1.2, 0.1}, 1.9};
    for (Precision p : {Precision::DoubleDouble, Precision::Multi}) {
        const auto direct = scene_moments(s, 12, PointSet::G, p, f);
        const auto moved = reframe(scene_moments(s, 12, PointSet::G, p), f);
        CHECK(moved.frame() == f);
        for (int i = 0; i <= 12; ++i)
            for (int j = i; j <= 12; ++j) {
                const auto a = direct.at(i, j), b = moved.at(i, j);
                CHECK(std::abs(a - b) <= 1e-13 * (1.0 + std::abs(a)));
            }
        const auto back = reframe(moved, {});
        CHECK(std::abs(back.at(3, 5) - scene_moments(s, 12, PointSet::G, p).at(3, 5)) < 1e-12);
    }
    CHECK_THROWS_AS(reframe(scene_moments(s, 2, PointSet::G), MomentFrame{{0, 0}, 0.0}), RangeError);
}
