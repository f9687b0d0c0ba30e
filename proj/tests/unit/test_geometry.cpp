#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "archi/errors.hpp"
#include "archi/geometry.hpp"

using namespace archi;

namespace {

Scene unit_disk(std::vector<Region> lakes = {}) {
    return Scene({Region::disk({0, 0}, 1.0)}, std::move(lakes));
}

}  // namespace

TEST_CASE("contains on islands and lakes") {
    CHECK(contains(unit_disk(), {0, 0}, PointSet::G));
    const Scene s = unit_disk({Region::disk({0, 0}, 0.25)});
    CHECK_FALSE(contains(s, {0, 0}, PointSet::GStar));
    CHECK(contains(s, {0, 0}, PointSet::K));
    CHECK(contains(s, {0.5, 0}, PointSet::GStar));

    const Scene two({Region::disk({-1, 0}, 0.5), Region::disk({2, 0}, 1.0)}, {});
    CHECK(contains(two, {2, 0}, PointSet::G));
    CHECK_FALSE(contains(two, {0.7, 0}, PointSet::G));
}

TEST_CASE("G_star is a subset of G") {
    const Scene s = unit_disk({Region::disk({0.5, 0}, 0.25)});
    for (int i = 0; i < 41; ++i)
        for (int j = 0; j < 41; ++j) {
            const Point z(-1.2 + 0.06 * i, -1.2 + 0.06 * j);
            if (contains(s, z, PointSet::GStar)) CHECK(contains(s, z, PointSet::G));
        }
}

TEST_CASE("boundary distance") {
    CHECK(boundary_distance(unit_disk(), {0, 0}, BoundarySet::Gamma) == doctest::Approx(1.0));
    CHECK(boundary_distance(unit_disk(), {2, 0}, BoundarySet::Gamma) == doctest::Approx(1.0));
    const Scene sq({Region::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}})}, {});
    CHECK(boundary_distance(sq, {0.5, 0.5}, BoundarySet::Gamma) == doctest::Approx(0.5));
    const Scene s = unit_disk({Region::disk({0.5, 0}, 0.25)});
    CHECK(boundary_distance(s, {0.5, 0}, BoundarySet::GammaStar) == doctest::Approx(0.25));
    CHECK(boundary_distance(s, {0.5, 0}, BoundarySet::Lakes) == doctest::Approx(0.25));
}

TEST_CASE("jordan regions") {
    const Region c = Region::jordan(CircleCurve{{0.5, 0.25}, 0.75});
    CHECK(c.contains({0.5, 0.25}));
    CHECK_FALSE(c.contains({1.5, 0.25}));
    CHECK(c.boundary_distance({0.5, 0.25}) == doctest::Approx(0.75).epsilon(1e-6));
    CHECK(c.area() == doctest::Approx(std::numbers::pi * 0.5625).epsilon(1e-5));

    const Region lobe = Region::jordan(LemniscateLobe{2, 0.8, 0});
    CHECK(lobe.contains({1.0, 0.0}));
    CHECK_FALSE(lobe.contains({-1.0, 0.0}));
    for (Point z : lobe.boundary_samples(64))
        CHECK(std::abs(std::abs(z * z - 1.0) - 0.64) < 1e-12);
}

TEST_CASE("polygon normalization and validation") {
    const Polygon cw({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
    CHECK(signed_area(cw.vertices()) == doctest::Approx(1.0));
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), GeometryError);
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}}), GeometryError);
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}, {2, 0}}), GeometryError);
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}, {0, NAN}}), GeometryError);
}

TEST_CASE("scene validation") {
    CHECK_THROWS_AS(Scene({Region::disk({0, 0}, 1), Region::disk({1.5, 0}, 1)}, {}), GeometryError);
    // lake touching the coast
    CHECK_THROWS_AS(unit_disk({Region::disk({0.75, 0}, 0.25)}), GeometryError);
    CHECK_THROWS_AS(unit_disk({Region::disk({3, 0}, 0.25)}), GeometryError);
    CHECK_NOTHROW(unit_disk({Region::disk({0.5, 0}, 0.25)}));
}

TEST_CASE("convex hull") {
    auto h = convex_hull({{0, 0}, {1, 0}, {0, 1}, {0.3, 0.3}});
    REQUIRE(h.size() == 3);
    CHECK(h[0] == Point(0, 0));
    CHECK(h[1] == Point(1, 0));
    CHECK(h[2] == Point(0, 1));

    CHECK(convex_hull({{2, 3}}).size() == 1);
    const auto seg = convex_hull({{0, 0}, {1, 1}, {2, 2}, {0.5, 0.5}});
    CHECK(seg.size() == 2);

    std::vector<Point> circle;
    for (int k = 0; k < 100; ++k) circle.push_back(std::polar(1.0, 2 * std::numbers::pi * k / 100));
    const auto hc = convex_hull(circle);
    REQUIRE(hc.size() == 100);
    for (std::size_t i = 0; i < hc.size(); ++i) {
        const Point a = hc[i], b = hc[(i + 1) % hc.size()], c = hc[(i + 2) % hc.size()];
        CHECK(((b - a) * std::conj(c - b)).imag() < 0);  // left turn
    }
    for (Point p : circle) CHECK(hull_distance(hc, p) < 1e-12);
    CHECK(hull_distance(hc, {2, 0}) == doctest::Approx(1.0));
}

TEST_CASE("grids") {
    const Frame f{0, 1, 0, 1, 2, 2};
    const auto g = grid_points(f);
    REQUIRE(g.size() == 4);
    CHECK(g[0] == Point(0.25, 0.25));
    CHECK(g[1] == Point(0.75, 0.25));
    CHECK(g[3] == Point(0.75, 0.75));

    const Frame e{-2, 5, -2, 2, 7, 4};
    CHECK(grid_points(e).size() == 28);
    CHECK(e.hx() == 1.0);
    CHECK(e.hy() == 1.0);

    const auto r = grid_points(Frame{0, 1, 0, 1, 2, 3});
    REQUIRE(r.size() == 6);
    CHECK(r[2].imag() > r[1].imag());

    CHECK_THROWS_AS((Frame{1, 0, 0, 1, 4, 4}.validate()), GeometryError);
    CHECK_THROWS_AS((Frame{0, 1, 0, 1, 1, 4}.validate()), GeometryError);
}

TEST_CASE("hausdorff against a scene") {
    std::vector<Point> ring;
    for (int k = 0; k < 2000; ++k) ring.push_back(std::polar(1.1, 2 * std::numbers::pi * k / 2000));
    const std::vector<Polygon> rings{Polygon(ring)};
    CHECK(hausdorff_to_boundary(rings, unit_disk(), BoundarySet::Gamma) ==
          doctest::Approx(0.1).epsilon(1e-3));
}

TEST_CASE("scene files") {
    std::istringstream in(
        "# three primitives\n"
        "island disk 0 3 1   # a disk above the lobes\n"
        "\n"
        "island polygon 3 0 4 0 4 1 3 1\n"
        "lake disk 0.5 3 0.25\n"
        "island lemniscate 2 0.3\n");
    const Scene s = read_scene(in);
    CHECK(s.islands().size() == 4);
    CHECK(s.lakes().size() == 1);
    CHECK(contains(s, {3.5, 0.5}, PointSet::G));
    CHECK_FALSE(contains(s, {0.5, 3}, PointSet::GStar));
    CHECK(contains(s, {1.0, 0.0}, PointSet::G));

    std::ostringstream out;
    write_scene(out, s);
    std::istringstream back(out.str());
    const Scene t = read_scene(back);
    REQUIRE(t.islands().size() == 4);
    for (std::size_t k = 0; k < 4; ++k) CHECK(t.islands()[k].area() == doctest::Approx(s.islands()[k].area()));

    const auto line_of = [](const std::string& text) {
        std::istringstream is(text);
        try {
            read_scene(is);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("island disk 0 0 1\nisland square 1 2\n") == 2);
    CHECK(line_of("island disk 0 0\n") == 1);
    CHECK(line_of("\nisland disk 0 0 -1\n") == 2);
    CHECK(line_of("island polygon 0 0 1 0 1\n") == 1);
    CHECK(line_of("pond disk 0 0 1\n") == 1);
    CHECK(line_of("# nothing\n") == 1);
    std::istringstream overlap("island disk 0 0 1\nisland disk 1 0 1\n");
    CHECK_THROWS_AS(read_scene(overlap), GeometryError);
}
