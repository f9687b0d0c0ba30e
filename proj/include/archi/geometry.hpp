#pragma once

// Archipelagos with lakes as signed unions of primitive planar regions.

#include <array>
#include <iosfwd>
#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "archi/numeric.hpp"

namespace archi {

using Point = std::complex<double>;

/// Throws GeometryError unless both components are finite.
Point checked_point(double re, double im);

struct Disk {
    Point center;
    double radius;
};

/// Simple polygon, stored counterclockwise regardless of input orientation.
class Polygon {
public:
    /// Throws GeometryError for fewer than 3 vertices, non-finite input,
    /// zero area or self-intersection.
    explicit Polygon(std::vector<Point> vertices);

    const std::vector<Point>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    double area() const;

private:
    std::vector<Point> vertices_;
};

double signed_area(std::span<const Point> ring);
bool is_simple(std::span<const Point> ring);
/// Crossing-number test against a closed ring.
bool point_in_ring(std::span<const Point> ring, Point z);
double segment_distance(Point z, Point a, Point b);
double ring_distance(std::span<const Point> ring, Point z);

// Boundary parametrizations t in [0, 2pi), counterclockwise.
struct CircleCurve {
    Point center;
    double radius;
};
struct EllipseCurve {
    Point center;
    double semi_x;
    double semi_y;
};
/// Component `lobe` (0..m-1) of the lemniscate region {|z^m - 1| < r^m}.
struct LemniscateLobe {
    int m;
    double r;
    int lobe;
};
/// User-supplied sampler returning z(t) and z'(t), double precision only.
struct CustomCurve {
    std::function<void(double, Point&, Point&)> sampler;
};
using CurveSpec = std::variant<CircleCurve, EllipseCurve, LemniscateLobe, CustomCurve>;

class JordanRegion {
public:
    /// Throws GeometryError if the curve fails the closure check or runs clockwise.
    explicit JordanRegion(CurveSpec curve, int membership_nodes = 256);

    const CurveSpec& curve() const { return curve_; }
    int membership_nodes() const { return membership_nodes_; }

    /// z(t) and z'(t) in working precision T.
    template <class T>
    void sample(const T& t, Cx<T>& z, Cx<T>& dz) const;

    /// `count` equispaced boundary points in double.
    std::vector<Point> boundary(int count) const;
    const std::vector<Point>& membership_ring() const { return ring_; }
    /// 4096-point discretization used for distances, areas and bounds.
    const std::vector<Point>& distance_ring() const { return distance_ring_; }

private:
    CurveSpec curve_;
    int membership_nodes_;
    std::vector<Point> ring_;  // membership discretization
    std::vector<Point> distance_ring_;
};

class Region {
public:
    using Shape = std::variant<Disk, Polygon, JordanRegion>;

    static Region disk(Point center, double radius);
    static Region polygon(std::vector<Point> vertices);
    static Region jordan(CurveSpec curve, int membership_nodes = 256);

    const Shape& shape() const { return shape_; }

    /// Open-set membership; points on the boundary may go either way.
    bool contains(Point z) const;
    /// Exact for disks and polygons; from a 4096-point polyline for Jordan regions.
    double boundary_distance(Point z) const;
    /// Points on the boundary: polygon vertices plus edge subdivisions, or
    /// parameter-equispaced samples.
    std::vector<Point> boundary_samples(int count) const;
    double area() const;
    /// xmin, xmax, ymin, ymax
    std::array<double, 4> bounds() const;

private:
    explicit Region(Shape s) : shape_(std::move(s)) {}
    Shape shape_;
};

enum class PointSet { G, GStar, K };
enum class BoundarySet { Gamma, GammaStar, Lakes };

/// G = union of islands, K = union of lakes, G_star = G minus K.
class Scene {
public:
    /// Validates: islands pairwise apart (sampled distance > 1e-9), every lake
    /// inside one island with positive clearance, lakes pairwise apart.
    Scene(std::vector<Region> islands, std::vector<Region> lakes);

    const std::vector<Region>& islands() const { return islands_; }
    const std::vector<Region>& lakes() const { return lakes_; }

    /// Bounding box of the islands.
    std::array<double, 4> bounds() const;

private:
    std::vector<Region> islands_;
    std::vector<Region> lakes_;
};

/// Scene description, one primitive per line, '#' starts a comment:
///   island disk <cx> <cy> <r>
///   island ellipse <cx> <cy> <a> <b>
///   island polygon <x1> <y1> <x2> <y2> <x3> <y3> ...
///   island lemniscate <m> <r> [k]    (all m lobes of |z^m - 1| < r^m, or lobe k)
///   lake   disk|ellipse|polygon ...  (same arguments)
/// Throws ParseError with the line number, or GeometryError from validation.
Scene read_scene(std::istream& is);
Scene read_scene_file(const std::string& path);
void write_scene(std::ostream& os, const Scene& scene);

bool contains(const Scene& scene, Point z, PointSet which);
double boundary_distance(const Scene& scene, Point z, BoundarySet which);
/// Boundary sample points of the requested set, `per_region` per primitive.
std::vector<Point> boundary_samples(const Scene& scene, BoundarySet which, int per_region);

/// Counterclockwise hull. Collinear input gives the two extreme points,
/// a single (or repeated) point gives itself.
std::vector<Point> convex_hull(std::vector<Point> points);
/// Distance from z to a convex counterclockwise hull, 0 inside.
double hull_distance(std::span<const Point> hull, Point z);
double diameter(std::span<const Point> points);

struct Frame {
    double xmin, xmax, ymin, ymax;
    int nx, ny;

    /// Throws GeometryError on an empty box or nx, ny < 2.
    void validate() const;
    double hx() const { return (xmax - xmin) / nx; }
    double hy() const { return (ymax - ymin) / ny; }
    /// Center of cell (ix, iy).
    Point cell_center(int ix, int iy) const {
        return {xmin + (ix + 0.5) * hx(), ymin + (iy + 0.5) * hy()};
    }
};

/// nx*ny cell centers, index iy*nx + ix.
std::vector<Point> grid_points(const Frame& frame);

/// Symmetric Hausdorff distance between closed rings and a scene boundary set.
/// The boundary is sampled at `per_region` points per primitive.
double hausdorff_to_boundary(std::span<const Polygon> rings, const Scene& scene,
                             BoundarySet which, int per_region = 2048);

// ---------------------------------------------------------------------------

template <class T>
void JordanRegion::sample(const T& t, Cx<T>& z, Cx<T>& dz) const {
    using std::cos;
    using std::sin;
    std::visit(
        [&](const auto& c) {
            using C = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<C, CircleCurve>) {
                const T ct = cos(t), st = sin(t), rho(c.radius);
                z = cx_from<T>(c.center) + Cx<T>(rho * ct, rho * st);
                dz = Cx<T>(-rho * st, rho * ct);
            } else if constexpr (std::is_same_v<C, EllipseCurve>) {
                const T ct = cos(t), st = sin(t), a(c.semi_x), b(c.semi_y);
                z = cx_from<T>(c.center) + Cx<T>(a * ct, b * st);
                dz = Cx<T>(-a * st, b * ct);
            } else if constexpr (std::is_same_v<C, LemniscateLobe>) {
                // z = omega_k (1 + r^m e^{it})^{1/m}, principal root (Re > 0)
                T rm(1.0);
                for (int q = 0; q < c.m; ++q) rm = rm * T(c.r);
                const Cx<T> e(cos(t), sin(t));
                const Cx<T> w = Cx<T>(T(1.0)) + e * rm;
                const std::complex<double> w0 = to_std(w);
                const std::complex<double> y0 = std::pow(w0, 1.0 / c.m);
                Cx<T> y = cx_from<T>(y0);
                for (int it = 0; it < 5; ++it) {
                    Cx<T> ym1(T(1.0));
                    for (int q = 0; q < c.m - 1; ++q) ym1 = ym1 * y;
                    y = y - (ym1 * y - w) / (ym1 * T(static_cast<double>(c.m)));
                }
                const T ang = T(2.0) * pi_of<T>() * T(static_cast<double>(c.lobe)) /
                              T(static_cast<double>(c.m));
                const Cx<T> omega(cos(ang), sin(ang));
                z = omega * y;
                const Cx<T> ie(-e.im * rm, e.re * rm);  // i r^m e^{it}
                dz = z * ie / (w * T(static_cast<double>(c.m)));
            } else {
                Point zz, dd;
                c.sampler(to_double(t), zz, dd);
                z = cx_from<T>(zz);
                dz = cx_from<T>(dd);
            }
        },
        curve_);
}

}  // namespace archi
