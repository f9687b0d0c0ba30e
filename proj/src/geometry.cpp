#include "archi/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "archi/errors.hpp"

namespace archi {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kJordanDistanceNodes = 4096;
constexpr double kSeparation = 1e-9;

double cross(Point o, Point a, Point b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) -
           (a.imag() - o.imag()) * (b.real() - o.real());
}

bool finite(Point p) { return std::isfinite(p.real()) && std::isfinite(p.imag()); }

int orient(Point a, Point b, Point c) {
    const double v = cross(a, b, c);
    return (v > 0) - (v < 0);
}

bool on_segment(Point a, Point b, Point p) {
    return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
           std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
}

bool segments_intersect(Point a, Point b, Point c, Point d) {
    const int o1 = orient(a, b, c), o2 = orient(a, b, d);
    const int o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

std::array<double, 4> ring_bounds(std::span<const Point> pts) {
    std::array<double, 4> b{std::numeric_limits<double>::infinity(),
                            -std::numeric_limits<double>::infinity(),
                            std::numeric_limits<double>::infinity(),
                            -std::numeric_limits<double>::infinity()};
    for (const Point& p : pts) {
        b[0] = std::min(b[0], p.real());
        b[1] = std::max(b[1], p.real());
        b[2] = std::min(b[2], p.imag());
        b[3] = std::max(b[3], p.imag());
    }
    return b;
}

}  // namespace

Point checked_point(double re, double im) {
    if (!std::isfinite(re) || !std::isfinite(im)) throw GeometryError("non-finite coordinate");
    return {re, im};
}

double signed_area(std::span<const Point> ring) {
    double a = 0.0;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point p = ring[i], q = ring[(i + 1) % n];
        a += p.real() * q.imag() - q.real() * p.imag();
    }
    return 0.5 * a;
}

bool is_simple(std::span<const Point> ring) {
    const std::size_t n = ring.size();
    if (n < 3) return false;
    // sort edges by xmin so the pair scan can stop early
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    auto xlo = [&](std::size_t e) { return std::min(ring[e].real(), ring[(e + 1) % n].real()); };
    auto xhi = [&](std::size_t e) { return std::max(ring[e].real(), ring[(e + 1) % n].real()); };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xlo(a) < xlo(b); });
    for (std::size_t ia = 0; ia < n; ++ia) {
        const std::size_t e = order[ia];
        const double ehi = xhi(e);
        for (std::size_t ib = ia + 1; ib < n; ++ib) {
            const std::size_t f = order[ib];
            if (xlo(f) > ehi) break;
            const bool adjacent = (f == (e + 1) % n) || (e == (f + 1) % n);
            const Point a = ring[e], b = ring[(e + 1) % n];
            const Point c = ring[f], d = ring[(f + 1) % n];
            if (adjacent) {
                // adjacent edges may only share their common vertex
                const Point shared = (f == (e + 1) % n) ? b : a;
                const Point other_e = (shared == b) ? a : b;
                const Point other_f = (shared == c) ? d : c;
                if (orient(shared, other_e, other_f) == 0 &&
                    std::real((other_e - shared) * std::conj(other_f - shared)) > 0)
                    return false;  // folds back onto itself
                continue;
            }
            if (segments_intersect(a, b, c, d)) return false;
        }
    }
    return true;
}

bool point_in_ring(std::span<const Point> ring, Point z) {
    bool inside = false;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point a = ring[i], b = ring[j];
        if ((a.imag() > z.imag()) != (b.imag() > z.imag())) {
            const double x = a.real() + (z.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
            if (z.real() < x) inside = !inside;
        }
    }
    return inside;
}

double segment_distance(Point z, Point a, Point b) {
    const Point ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(z - a);
    const double t = std::clamp(std::real((z - a) * std::conj(ab)) / len2, 0.0, 1.0);
    return std::abs(z - (a + t * ab));
}

double ring_distance(std::span<const Point> ring, Point z) {
    double d = std::numeric_limits<double>::infinity();
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) d = std::min(d, segment_distance(z, ring[i], ring[(i + 1) % n]));
    return d;
}

// ---------------------------------------------------------------------------

Polygon::Polygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 3) throw GeometryError("polygon needs at least 3 vertices");
    for (const Point& p : vertices_)
        if (!finite(p)) throw GeometryError("polygon vertex is not finite");
    const double a = signed_area(vertices_);
    if (!(std::abs(a) > 0.0)) throw GeometryError("polygon has zero area");
    if (!is_simple(vertices_)) throw GeometryError("polygon is not simple");
    if (a < 0.0) std::reverse(vertices_.begin(), vertices_.end());
}

double Polygon::area() const { return signed_area(vertices_); }

// ---------------------------------------------------------------------------

JordanRegion::JordanRegion(CurveSpec curve, int membership_nodes)
    : curve_(std::move(curve)), membership_nodes_(membership_nodes) {
    if (membership_nodes_ < 8) throw GeometryError("membership discretization needs >= 8 nodes");
    std::visit(
        [](const auto& c) {
            using C = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<C, CircleCurve>) {
                if (!(c.radius > 0) || !finite(c.center)) throw GeometryError("invalid circle curve");
            } else if constexpr (std::is_same_v<C, EllipseCurve>) {
                if (!(c.semi_x > 0) || !(c.semi_y > 0) || !finite(c.center))
                    throw GeometryError("invalid ellipse curve");
            } else if constexpr (std::is_same_v<C, LemniscateLobe>) {
                if (c.m < 1 || !(c.r > 0) || !(c.r < 1) || c.lobe < 0 || c.lobe >= c.m)
                    throw GeometryError("lemniscate needs m >= 1, 0 < r < 1, 0 <= lobe < m");
            } else {
                if (!c.sampler) throw GeometryError("empty curve sampler");
            }
        },
        curve_);
    ring_ = boundary(membership_nodes_);
    distance_ring_ = boundary(kJordanDistanceNodes);
    for (const Point& p : ring_)
        if (!finite(p)) throw GeometryError("curve sampler returned a non-finite point");
    Point z0, z1;
    Cx<double> a, b;
    sample(0.0, a, b);
    z0 = to_std(a);
    sample(kTwoPi, a, b);
    z1 = to_std(a);
    const double diam = diameter(ring_);
    if (std::abs(z1 - z0) > 1e-12 * std::max(diam, 1e-300))
        throw GeometryError("curve sampler is not closed");
    if (signed_area(ring_) <= 0.0) throw GeometryError("curve must run counterclockwise");
}

std::vector<Point> JordanRegion::boundary(int count) const {
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(count));
    Cx<double> z, dz;
    for (int k = 0; k < count; ++k) {
        sample(kTwoPi * k / count, z, dz);
        out.push_back(to_std(z));
    }
    return out;
}

// ---------------------------------------------------------------------------

Region Region::disk(Point center, double radius) {
    if (!finite(center)) throw GeometryError("disk center is not finite");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw GeometryError("disk radius must be positive");
    return Region(Disk{center, radius});
}

Region Region::polygon(std::vector<Point> vertices) { return Region(Polygon(std::move(vertices))); }

Region Region::jordan(CurveSpec curve, int membership_nodes) {
    return Region(JordanRegion(std::move(curve), membership_nodes));
}

bool Region::contains(Point z) const {
    return std::visit(
        [&](const auto& s) -> bool {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Disk>) {
                return std::abs(z - s.center) < s.radius;
            } else if constexpr (std::is_same_v<S, Polygon>) {
                return point_in_ring(s.vertices(), z);
            } else {
                return point_in_ring(s.membership_ring(), z);
            }
        },
        shape_);
}

double Region::boundary_distance(Point z) const {
    return std::visit(
        [&](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Disk>) {
                return std::abs(std::abs(z - s.center) - s.radius);
            } else if constexpr (std::is_same_v<S, Polygon>) {
                return ring_distance(s.vertices(), z);
            } else {
                return ring_distance(s.distance_ring(), z);
            }
        },
        shape_);
}

std::vector<Point> Region::boundary_samples(int count) const {
    return std::visit(
        [&](const auto& s) -> std::vector<Point> {
            using S = std::decay_t<decltype(s)>;
            std::vector<Point> out;
            if constexpr (std::is_same_v<S, Disk>) {
                out.reserve(static_cast<std::size_t>(count));
                for (int k = 0; k < count; ++k)
                    out.push_back(s.center + std::polar(s.radius, kTwoPi * k / count));
            } else if constexpr (std::is_same_v<S, Polygon>) {
                const auto& v = s.vertices();
                const std::size_t n = v.size();
                const int per_edge = std::max(1, count / static_cast<int>(n));
                for (std::size_t i = 0; i < n; ++i)
                    for (int q = 0; q < per_edge; ++q)
                        out.push_back(v[i] + (v[(i + 1) % n] - v[i]) * (static_cast<double>(q) / per_edge));
            } else {
                out = s.boundary(count);
            }
            return out;
        },
        shape_);
}

double Region::area() const {
    return std::visit(
        [&](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Disk>) {
                return std::numbers::pi * s.radius * s.radius;
            } else if constexpr (std::is_same_v<S, Polygon>) {
                return s.area();
            } else {
                return signed_area(s.distance_ring());
            }
        },
        shape_);
}

std::array<double, 4> Region::bounds() const {
    if (const auto* d = std::get_if<Disk>(&shape_))
        return {d->center.real() - d->radius, d->center.real() + d->radius,
                d->center.imag() - d->radius, d->center.imag() + d->radius};
    if (const auto* p = std::get_if<Polygon>(&shape_)) return ring_bounds(p->vertices());
    return ring_bounds(std::get<JordanRegion>(shape_).distance_ring());
}

// ---------------------------------------------------------------------------

namespace {

constexpr int kValidationSamples = 512;

double sampled_gap(const Region& a, const Region& b) {
    double d = std::numeric_limits<double>::infinity();
    for (const Point& p : a.boundary_samples(kValidationSamples)) d = std::min(d, b.boundary_distance(p));
    for (const Point& p : b.boundary_samples(kValidationSamples)) d = std::min(d, a.boundary_distance(p));
    return d;
}

bool inside_region(const Region& outer, const Region& inner) {
    for (const Point& p : inner.boundary_samples(kValidationSamples))
        if (!outer.contains(p)) return false;
    return true;
}

}  // namespace

Scene::Scene(std::vector<Region> islands, std::vector<Region> lakes)
    : islands_(std::move(islands)), lakes_(std::move(lakes)) {
    if (islands_.empty()) throw GeometryError("scene needs at least one island");
    auto check_apart = [](const std::vector<Region>& rs, const char* what) {
        for (std::size_t i = 0; i < rs.size(); ++i)
            for (std::size_t j = i + 1; j < rs.size(); ++j) {
                if (!(sampled_gap(rs[i], rs[j]) > kSeparation))
                    throw GeometryError(std::string(what) + " closures intersect");
                const Point pi = rs[i].boundary_samples(1).front();
                const Point pj = rs[j].boundary_samples(1).front();
                if (rs[j].contains(pi) || rs[i].contains(pj))
                    throw GeometryError(std::string(what) + " are nested");
            }
    };
    check_apart(islands_, "islands");
    check_apart(lakes_, "lakes");
    for (const Region& lake : lakes_) {
        bool placed = false;
        for (const Region& isl : islands_) {
            if (!inside_region(isl, lake)) continue;
            if (!(sampled_gap(isl, lake) > kSeparation)) throw GeometryError("lake touches the island boundary");
            placed = true;
            break;
        }
        if (!placed) throw GeometryError("lake is not inside a single island");
    }
}

std::array<double, 4> Scene::bounds() const {
    std::array<double, 4> b = islands_.front().bounds();
    for (const Region& r : islands_) {
        const auto q = r.bounds();
        b[0] = std::min(b[0], q[0]);
        b[1] = std::max(b[1], q[1]);
        b[2] = std::min(b[2], q[2]);
        b[3] = std::max(b[3], q[3]);
    }
    return b;
}

bool contains(const Scene& scene, Point z, PointSet which) {
    const bool in_g = std::any_of(scene.islands().begin(), scene.islands().end(),
                                  [&](const Region& r) { return r.contains(z); });
    auto in_closed_lake = [&](const Region& r) { return r.contains(z) || r.boundary_distance(z) == 0.0; };
    const bool in_k = std::any_of(scene.lakes().begin(), scene.lakes().end(), in_closed_lake);
    switch (which) {
        case PointSet::G: return in_g;
        case PointSet::K: return in_k;
        case PointSet::GStar: return in_g && !in_k;
    }
    return false;
}

double boundary_distance(const Scene& scene, Point z, BoundarySet which) {
    double d = std::numeric_limits<double>::infinity();
    if (which != BoundarySet::Lakes)
        for (const Region& r : scene.islands()) d = std::min(d, r.boundary_distance(z));
    if (which != BoundarySet::Gamma)
        for (const Region& r : scene.lakes()) d = std::min(d, r.boundary_distance(z));
    return d;
}

std::vector<Point> boundary_samples(const Scene& scene, BoundarySet which, int per_region) {
    std::vector<Point> out;
    auto add = [&](const std::vector<Region>& rs) {
        for (const Region& r : rs) {
            auto s = r.boundary_samples(per_region);
            out.insert(out.end(), s.begin(), s.end());
        }
    };
    if (which != BoundarySet::Lakes) add(scene.islands());
    if (which != BoundarySet::Gamma) add(scene.lakes());
    return out;
}

// ---------------------------------------------------------------------------

std::vector<Point> convex_hull(std::vector<Point> pts) {
    auto less = [](Point a, Point b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    };
    std::sort(pts.begin(), pts.end(), less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() <= 2) return pts;
    std::vector<Point> h(2 * pts.size());
    std::size_t k = 0;
    for (const Point& p : pts) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
        h[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

double hull_distance(std::span<const Point> hull, Point z) {
    if (hull.empty()) return std::numeric_limits<double>::infinity();
    if (hull.size() == 1) return std::abs(z - hull[0]);
    if (hull.size() == 2) return segment_distance(z, hull[0], hull[1]);
    bool inside = true;
    for (std::size_t i = 0; i < hull.size(); ++i)
        if (cross(hull[i], hull[(i + 1) % hull.size()], z) < 0) inside = false;
    return inside ? 0.0 : ring_distance(hull, z);
}

double diameter(std::span<const Point> points) {
    const std::vector<Point> h = convex_hull({points.begin(), points.end()});
    double d = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = i + 1; j < h.size(); ++j) d = std::max(d, std::abs(h[i] - h[j]));
    return d;
}

void Frame::validate() const {
    if (!(xmin < xmax) || !(ymin < ymax)) throw GeometryError("frame box is empty");
    if (nx < 2 || ny < 2) throw GeometryError("frame resolution must be at least 2x2");
}

std::vector<Point> grid_points(const Frame& frame) {
    frame.validate();
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(frame.nx) * frame.ny);
    for (int iy = 0; iy < frame.ny; ++iy)
        for (int ix = 0; ix < frame.nx; ++ix) out.push_back(frame.cell_center(ix, iy));
    return out;
}

double hausdorff_to_boundary(std::span<const Polygon> rings, const Scene& scene, BoundarySet which,
                             int per_region) {
    if (rings.empty()) return std::numeric_limits<double>::infinity();
    double d = 0.0;
    for (const Polygon& ring : rings) {
        const auto& v = ring.vertices();
        for (std::size_t i = 0; i < v.size(); ++i) {
            d = std::max(d, boundary_distance(scene, v[i], which));
            d = std::max(d, boundary_distance(scene, 0.5 * (v[i] + v[(i + 1) % v.size()]), which));
        }
    }
    for (const Point& p : boundary_samples(scene, which, per_region)) {
        double best = std::numeric_limits<double>::infinity();
        for (const Polygon& ring : rings) best = std::min(best, ring_distance(ring.vertices(), p));
        d = std::max(d, best);
    }
    return d;
}

}  // namespace archi
