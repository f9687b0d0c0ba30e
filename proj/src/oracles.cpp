#include "archi/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "archi/errors.hpp"

namespace archi {

SeriesValue annulus_kernel_J(Point w, Point omega, double r, double tol, int max_terms) {
    if (!(r >= 0.0 && r < 1.0)) throw RangeError("J needs 0 <= r < 1");
    const Point t = w * std::conj(omega);
    if (std::abs(t) >= 1.0) throw RangeError("J diverges for |w conj(omega)| >= 1");
    std::complex<double> s = 0.0;
    double r2nu = 1.0;
    int nu = 0;
    for (; nu < max_terms; ++nu) {
        const Point d = 1.0 - r2nu * t;
        const Point term = r2nu / (std::numbers::pi * d * d);
        s += term;
        if (std::abs(term) < tol || r2nu == 0.0) {
            ++nu;
            break;
        }
        r2nu *= r * r;
    }
    return {s, nu};
}

AnalyticScene AnalyticScene::unit_disk() {
    AnalyticScene s;
    s.kind_ = Kind::UnitDisk;
    s.disks_ = {Disk{{0, 0}, 1.0}};
    return s;
}

AnalyticScene AnalyticScene::offset_disk(Point c, double rho) {
    if (!(rho > 0)) throw GeometryError("disk radius must be positive");
    AnalyticScene s;
    s.kind_ = Kind::OffsetDisk;
    s.disks_ = {Disk{c, rho}};
    return s;
}

AnalyticScene AnalyticScene::annulus(double r) {
    if (!(r > 0 && r < 1)) throw GeometryError("annulus needs 0 < r < 1");
    AnalyticScene s;
    s.kind_ = Kind::Annulus;
    s.disks_ = {Disk{{0, 0}, 1.0}};
    s.lake_r_ = r;
    return s;
}

AnalyticScene AnalyticScene::lemniscate(int m, double r) {
    if (m < 1 || !(r > 0 && r < 1)) throw GeometryError("lemniscate needs m >= 1 and 0 < r < 1");
    AnalyticScene s;
    s.kind_ = Kind::Lemniscate;
    s.m_ = m;
    s.r_ = r;
    return s;
}

AnalyticScene AnalyticScene::multi_disk(std::vector<Disk> disks, std::optional<double> lake_r) {
    if (disks.empty()) throw GeometryError("multi_disk needs at least one disk");
    if (lake_r && !(*lake_r > 0 && *lake_r < 1)) throw GeometryError("lake radius must lie in (0,1)");
    AnalyticScene s;
    s.kind_ = Kind::MultiDisk;
    s.disks_ = std::move(disks);
    s.lake_r_ = lake_r;
    s.scene();  // validates disjointness
    return s;
}

std::optional<double> AnalyticScene::capacity() const {
    switch (kind_) {
        case Kind::UnitDisk:
        case Kind::Annulus: return 1.0;
        case Kind::OffsetDisk: return disks_[0].radius;
        case Kind::Lemniscate: return r_;
        case Kind::MultiDisk:
            if (disks_.size() == 1) return disks_[0].radius;
            return std::nullopt;
    }
    return std::nullopt;
}

bool AnalyticScene::has_green() const { return kind_ != Kind::MultiDisk || disks_.size() == 1; }

double AnalyticScene::green(Point z) const {
    if (!has_green()) throw RangeError("no closed-form Green function for this scene");
    double g = 0.0;
    if (kind_ == Kind::Lemniscate) {
        g = std::log(std::abs(std::pow(z, m_) - 1.0)) / m_ - std::log(r_);
    } else {
        g = std::log(std::abs(z - disks_[0].center)) - std::log(disks_[0].radius);
    }
    if (g < -1e-12) throw RangeError("Green function requested inside G");
    return std::max(g, 0.0);
}

bool AnalyticScene::in_islands(Point z) const {
    if (kind_ == Kind::Lemniscate) return std::abs(std::pow(z, m_) - 1.0) < std::pow(r_, m_);
    for (const Disk& d : disks_)
        if (std::abs(z - d.center) < d.radius) return true;
    return false;
}

Scene AnalyticScene::scene() const {
    std::vector<Region> islands, lakes;
    if (kind_ == Kind::Lemniscate) {
        for (int k = 0; k < m_; ++k) islands.push_back(Region::jordan(LemniscateLobe{m_, r_, k}));
    } else {
        for (const Disk& d : disks_) {
            islands.push_back(Region::disk(d.center, d.radius));
            if (lake_r_) lakes.push_back(Region::disk(d.center, *lake_r_ * d.radius));
        }
    }
    return Scene(std::move(islands), std::move(lakes));
}

std::vector<Point> AnalyticScene::hull() const {
    std::vector<Point> pts;
    const Scene sc = scene();
    for (const Region& r : sc.islands()) {
        const auto b = r.boundary_samples(4096);
        pts.insert(pts.end(), b.begin(), b.end());
    }
    return convex_hull(std::move(pts));
}

std::complex<double> k_sharp(Point z, Point zeta, const AnalyticScene& scene) {
    if (scene.kind() == AnalyticScene::Kind::Lemniscate) throw GeometryError("K# needs disk islands");
    int iz = -1, izeta = -1;
    const auto& disks = scene.disks();
    for (std::size_t j = 0; j < disks.size(); ++j) {
        if (std::abs(z - disks[j].center) < disks[j].radius) iz = static_cast<int>(j);
        if (std::abs(zeta - disks[j].center) < disks[j].radius) izeta = static_cast<int>(j);
    }
    if (iz < 0 || izeta < 0) throw GeometryError("K# arguments must lie in the islands");
    if (iz != izeta) return 0.0;
    const ConformalDiskMap phi{disks[static_cast<std::size_t>(iz)].center, disks[static_cast<std::size_t>(iz)].radius};
    const double r = scene.lake_radius().value_or(0.0);
    const double d = phi.derivative();
    return d * d * annulus_kernel_J(phi(z), phi(zeta), r).value;
}

double disk_gamma(int k, double rho) {
    return std::exp(0.5 * std::log((k + 1) / std::numbers::pi) - (k + 1) * std::log(rho));
}

double annulus_gamma(int k, double r) {
    return std::sqrt((k + 1) / (std::numbers::pi * (1.0 - std::pow(r, 2 * k + 2))));
}

std::complex<double> disk_polynomial(int k, Point z, Point c, double rho) {
    return std::sqrt((k + 1) / std::numbers::pi) / rho * std::pow((z - c) / rho, k);
}

namespace {

std::vector<double> log_moduli(const BergmanBasis& b, Point z) {
    const ScaledValues s = evaluate_all(b, b.degree(), z);
    std::vector<double> out;
    out.reserve(s.values.size());
    for (const auto& v : s.values) out.push_back(std::log(std::abs(v)) + s.log_scale);
    return out;
}

}  // namespace

NthRootReport check_nth_root(const BergmanBasis& basis, const AnalyticScene& scene, const std::vector<Point>& zs) {
    const auto cap = scene.capacity();
    if (!cap || !scene.has_green()) throw RangeError("n-th root check needs capacity and Green function");
    NthRootReport rep;
    rep.points = zs;
    for (int n = 1; n <= basis.degree(); ++n) {
        rep.degrees.push_back(n);
        rep.gamma_deviation.push_back(std::exp(basis.log_gamma(n) / n) * *cap - 1.0);
    }
    for (Point z : zs) {
        const double g = scene.green(z);
        const auto lm = log_moduli(basis, z);
        std::vector<double> root, rel;
        for (int n = 1; n <= basis.degree(); ++n) {
            const double lr = lm[static_cast<std::size_t>(n)] / n;
            root.push_back(std::exp(lr));
            rel.push_back(std::exp(lr - g));
        }
        rep.root.push_back(std::move(root));
        rep.relative.push_back(std::move(rel));
    }
    return rep;
}

ExteriorBoundsReport check_exterior_bounds(const BergmanBasis& basis, const AnalyticScene& scene,
                                           const std::vector<Point>& zs, const std::vector<int>& ns) {
    ExteriorBoundsReport rep;
    rep.points = zs;
    rep.degrees = ns;
    rep.min = std::numeric_limits<double>::infinity();
    rep.max = 0.0;
    for (int n : ns)
        if (n < 1 || n > basis.degree()) throw RangeError("exterior bound degree out of range");
    for (Point z : zs) {
        const double g = scene.green(z);
        const auto lm = log_moduli(basis, z);
        std::vector<double> row;
        for (int n : ns) {
            const double v = std::exp(lm[static_cast<std::size_t>(n)] - 0.5 * std::log(n) - n * g);
            rep.min = std::min(rep.min, v);
            rep.max = std::max(rep.max, v);
            row.push_back(v);
        }
        rep.value.push_back(std::move(row));
    }
    return rep;
}

double fitted_ratio(const std::vector<int>& ns, const std::vector<double>& errors) {
    if (ns.size() != errors.size() || ns.size() < 2) throw RangeError("fit needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double x = ns[i], y = std::log(std::abs(errors[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return std::exp((m * sxy - sx * sy) / (m * sxx - sx * sx));
}

}  // namespace archi
