#pragma once

// Closed-form references (disk, annulus, lemniscate) and checkers for the
// asymptotic behaviour of Bergman polynomials outside the archipelago.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "archi/bergman.hpp"
#include "archi/geometry.hpp"

namespace archi {

struct SeriesValue {
    std::complex<double> value;
    int terms;
};

/// J(w, omega) = sum_nu r^(2 nu) / (pi (1 - r^(2 nu) w conj(omega))^2), the
/// reproducing kernel of the disk polynomials under the annulus r < |w| < 1
/// inner product.  Summation stops once a term drops below tol (absolute)
/// or after max_terms.  Throws RangeError if |w conj(omega)| >= 1.
SeriesValue annulus_kernel_J(Point w, Point omega, double r, double tol = 1e-14, int max_terms = 10000);

/// z -> (z - c) / rho
struct ConformalDiskMap {
    Point center;
    double radius;

    Point operator()(Point z) const { return (z - center) / radius; }
    double derivative() const { return 1.0 / radius; }
};

struct MultiDisk {
    std::vector<Disk> disks;
};

/// Scenes with known data.  Lakes are the preimages of |w| <= r under the
/// disk maps when `lake_r` is set, which is the configuration of the
/// comparison kernel K#.
class AnalyticScene {
public:
    enum class Kind { UnitDisk, OffsetDisk, Annulus, Lemniscate, MultiDisk };

    static AnalyticScene unit_disk();
    static AnalyticScene offset_disk(Point c, double rho);
    /// unit disk minus the closed disk |z| <= r
    static AnalyticScene annulus(double r);
    /// {|z^m - 1| < r^m}, m lobes when r < 1
    static AnalyticScene lemniscate(int m, double r);
    /// disjoint disks; with lake_r each disk loses its concentric lake of relative radius lake_r
    static AnalyticScene multi_disk(std::vector<Disk> disks, std::optional<double> lake_r = std::nullopt);

    Kind kind() const { return kind_; }
    const std::vector<Disk>& disks() const { return disks_; }
    std::optional<double> lake_radius() const { return lake_r_; }
    int lemniscate_m() const { return m_; }
    double lemniscate_r() const { return r_; }

    std::optional<double> capacity() const;
    bool has_green() const;
    /// g(z, infinity).  0 on the boundary.  Throws RangeError for z strictly inside G
    /// or when no closed form is known.
    double green(Point z) const;

    bool in_islands(Point z) const;
    Scene scene() const;
    /// Convex hull of G from a fine boundary sampling.
    std::vector<Point> hull() const;

private:
    Kind kind_ = Kind::UnitDisk;
    std::vector<Disk> disks_;
    std::optional<double> lake_r_;
    int m_ = 0;
    double r_ = 0.0;
};

/// K#(z, zeta) for disk islands: transported J inside one island, 0 across
/// islands.  Uses the scene's lake radius (0 if none).  Throws GeometryError if
/// z or zeta is outside every island.
std::complex<double> k_sharp(Point z, Point zeta, const AnalyticScene& scene);

// Closed forms.
/// sqrt((k+1)/pi) / rho^(k+1)
double disk_gamma(int k, double rho);
/// sqrt((k+1) / (pi (1 - r^(2k+2))))
double annulus_gamma(int k, double r);
/// p_k(z) of the disk |z - c| < rho
std::complex<double> disk_polynomial(int k, Point z, Point c = {0, 0}, double rho = 1.0);

struct NthRootReport {
    std::vector<int> degrees;           // 1..n
    std::vector<Point> points;
    /// root[p][n-1] = |p_n(z_p)|^(1/n)
    std::vector<std::vector<double>> root;
    /// root / exp(g(z_p))
    std::vector<std::vector<double>> relative;
    /// gamma_n^(1/n) cap - 1
    std::vector<double> gamma_deviation;
};

/// Requires a scene with capacity and Green function.
NthRootReport check_nth_root(const BergmanBasis& basis, const AnalyticScene& scene, const std::vector<Point>& zs);

struct ExteriorBoundsReport {
    std::vector<Point> points;
    std::vector<int> degrees;
    /// value[p][d] = |p_n(z)| / (sqrt(n) exp(n g(z)))
    std::vector<std::vector<double>> value;
    double min = 0.0;
    double max = 0.0;
};

ExteriorBoundsReport check_exterior_bounds(const BergmanBasis& basis, const AnalyticScene& scene,
                                           const std::vector<Point>& zs, const std::vector<int>& ns);

/// Least-squares slope of log|e_n| against n, returned as the ratio q.
double fitted_ratio(const std::vector<int>& ns, const std::vector<double>& errors);

}  // namespace archi
