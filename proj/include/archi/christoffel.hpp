#pragma once

// Christoffel functions, kernel polynomials, grid fields and level curves.
//   1/lambda_n(z) = sum_{k<=n} |p_k(z)|^2,   K_n(z, zeta) = sum conj(p_k(zeta)) p_k(z).

#include <complex>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "archi/bergman.hpp"
#include "archi/geometry.hpp"

namespace archi {

double log_lambda(const BergmanBasis& basis, int n, Point z);
double lambda(const BergmanBasis& basis, int n, Point z);
std::complex<double> kernel(const BergmanBasis& basis, int n, Point z, Point zeta);

enum class FieldMeaning { LambdaSqrt, Lambda, LogLambda };

std::string_view to_string(FieldMeaning m);
FieldMeaning parse_field_meaning(std::string_view s);

/// lambda_n^{1/2} of the unit disk at radius r, closed form.
double disk_lambda_sqrt(int n, double r);
/// Exact boundary value for a disk of radius R: R sqrt(2 pi / ((n+1)(n+2))).
double disk_boundary_level(int n, double radius);

struct ScalarField {
    Frame frame;
    int degree = 0;
    FieldMeaning meaning = FieldMeaning::LambdaSqrt;
    /// row-major, index iy*nx + ix, at the cell centers of `frame`
    std::vector<double> values;
    /// level = constant * grid spacing, when a calibrated level was attached
    std::optional<double> level_constant;

    double at(int ix, int iy) const {
        return values[static_cast<std::size_t>(iy) * static_cast<std::size_t>(frame.nx) + static_cast<std::size_t>(ix)];
    }
    double max() const;
    double min() const;
    /// Largest value on the outermost ring of samples.
    double border_max() const;
    /// Geometric mean of hx and hy.
    double spacing() const;
};

/// threads = 0 uses the available hardware parallelism.  The output does
/// not depend on the thread count.
ScalarField field(const BergmanBasis& basis, int n, const Frame& frame, FieldMeaning meaning = FieldMeaning::LambdaSqrt,
                  int threads = 0);

struct Polyline {
    std::vector<Point> points;
    bool closed = false;

    /// Signed shoelace area for closed lines, 0 for open ones.  Contours
    /// are traced with the high side on the left, so a positive area
    /// encloses values above the level.
    double signed_area() const;
};

struct ContourSet {
    double level = 0.0;
    /// descending |enclosed area|, closed before open at equal area
    std::vector<Polyline> polylines;

    int count_open() const;
    int count_closed() const;
    /// Closed lines around high regions not contained in another such line.
    std::vector<const Polyline*> outermost() const;
};

/// Marching squares on the cell-center lattice with linear interpolation.
/// Ambiguous saddles are decided by the average of the four corners.
ContourSet contours(const ScalarField& f, double level);

struct LevelCalibration {
    double constant;  // level / spacing
    double level;
    double mean_radial_error;  // on the calibration disk
};

/// Picks the level minimizing the mean radial error of the traced contour
/// for an analytic disk of the given radius at degree n and grid spacing h.
LevelCalibration calibrate_level(int n, double spacing, double radius);

/// Field CSV:
///   # field v1 xmin=.. xmax=.. ymin=.. ymax=.. nx=.. ny=.. n=.. meaning=.. [level_constant=..]
///   x,y,value
///   ...
void write_field(std::ostream& os, const ScalarField& f);
ScalarField read_field(std::istream& is);

/// CSV curve_id,seq,x,y,closed
void write_contours(std::ostream& os, const ContourSet& c);

struct SvgLayer {
    const ContourSet* contours = nullptr;
    std::string stroke = "#1f4e9a";
};

/// Frame maps to the viewBox (y up).  Zeros are drawn as small circles.
void write_svg(std::ostream& os, const Frame& frame, std::span<const SvgLayer> layers,
               std::span<const Point> zeros = {}, const std::string& title = "");

}  // namespace archi
