#pragma once

// Complex area moments mu_ij = integral of w^i conj(w)^j dA(w), where
// w = (z - center) / scale is the local coordinate of a MomentFrame.
// All moments reduce to boundary integrals by Green's theorem:
//   mu_ij = 1 / (2 i (j+1)) * contour integral of w^i conj(w)^(j+1) dw.

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include "archi/geometry.hpp"
#include "archi/numeric.hpp"

namespace archi {

constexpr int kMaxDegree = 512;

/// Affine coordinate w = (z - center) / scale in which moments are taken.
struct MomentFrame {
    Point center{0.0, 0.0};
    double scale = 1.0;

    Point to_local(Point z) const { return (z - center) / scale; }
    Point to_global(Point w) const { return center + scale * w; }
    bool is_identity() const { return center == Point(0.0, 0.0) && scale == 1.0; }
    friend bool operator==(const MomentFrame&, const MomentFrame&) = default;
};

/// Frame centered on the islands' bounding box with scale equal to half its diagonal,
/// so the scene lies in the closed unit disk of w.
MomentFrame natural_frame(const Scene& scene);

/// Hermitian table mu_ij, 0 <= i, j <= degree. Only i <= j is stored; the
/// lower triangle is the conjugate reflection, so symmetry is exact.
class MomentMatrix {
public:
    MomentMatrix(int degree, Precision precision, MomentFrame frame = {});

    int degree() const { return degree_; }
    Precision precision() const { return precision_; }
    const MomentFrame& frame() const { return frame_; }

    Cx<MpReal> get(int i, int j) const;
    void set(int i, int j, const Cx<MpReal>& value);
    std::complex<double> at(int i, int j) const { return to_std(get(i, j)); }

    /// Leading (n+1)x(n+1) block, row-major, in working type T.
    template <class T>
    std::vector<Cx<T>> dense(int n) const;

    MomentMatrix truncated(int n) const;
    MomentMatrix with_precision(Precision p) const;

    friend MomentMatrix operator+(const MomentMatrix& a, const MomentMatrix& b);
    friend MomentMatrix operator-(const MomentMatrix& a, const MomentMatrix& b);

private:
    std::size_t index(int i, int j) const;

    int degree_;
    Precision precision_;
    MomentFrame frame_;
    std::vector<Cx<MpReal>> upper_;
};

/// Exact moment of the disk |z - center| < radius, about the origin.
/// Throws RangeError past kMaxDegree or when a term would overflow.
std::complex<double> disk_moment(Point center, double radius, int i, int j);

/// Exact moment of a polygon by Gauss-Legendre on each edge with
/// ceil((i+j+2)/2) nodes.
std::complex<double> polygon_moment(const Polygon& polygon, int i, int j);

struct QuadratureEstimate {
    std::complex<double> value;
    /// |I_N - I_{N/2}|
    double error_estimate;
    bool converged;
};

/// Periodic trapezoidal rule with quad_nodes points (>= 16, even).
QuadratureEstimate jordan_moment(const JordanRegion& region, int i, int j, int quad_nodes);

/// Moments of one primitive in the given frame and precision.
MomentMatrix region_moments(const Region& region, int n, Precision precision, MomentFrame frame = {});

MomentMatrix scene_moments(const Scene& scene, int n, PointSet which,
                           Precision precision = Precision::Double, MomentFrame frame = {});

/// Sum of exact polygon moments.
MomentMatrix polygon_set_moments(std::span<const Polygon> polygons, int n, Precision precision,
                                 MomentFrame frame = {});

/// The same moments expressed in another frame (exact binomial transform,
/// carried out in mp and rounded to the matrix precision).
MomentMatrix reframe(const MomentMatrix& m, MomentFrame target);

/// Moment file:
///   moments v1 degree=<n> precision=<tag> [center=<re>,<im> scale=<s>]
///   i j re im        (one line per i <= j)
/// The frame fields are written only for a non-identity frame.
void write_moments(std::ostream& os, const MomentMatrix& m);
/// Throws ParseError naming the offending line.
MomentMatrix read_moments(std::istream& is);

// ---------------------------------------------------------------------------

template <class T>
std::vector<Cx<T>> MomentMatrix::dense(int n) const {
    const std::size_t d = static_cast<std::size_t>(n) + 1;
    std::vector<Cx<T>> out(d * d);
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j) {
            const Cx<T> v = cx_from_mp<T>(upper_[index(i, j)]);
            out[static_cast<std::size_t>(i) * d + static_cast<std::size_t>(j)] = v;
            out[static_cast<std::size_t>(j) * d + static_cast<std::size_t>(i)] = conj(v);
        }
    return out;
}

}  // namespace archi
