#include "archi/moments.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "archi/errors.hpp"
#include "archi/quadrature.hpp"

namespace archi {

namespace {

constexpr int kJordanStartNodes = 256;
constexpr int kJordanMaxNodes = 1 << 16;

std::size_t at2(int n, int i, int j) {
    return static_cast<std::size_t>(i) * (static_cast<std::size_t>(n) + 1) + static_cast<std::size_t>(j);
}

void check_degree(int n) {
    if (n < 0) throw RangeError("negative degree");
    if (n > kMaxDegree) throw RangeError("degree " + std::to_string(n) + " exceeds cap " + std::to_string(kMaxDegree));
}

// Largest log-magnitude of a term C(i,k) C(j,k) |c|^(i+j-2k) rho^(2k+2) pi/(k+1)
// over 0 <= i, j <= n. The (i,j) term is the geometric mean of (i,i) and (j,j),
// so the diagonal suffices.
double disk_log_bound(int n, double abs_c, double rho) {
    std::vector<double> lf(static_cast<std::size_t>(n) + 2, 0.0);
    for (int q = 1; q <= n + 1; ++q) lf[static_cast<std::size_t>(q)] = lf[static_cast<std::size_t>(q - 1)] + std::log(q);
    const double lr = std::log(rho);
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) {
        if (abs_c == 0.0) {
            worst = std::max(worst, (2 * i + 2) * lr - std::log(i + 1.0));
            continue;
        }
        const double lc = std::log(abs_c);
        for (int k = 0; k <= i; ++k) {
            const double lbin = lf[static_cast<std::size_t>(i)] - lf[static_cast<std::size_t>(k)] -
                                lf[static_cast<std::size_t>(i - k)];
            worst = std::max(worst, 2 * lbin + 2 * (i - k) * lc + (2 * k + 2) * lr - std::log(k + 1.0));
        }
    }
    return worst + std::log(std::numbers::pi);
}

template <class T>
void require_finite(const std::vector<Cx<T>>& acc, const char* what) {
    if constexpr (std::is_same_v<T, MpReal>) {
        return;
    } else {
        for (const auto& v : acc)
            if (!std::isfinite(to_double(v.re)) || !std::isfinite(to_double(v.im)))
                throw RangeError(std::string(what) + " moment overflowed the working range");
    }
}

// acc(i,j) += sign * moments of the disk, upper triangle only.
template <class T>
void accumulate_disk(std::vector<Cx<T>>& acc, int n, const Cx<T>& c, const T& rho, const T& sign) {
    if constexpr (!std::is_same_v<T, MpReal>) {
        if (disk_log_bound(n, to_double(modulus(c)), to_double(rho)) > 700.0)
            throw RangeError("disk moment of degree " + std::to_string(n) + " overflows");
    }
    const T pi = pi_of<T>();
    const std::size_t d = static_cast<std::size_t>(n) + 1;
    // D_k = pi rho^(2k+2) / (k+1)
    std::vector<T> dk(d);
    T rho2k2 = rho * rho;
    for (int k = 0; k <= n; ++k) {
        dk[static_cast<std::size_t>(k)] = pi * rho2k2 / T(k + 1.0);
        rho2k2 = rho2k2 * rho * rho;
    }
    if (c.re == T(0.0) && c.im == T(0.0)) {
        for (int i = 0; i <= n; ++i) acc[at2(n, i, i)] += Cx<T>(sign * dk[static_cast<std::size_t>(i)]);
        return;
    }
    // A_ik = C(i,k) c^(i-k)
    std::vector<Cx<T>> cpow(d);
    cpow[0] = Cx<T>(T(1.0));
    for (std::size_t p = 1; p < d; ++p) cpow[p] = cpow[p - 1] * c;
    std::vector<T> binom(d, T(0.0));
    std::vector<Cx<T>> a(d * d);
    binom[0] = T(1.0);
    for (int i = 0; i <= n; ++i) {
        if (i > 0)
            for (int k = i; k >= 1; --k)
                binom[static_cast<std::size_t>(k)] = binom[static_cast<std::size_t>(k)] + binom[static_cast<std::size_t>(k - 1)];
        for (int k = 0; k <= i; ++k)
            a[at2(n, i, k)] = cpow[static_cast<std::size_t>(i - k)] * binom[static_cast<std::size_t>(k)];
    }
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j) {
            Cx<T> s;
            for (int k = 0; k <= i; ++k)
                s += a[at2(n, i, k)] * conj(a[at2(n, j, k)]) * dk[static_cast<std::size_t>(k)];
            acc[at2(n, i, j)] += s * sign;
        }
}

// Accumulate the boundary integral sum_q weight_q f(z_q) dz_q of f = w^i conj(w)^(j+1).
template <class T>
void accumulate_node(std::vector<Cx<T>>& acc, int n, const Cx<T>& z, const Cx<T>& wdz,
                     std::vector<Cx<T>>& zp, std::vector<Cx<T>>& zb) {
    const Cx<T> zc = conj(z);
    zp[0] = wdz;
    zb[0] = zc;
    for (int p = 1; p <= n; ++p) {
        zp[static_cast<std::size_t>(p)] = zp[static_cast<std::size_t>(p - 1)] * z;
        zb[static_cast<std::size_t>(p)] = zb[static_cast<std::size_t>(p - 1)] * zc;
    }
    for (int i = 0; i <= n; ++i) {
        const Cx<T> zi = zp[static_cast<std::size_t>(i)];
        Cx<T>* row = &acc[at2(n, i, 0)];
        for (int j = i; j <= n; ++j) row[j] += zi * zb[static_cast<std::size_t>(j)];
    }
}

// Contour sums S_ij -> mu_ij = S_ij / (2 i (j+1)).
template <class T>
void finish_boundary(std::vector<Cx<T>>& acc, int n) {
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j) {
            Cx<T>& s = acc[at2(n, i, j)];
            const T f = T(2.0 * (j + 1));
            s = Cx<T>(s.im / f, -s.re / f);
        }
}

template <class T>
std::vector<Cx<T>> polygon_block(const Polygon& poly, int n, const MomentFrame& frame, int nodes) {
    const std::size_t d = static_cast<std::size_t>(n) + 1;
    std::vector<Cx<T>> acc(d * d);
    const QuadratureRule<T> rule = gauss_legendre01<T>(nodes);
    const Cx<T> c = cx_from<T>(frame.center);
    const T s(frame.scale);
    std::vector<Cx<T>> local;
    local.reserve(poly.size());
    for (const Point& v : poly.vertices()) local.push_back((cx_from<T>(v) - c) / s);
    std::vector<Cx<T>> zp(d), zb(d);
    for (std::size_t e = 0; e < local.size(); ++e) {
        const Cx<T>& a = local[e];
        const Cx<T> ab = local[(e + 1) % local.size()] - a;
        for (int q = 0; q < nodes; ++q) {
            const T& t = rule.nodes[static_cast<std::size_t>(q)];
            accumulate_node(acc, n, a + ab * t, ab * rule.weights[static_cast<std::size_t>(q)], zp, zb);
        }
    }
    finish_boundary(acc, n);
    require_finite(acc, "polygon");
    return acc;
}

template <class T>
struct JordanBlock {
    std::vector<Cx<T>> value;
    std::vector<double> error;  // |I_N - I_{N/2}| per entry
    std::vector<double> scale;  // magnitude of the integrand per entry
    int nodes = 0;
};

template <class T>
JordanBlock<T> jordan_block(const JordanRegion& region, int n, const MomentFrame& frame, int nodes) {
    const std::size_t d = static_cast<std::size_t>(n) + 1;
    std::vector<Cx<T>> even(d * d), odd(d * d);
    std::vector<double> abs_pow(2 * d, 0.0);
    const Cx<T> c = cx_from<T>(frame.center);
    const T s(frame.scale);
    const T h = T(2.0) * pi_of<T>() / T(static_cast<double>(nodes));
    std::vector<Cx<T>> zp(d), zb(d);
    for (int k = 0; k < nodes; ++k) {
        Cx<T> z, dz;
        region.sample(h * T(static_cast<double>(k)), z, dz);
        z = (z - c) / s;
        dz = dz / s;
        accumulate_node((k % 2 == 0) ? even : odd, n, z, dz * h, zp, zb);
        const double az = std::abs(to_std(z)), adz = std::abs(to_std(dz)) * to_double(h);
        double p = adz;
        for (std::size_t q = 0; q < 2 * d; ++q) {
            abs_pow[q] += p;
            p *= az;
        }
    }
    JordanBlock<T> out;
    out.nodes = nodes;
    out.value.resize(d * d);
    std::vector<Cx<T>> half(d * d);
    for (std::size_t q = 0; q < d * d; ++q) {
        out.value[q] = even[q] + odd[q];
        half[q] = even[q] * T(2.0);
    }
    finish_boundary(out.value, n);
    finish_boundary(half, n);
    require_finite(out.value, "jordan");
    out.error.assign(d * d, 0.0);
    out.scale.assign(d * d, 0.0);
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j) {
            const std::size_t q = at2(n, i, j);
            out.error[q] = std::abs(to_std(out.value[q] - half[q]));
            out.scale[q] = abs_pow[static_cast<std::size_t>(i + j + 1)] / (2.0 * (j + 1));
        }
    return out;
}

template <class T>
double jordan_tolerance(int nodes) {
    return std::max(1e3, 8.0 * nodes) * epsilon_of<T>();
}

template <class T>
bool jordan_converged(const JordanBlock<T>& b, int n) {
    const double tol = std::max(jordan_tolerance<T>(b.nodes), 1e-300);
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j) {
            const std::size_t q = at2(n, i, j);
            if (b.error[q] > tol * b.scale[q]) return false;
        }
    return true;
}

template <class T>
std::vector<Cx<T>> region_block(const Region& region, int n, const MomentFrame& frame) {
    const std::size_t d = static_cast<std::size_t>(n) + 1;
    return std::visit(
        [&](const auto& s) -> std::vector<Cx<T>> {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Disk>) {
                std::vector<Cx<T>> acc(d * d);
                const Cx<T> c = (cx_from<T>(s.center) - cx_from<T>(frame.center)) / T(frame.scale);
                accumulate_disk(acc, n, c, T(s.radius) / T(frame.scale), T(1.0));
                return acc;
            } else if constexpr (std::is_same_v<S, Polygon>) {
                return polygon_block<T>(s, n, frame, n + 1);
            } else {
                int nodes = kJordanStartNodes;
                for (;;) {
                    JordanBlock<T> b = jordan_block<T>(s, n, frame, nodes);
                    if (jordan_converged(b, n)) return std::move(b.value);
                    if (nodes >= kJordanMaxNodes)
                        throw ConvergenceError("jordan moment quadrature did not converge with " +
                                               std::to_string(nodes) + " nodes");
                    nodes *= 2;
                }
            }
        },
        region.shape());
}

template <class T>
void store(MomentMatrix& m, const std::vector<Cx<T>>& acc, int n) {
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j) m.set(i, j, cx_to_mp(acc[at2(n, i, j)]));
}

Cx<MpReal> snap(Precision p, const Cx<MpReal>& v) {
    return with_precision(p, [&](auto tag) {
        using T = decltype(tag);
        return cx_to_mp(cx_from_mp<T>(v));
    });
}

}  // namespace

// ---------------------------------------------------------------------------

MomentFrame natural_frame(const Scene& scene) {
    const auto b = scene.bounds();
    const Point center(0.5 * (b[0] + b[1]), 0.5 * (b[2] + b[3]));
    const double half_diag = 0.5 * std::hypot(b[1] - b[0], b[3] - b[2]);
    return {center, half_diag};
}

MomentMatrix::MomentMatrix(int degree, Precision precision, MomentFrame frame)
    : degree_(degree), precision_(precision), frame_(frame) {
    check_degree(degree);
    if (!(frame.scale > 0.0) || !std::isfinite(frame.scale)) throw RangeError("moment frame scale must be positive");
    const std::size_t d = static_cast<std::size_t>(degree) + 1;
    upper_.assign(d * (d + 1) / 2, Cx<MpReal>(MpReal(0.0)));
}

std::size_t MomentMatrix::index(int i, int j) const {
    // row i of the upper triangle starts after sum_{r<i} (degree+1-r) entries
    const std::size_t d = static_cast<std::size_t>(degree_) + 1;
    const std::size_t ii = static_cast<std::size_t>(i);
    return ii * d - ii * (ii - 1) / 2 + static_cast<std::size_t>(j - i);
}

Cx<MpReal> MomentMatrix::get(int i, int j) const {
    if (i < 0 || j < 0 || i > degree_ || j > degree_) throw RangeError("moment index out of range");
    return i <= j ? upper_[index(i, j)] : conj(upper_[index(j, i)]);
}

void MomentMatrix::set(int i, int j, const Cx<MpReal>& value) {
    if (i < 0 || j < 0 || i > degree_ || j > degree_) throw RangeError("moment index out of range");
    if (i == j) upper_[index(i, i)] = Cx<MpReal>(value.re, MpReal(0.0));
    else if (i < j) upper_[index(i, j)] = value;
    else upper_[index(j, i)] = conj(value);
}

MomentMatrix MomentMatrix::truncated(int n) const {
    if (n > degree_) throw RangeError("cannot truncate to a larger degree");
    MomentMatrix out(n, precision_, frame_);
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j) out.set(i, j, get(i, j));
    return out;
}

MomentMatrix MomentMatrix::with_precision(Precision p) const {
    MomentMatrix out(degree_, p, frame_);
    for (int i = 0; i <= degree_; ++i)
        for (int j = i; j <= degree_; ++j) {
            const Cx<MpReal> v = get(i, j);
            out.set(i, j, snap(p, v));
        }
    return out;
}

MomentMatrix operator+(const MomentMatrix& a, const MomentMatrix& b) {
    if (a.degree() != b.degree()) throw RangeError("moment degrees differ");
    if (!(a.frame() == b.frame())) throw RangeError("moment frames differ");
    MomentMatrix out(a.degree(), std::max(a.precision(), b.precision()), a.frame());
    out.upper_ = a.upper_;
    for (std::size_t q = 0; q < out.upper_.size(); ++q) out.upper_[q] += b.upper_[q];
    return out;
}

MomentMatrix operator-(const MomentMatrix& a, const MomentMatrix& b) {
    if (a.degree() != b.degree()) throw RangeError("moment degrees differ");
    if (!(a.frame() == b.frame())) throw RangeError("moment frames differ");
    MomentMatrix out(a.degree(), std::max(a.precision(), b.precision()), a.frame());
    out.upper_ = a.upper_;
    for (std::size_t q = 0; q < out.upper_.size(); ++q) out.upper_[q] -= b.upper_[q];
    return out;
}

MomentMatrix reframe(const MomentMatrix& m, MomentFrame target) {
    if (!(target.scale > 0.0)) throw RangeError("frame scale must be positive");
    if (target == m.frame()) return m;
    // w' = a w + b and dA(w') = a^2 dA(w), so mu' = a^2 A mu A^H with A_ip = C(i,p) a^p b^(i-p)
    const int n = m.degree();
    const std::size_t d = static_cast<std::size_t>(n) + 1;
    const MpReal a = MpReal(m.frame().scale) / MpReal(target.scale);
    const Cx<MpReal> b = (cx_from<MpReal>(m.frame().center) - cx_from<MpReal>(target.center)) / MpReal(target.scale);
    std::vector<Cx<MpReal>> A(d * d, Cx<MpReal>(MpReal(0.0)));
    std::vector<Cx<MpReal>> bp(d), row(d);
    std::vector<MpReal> ap(d);
    bp[0] = Cx<MpReal>(MpReal(1.0));
    ap[0] = MpReal(1.0);
    for (std::size_t q = 1; q < d; ++q) {
        bp[q] = bp[q - 1] * b;
        ap[q] = ap[q - 1] * a;
    }
    std::vector<MpReal> binom(d, MpReal(0.0));
    binom[0] = MpReal(1.0);
    for (std::size_t i = 0; i < d; ++i) {
        if (i > 0)
            for (std::size_t k = i; k >= 1; --k) binom[k] = binom[k] + binom[k - 1];
        for (std::size_t p = 0; p <= i; ++p) A[i * d + p] = bp[i - p] * (binom[p] * ap[p]);
    }
    const std::vector<Cx<MpReal>> mu = m.dense<MpReal>(n);
    // T = A mu, then mu' = T A^H on the upper triangle
    std::vector<Cx<MpReal>> T(d * d, Cx<MpReal>(MpReal(0.0)));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t p = 0; p <= i; ++p) {
            const Cx<MpReal> aip = A[i * d + p];
            for (std::size_t q = 0; q < d; ++q) T[i * d + q] += aip * mu[p * d + q];
        }
    MomentMatrix out(n, m.precision(), target);
    const MpReal a2 = a * a;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            Cx<MpReal> s(MpReal(0.0));
            for (std::size_t q = 0; q <= j; ++q) s += T[i * d + q] * conj(A[j * d + q]);
            out.set(static_cast<int>(i), static_cast<int>(j), snap(m.precision(), s * a2));
        }
    return out;
}

// ---------------------------------------------------------------------------

std::complex<double> disk_moment(Point center, double radius, int i, int j) {
    check_degree(std::max(i, j));
    if (!(radius > 0.0)) throw GeometryError("disk radius must be positive");
    const int n = std::max(i, j);
    std::vector<Cx<double>> acc(at2(n, n, n) + 1);
    accumulate_disk(acc, n, cx_from<double>(center), radius, 1.0);
    const Cx<double> v = i <= j ? acc[at2(n, i, j)] : conj(acc[at2(n, j, i)]);
    return to_std(v);
}

std::complex<double> polygon_moment(const Polygon& polygon, int i, int j) {
    check_degree(std::max(i, j));
    const int n = std::max(i, j);
    const int nodes = (i + j + 3) / 2;  // ceil((i+j+2)/2)
    const auto acc = polygon_block<double>(polygon, n, MomentFrame{}, nodes);
    const Cx<double> v = i <= j ? acc[at2(n, i, j)] : conj(acc[at2(n, j, i)]);
    return to_std(v);
}

QuadratureEstimate jordan_moment(const JordanRegion& region, int i, int j, int quad_nodes) {
    check_degree(std::max(i, j));
    if (quad_nodes < 16 || quad_nodes % 2 != 0) throw RangeError("quad_nodes must be even and >= 16");
    const int n = std::max(i, j);
    const JordanBlock<double> b = jordan_block<double>(region, n, MomentFrame{}, quad_nodes);
    const int a = std::min(i, j), c = std::max(i, j);
    const std::size_t q = at2(n, a, c);
    Cx<double> v = b.value[q];
    if (i > j) v = conj(v);
    const double tol = 1e-10 * std::max(b.scale[q], 1e-300);
    return {to_std(v), b.error[q], b.error[q] <= tol};
}

MomentMatrix region_moments(const Region& region, int n, Precision precision, MomentFrame frame) {
    check_degree(n);
    MomentMatrix out(n, precision, frame);
    with_precision(precision, [&](auto tag) {
        using T = decltype(tag);
        store(out, region_block<T>(region, n, frame), n);
    });
    return out;
}

MomentMatrix scene_moments(const Scene& scene, int n, PointSet which, Precision precision, MomentFrame frame) {
    check_degree(n);
    MomentMatrix out(n, precision, frame);
    with_precision(precision, [&](auto tag) {
        using T = decltype(tag);
        const std::size_t d = static_cast<std::size_t>(n) + 1;
        std::vector<Cx<T>> acc(d * d);
        auto add = [&](const std::vector<Region>& rs, double sign) {
            for (const Region& r : rs) {
                const auto b = region_block<T>(r, n, frame);
                for (std::size_t q = 0; q < acc.size(); ++q) acc[q] += b[q] * T(sign);
            }
        };
        if (which != PointSet::K) add(scene.islands(), 1.0);
        if (which == PointSet::K) add(scene.lakes(), 1.0);
        if (which == PointSet::GStar) add(scene.lakes(), -1.0);
        store(out, acc, n);
    });
    return out;
}

MomentMatrix polygon_set_moments(std::span<const Polygon> polygons, int n, Precision precision, MomentFrame frame) {
    check_degree(n);
    MomentMatrix out(n, precision, frame);
    with_precision(precision, [&](auto tag) {
        using T = decltype(tag);
        const std::size_t d = static_cast<std::size_t>(n) + 1;
        std::vector<Cx<T>> acc(d * d);
        for (const Polygon& p : polygons) {
            const auto b = polygon_block<T>(p, n, frame, n + 1);
            for (std::size_t q = 0; q < acc.size(); ++q) acc[q] += b[q];
        }
        store(out, acc, n);
    });
    return out;
}

// ---------------------------------------------------------------------------

namespace {

std::string format_real(const MpReal& x, Precision p) {
    std::ostringstream os;
    if (p == Precision::Double) {
        os << std::setprecision(17) << x.convert_to<double>();
    } else {
        os << std::setprecision(output_digits(p)) << x;
    }
    return os.str();
}

MpReal parse_real(const std::string& tok, Precision p, int line) {
    try {
        std::size_t used = 0;
        if (p == Precision::Double) {
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return MpReal(v);
        }
        MpReal v(tok);
        return to_mp(snap(p, Cx<MpReal>(v)).re);
    } catch (const std::exception&) {
        throw ParseError("malformed number '" + tok + "'", line);
    }
}

}  // namespace

void write_moments(std::ostream& os, const MomentMatrix& m) {
    os << "moments v1 degree=" << m.degree() << " precision=" << to_string(m.precision());
    if (!m.frame().is_identity()) {
        os << std::setprecision(17) << " center=" << m.frame().center.real() << ',' << m.frame().center.imag()
           << " scale=" << m.frame().scale;
    }
    os << '\n';
    for (int i = 0; i <= m.degree(); ++i)
        for (int j = i; j <= m.degree(); ++j) {
            const Cx<MpReal> v = m.get(i, j);
            os << i << ' ' << j << ' ' << format_real(v.re, m.precision()) << ' '
               << format_real(v.im, m.precision()) << '\n';
        }
}

MomentMatrix read_moments(std::istream& is) {
    std::string line;
    int lineno = 0;
    if (!std::getline(is, line)) throw ParseError("empty moment file", 1);
    ++lineno;
    std::istringstream hs(line);
    std::string magic, version, tok;
    hs >> magic >> version;
    if (magic != "moments" || version != "v1") throw ParseError("expected 'moments v1' header", lineno);
    int degree = -1;
    Precision precision = Precision::Double;
    MomentFrame frame;
    while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw ParseError("malformed header field '" + tok + "'", lineno);
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        try {
            if (key == "degree") degree = std::stoi(val);
            else if (key == "precision") precision = parse_precision(val);
            else if (key == "center") {
                const auto comma = val.find(',');
                if (comma == std::string::npos) throw std::invalid_argument(val);
                frame.center = Point(std::stod(val.substr(0, comma)), std::stod(val.substr(comma + 1)));
            } else if (key == "scale") frame.scale = std::stod(val);
            else throw ParseError("unknown header field '" + key + "'", lineno);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError("malformed header field '" + tok + "'", lineno);
        }
    }
    if (degree < 0) throw ParseError("header lacks degree", lineno);
    if (degree > kMaxDegree) throw ParseError("degree exceeds cap", lineno);
    if (!(frame.scale > 0.0)) throw ParseError("scale must be positive", lineno);

    MomentMatrix m(degree, precision, frame);
    const std::size_t d = static_cast<std::size_t>(degree) + 1;
    std::vector<char> seen(d * d, 0);
    std::size_t count = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        int i = -1, j = -1;
        std::string re, im, extra;
        if (!(ls >> i >> j >> re >> im) || (ls >> extra))
            throw ParseError("expected 'i j re im'", lineno);
        if (i < 0 || j < i) throw ParseError("entry needs 0 <= i <= j", lineno);
        if (j > degree) throw ParseError("entry index exceeds header degree " + std::to_string(degree), lineno);
        auto& flag = seen[static_cast<std::size_t>(i) * d + static_cast<std::size_t>(j)];
        if (flag) throw ParseError("duplicate entry", lineno);
        flag = 1;
        m.set(i, j, Cx<MpReal>(parse_real(re, precision, lineno), parse_real(im, precision, lineno)));
        ++count;
    }
    const std::size_t expected = d * (d + 1) / 2;
    if (count != expected)
        throw ParseError("file ended after " + std::to_string(count) + " of " + std::to_string(expected) +
                             " entries",
                         lineno + 1);
    return m;
}

}  // namespace archi
