#pragma once

// Scalar types for the three working precisions, a small complex template
// that works uniformly over all of them, and conversion helpers.

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "archi/double_double.hpp"

namespace archi {

using MpReal = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>,
                                             boost::multiprecision::et_off>;

/// Working precision of moment assembly and orthogonalization.
enum class Precision { Double, DoubleDouble, Multi };

std::string_view to_string(Precision p);
/// Accepts "double", "dd" / "extended", "mp".
Precision parse_precision(std::string_view s);

template <class T>
struct Cx {
    T re{};
    T im{};

    Cx() = default;
    Cx(T r) : re(std::move(r)), im(T(0.0)) {}  // NOLINT(implicit)
    Cx(T r, T i) : re(std::move(r)), im(std::move(i)) {}

    friend Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
    friend Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
    friend Cx operator-(const Cx& a) { return {-a.re, -a.im}; }
    friend Cx operator*(const Cx& a, const Cx& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Cx operator*(const Cx& a, const T& s) { return {a.re * s, a.im * s}; }
    friend Cx operator*(const T& s, const Cx& a) { return {a.re * s, a.im * s}; }
    friend Cx operator/(const Cx& a, const T& s) { return {a.re / s, a.im / s}; }
    friend Cx operator/(const Cx& a, const Cx& b) {
        const T d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    Cx& operator+=(const Cx& b) { re = re + b.re; im = im + b.im; return *this; }
    Cx& operator-=(const Cx& b) { re = re - b.re; im = im - b.im; return *this; }
    Cx& operator*=(const Cx& b) { return *this = *this * b; }

    friend bool operator==(const Cx& a, const Cx& b) { return a.re == b.re && a.im == b.im; }
};

template <class T>
Cx<T> conj(const Cx<T>& a) { return {a.re, -a.im}; }

/// |a|^2
template <class T>
T norm2(const Cx<T>& a) { return a.re * a.re + a.im * a.im; }

template <class T>
T modulus(const Cx<T>& a) {
    using std::sqrt;
    return sqrt(norm2(a));
}

// Conversions between the working types. Widening is exact.
template <class T> T from_double(double x) { return T(x); }
inline double to_double(double x) { return x; }
inline double to_double(const DoubleDouble& x) { return static_cast<double>(x); }
inline double to_double(const MpReal& x) { return x.convert_to<double>(); }

template <class T> MpReal to_mp(const T& x);
template <> inline MpReal to_mp<double>(const double& x) { return MpReal(x); }
template <> inline MpReal to_mp<DoubleDouble>(const DoubleDouble& x) {
    return MpReal(x.hi()) + MpReal(x.lo());
}
template <> inline MpReal to_mp<MpReal>(const MpReal& x) { return x; }

template <class T> T from_mp(const MpReal& x);
template <> inline double from_mp<double>(const MpReal& x) { return x.convert_to<double>(); }
template <> inline DoubleDouble from_mp<DoubleDouble>(const MpReal& x) {
    const double hi = x.convert_to<double>();
    const double lo = MpReal(x - MpReal(hi)).convert_to<double>();
    return DoubleDouble(hi) + DoubleDouble(lo);
}
template <> inline MpReal from_mp<MpReal>(const MpReal& x) { return x; }

template <class T>
Cx<T> cx_from(std::complex<double> z) { return {T(z.real()), T(z.imag())}; }
template <class T>
std::complex<double> to_std(const Cx<T>& z) { return {to_double(z.re), to_double(z.im)}; }
template <class T>
Cx<MpReal> cx_to_mp(const Cx<T>& z) { return {to_mp(z.re), to_mp(z.im)}; }
template <class T>
Cx<T> cx_from_mp(const Cx<MpReal>& z) { return {from_mp<T>(z.re), from_mp<T>(z.im)}; }

template <class T> T pi_of();
template <> inline double pi_of<double>() { return 3.141592653589793; }
template <> inline DoubleDouble pi_of<DoubleDouble>() { return DoubleDouble::pi(); }
template <> inline MpReal pi_of<MpReal>() { return boost::math::constants::pi<MpReal>(); }

/// Unit roundoff of the working type.
template <class T> double epsilon_of();
template <> inline double epsilon_of<double>() { return std::numeric_limits<double>::epsilon(); }
template <> inline double epsilon_of<DoubleDouble>() { return DoubleDouble::epsilon(); }
template <> inline double epsilon_of<MpReal>() {
    return std::numeric_limits<MpReal>::epsilon().convert_to<double>();
}

/// Calls f(T{}) with T the scalar type of precision p.
template <class F>
decltype(auto) with_precision(Precision p, F&& f) {
    switch (p) {
        case Precision::Double: return f(double{});
        case Precision::DoubleDouble: return f(DoubleDouble{});
        case Precision::Multi: return f(MpReal{});
    }
    throw std::invalid_argument("unknown precision");
}

/// Version string of the library build.
std::string_view library_version();

/// Significant decimal digits written to text files for values of precision p.
int output_digits(Precision p);

}  // namespace archi
