#pragma once

// Double-double arithmetic: an unevaluated sum hi + lo of two doubles with
// |lo| <= ulp(hi)/2, giving roughly 106 significand bits (~31 decimal digits).

#include <cmath>
#include <cstdint>

namespace archi {

class DoubleDouble {
public:
    constexpr DoubleDouble() = default;
    constexpr DoubleDouble(double x) : hi_(x), lo_(0.0) {}  // NOLINT(implicit)
    constexpr DoubleDouble(int x) : hi_(static_cast<double>(x)), lo_(0.0) {}  // NOLINT(implicit)
    constexpr DoubleDouble(double hi, double lo) : hi_(hi), lo_(lo) {}

    constexpr double hi() const { return hi_; }
    constexpr double lo() const { return lo_; }
    explicit constexpr operator double() const { return hi_ + lo_; }

    static DoubleDouble pi() { return {3.141592653589793116e+00, 1.224646799147353207e-16}; }
    static DoubleDouble two_pi() { return {6.283185307179586232e+00, 2.449293598294706414e-16}; }
    static DoubleDouble half_pi() { return {1.570796326794896558e+00, 6.123233995736766036e-17}; }
    static constexpr double epsilon() { return 4.93038065763132e-32; }  // 2^-104

    friend DoubleDouble operator-(const DoubleDouble& a) { return {-a.hi_, -a.lo_}; }

    friend DoubleDouble operator+(const DoubleDouble& a, const DoubleDouble& b) {
        double s, e, t, f;
        two_sum(a.hi_, b.hi_, s, e);
        two_sum(a.lo_, b.lo_, t, f);
        e += t;
        quick_two_sum(s, e, s, e);
        e += f;
        quick_two_sum(s, e, s, e);
        return {s, e};
    }
    friend DoubleDouble operator-(const DoubleDouble& a, const DoubleDouble& b) { return a + (-b); }

    friend DoubleDouble operator*(const DoubleDouble& a, const DoubleDouble& b) {
        double p = a.hi_ * b.hi_;
        double e = std::fma(a.hi_, b.hi_, -p);
        e += a.hi_ * b.lo_ + a.lo_ * b.hi_;
        quick_two_sum(p, e, p, e);
        return {p, e};
    }

    friend DoubleDouble operator/(const DoubleDouble& a, const DoubleDouble& b) {
        const double q1 = a.hi_ / b.hi_;
        DoubleDouble r = a - b * DoubleDouble(q1);
        const double q2 = r.hi_ / b.hi_;
        r = r - b * DoubleDouble(q2);
        const double q3 = r.hi_ / b.hi_;
        double s, e;
        quick_two_sum(q1, q2, s, e);
        return DoubleDouble(s, e) + DoubleDouble(q3);
    }

    DoubleDouble& operator+=(const DoubleDouble& b) { return *this = *this + b; }
    DoubleDouble& operator-=(const DoubleDouble& b) { return *this = *this - b; }
    DoubleDouble& operator*=(const DoubleDouble& b) { return *this = *this * b; }
    DoubleDouble& operator/=(const DoubleDouble& b) { return *this = *this / b; }

    friend bool operator==(const DoubleDouble& a, const DoubleDouble& b) {
        return a.hi_ == b.hi_ && a.lo_ == b.lo_;
    }
    friend bool operator<(const DoubleDouble& a, const DoubleDouble& b) {
        return a.hi_ < b.hi_ || (a.hi_ == b.hi_ && a.lo_ < b.lo_);
    }
    friend bool operator>(const DoubleDouble& a, const DoubleDouble& b) { return b < a; }
    friend bool operator<=(const DoubleDouble& a, const DoubleDouble& b) { return !(b < a); }
    friend bool operator>=(const DoubleDouble& a, const DoubleDouble& b) { return !(a < b); }

    friend DoubleDouble abs(const DoubleDouble& a) { return a.hi_ < 0.0 ? -a : a; }

    friend DoubleDouble sqrt(const DoubleDouble& a) {
        if (a.hi_ <= 0.0) return DoubleDouble(a.hi_ == 0.0 ? 0.0 : std::sqrt(a.hi_));
        const DoubleDouble y(std::sqrt(a.hi_));
        return y + (a - y * y) / (DoubleDouble(2.0) * y);
    }

    friend DoubleDouble sin(const DoubleDouble& x) {
        DoubleDouble s, c;
        sincos(x, s, c);
        return s;
    }
    friend DoubleDouble cos(const DoubleDouble& x) {
        DoubleDouble s, c;
        sincos(x, s, c);
        return c;
    }

    friend void sincos(const DoubleDouble& x, DoubleDouble& s, DoubleDouble& c) {
        // reduce to |r| <= pi/4, then Taylor
        const DoubleDouble t = x - two_pi() * DoubleDouble(std::nearbyint(x.hi_ / two_pi().hi_));
        const double jq = std::nearbyint(t.hi_ / half_pi().hi_);
        const DoubleDouble r = t - half_pi() * DoubleDouble(jq);
        DoubleDouble sr, cr;
        taylor_sincos(r, sr, cr);
        switch (static_cast<int>(jq) & 3) {
            case 0: s = sr; c = cr; break;
            case 1: s = cr; c = -sr; break;
            case 2: s = -sr; c = -cr; break;
            default: s = -cr; c = sr; break;
        }
    }

private:
    static void two_sum(double a, double b, double& s, double& e) {
        s = a + b;
        const double bb = s - a;
        e = (a - (s - bb)) + (b - bb);
    }
    static void quick_two_sum(double a, double b, double& s, double& e) {
        s = a + b;
        e = b - (s - a);
    }
    static void taylor_sincos(const DoubleDouble& r, DoubleDouble& s, DoubleDouble& c) {
        const DoubleDouble r2 = r * r;
        DoubleDouble term = r;
        s = r;
        for (int k = 1; k < 40; ++k) {
            term = term * r2 / DoubleDouble(static_cast<double>((2 * k) * (2 * k + 1)));
            term = -term;
            s += term;
            if (std::abs(term.hi_) < 1e-34) break;
        }
        term = DoubleDouble(1.0);
        c = term;
        for (int k = 1; k < 40; ++k) {
            term = term * r2 / DoubleDouble(static_cast<double>((2 * k - 1) * (2 * k)));
            term = -term;
            c += term;
            if (std::abs(term.hi_) < 1e-34) break;
        }
    }

    double hi_ = 0.0;
    double lo_ = 0.0;
};

}  // namespace archi
