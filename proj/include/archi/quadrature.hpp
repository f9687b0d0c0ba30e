#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "archi/numeric.hpp"

namespace archi {

template <class T>
struct QuadratureRule {
    std::vector<T> nodes;
    std::vector<T> weights;
};

/// m-point Gauss-Legendre rule on [0, 1], exact for polynomials of degree <= 2m-1.
/// Nodes are refined by Newton's method in the working type T.
template <class T>
QuadratureRule<T> gauss_legendre01(int m) {
    using std::abs;
    QuadratureRule<T> rule;
    rule.nodes.resize(static_cast<std::size_t>(m));
    rule.weights.resize(static_cast<std::size_t>(m));
    const double tol = 4.0 * epsilon_of<T>();
    for (int i = 0; i < (m + 1) / 2; ++i) {
        T x(std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5)));
        T dp(1.0);
        for (int it = 0; it < 100; ++it) {
            // P_m(x) and P_m'(x) by the three-term recurrence
            T p0(1.0), p1 = x;
            for (int k = 2; k <= m; ++k) {
                const T p2 = (T(2.0 * k - 1.0) * x * p1 - T(k - 1.0) * p0) / T(static_cast<double>(k));
                p0 = p1;
                p1 = p2;
            }
            dp = T(static_cast<double>(m)) * (x * p1 - p0) / (x * x - T(1.0));
            const T dx = p1 / dp;
            x = x - dx;
            if (to_double(abs(dx)) <= tol) {
                // derivative at the converged node, for the weight
                T q0(1.0), q1 = x;
                for (int k = 2; k <= m; ++k) {
                    const T q2 = (T(2.0 * k - 1.0) * x * q1 - T(k - 1.0) * q0) / T(static_cast<double>(k));
                    q0 = q1;
                    q1 = q2;
                }
                dp = T(static_cast<double>(m)) * (x * q1 - q0) / (x * x - T(1.0));
                break;
            }
        }
        // map [-1,1] -> [0,1]
        const T w = T(1.0) / ((T(1.0) - x * x) * dp * dp);  // 2/((1-x^2)P'^2) times 1/2
        const T half(0.5);
        rule.nodes[static_cast<std::size_t>(i)] = half - half * x;
        rule.nodes[static_cast<std::size_t>(m - 1 - i)] = half + half * x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(m - 1 - i)] = w;
    }
    return rule;
}

}  // namespace archi
