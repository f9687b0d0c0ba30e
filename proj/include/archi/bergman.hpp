#pragma once

// Bergman orthonormal polynomials from a moment matrix by Arnoldi Gram-Schmidt.
//
// The process runs in the local coordinate w of the moment frame, where the
// basis is q_k(w).  In z this is p_k(z) = q_k(w) / s, so
//   gamma_k(z) = gamma_k(w) / s^(k+1),   H(z) = c I + s H(w),
// and zeros map by z = c + s w.  Coefficients and Hessenberg entries are kept
// in w; everything taking or returning z is converted at the boundary.

#include <complex>
#include <iosfwd>
#include <optional>
#include <vector>

#include "archi/moments.hpp"

namespace archi {

struct OrthogonalizeOptions {
    /// Breakdown when the new direction's norm^2 <= tol * |w q_{k-1}|^2.
    /// Zero picks the default of the working precision: 1e-26 double,
    /// 1e-58 double-double, 1e-90 mp.
    double breakdown_tol = 0.0;
    /// Degree 0 breaks down unless mu_00 exceeds this (in the frame's units).
    double min_mass = 0.0;
    /// Second classical Gram-Schmidt sweep.
    bool reorthogonalize = true;
};

double default_breakdown_tol(Precision p);

class BergmanBasis {
public:
    BergmanBasis() = default;

    /// Highest degree with a clean polynomial, -1 if p_0 itself broke down.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    int requested_degree() const { return requested_; }
    /// Degree at which orthogonalization stopped, if it did.
    std::optional<int> breakdown_degree() const { return breakdown_; }
    Precision precision() const { return precision_; }
    const MomentFrame& frame() const { return frame_; }

    /// Monomial coefficients of q_k in the local coordinate w, length k+1.
    const std::vector<std::complex<double>>& local_coefficients(int k) const;
    /// H(w)_{i,k}, 0 <= i <= k+1, k < degree().
    std::complex<double> local_hessenberg(int i, int k) const;
    /// H(z)_{i,k} = c delta_ik + s H(w)_{i,k}.
    std::complex<double> hessenberg(int i, int k) const;

    /// Leading coefficient of p_k in z.
    double gamma(int k) const;
    double log_gamma(int k) const;
    /// max_{i <= k} |<q_i, q_k> - delta_ik|, evaluated in working precision.
    double residual(int k) const;
    double max_residual() const;

    /// Assembles a basis from stored data (used by the reader).
    static BergmanBasis from_parts(int requested, std::optional<int> breakdown, Precision p,
                                   MomentFrame frame, std::vector<std::vector<std::complex<double>>> coeffs,
                                   std::vector<std::vector<std::complex<double>>> hess,
                                   std::vector<double> log_gamma_w, std::vector<double> residuals);

private:
    friend BergmanBasis orthogonalize(const MomentMatrix&, int, const OrthogonalizeOptions&);
    void check(int k) const;

    int requested_ = 0;
    std::optional<int> breakdown_;
    Precision precision_ = Precision::Double;
    MomentFrame frame_;
    std::vector<std::vector<std::complex<double>>> coeffs_;
    // hess_[k] = column k of H(w), entries 0..k+1
    std::vector<std::vector<std::complex<double>>> hess_;
    std::vector<double> log_gamma_w_;
    std::vector<double> residuals_;
};

/// Arnoldi Gram-Schmidt on the leading (n+1)x(n+1) block, in the moments'
/// precision.  Stops at breakdown and keeps the clean part.
BergmanBasis orthogonalize(const MomentMatrix& moments, int n, const OrthogonalizeOptions& opt = {});

enum class EvalMode { Recurrence, Horner };

/// p_0(z)..p_n(z) as values * exp(log_scale).  Large values are rescaled on
/// the fly so the recurrence never overflows.
struct ScaledValues {
    std::vector<std::complex<double>> values;
    double log_scale = 0.0;
};

ScaledValues evaluate_all(const BergmanBasis& basis, int n, Point z, EvalMode mode = EvalMode::Recurrence);
std::complex<double> evaluate(const BergmanBasis& basis, int k, Point z, EvalMode mode = EvalMode::Recurrence);

/// Zeros of p_k: eigenvalues of the leading k x k block of H.
/// Throws ConvergenceError if the QR iteration does not converge.
std::vector<Point> zeros(const BergmanBasis& basis, int k);

struct GammaRatioReport {
    /// gamma_n(B) / gamma_n(A)
    std::vector<double> ratio;
    /// sqrt((n+1)/pi) / (gamma_n(B) cap^(n+1)), present when a capacity is given.
    std::vector<double> normalized;
};

GammaRatioReport gamma_ratio_report(const BergmanBasis& a, const BergmanBasis& b,
                                    std::optional<double> capacity = std::nullopt);

/// Basis file:
///   basis v1 degree=<n> requested=<N> precision=<tag> [breakdown=<k>] [center=<re>,<im> scale=<s>]
///   gamma k value          (z coordinate)
///   coef k j re im         (w coordinate)
///   h i k re im            (w coordinate)
///   residual k value
void write_basis(std::ostream& os, const BergmanBasis& b);
BergmanBasis read_basis(std::istream& is);

}  // namespace archi
