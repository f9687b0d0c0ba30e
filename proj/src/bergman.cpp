#include "archi/bergman.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>

#include "archi/errors.hpp"
#include "text_util.hpp"

namespace archi {

double default_breakdown_tol(Precision p) {
    switch (p) {
        case Precision::Double: return 1e-26;
        case Precision::DoubleDouble: return 1e-58;
        case Precision::Multi: return 1e-90;
    }
    return 1e-26;
}

namespace {

constexpr double kRescaleAbove = 1e150;
const double kRescaleLog = std::log(kRescaleAbove);

template <class T>
using CVec = std::vector<Cx<T>>;

template <class T>
struct Arnoldi {
    std::vector<CVec<T>> q;    // coefficient vectors
    std::vector<CVec<T>> u;    // u_j[i] = sum_l mu_il conj(q_j[l])
    std::vector<CVec<T>> h;    // Hessenberg columns
    std::optional<int> breakdown;
};

template <class T>
Arnoldi<T> run_arnoldi(const MomentMatrix& mm, int n, const OrthogonalizeOptions& opt) {
    using std::sqrt;
    const CVec<T> M = mm.dense<T>(n);
    const std::size_t d = static_cast<std::size_t>(n) + 1;
    const auto mu = [&](std::size_t i, std::size_t l) -> const Cx<T>& { return M[i * d + l]; };

    const auto make_u = [&](const CVec<T>& a) {
        CVec<T> r(d, Cx<T>(T(0.0)));
        for (std::size_t i = 0; i < d; ++i) {
            Cx<T> s(T(0.0));
            for (std::size_t l = 0; l < a.size(); ++l) s += mu(i, l) * conj(a[l]);
            r[i] = s;
        }
        return r;
    };
    // <a, a> in the moment form
    const auto self = [&](const CVec<T>& a) {
        T s(0.0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            Cx<T> row(T(0.0));
            for (std::size_t l = 0; l < a.size(); ++l) row += mu(i, l) * conj(a[l]);
            s = s + (a[i] * row).re;
        }
        return s;
    };

    Arnoldi<T> A;
    const T m00 = mu(0, 0).re;
    if (!(m00 > T(opt.min_mass))) {
        A.breakdown = 0;
        return A;
    }
    A.q.push_back({Cx<T>(T(1.0) / sqrt(m00))});
    A.u.push_back(make_u(A.q[0]));

    const T tol(opt.breakdown_tol > 0 ? opt.breakdown_tol : default_breakdown_tol(mm.precision()));
    for (int k = 1; k <= n; ++k) {
        const std::size_t kk = static_cast<std::size_t>(k);
        CVec<T> v(kk + 1, Cx<T>(T(0.0)));
        for (std::size_t i = 0; i < kk; ++i) v[i + 1] = A.q[kk - 1][i];
        const T shifted = self(v);

        CVec<T> col(kk + 1, Cx<T>(T(0.0)));
        const int passes = opt.reorthogonalize ? 2 : 1;
        for (int pass = 0; pass < passes; ++pass) {
            CVec<T> c(kk);
            for (std::size_t j = 0; j < kk; ++j) {
                Cx<T> s(T(0.0));
                for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * A.u[j][i];
                c[j] = s;
            }
            for (std::size_t j = 0; j < kk; ++j) {
                col[j] += c[j];
                for (std::size_t i = 0; i <= j; ++i) v[i] -= c[j] * A.q[j][i];
            }
        }
        const T nrm2 = self(v);
        if (!(nrm2 > tol * shifted)) {
            A.breakdown = k;
            break;
        }
        const T nrm = sqrt(nrm2);
        col[kk] = Cx<T>(nrm);
        for (auto& x : v) x = x / nrm;
        // leading coefficient is gamma_{k-1} / nrm, real by construction; pin it
        v[kk].im = T(0.0);
        A.h.push_back(std::move(col));
        A.u.push_back(make_u(v));
        A.q.push_back(std::move(v));
    }
    return A;
}

}  // namespace

BergmanBasis orthogonalize(const MomentMatrix& moments, int n, const OrthogonalizeOptions& opt) {
    if (n < 0) throw RangeError("negative degree");
    if (n > moments.degree())
        throw RangeError("degree " + std::to_string(n) + " exceeds moment degree " +
                         std::to_string(moments.degree()));
    BergmanBasis b;
    b.requested_ = n;
    b.precision_ = moments.precision();
    b.frame_ = moments.frame();
    with_precision(moments.precision(), [&](auto tag) {
        using T = decltype(tag);
        const Arnoldi<T> A = run_arnoldi<T>(moments, n, opt);
        b.breakdown_ = A.breakdown;
        const std::size_t m = A.q.size();
        for (std::size_t k = 0; k < m; ++k) {
            std::vector<std::complex<double>> c;
            for (const auto& x : A.q[k]) c.push_back(to_std(x));
            b.coeffs_.push_back(std::move(c));
        }
        for (std::size_t k = 0; k + 1 < m; ++k) {
            std::vector<std::complex<double>> c;
            for (const auto& x : A.h[k]) c.push_back(to_std(x));
            b.hess_.push_back(std::move(c));
        }
        // log gamma_k = log gamma_0 - sum of log subdiagonals
        if (m > 0) {
            double lg = std::log(to_double(A.q[0][0].re));
            b.log_gamma_w_.push_back(lg);
            for (std::size_t k = 1; k < m; ++k) {
                lg -= std::log(to_double(A.h[k - 1][k].re));
                b.log_gamma_w_.push_back(lg);
            }
        }
        for (std::size_t k = 0; k < m; ++k) {
            double worst = 0.0;
            for (std::size_t i = 0; i <= k; ++i) {
                Cx<T> s(T(0.0));
                for (std::size_t l = 0; l < A.q[i].size(); ++l) s += A.q[i][l] * A.u[k][l];
                if (i == k) s -= Cx<T>(T(1.0));
                worst = std::max(worst, std::abs(to_std(s)));
            }
            b.residuals_.push_back(worst);
        }
    });
    return b;
}

void BergmanBasis::check(int k) const {
    if (k < 0 || k > degree())
        throw RangeError("degree " + std::to_string(k) + " outside basis 0.." + std::to_string(degree()));
}

const std::vector<std::complex<double>>& BergmanBasis::local_coefficients(int k) const {
    check(k);
    return coeffs_[static_cast<std::size_t>(k)];
}

std::complex<double> BergmanBasis::local_hessenberg(int i, int k) const {
    if (k < 0 || k >= degree() || i < 0 || i > k + 1) throw RangeError("Hessenberg index out of range");
    return hess_[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
}

std::complex<double> BergmanBasis::hessenberg(int i, int k) const {
    std::complex<double> v = frame_.scale * local_hessenberg(i, k);
    if (i == k) v += frame_.center;
    return v;
}

double BergmanBasis::log_gamma(int k) const {
    check(k);
    return log_gamma_w_[static_cast<std::size_t>(k)] - (k + 1) * std::log(frame_.scale);
}

double BergmanBasis::gamma(int k) const { return std::exp(log_gamma(k)); }

double BergmanBasis::residual(int k) const {
    check(k);
    return residuals_[static_cast<std::size_t>(k)];
}

double BergmanBasis::max_residual() const {
    double r = 0.0;
    for (double x : residuals_) r = std::max(r, x);
    return r;
}

BergmanBasis BergmanBasis::from_parts(int requested, std::optional<int> breakdown, Precision p, MomentFrame frame,
                                      std::vector<std::vector<std::complex<double>>> coeffs,
                                      std::vector<std::vector<std::complex<double>>> hess,
                                      std::vector<double> log_gamma_w, std::vector<double> residuals) {
    const std::size_t m = coeffs.size();
    if (log_gamma_w.size() != m || residuals.size() != m || hess.size() + 1 != std::max<std::size_t>(m, 1))
        throw Error("inconsistent basis parts");
    for (std::size_t k = 0; k < m; ++k)
        if (coeffs[k].size() != k + 1) throw Error("coefficient vector of wrong length");
    for (std::size_t k = 0; k < hess.size(); ++k)
        if (hess[k].size() != k + 2) throw Error("Hessenberg column of wrong length");
    BergmanBasis b;
    b.requested_ = requested;
    b.breakdown_ = breakdown;
    b.precision_ = p;
    b.frame_ = frame;
    b.coeffs_ = std::move(coeffs);
    b.hess_ = std::move(hess);
    b.log_gamma_w_ = std::move(log_gamma_w);
    b.residuals_ = std::move(residuals);
    return b;
}

ScaledValues evaluate_all(const BergmanBasis& basis, int n, Point z, EvalMode mode) {
    if (n < 0 || n > basis.degree())
        throw RangeError("degree " + std::to_string(n) + " outside basis 0.." + std::to_string(basis.degree()));
    const Point w = basis.frame().to_local(z);
    ScaledValues out;
    out.values.resize(static_cast<std::size_t>(n) + 1);
    auto& v = out.values;
    if (mode == EvalMode::Horner) {
        for (int k = 0; k <= n; ++k) {
            const auto& c = basis.local_coefficients(k);
            std::complex<double> s = 0.0;
            for (std::size_t i = c.size(); i-- > 0;) s = s * w + c[i];
            v[static_cast<std::size_t>(k)] = s;
        }
    } else {
        v[0] = basis.local_coefficients(0)[0];
        for (int k = 1; k <= n; ++k) {
            std::complex<double> t = w * v[static_cast<std::size_t>(k - 1)];
            for (int j = 0; j < k; ++j) t -= basis.local_hessenberg(j, k - 1) * v[static_cast<std::size_t>(j)];
            v[static_cast<std::size_t>(k)] = t / basis.local_hessenberg(k, k - 1).real();
            if (std::abs(v[static_cast<std::size_t>(k)]) > kRescaleAbove) {
                for (int j = 0; j <= k; ++j) v[static_cast<std::size_t>(j)] /= kRescaleAbove;
                out.log_scale += kRescaleLog;
            }
        }
    }
    out.log_scale -= std::log(basis.frame().scale);
    return out;
}

std::complex<double> evaluate(const BergmanBasis& basis, int k, Point z, EvalMode mode) {
    const ScaledValues s = evaluate_all(basis, k, z, mode);
    return s.values.back() * std::exp(s.log_scale);
}

std::vector<Point> zeros(const BergmanBasis& basis, int k) {
    if (k < 1 || k > basis.degree())
        throw RangeError("zeros need 1 <= k <= " + std::to_string(basis.degree()));
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(k, k);
    for (int col = 0; col < k; ++col)
        for (int row = 0; row <= std::min(col + 1, k - 1); ++row) H(row, col) = basis.local_hessenberg(row, col);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es;
    es.setMaxIterations(60 * k);
    es.compute(H, false);
    if (es.info() != Eigen::Success)
        throw ConvergenceError("Hessenberg eigenvalue iteration did not converge at degree " + std::to_string(k));
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) out.push_back(basis.frame().to_global(es.eigenvalues()(i)));
    std::sort(out.begin(), out.end(), [](Point a, Point b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

GammaRatioReport gamma_ratio_report(const BergmanBasis& a, const BergmanBasis& b, std::optional<double> capacity) {
    if (a.degree() != b.degree()) throw RangeError("gamma ratio needs bases of equal degree");
    GammaRatioReport r;
    for (int k = 0; k <= a.degree(); ++k) {
        r.ratio.push_back(std::exp(b.log_gamma(k) - a.log_gamma(k)));
        if (capacity) {
            const double l = 0.5 * std::log((k + 1) / std::numbers::pi) - b.log_gamma(k) -
                             (k + 1) * std::log(*capacity);
            r.normalized.push_back(std::exp(l));
        }
    }
    return r;
}

// ---------------------------------------------------------------------------

void write_basis(std::ostream& os, const BergmanBasis& b) {
    using text::real17;
    os << "basis v1 degree=" << b.degree() << " requested=" << b.requested_degree()
       << " precision=" << to_string(b.precision());
    if (b.breakdown_degree()) os << " breakdown=" << *b.breakdown_degree();
    if (!b.frame().is_identity())
        os << " center=" << real17(b.frame().center.real()) << ',' << real17(b.frame().center.imag())
           << " scale=" << real17(b.frame().scale);
    os << '\n';
    // gamma lines are for readers; read_basis rebuilds gamma from coef and h
    for (int k = 0; k <= b.degree(); ++k) os << "gamma " << k << ' ' << real17(b.gamma(k)) << '\n';
    for (int k = 0; k <= b.degree(); ++k) {
        const auto& c = b.local_coefficients(k);
        for (std::size_t j = 0; j < c.size(); ++j)
            os << "coef " << k << ' ' << j << ' ' << real17(c[j].real()) << ' ' << real17(c[j].imag()) << '\n';
    }
    for (int k = 0; k < b.degree(); ++k)
        for (int i = 0; i <= k + 1; ++i) {
            const auto h = b.local_hessenberg(i, k);
            os << "h " << i << ' ' << k << ' ' << real17(h.real()) << ' ' << real17(h.imag()) << '\n';
        }
    for (int k = 0; k <= b.degree(); ++k) os << "residual " << k << ' ' << real17(b.residual(k)) << '\n';
}

BergmanBasis read_basis(std::istream& is) {
    std::string line;
    int lineno = 1;
    if (!std::getline(is, line)) throw ParseError("empty basis file", 1);
    const auto f = text::header_fields(line, "basis", lineno);
    int degree = -2, requested = -1;
    std::optional<int> breakdown;
    Precision prec = Precision::Double;
    MomentFrame frame;
    for (const auto& [key, val] : f) {
        if (key == "degree") degree = text::to_int(val, lineno);
        else if (key == "requested") requested = text::to_int(val, lineno);
        else if (key == "breakdown") breakdown = text::to_int(val, lineno);
        else if (key == "center") frame.center = text::to_point(val, lineno);
        else if (key == "scale") frame.scale = text::to_real(val, lineno);
        else if (key == "precision") {
            try {
                prec = parse_precision(val);
            } catch (const std::exception& e) {
                throw ParseError(e.what(), lineno);
            }
        } else throw ParseError("unknown header field '" + key + "'", lineno);
    }
    if (degree < -1 || degree > kMaxDegree) throw ParseError("header lacks a valid degree", lineno);
    if (requested < degree) requested = degree;
    if (!(frame.scale > 0)) throw ParseError("scale must be positive", lineno);

    const std::size_t m = static_cast<std::size_t>(degree + 1);
    std::vector<std::vector<std::complex<double>>> coeffs(m), hess(m > 0 ? m - 1 : 0);
    for (std::size_t k = 0; k < m; ++k) coeffs[k].assign(k + 1, 0.0);
    for (std::size_t k = 0; k + 1 < m; ++k) hess[k].assign(k + 2, 0.0);
    std::vector<double> gam(m, 0.0), res(m, 0.0);
    std::vector<char> gseen(m, 0), rseen(m, 0);
    std::size_t ncoef = 0, nh = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (text::blank(line)) continue;
        std::istringstream ls(line);
        std::string kind, a, b2, c, d, extra;
        ls >> kind;
        const auto idx = [&](const std::string& s, std::size_t hi) {
            const int v = text::to_int(s, lineno);
            if (v < 0 || static_cast<std::size_t>(v) > hi) throw ParseError("index out of range", lineno);
            return static_cast<std::size_t>(v);
        };
        if (m == 0) throw ParseError("data line in an empty basis", lineno);
        if (kind == "gamma" || kind == "residual") {
            if (!(ls >> a >> b2) || (ls >> extra)) throw ParseError("expected '" + kind + " k value'", lineno);
            const std::size_t k = idx(a, m - 1);
            auto& seen = kind == "gamma" ? gseen : rseen;
            if (seen[k]) throw ParseError("duplicate " + kind + " line", lineno);
            seen[k] = 1;
            (kind == "gamma" ? gam : res)[k] = text::to_real(b2, lineno);
        } else if (kind == "coef") {
            if (!(ls >> a >> b2 >> c >> d) || (ls >> extra)) throw ParseError("expected 'coef k j re im'", lineno);
            const std::size_t k = idx(a, m - 1), j = idx(b2, k);
            coeffs[k][j] = {text::to_real(c, lineno), text::to_real(d, lineno)};
            ++ncoef;
        } else if (kind == "h") {
            if (!(ls >> a >> b2 >> c >> d) || (ls >> extra)) throw ParseError("expected 'h i k re im'", lineno);
            if (m < 2) throw ParseError("Hessenberg entry in a degree-0 basis", lineno);
            const std::size_t k = idx(b2, m - 2), i = idx(a, k + 1);
            hess[k][i] = {text::to_real(c, lineno), text::to_real(d, lineno)};
            ++nh;
        } else {
            throw ParseError("unknown line kind '" + kind + "'", lineno);
        }
    }
    const std::size_t want_coef = m * (m + 1) / 2, want_h = m > 0 ? (m - 1) * (m + 2) / 2 : 0;
    if (ncoef != want_coef || nh != want_h || std::count(gseen.begin(), gseen.end(), 0) ||
        std::count(rseen.begin(), rseen.end(), 0))
        throw ParseError("basis file incomplete", lineno + 1);
    // rebuild log gamma(w) from the stored data so that gamma(z) round-trips
    std::vector<double> lgw(m);
    if (m > 0) {
        lgw[0] = std::log(coeffs[0][0].real());
        for (std::size_t k = 1; k < m; ++k) lgw[k] = lgw[k - 1] - std::log(hess[k - 1][k].real());
    }
    return BergmanBasis::from_parts(requested, breakdown, prec, frame, std::move(coeffs), std::move(hess),
                                    std::move(lgw), std::move(res));
}

}  // namespace archi
