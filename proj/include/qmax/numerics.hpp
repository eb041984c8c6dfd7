#pragma once

// Small numeric kernels: complex roots of low-degree real polynomials,
// a dense complex linear solve, and a bracketed scalar root finder.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qmax/errors.hpp"

namespace qmax {

using cplx = std::complex<double>;

/// Euler-Mascheroni constant.
inline constexpr double kEulerGamma = 0.5772156649015329;

/// Real polynomial with coefficients in ascending degree order.
class Polynomial {
public:
    Polynomial() = default;

    /// Trailing coefficients below 1e-15 of the largest magnitude are trimmed.
    explicit Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
        double big = 0.0;
        for (double a : coeffs_) big = std::max(big, std::abs(a));
        while (coeffs_.size() > 1 && std::abs(coeffs_.back()) <= 1e-15 * big) coeffs_.pop_back();
        if (coeffs_.empty() || big == 0.0) throw range_error("polynomial has no nonzero coefficient");
    }

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<double>& coefficients() const noexcept { return coeffs_; }
    double operator[](std::size_t i) const noexcept { return coeffs_[i]; }

    double max_abs_coefficient() const noexcept {
        double big = 0.0;
        for (double a : coeffs_) big = std::max(big, std::abs(a));
        return big;
    }

    template <typename T>
    T operator()(T z) const {
        T acc = T(coeffs_.back());
        for (std::size_t i = coeffs_.size() - 1; i-- > 0;) acc = acc * z + T(coeffs_[i]);
        return acc;
    }

    /// Value and first derivative by Horner's scheme.
    std::pair<cplx, cplx> eval_with_derivative(cplx z) const {
        cplx value = coeffs_.back();
        cplx deriv = 0.0;
        for (std::size_t i = coeffs_.size() - 1; i-- > 0;) {
            deriv = deriv * z + value;
            value = value * z + coeffs_[i];
        }
        return {value, deriv};
    }

    /// Quotient of division by (z - root); the remainder is discarded, so
    /// the caller is responsible for `root` being an actual zero.
    Polynomial divide_linear(double root) const {
        const std::size_t n = coeffs_.size();
        if (n < 2) throw range_error("cannot divide a constant by a linear factor");
        std::vector<double> quot(n - 1);
        double carry = coeffs_[n - 1];
        quot[n - 2] = carry;
        for (std::size_t i = n - 2; i > 0; --i) {
            carry = coeffs_[i] + root * carry;
            quot[i - 1] = carry;
        }
        return Polynomial(std::move(quot));
    }

private:
    std::vector<double> coeffs_{0.0};
};

struct ComplexRootSet {
    std::vector<cplx> roots;
    std::vector<double> residuals;  ///< |P(root)| per root
};

namespace detail {

inline void order_roots(std::vector<cplx>& roots) {
    // reals ascending, then conjugate pairs (upper member first) ascending by real part
    auto scale = [](cplx z) { return std::max(1.0, std::abs(z)); };
    std::vector<cplx> reals;
    std::vector<cplx> upper;
    std::vector<cplx> lower;
    for (cplx z : roots) {
        if (std::abs(z.imag()) <= 1e-12 * scale(z)) {
            reals.emplace_back(z.real(), 0.0);
        } else if (z.imag() > 0) {
            upper.push_back(z);
        } else {
            lower.push_back(z);
        }
    }
    std::sort(reals.begin(), reals.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    std::sort(upper.begin(), upper.end(), [](cplx a, cplx b) { return a.real() < b.real(); });

    std::vector<cplx> out = reals;
    std::vector<bool> used(lower.size(), false);
    for (cplx z : upper) {
        std::size_t best = lower.size();
        double best_gap = 0.0;
        for (std::size_t j = 0; j < lower.size(); ++j) {
            if (used[j]) continue;
            const double gap = std::abs(std::conj(lower[j]) - z);
            if (best == lower.size() || gap < best_gap) {
                best = j;
                best_gap = gap;
            }
        }
        if (best == lower.size()) {
            out.push_back(z);
            continue;
        }
        used[best] = true;
        const cplx sym = 0.5 * (z + std::conj(lower[best]));
        out.push_back(sym);
        out.push_back(std::conj(sym));
    }
    for (std::size_t j = 0; j < lower.size(); ++j) {
        if (!used[j]) out.push_back(lower[j]);
    }
    roots = std::move(out);
}

}  // namespace detail

/// Accepted |p(z)| for a computed root: 1e-10 times the larger of max|a_i|
/// and sum |a_i| |z|^i, the scale of rounding error in evaluating p at z.
inline double root_residual_tolerance(const Polynomial& poly, cplx z) {
    double scale = 0.0;
    double power = 1.0;
    for (double a : poly.coefficients()) {
        scale += std::abs(a) * power;
        power *= std::abs(z);
    }
    return 1e-10 * std::max(poly.max_abs_coefficient(), scale);
}

/// All complex roots of a polynomial of degree 1..4.
///
/// Aberth-Ehrlich simultaneous iteration: every root is refined at once, so
/// no deflation error accumulates. A couple of Newton steps polish each root
/// afterwards. Throws convergence_error if any residual stays above
/// root_residual_tolerance.
inline ComplexRootSet polynomial_roots(const Polynomial& poly) {
    const int deg = poly.degree();
    if (deg < 1 || deg > 4) {
        throw range_error("polynomial_roots supports degree 1..4, got " + std::to_string(deg));
    }
    const auto& a = poly.coefficients();
    const double lead = a.back();
    std::vector<cplx> z(static_cast<std::size_t>(deg));

    if (deg == 1) {
        z[0] = -a[0] / a[1];
    } else {
        // start on a circle around the centroid whose radius bounds the root moduli
        double radius = 0.0;
        for (int i = 0; i < deg; ++i) {
            const double ratio = std::abs(a[static_cast<std::size_t>(i)] / lead);
            if (ratio > 0) radius = std::max(radius, std::pow(ratio, 1.0 / (deg - i)));
        }
        radius = std::max(2.0 * radius, 1e-3);
        const cplx centre = -a[static_cast<std::size_t>(deg - 1)] / (deg * lead);
        for (int k = 0; k < deg; ++k) {
            const double angle = 2.0 * std::numbers::pi * k / deg + 0.4;
            z[static_cast<std::size_t>(k)] = centre + std::polar(radius, angle);
        }

        constexpr int kMaxIter = 500;
        for (int iter = 0; iter < kMaxIter; ++iter) {
            double worst = 0.0;
            for (std::size_t k = 0; k < z.size(); ++k) {
                const auto [value, deriv] = poly.eval_with_derivative(z[k]);
                if (value == 0.0) continue;
                const cplx ratio = value / deriv;
                cplx repulsion = 0.0;
                for (std::size_t j = 0; j < z.size(); ++j) {
                    if (j != k) repulsion += 1.0 / (z[k] - z[j]);
                }
                const cplx step = ratio / (1.0 - ratio * repulsion);
                z[k] -= step;
                worst = std::max(worst, std::abs(step) / std::max(1.0, std::abs(z[k])));
            }
            if (worst < 1e-16) break;
        }
        for (auto& root : z) {
            for (int polish = 0; polish < 2; ++polish) {
                const auto [value, deriv] = poly.eval_with_derivative(root);
                if (deriv == 0.0 || value == 0.0) break;
                const cplx next = root - value / deriv;
                if (std::abs(poly(next)) < std::abs(value)) root = next;
            }
        }
    }

    detail::order_roots(z);

    ComplexRootSet out;
    out.roots = std::move(z);
    for (cplx root : out.roots) {
        const double res = std::abs(poly(root));
        if (!(res < root_residual_tolerance(poly, root))) {
            throw convergence_error("polynomial root residual " + std::to_string(res) +
                                    " exceeds tolerance");
        }
        out.residuals.push_back(res);
    }
    return out;
}

/// Dense square complex matrix, row-major.
class ComplexMatrix {
public:
    explicit ComplexMatrix(std::size_t n) : n_(n), data_(n * n, cplx{}) {}

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t size() const noexcept { return n_; }
    cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
    cplx operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

    std::vector<cplx> apply(std::span<const cplx> x) const {
        std::vector<cplx> y(n_, cplx{});
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) y[i] += (*this)(i, j) * x[j];
        }
        return y;
    }

private:
    std::size_t n_;
    std::vector<cplx> data_;
};

/// Gaussian elimination with scaled partial pivoting. Dimension at most 8.
inline std::vector<cplx> solve_linear_system(ComplexMatrix a, std::vector<cplx> b) {
    const std::size_t n = a.size();
    if (n == 0 || n > 8) throw range_error("solve_linear_system supports dimension 1..8");
    if (b.size() != n) throw range_error("right-hand side length does not match matrix");

    std::vector<double> row_scale(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) row_scale[i] = std::max(row_scale[i], std::abs(a(i, j)));
        if (row_scale[i] == 0.0) throw singular_error("matrix has a zero row");
    }

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = -1.0;
        for (std::size_t i = col; i < n; ++i) {
            const double rel = std::abs(a(i, col)) / row_scale[i];
            if (rel > best) {
                best = rel;
                pivot = i;
            }
        }
        if (best < 1e-13) throw singular_error("pivot below 1e-13 of its row scale");
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
            std::swap(b[col], b[pivot]);
            std::swap(row_scale[col], row_scale[pivot]);
        }
        for (std::size_t i = col + 1; i < n; ++i) {
            const cplx factor = a(i, col) / a(col, col);
            if (factor == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a(i, j) -= factor * a(col, j);
            b[i] -= factor * b[col];
        }
    }

    std::vector<cplx> x(n);
    for (std::size_t i = n; i-- > 0;) {
        cplx acc = b[i];
        for (std::size_t j = i + 1; j < n; ++j) acc -= a(i, j) * x[j];
        x[i] = acc / a(i, i);
    }
    return x;
}

/// Bisection on a sign-changing bracket. Stops once the bracket is narrower
/// than `tol` and |f(x)| < tol, or when the bracket can no longer shrink.
template <typename F>
double fixed_point_root(F&& f, double lo, double hi, double tol) {
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) {
        throw bracket_error("f has the same sign at both ends of [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]");
    }
    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < 2000; ++iter) {
        mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fmid = f(mid);
        if (fmid == 0.0) return mid;
        if (hi - lo < tol && std::abs(fmid) < tol) return mid;
        if ((fmid < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    if (!(std::abs(f(mid)) < tol)) {
        throw convergence_error("bisection exhausted the bracket with |f| >= tol");
    }
    return mid;
}

}  // namespace qmax
