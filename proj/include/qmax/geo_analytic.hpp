#pragma once

// Extreme-value asymptotics for the maximum queue length of a Geo/Geo/c
// LAS-DA queue via the Poisson clumping heuristic.
//
// Above level c the chain behaves like a homogeneous random walk with
// increments in [-c, +1], so the stationary law has a geometric tail with
// ratio omega, and a visit to a high level k arrives in clumps whose mean
// size is 1 / (1 - nu0), nu0 being the walk's return probability. This
// yields
//
//     P{M_n <= k} ~ exp(-beta * n * omega^k),   beta = pi_c (1 - nu0) / omega^(c-1).

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qmax/errors.hpp"
#include "qmax/numerics.hpp"
#include "qmax/params.hpp"

namespace qmax {

/// Unique fixed point of omega = (q omega + p)(r omega + s)^c in (0,1).
///
/// f(w) = w - (q w + p)(r w + s)^c always vanishes at w = 1, and near heavy
/// load omega sits within rounding of that root. Bisection therefore runs on
/// h(w) = f(w) / (w - 1), which has h(0) = p s^c > 0 and h(1) = p - c r < 0.
inline double decay_rate_omega(const GeoParams& params) {
    const int c = params.c;
    // (r w + s)^c in ascending powers
    std::vector<double> pw{1.0};
    for (int i = 0; i < c; ++i) {
        std::vector<double> next(pw.size() + 1, 0.0);
        for (std::size_t k = 0; k < pw.size(); ++k) {
            next[k] += params.s * pw[k];
            next[k + 1] += params.r * pw[k];
        }
        pw = std::move(next);
    }
    std::vector<double> f(pw.size() + 1, 0.0);
    for (std::size_t k = 0; k < pw.size(); ++k) {
        f[k] -= params.p * pw[k];
        f[k + 1] -= params.q * pw[k];
    }
    f[1] += 1.0;
    // synthetic division by (w - 1), kept on the raw coefficients so that
    // tiny leading terms survive
    std::vector<double> h(f.size() - 1);
    double carry = f.back();
    h.back() = carry;
    for (std::size_t i = f.size() - 2; i > 0; --i) {
        carry = f[i] + carry;
        h[i - 1] = carry;
    }
    const auto eval = [&](double w) {
        double acc = h.back();
        for (std::size_t i = h.size() - 1; i-- > 0;) acc = acc * w + h[i];
        return acc;
    };
    try {
        return fixed_point_root(eval, 0.0, 1.0, 1e-15);
    } catch (const bracket_error& e) {
        throw numeric_error(std::string("decay rate bracket failed on stable input: ") + e.what());
    }
}

/// Cardano-form solution of the three-server decay-rate cubic. Only defined
/// for c = 3 and when the inner square root is real; used as a cross-check.
inline std::optional<double> omega_closed_form(const GeoParams& params) {
    if (params.c != 3) return std::nullopt;
    const double p = params.p, q = params.q, r = params.r, s = params.s;
    const double chi = -9.0 * q * r * r + 2.0 * r * r * r - 27.0 * q * q * s;
    const double radicand = 4.0 * std::pow(3.0 * q - r, 3) * r * r * r + chi * chi;
    if (radicand < 0.0) return std::nullopt;
    const double theta = std::sqrt(radicand);
    const double sum = chi + theta;
    if (sum <= 0.0) return std::nullopt;
    return ((-3.0 + 2.0 * r + 3.0 * p * s) + (3.0 * q - r) * r * std::cbrt(2.0 / sum) -
            std::cbrt(sum / 2.0)) /
           (3.0 * q * r);
}

struct StationaryDistribution {
    double omega = 0.0;
    std::vector<double> boundary;  ///< pi_0 .. pi_{c-1}
    double pi_c = 0.0;             ///< pi_j = omega^(j-c) pi_c for j >= c

    double operator()(long j) const {
        if (j < 0) return 0.0;
        const auto c = static_cast<long>(boundary.size());
        if (j < c) return boundary[static_cast<std::size_t>(j)];
        return std::pow(omega, static_cast<double>(j - c)) * pi_c;
    }

    double total_mass() const {
        double sum = pi_c / (1.0 - omega);
        for (double v : boundary) sum += v;
        return sum;
    }
};

/// Boundary masses by back-substitution through the balance equations of
/// columns c, c-1, ..., 1, with pi_j / pi_c = omega^(j-c) above c.
inline StationaryDistribution stationary_distribution(const GeoParams& params, double omega) {
    const int c = params.c;
    // relative masses pi_j / pi_c for j = 0 .. 2c
    std::vector<double> rel(static_cast<std::size_t>(2 * c + 1), 0.0);
    for (int j = c; j <= 2 * c; ++j) rel[static_cast<std::size_t>(j)] = std::pow(omega, j - c);
    for (int j = c; j >= 1; --j) {
        double inflow = 0.0;
        for (int i = j; i <= j + c; ++i) inflow += rel[static_cast<std::size_t>(i)] * geo_transition(params, i, j);
        const double up = geo_transition(params, j - 1, j);
        rel[static_cast<std::size_t>(j - 1)] = (rel[static_cast<std::size_t>(j)] - inflow) / up;
    }
    double norm = 1.0 / (1.0 - omega);
    for (int j = 0; j < c; ++j) norm += rel[static_cast<std::size_t>(j)];

    StationaryDistribution out;
    out.omega = omega;
    out.pi_c = 1.0 / norm;
    for (int j = 0; j < c; ++j) out.boundary.push_back(rel[static_cast<std::size_t>(j)] * out.pi_c);
    return out;
}

inline StationaryDistribution stationary_distribution(const GeoParams& params) {
    return stationary_distribution(params, decay_rate_omega(params));
}

/// Hitting probabilities of the level-c random walk. For j >= 1, nu_j is the
/// chance that a walker started j below a level ever reaches it; nu_{-1} is the
/// same from one above; nu_0 is the chance of ever returning.
struct HittingProbabilities {
    double return_prob = 0.0;        ///< nu_0
    double from_above = 0.0;         ///< nu_{-1}
    std::vector<double> from_below;  ///< nu_1 .. nu_{c-1}; nu_j = omega^j beyond

    std::vector<cplx> f_inner_roots;  ///< roots of the F denominator inside the unit disk
    cplx g_smallest_root;             ///< smallest-modulus root of the G denominator
    double max_imag = 0.0;            ///< largest |Im| in the complex solve
};

namespace detail {

/// Denominators of F(z) = sum nu_j z^j and G(z) = sum nu_{-j} z^j, each with
/// the (z - 1) factor removed.
inline std::pair<Polynomial, Polynomial> hitting_denominators(const IncrementPmf& step) {
    const int c = step.busy();
    std::vector<double> df(static_cast<std::size_t>(c + 2), 0.0);
    std::vector<double> dg(static_cast<std::size_t>(c + 2), 0.0);
    df[static_cast<std::size_t>(c)] += 1.0;
    dg[1] += 1.0;
    for (int i = -c; i <= 1; ++i) {
        df[static_cast<std::size_t>(i + c)] -= step(i);
        dg[static_cast<std::size_t>(1 - i)] -= step(i);
    }
    return {Polynomial(df).divide_linear(1.0), Polynomial(dg).divide_linear(1.0)};
}

}  // namespace detail

/// Solves for nu_0, nu_{-1}, nu_1..nu_{c-1} from the analyticity conditions of
/// the two generating functions: the F numerator must vanish at z = 1 and at
/// the c-1 denominator roots inside the unit disk, the G numerator at the
/// smallest G denominator root. nu_c is eliminated through the return
/// equation for nu_0.
inline HittingProbabilities hitting_probabilities(const GeoParams& params) {
    const int c = params.c;
    const IncrementPmf step = increment_distribution(params, c);
    const auto a = [&](int i) { return step(i); };

    const auto [f_den, g_den] = detail::hitting_denominators(step);
    const ComplexRootSet f_roots = polynomial_roots(f_den);
    const ComplexRootSet g_roots = polynomial_roots(g_den);

    HittingProbabilities out;
    for (cplx z : f_roots.roots) {
        if (std::abs(z) < 1.0 - 1e-9) out.f_inner_roots.push_back(z);
    }
    if (static_cast<int>(out.f_inner_roots.size()) != c - 1) {
        throw degenerate_roots_error("F denominator has " + std::to_string(out.f_inner_roots.size()) +
                                     " roots inside the unit disk, expected " + std::to_string(c - 1));
    }
    std::size_t smallest = 0;
    for (std::size_t i = 1; i < g_roots.roots.size(); ++i) {
        if (std::abs(g_roots.roots[i]) < std::abs(g_roots.roots[smallest])) smallest = i;
    }
    for (std::size_t i = 0; i < g_roots.roots.size(); ++i) {
        if (i != smallest &&
            std::abs(std::abs(g_roots.roots[i]) - std::abs(g_roots.roots[smallest])) < 1e-9) {
            throw degenerate_roots_error("G denominator has no unique smallest-modulus root");
        }
    }
    out.g_smallest_root = g_roots.roots[smallest];

    // unknowns: x[0] = nu_0, x[1] = nu_{-1}, x[1 + l] = nu_l for l = 1..c-1
    const auto n = static_cast<std::size_t>(c + 1);
    ComplexMatrix lhs(n);
    std::vector<cplx> rhs(n);

    const auto f_row = [&](std::size_t row, cplx z) {
        cplx constant = a(1) * std::pow(z, c + 1) + a(0) * std::pow(z, c);
        for (int m = 1; m <= c; ++m) {
            for (int l = 1; l <= std::min(m, c - 1); ++l) {
                lhs(row, static_cast<std::size_t>(1 + l)) -= a(-m) * std::pow(z, l + c - m);
            }
        }
        // -z^c * a(-c) nu_c, with a(-c) nu_c = nu_0 - a(1) nu_{-1} - a(0) - sum_{m<c} a(-m) nu_m
        lhs(row, 0) -= std::pow(z, c);
        lhs(row, 1) += a(1) * std::pow(z, c);
        for (int m = 1; m < c; ++m) lhs(row, static_cast<std::size_t>(1 + m)) += a(-m) * std::pow(z, c);
        rhs[row] = -constant;
    };
    const auto g_row = [&](std::size_t row, cplx z) {
        cplx constant = 0.0;
        lhs(row, 1) -= a(1) * z;
        for (int m = 1; m <= c; ++m) {
            constant += a(-m) * std::pow(z, m + 1);  // l = 0 term, nu_0 = 1 inside the recursion
            for (int l = 1; l < m; ++l) lhs(row, static_cast<std::size_t>(1 + l)) += a(-m) * std::pow(z, m - l + 1);
        }
        rhs[row] = -constant;
    };

    f_row(0, cplx(1.0, 0.0));
    for (std::size_t i = 0; i < out.f_inner_roots.size(); ++i) f_row(i + 1, out.f_inner_roots[i]);
    g_row(n - 1, out.g_smallest_root);

    const std::vector<cplx> x = solve_linear_system(lhs, rhs);
    for (cplx v : x) out.max_imag = std::max(out.max_imag, std::abs(v.imag()));
    if (!(out.max_imag < 1e-9)) {
        throw degenerate_roots_error("hitting-probability solve left imaginary part " +
                                     std::to_string(out.max_imag));
    }
    out.return_prob = x[0].real();
    out.from_above = x[1].real();
    for (int l = 1; l < c; ++l) out.from_below.push_back(x[static_cast<std::size_t>(1 + l)].real());
    return out;
}

/// Asymptotic law of M_n: P{M_n <= k} ~ exp(-beta n omega^k) and
/// E(M_n) ~ slope ln n + intercept.
struct MaxLengthLaw {
    double omega = 0.0;
    double beta = 0.0;
    double slope = 0.0;
    double intercept = 0.0;

    MaxLengthLaw() = default;
    MaxLengthLaw(double omega_, double beta_)
        : omega(omega_),
          beta(beta_),
          slope(1.0 / std::log(1.0 / omega_)),
          intercept((kEulerGamma + std::log(beta_)) / std::log(1.0 / omega_) + 0.5) {}

    double cdf(double n, double k) const { return std::exp(-beta * n * std::pow(omega, k)); }
    double expected(double n) const { return slope * std::log(n) + intercept; }
};

struct GeoAnalysis {
    GeoParams params;
    double omega = 0.0;
    std::vector<double> pi_boundary;  ///< pi_0 .. pi_{c-1}
    double pi_c = 0.0;
    HittingProbabilities nu;
    double beta = 0.0;

    StationaryDistribution stationary() const { return {omega, pi_boundary, pi_c}; }
    MaxLengthLaw law() const { return {omega, beta}; }
};

/// beta = pi_c (1 - nu_0) / omega^(c-1)
inline double clump_rate(const GeoAnalysis& analysis) {
    return analysis.pi_c * (1.0 - analysis.nu.return_prob) /
           std::pow(analysis.omega, analysis.params.c - 1);
}

inline GeoAnalysis analyze_geo(const GeoParams& params) {
    GeoAnalysis out;
    out.params = params;
    out.omega = decay_rate_omega(params);
    const StationaryDistribution pi = stationary_distribution(params, out.omega);
    out.pi_boundary = pi.boundary;
    out.pi_c = pi.pi_c;
    out.nu = hitting_probabilities(params);
    out.beta = clump_rate(out);
    return out;
}

enum class RangePolicy { warn, strict };

/// Heuristic P{M_n <= k}. The approximation is asymptotic in k; levels below
/// c are computed anyway unless the policy is strict.
inline double max_length_cdf(const GeoAnalysis& analysis, double n, long k,
                             RangePolicy policy = RangePolicy::warn) {
    if (n < 1) throw range_error("horizon n must be at least 1");
    if (k < analysis.params.c && policy == RangePolicy::strict) {
        throw heuristic_range_error("level k=" + std::to_string(k) + " is below the server count");
    }
    return analysis.law().cdf(n, static_cast<double>(k));
}

inline bool heuristic_in_range(const GeoAnalysis& analysis, long k) { return k >= analysis.params.c; }

inline double expected_max_length(const GeoAnalysis& analysis, double n) {
    if (n < 2) throw range_error("horizon n must be at least 2");
    return analysis.law().expected(n);
}

/// Stationary mean queue length sum_j j pi_j.
inline double mean_queue_length(const StationaryDistribution& pi) {
    const auto c = static_cast<double>(pi.boundary.size());
    const double w = pi.omega;
    double mean = pi.pi_c * (c / (1.0 - w) + w / ((1.0 - w) * (1.0 - w)));
    for (std::size_t j = 1; j < pi.boundary.size(); ++j) mean += static_cast<double>(j) * pi.boundary[j];
    return mean;
}

inline double mean_queue_length(const GeoParams& params) {
    return mean_queue_length(stationary_distribution(params));
}

}  // namespace qmax
