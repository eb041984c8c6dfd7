#pragma once

// Closed forms for M/M/c waiting times: Gumbel asymptotics of the M/M/1
// maximum wait and the FIFO mean waits for c = 1, 2, 3.

#include <cmath>
#include <string>

#include "qmax/errors.hpp"
#include "qmax/numerics.hpp"

namespace qmax {

enum class WaitKind { system, queue };

inline const char* to_string(WaitKind kind) noexcept { return kind == WaitKind::system ? "system" : "queue"; }

struct MMParams {
    double lambda = 0.0;  ///< arrival rate
    double mu = 0.0;      ///< per-server service rate
    int c = 1;

    /// lambda / mu, the single-server load used by the M/M/1 formulas.
    double rho_single() const noexcept { return lambda / mu; }
    /// lambda / (c mu), the per-server utilisation.
    double utilisation() const noexcept { return lambda / (c * mu); }
};

inline MMParams validate_mm_params(double lambda, double mu, int c) {
    if (c < 1) throw range_error("server count c must be at least 1, got " + std::to_string(c));
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw range_error("arrival rate must be positive and finite");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw range_error("service rate must be positive and finite");
    if (!(lambda < c * mu)) {
        throw stability_error("unstable queue: need lambda < c*mu, got lambda=" + std::to_string(lambda) +
                              " c*mu=" + std::to_string(c * mu));
    }
    return MMParams{lambda, mu, c};
}

/// (mu - lambda) max W - ln(A n) converges to a standard Gumbel, where
/// A = lambda (1 - rho)^2 for the system wait and additionally times rho for
/// the queue wait.
struct MM1Asymptotics {
    WaitKind kind = WaitKind::system;
    double scale = 0.0;          ///< 1 / (mu - lambda)
    double rate_constant = 0.0;  ///< A

    double location(double n) const { return scale * std::log(rate_constant * n); }
    double cdf(double n, double y) const { return std::exp(-rate_constant * n * std::exp(-y / scale)); }
    double expected(double n) const { return scale * (std::log(n) + kEulerGamma + std::log(rate_constant)); }
};

inline MM1Asymptotics mm1_asymptotics(const MMParams& params, WaitKind kind) {
    if (params.c != 1) {
        throw unsupported_error("maximum-wait asymptotics are only known for a single server");
    }
    const double rho = params.rho_single();
    MM1Asymptotics out;
    out.kind = kind;
    out.scale = 1.0 / (params.mu - params.lambda);
    out.rate_constant = params.lambda * (1.0 - rho) * (1.0 - rho);
    if (kind == WaitKind::queue) out.rate_constant *= rho;
    return out;
}

/// P{max wait over [0, n] <= y} ~ exp(-A n exp(-(mu - lambda) y)).
inline double max_wait_cdf_mm1(const MMParams& params, WaitKind kind, double n, double y) {
    if (!(n > 0.0)) throw range_error("horizon n must be positive");
    if (y < 0.0) throw range_error("wait time y must be nonnegative");
    return mm1_asymptotics(params, kind).cdf(n, y);
}

inline double expected_max_wait_mm1(const MMParams& params, WaitKind kind, double n) {
    if (!(n > 0.0)) throw range_error("horizon n must be positive");
    return mm1_asymptotics(params, kind).expected(n);
}

/// Stationary FIFO mean wait; the system wait adds one mean service time.
inline double mean_wait(const MMParams& params, WaitKind kind) {
    const double l = params.lambda;
    const double m = params.mu;
    double que = 0.0;
    switch (params.c) {
        case 1:
            que = l / ((m - l) * m);
            break;
        case 2:
            que = l * l / ((2.0 * m - l) * (2.0 * m + l) * m);
            break;
        case 3:
            que = l * l * l / ((3.0 * m - l) * (l * l + 4.0 * l * m + 6.0 * m * m) * m);
            break;
        default:
            throw unsupported_error("mean wait is implemented for c <= 3, got " + std::to_string(params.c));
    }
    return kind == WaitKind::queue ? que : que + 1.0 / m;
}

}  // namespace qmax
