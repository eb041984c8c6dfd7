#pragma once

// Empirical CDFs, moment-matched Gumbel fits and Kolmogorov-Smirnov
// distances for comparing simulated maxima with analytic predictions.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qmax/errors.hpp"
#include "qmax/numerics.hpp"

namespace qmax {

/// Step-function empirical CDF over the distinct sample values.
class Ecdf {
public:
    Ecdf() = default;

    explicit Ecdf(std::span<const double> samples) {
        std::vector<double> sorted(samples.begin(), samples.end());
        std::sort(sorted.begin(), sorted.end());
        const double n = static_cast<double>(sorted.size());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
            support_.push_back(sorted[i]);
            probs_.push_back(static_cast<double>(i + 1) / n);
        }
    }

    bool empty() const noexcept { return support_.empty(); }
    const std::vector<double>& support() const noexcept { return support_; }
    const std::vector<double>& probabilities() const noexcept { return probs_; }

    double operator()(double x) const {
        const auto it = std::upper_bound(support_.begin(), support_.end(), x);
        if (it == support_.begin()) return 0.0;
        return probs_[static_cast<std::size_t>(it - support_.begin()) - 1];
    }

private:
    std::vector<double> support_;
    std::vector<double> probs_;
};

struct SampleSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double stdev = 0.0;  ///< n - 1 denominator; 0 for a single sample
    double se = 0.0;     ///< stdev / sqrt(n); 0 for a single sample
    Ecdf ecdf;

    bool se_available() const noexcept { return count > 1; }
};

inline SampleSummary summarize(std::span<const double> samples) {
    if (samples.empty()) throw range_error("summarize needs at least one sample");
    SampleSummary out;
    out.count = samples.size();
    double sum = 0.0;
    for (double x : samples) sum += x;
    out.mean = sum / static_cast<double>(out.count);
    if (out.count > 1) {
        double ss = 0.0;
        for (double x : samples) ss += (x - out.mean) * (x - out.mean);
        out.stdev = std::sqrt(ss / static_cast<double>(out.count - 1));
        out.se = out.stdev / std::sqrt(static_cast<double>(out.count));
    }
    out.ecdf = Ecdf(samples);
    return out;
}

struct GumbelParams {
    double location = 0.0;
    double scale = 1.0;

    double cdf(double x) const { return std::exp(-std::exp(-(x - location) / scale)); }
    double mean() const { return location + kEulerGamma * scale; }
    double variance() const { return std::numbers::pi * std::numbers::pi * scale * scale / 6.0; }
    double quantile(double u) const { return location - scale * std::log(-std::log(u)); }
};

/// Method-of-moments Gumbel fit: scale = sqrt(6 var) / pi, location = mean - gamma scale.
inline GumbelParams gumbel_fit_two_moment(std::span<const double> samples) {
    if (samples.size() < 2) throw degenerate_sample_error("Gumbel fit needs at least two samples");
    const SampleSummary s = summarize(samples);
    if (!(s.stdev > 0.0)) throw degenerate_sample_error("Gumbel fit needs nonzero sample variance");
    GumbelParams g;
    g.scale = std::sqrt(6.0) * s.stdev / std::numbers::pi;
    g.location = s.mean - kEulerGamma * g.scale;
    return g;
}

enum class Support { continuous, lattice };

/// Sup-norm distance between an ECDF and a CDF.
///
/// Continuous support checks both one-sided gaps at every jump, taking the
/// CDF's left limit just below the jump. Lattice support compares the two
/// step functions on the integers from min(support) - 1 to max(support).
inline double ks_distance(const Ecdf& ecdf, const std::function<double(double)>& cdf,
                          Support support = Support::continuous) {
    if (ecdf.empty()) throw range_error("ks_distance needs a nonempty ECDF");
    const auto& xs = ecdf.support();
    const auto& ps = ecdf.probabilities();
    double worst = 0.0;
    if (support == Support::lattice) {
        const auto lo = static_cast<long>(std::floor(xs.front())) - 1;
        const auto hi = static_cast<long>(std::floor(xs.back()));
        for (long k = lo; k <= hi; ++k) {
            const auto x = static_cast<double>(k);
            worst = std::max(worst, std::abs(ecdf(x) - cdf(x)));
        }
        return worst;
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double below = i == 0 ? 0.0 : ps[i - 1];
        const double left = cdf(std::nextafter(xs[i], -std::numeric_limits<double>::infinity()));
        worst = std::max(worst, std::abs(ps[i] - cdf(xs[i])));
        worst = std::max(worst, std::abs(below - left));
    }
    return worst;
}

}  // namespace qmax
