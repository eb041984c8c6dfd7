#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "qmax/extreme_stats.hpp"

namespace {

using qmax::GumbelParams;
using qmax::Support;

TEST(SummaryTest, SingleSample) {
    const std::vector<double> x{5.0};
    const auto s = qmax::summarize(x);
    EXPECT_EQ(s.count, 1u);
    EXPECT_EQ(s.mean, 5.0);
    EXPECT_EQ(s.se, 0.0);
    EXPECT_FALSE(s.se_available());
    EXPECT_THROW(qmax::summarize(std::vector<double>{}), qmax::range_error);
}

TEST(SummaryTest, TwoSamples) {
    const std::vector<double> x{0.0, 1.0};
    const auto s = qmax::summarize(x);
    EXPECT_DOUBLE_EQ(s.mean, 0.5);
    EXPECT_DOUBLE_EQ(s.stdev, std::sqrt(0.5));
    EXPECT_DOUBLE_EQ(s.se, 0.5);
    EXPECT_EQ(s.ecdf(0.0), 0.5);
    EXPECT_EQ(s.ecdf(-0.1), 0.0);
    EXPECT_EQ(s.ecdf(1.0), 1.0);
}

TEST(SummaryTest, NormalSampleMean) {
    std::mt19937_64 gen(8);
    std::normal_distribution<double> nd(3.0, 2.0);
    std::vector<double> x(40000);
    for (auto& v : x) v = nd(gen);
    const auto s = qmax::summarize(x);
    EXPECT_NEAR(s.mean, 3.0, 3.0 * s.se);
    EXPECT_NEAR(s.stdev, 2.0, 0.05);
}

TEST(GumbelFitTest, KnownMoments) {
    // mean 1, variance pi^2 / 6 for a sample of +-a around 1 with a chosen so
    const double sd = std::numbers::pi / std::sqrt(6.0);
    const double a = sd * std::sqrt(0.5);
    const std::vector<double> x{1.0 - a, 1.0 + a};
    const auto g = qmax::gumbel_fit_two_moment(x);
    EXPECT_NEAR(g.scale, 1.0, 1e-14);
    EXPECT_NEAR(g.location, 1.0 - qmax::kEulerGamma, 1e-14);
}

TEST(GumbelFitTest, Degenerate) {
    EXPECT_THROW(qmax::gumbel_fit_two_moment(std::vector<double>{2.0}), qmax::degenerate_sample_error);
    EXPECT_THROW(qmax::gumbel_fit_two_moment(std::vector<double>{2.0, 2.0, 2.0}), qmax::degenerate_sample_error);
}

TEST(GumbelFitTest, AffineEquivariance) {
    const std::vector<double> x{0.3, 1.7, 2.2, 5.0, 0.9};
    const auto g = qmax::gumbel_fit_two_moment(x);
    for (double a : {0.5, 3.0}) {
        for (double b : {-2.0, 10.0}) {
            std::vector<double> y;
            for (double v : x) y.push_back(a * v + b);
            const auto h = qmax::gumbel_fit_two_moment(y);
            EXPECT_NEAR(h.scale, a * g.scale, 1e-12);
            EXPECT_NEAR(h.location, a * g.location + b, 1e-12);
        }
    }
}

TEST(GumbelFitTest, MomentRoundTrip) {
    for (double loc : {-3.0, 0.0, 12.5}) {
        for (double scale : {0.2, 1.0, 6.0}) {
            const GumbelParams g{loc, scale};
            // a two-point sample with the law's mean and variance
            const double half = std::sqrt(g.variance() / 2.0);
            const std::vector<double> x{g.mean() - half, g.mean() + half};
            const auto f = qmax::gumbel_fit_two_moment(x);
            EXPECT_NEAR(f.location, loc, 1e-12 * (1 + std::abs(loc) + scale));
            EXPECT_NEAR(f.scale, scale, 1e-12 * scale);
        }
    }
}

TEST(GumbelFitTest, FittedMomentsEqualSampleMoments) {
    std::mt19937_64 gen(12);
    std::lognormal_distribution<double> ln(0.0, 0.7);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(50 + trial);
        for (auto& v : x) v = ln(gen);
        const auto s = qmax::summarize(x);
        const auto g = qmax::gumbel_fit_two_moment(x);
        EXPECT_NEAR(g.mean(), s.mean, 1e-12 * (1 + std::abs(s.mean)));
        EXPECT_NEAR(g.variance(), s.stdev * s.stdev, 1e-12 * s.stdev * s.stdev);
    }
}

TEST(GumbelFitTest, RecoversParametersFromDraws) {
    const GumbelParams truth{10.0, 2.5};
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> x(100000);
    for (auto& v : x) v = truth.quantile(u(gen));
    const auto g = qmax::gumbel_fit_two_moment(x);
    EXPECT_NEAR(g.location, 10.0, 0.05);
    EXPECT_NEAR(g.scale, 2.5, 0.05);
    EXPECT_LT(qmax::ks_distance(qmax::Ecdf(x), [&](double v) { return truth.cdf(v); }), 0.01);
}

TEST(GumbelTest, QuantileInvertsCdf) {
    const GumbelParams g{1.5, 0.7};
    for (double p : {0.01, 0.3, 0.5, 0.99}) EXPECT_NEAR(g.cdf(g.quantile(p)), p, 1e-13);
}

TEST(KsTest, EcdfAgainstItselfIsZero) {
    const std::vector<double> x{0.1, 0.4, 0.4, 2.0, 3.5};
    const qmax::Ecdf e(x);
    EXPECT_EQ(qmax::ks_distance(e, [&](double v) { return e(v); }), 0.0);
    EXPECT_EQ(qmax::ks_distance(e, [&](double v) { return e(v); }, Support::lattice), 0.0);
}

TEST(KsTest, OnePointAgainstUniform) {
    const std::vector<double> x{0.3};
    const auto uniform = [](double v) { return std::clamp(v, 0.0, 1.0); };
    EXPECT_NEAR(qmax::ks_distance(qmax::Ecdf(x), uniform), 0.7, 1e-15);
    const std::vector<double> y{0.8};
    EXPECT_NEAR(qmax::ks_distance(qmax::Ecdf(y), uniform), 0.8, 1e-15);
}

TEST(KsTest, BoundedByOne) {
    std::mt19937_64 gen(2);
    std::normal_distribution<double> nd;
    std::vector<double> x(200);
    for (auto& v : x) v = nd(gen);
    const qmax::Ecdf e(x);
    for (double shift : {-50.0, -1.0, 0.0, 1.0, 50.0}) {
        const auto cdf = [shift](double v) { return 0.5 * std::erfc(-(v - shift) / std::sqrt(2.0)); };
        for (auto support : {Support::continuous, Support::lattice}) {
            const double d = qmax::ks_distance(e, cdf, support);
            EXPECT_GE(d, 0.0);
            EXPECT_LE(d, 1.0);
        }
    }
}

TEST(KsTest, InvariantUnderMonotoneTransform) {
    std::mt19937_64 gen(6);
    std::exponential_distribution<double> ex(1.0);
    std::vector<double> x(500), y;
    for (auto& v : x) v = ex(gen);
    for (double v : x) y.push_back(std::log(v));
    const auto cdf_x = [](double v) { return v <= 0 ? 0.0 : 1.0 - std::exp(-v); };
    const auto cdf_y = [](double v) { return 1.0 - std::exp(-std::exp(v)); };
    EXPECT_NEAR(qmax::ks_distance(qmax::Ecdf(x), cdf_x), qmax::ks_distance(qmax::Ecdf(y), cdf_y), 1e-12);
}

TEST(KsTest, LatticeAgainstGeometric) {
    // exact geometric ECDF shape: 1/2 at 0, 3/4 at 1, 1 at 2
    const std::vector<double> x{0, 0, 1, 2};
    const auto geo = [](double k) { return k < 0 ? 0.0 : 1.0 - std::pow(0.5, std::floor(k) + 1); };
    EXPECT_NEAR(qmax::ks_distance(qmax::Ecdf(x), geo, Support::lattice), 0.125, 1e-15);
    EXPECT_THROW(qmax::ks_distance(qmax::Ecdf(), geo), qmax::range_error);
}

}  // namespace
