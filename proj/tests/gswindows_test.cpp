#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "modop/error.hpp"
#include "modop/gswindows.hpp"
#include "modop/stft.hpp"

using namespace modop;

namespace {
const Grid kGrid = Grid::make(1, 10.0, 256);
}

TEST(Gaussian, UnitNorm) {
    EXPECT_NEAR(l2_norm(gaussian(kGrid, Point{0.0}, 1.0)), 1.0, 1e-10);
    EXPECT_NEAR(l2_norm(gaussian(kGrid, Point{0.0}, 2.0)), 1.0, 1e-10);
    EXPECT_NEAR(l2_norm(gaussian(Grid::make(2, 8.0, 64), Point{1.0, -1.0}, 1.0)), 1.0, 1e-10);
    EXPECT_THROW(gaussian(kGrid, Point{0.0}, 0.0), InvalidArgument);
}

TEST(Gaussian, PeakAtNearestPoint) {
    const SampledFunction f = gaussian(kGrid, Point{3.0}, 1.0);
    const auto xs = kGrid.coordinates(0);
    std::size_t best = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (std::abs(f.values[k]) > std::abs(f.values[best])) best = k;
    }
    EXPECT_NEAR(xs[best], 3.0, kGrid.axis(0).spacing() / 2);
}

TEST(Hermite, LowOrdersClosedForm) {
    const SampledFunction h0 = hermite(kGrid, 0);
    const SampledFunction h1 = hermite(kGrid, 1);
    const SampledFunction h2 = hermite(kGrid, 2);
    EXPECT_LT(max_abs_diff(h0.values, gaussian(kGrid, Point{0.0}, 1.0).values), 1e-12);
    const auto xs = kGrid.coordinates(0);
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double g = std::pow(std::numbers::pi, -0.25) * std::exp(-xs[k] * xs[k] / 2);
        EXPECT_NEAR(h1.values[k].real(), std::sqrt(2.0) * xs[k] * g, 1e-12);
        EXPECT_NEAR(h2.values[k].real(), (2 * xs[k] * xs[k] - 1) / std::sqrt(2.0) * g, 1e-12);
    }
}

TEST(Hermite, Orthonormal) {
    std::vector<SampledFunction> h;
    for (int n = 0; n <= 10; ++n) h.push_back(hermite(kGrid, n));
    for (int m = 0; m <= 10; ++m) {
        for (int n = 0; n <= 10; ++n) {
            EXPECT_NEAR(std::abs(inner(h[m], h[n])), m == n ? 1.0 : 0.0, 1e-8) << m << "," << n;
        }
    }
}

TEST(Hermite, EigenfunctionsOfFourier) {
    // hat h_n = (-i)^n h_n
    for (int n : {1, 4, 9}) {
        const SampledFunction hat = fourier(hermite(kGrid, n));
        const SampledFunction h = hermite(kGrid.dual(), n);
        const cplx phase = std::pow(cplx{0.0, -1.0}, n);
        double err = 0.0;
        for (std::size_t k = 0; k < h.size(); ++k) err = std::max(err, std::abs(hat.values[k] - phase * h.values[k]));
        EXPECT_LT(err, 1e-10);
    }
}

TEST(Hermite, ResolutionGuard) {
    const Grid small = Grid::make(1, 4.0, 32);
    EXPECT_NO_THROW(hermite(small, 2));
    EXPECT_THROW(hermite(small, 40), ResolutionError);
    EXPECT_THROW(hermite(kGrid, -1), InvalidArgument);
    EXPECT_THROW(hermite(Grid::make(2, 4.0, 16), 1), InvalidArgument);
}

TEST(WindowDsl, ParsesGaussAndHermite) {
    EXPECT_LT(max_abs_diff(parse_window("gauss 0 1", kGrid).values, gaussian(kGrid, Point{0.0}, 1.0).values), 1e-15);
    EXPECT_LT(max_abs_diff(parse_window("hermite 3", kGrid).values, hermite(kGrid, 3).values), 1e-15);
    const Grid g2 = Grid::make(2, 5.0, 16);
    EXPECT_LT(max_abs_diff(parse_window("gauss 1 -1 0.5", g2).values, gaussian(g2, Point{1.0, -1.0}, 0.5).values), 1e-15);
    EXPECT_THROW(parse_window("box 1", kGrid), InvalidArgument);
    EXPECT_THROW(parse_window("gauss 0", kGrid), InvalidArgument);
}

TEST(GsDecay, GaussianHalfHalf) {
    // log|f| = c - x^2 / 2, so the fitted rate against |x|^2 is 1/2 on both sides.
    const DecayReport r = check_gs_decay(gaussian(kGrid, Point{0.0}, 1.0), 0.5, 0.5);
    EXPECT_TRUE(r.passed);
    EXPECT_NEAR(r.r_fitted_space, 0.5, 1e-3);
    EXPECT_NEAR(r.r_fitted_freq, 0.5, 1e-3);
    EXPECT_GE(r.regression_quality, 0.99);
}

TEST(GsDecay, GaussianInS11) {
    const DecayReport r = check_gs_decay(gaussian(kGrid, Point{0.0}, 1.0), 1.0, 1.0);
    EXPECT_GT(r.r_fitted_space, 0.0);
    EXPECT_GT(r.r_fitted_freq, 0.0);
}

TEST(GsDecay, FlatFunctionFails) {
    SampledFunction one(kGrid, std::vector<cplx>(kGrid.size(), 1.0));
    EXPECT_FALSE(check_gs_decay(one, 1.0, 1.0).passed);
    EXPECT_THROW(check_gs_decay(SampledFunction(kGrid), 1.0, 1.0), DegenerateInput);
}

TEST(GsDecay, FourierExchangeSymmetry) {
    const SampledFunction f = gaussian(kGrid, Point{0.0}, 1.4);
    const DecayReport a = check_gs_decay(f, 0.5, 1.0);
    const DecayReport b = check_gs_decay(fourier(f), 1.0, 0.5);
    EXPECT_NEAR(a.r_fitted_space, b.r_fitted_freq, 1e-6);
    EXPECT_NEAR(a.quality_space, b.quality_freq, 1e-6);
}

TEST(FitLine, ExactLineAndDegenerateCases) {
    const LineFit f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
    EXPECT_NEAR(f.slope, 2.0, 1e-14);
    EXPECT_NEAR(f.intercept, 1.0, 1e-14);
    EXPECT_NEAR(f.r_squared, 1.0, 1e-14);
    EXPECT_EQ(fit_line({0, 1}, {0, 1}).r_squared, 0.0);
    EXPECT_EQ(fit_line({0, 1, 2}, {4, 4, 4}).r_squared, 0.0);
}

TEST(GfSeminorm, PeakValueAtOrderZero) {
    const SeminormReport r = gf_seminorm(gaussian(kGrid, Point{0.0}, 1.0), 0.5, 0.5, 1.0, 0);
    EXPECT_NEAR(r.value, std::pow(std::numbers::pi, -0.25), 1e-10);
    EXPECT_EQ(r.attained_order, 0);
    EXPECT_EQ(gf_seminorm(SampledFunction(kGrid), 0.5, 0.5, 1.0, 4).value, 0.0);
}

TEST(GfSeminorm, MonotoneInHAndHomogeneous) {
    const SampledFunction f = hermite(kGrid, 2);
    const double h1 = gf_seminorm(f, 0.5, 0.5, 1.0, 6).value;
    const double h2 = gf_seminorm(f, 0.5, 0.5, 2.0, 6).value;
    EXPECT_LE(h2, h1);
    SampledFunction g = f;
    for (auto& v : g.values) v *= cplx{0.0, -3.0};
    // x^6 amplifies rounding in the tails, so homogeneity holds to ~1e-9
    EXPECT_NEAR(gf_seminorm(g, 0.5, 0.5, 1.0, 6).value, 3.0 * h1, 1e-7 * h1);
}

TEST(GfSeminorm, BoundaryWarning) {
    SampledFunction one(kGrid, std::vector<cplx>(kGrid.size(), 1.0));
    EXPECT_FALSE(gf_seminorm(one, 1.0, 1.0, 1.0, 2).warnings.empty());
    EXPECT_TRUE(gf_seminorm(gaussian(kGrid, Point{0.0}, 1.0), 1.0, 1.0, 1.0, 2).warnings.empty());
}

TEST(GfSeminorm, SpectralAgreesWithFiniteDifferences) {
    // d/dx of the Gaussian by central differences on a fine grid.
    const Grid fine = Grid::make(1, 10.0, 4096);
    const SampledFunction f = gaussian(fine, Point{0.0}, 1.0);
    const double dx = fine.axis(0).spacing();
    double fd = 0.0;
    for (std::size_t k = 1; k + 1 < f.size(); ++k) fd = std::max(fd, std::abs(f.values[k + 1] - f.values[k - 1]) / (2 * dx));
    // beta = 1 only: sup |f'| = pi^{-1/4} e^{-1/2}
    const double exact = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5);
    EXPECT_NEAR(fd, exact, 1e-5);
    EXPECT_NEAR(std::abs(spectral_derivative(gaussian(kGrid, Point{0.0}, 1.0), Index{1, 0, 0, 0}).values[256 / 2 - 13]),
                std::pow(std::numbers::pi, -0.25) * 1.015625 * std::exp(-1.015625 * 1.015625 / 2), 1e-10);
}
