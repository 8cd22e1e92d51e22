#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "modop/error.hpp"
#include "modop/gswindows.hpp"
#include "modop/stft.hpp"

using namespace modop;

namespace {

const double kPi = std::numbers::pi;

SampledFunction modulate(SampledFunction f, double b) {
    const auto xs = f.grid.coordinates(0);
    for (std::size_t k = 0; k < xs.size(); ++k) f.values[k] *= std::polar(1.0, b * xs[k]);
    return f;
}

SampledFunction random_function(const Grid& g, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    SampledFunction f(g);
    for (auto& v : f.values) v = cplx{n(rng), n(rng)};
    return f;
}

}  // namespace

TEST(Fourier, GaussianIsFixedPoint) {
    const Grid g = Grid::make(1, 10.0, 256);
    const SampledFunction fhat = fourier(gaussian(g, Point{0.0}, 1.0));
    EXPECT_EQ(fhat.grid, g.dual());
    EXPECT_LT(max_abs_diff(fhat.values, gaussian(g.dual(), Point{0.0}, 1.0).values), 1e-10);
}

TEST(Fourier, WideGaussianMatchesClosedForm) {
    // f = pi^{-1/4} s^{-1/2} e^{-x^2/(2 s^2)}  ->  fhat = pi^{-1/4} s^{1/2} e^{-s^2 xi^2 / 2}
    const Grid g = Grid::make(1, 20.0, 400);
    const double s = 2.0;
    const SampledFunction fhat = fourier(gaussian(g, Point{0.0}, s));
    const auto xis = fhat.grid.coordinates(0);
    double err = 0.0;
    for (std::size_t k = 0; k < xis.size(); ++k) {
        const double exact = std::pow(kPi, -0.25) * std::sqrt(s) * std::exp(-s * s * xis[k] * xis[k] / 2);
        err = std::max(err, std::abs(fhat.values[k] - exact));
    }
    EXPECT_LT(err, 1e-10);
}

TEST(Fourier, ParsevalAndInverse) {
    std::mt19937_64 rng(7);
    for (int N : {32, 40, 64, 90}) {
        const Grid g = Grid::make(1, 3.0, N);
        const SampledFunction f = random_function(g, rng);
        const SampledFunction fhat = fourier(f);
        EXPECT_NEAR(l2_norm(fhat), l2_norm(f), 1e-10 * l2_norm(f));
        EXPECT_LT(max_abs_diff(inverse_fourier(fhat).values, f.values), 1e-12);
    }
}

TEST(Fourier, ModulationShiftsTheSpectrum) {
    const Grid g = Grid::make(1, 10.0, 256);
    const double dxi = g.axis(0).freq_spacing();
    const int shift = 7;
    const SampledFunction fhat = fourier(modulate(gaussian(g, Point{0.0}, 1.0), shift * dxi));
    const SampledFunction base = fourier(gaussian(g, Point{0.0}, 1.0));
    for (int m = shift; m < 256; ++m) {
        EXPECT_NEAR(std::abs(fhat.values[static_cast<std::size_t>(m)] - base.values[static_cast<std::size_t>(m - shift)]), 0.0,
                    1e-10);
    }
}

TEST(Fourier, TwoDimensionalSeparable) {
    const Grid g = Grid::make(2, 8.0, 64);
    const SampledFunction fhat = fourier(gaussian(g, Point{0.0, 0.0}, 1.0));
    EXPECT_LT(max_abs_diff(fhat.values, gaussian(g.dual(), Point{0.0, 0.0}, 1.0).values), 1e-10);
}

TEST(PartialFourier, BlocksComposeToFullTransform) {
    const Grid g = Grid::make(1, 6.0, 32);
    std::mt19937_64 rng(3);
    const PhaseSpaceField F = PhaseSpaceField::from_function(random_function(g.product(g), rng), 1);
    const PhaseSpaceField a = partial_fourier(partial_fourier(F, FieldBlock::First), FieldBlock::Second);
    const SampledFunction full = fourier(F.as_function());
    EXPECT_LT(max_abs_diff(a.values, full.values), 1e-10);
}

TEST(PartialFourier, TwiceIsParity) {
    const Grid g = Grid::make(1, 6.0, 32);
    std::mt19937_64 rng(4);
    const PhaseSpaceField F = PhaseSpaceField::from_function(random_function(g.product(g), rng), 1);
    const PhaseSpaceField twice = partial_fourier(partial_fourier(F, FieldBlock::First), FieldBlock::First);
    // F(-x) on the grid: index k -> (N - k) mod N
    for (std::size_t i = 0; i < 32; ++i) {
        for (std::size_t j = 0; j < 32; ++j) {
            EXPECT_NEAR(std::abs(twice.at(i, j) - F.at((32 - i) % 32, j)), 0.0, 1e-10);
        }
    }
}

TEST(PartialFourier, SeparableFirstBlock) {
    const Grid g = Grid::make(1, 10.0, 64);
    const SampledFunction f = gaussian(g, Point{0.0}, 1.0);
    const SampledFunction h = gaussian(g, Point{1.0}, 0.7);
    PhaseSpaceField F(g, g);
    for (std::size_t i = 0; i < 64; ++i) {
        for (std::size_t j = 0; j < 64; ++j) F.at(i, j) = f.values[i] * h.values[j];
    }
    const PhaseSpaceField T = partial_fourier(F, FieldBlock::First);
    const SampledFunction fhat = gaussian(g.dual(), Point{0.0}, 1.0);
    EXPECT_EQ(T.grid_x, g.dual());
    double err = 0.0;
    for (std::size_t i = 0; i < 64; ++i) {
        for (std::size_t j = 0; j < 64; ++j) err = std::max(err, std::abs(T.at(i, j) - fhat.values[i] * h.values[j]));
    }
    EXPECT_LT(err, 1e-10);
}

TEST(SpectralDerivative, GaussianDerivatives) {
    const Grid g = Grid::make(1, 10.0, 256);
    const SampledFunction f = gaussian(g, Point{0.0}, 1.0);
    const SampledFunction d1 = spectral_derivative(f, Index{1, 0, 0, 0});
    const SampledFunction d2 = spectral_derivative(f, Index{2, 0, 0, 0});
    const auto xs = g.coordinates(0);
    for (std::size_t k = 0; k < xs.size(); ++k) {
        EXPECT_NEAR(std::abs(d1.values[k] + xs[k] * f.values[k]), 0.0, 1e-10);
        EXPECT_NEAR(std::abs(d2.values[k] - (xs[k] * xs[k] - 1) * f.values[k]), 0.0, 1e-9);
    }
}

TEST(Stft, ZeroInputAndZeroWindow) {
    const Grid g = Grid::make(1, 5.0, 32);
    const SampledFunction phi = gaussian(g, Point{0.0}, 1.0);
    EXPECT_EQ(max_abs(stft(SampledFunction(g), phi).values), 0.0);
    EXPECT_THROW(stft(phi, SampledFunction(g)), InvalidArgument);
    EXPECT_THROW(stft(phi, gaussian(Grid::make(1, 5.0, 64), Point{0.0}, 1.0)), InvalidArgument);
}

TEST(Stft, GaussianAmbiguityClosedForm) {
    // V_phi phi(x, xi) = (2 pi)^{-1/2} exp(-x^2/4 - xi^2/4 - i x xi / 2)
    const Grid g = Grid::make(1, 10.0, 128);
    const SampledFunction phi = gaussian(g, Point{0.0}, 1.0);
    const PhaseSpaceField V = stft(phi, phi);
    const auto xs = g.coordinates(0);
    const auto xis = g.dual().coordinates(0);
    EXPECT_NEAR(std::abs(V.at(64, 64)), 1.0 / std::sqrt(2 * kPi), 1e-8);
    double err = 0.0;
    for (std::size_t i = 32; i < 96; ++i) {
        for (std::size_t j = 0; j < 128; ++j) {
            const double x = xs[i];
            const double xi = xis[j];
            const cplx exact = std::exp(cplx{-(x * x + xi * xi) / 4, -x * xi / 2}) / std::sqrt(2 * kPi);
            err = std::max(err, std::abs(V.at(i, j) - exact));
        }
    }
    EXPECT_LT(err, 1e-10);
}

TEST(Stft, MoyalForHermiteFunctions) {
    const Grid g = Grid::make(1, 10.0, 256);
    const SampledFunction phi = gaussian(g, Point{0.0}, 1.0);
    for (int n : {0, 3, 7, 10}) {
        const SampledFunction f = hermite(g, n);
        const PhaseSpaceField V = stft(f, phi);
        const double norm = l2_norm(V.as_function());
        EXPECT_NEAR(norm, l2_norm(f) * l2_norm(phi), 1e-6);
    }
}

TEST(Stft, ModulationCovariance) {
    const Grid g = Grid::make(1, 10.0, 128);
    const SampledFunction phi = gaussian(g, Point{0.0}, 1.0);
    const SampledFunction f = gaussian(g, Point{1.0}, 0.8);
    const int shift = 5;
    const PhaseSpaceField V = stft(f, phi);
    const PhaseSpaceField W = stft(modulate(f, shift * g.axis(0).freq_spacing()), phi);
    double err = 0.0;
    for (std::size_t i = 0; i < 128; ++i) {
        for (std::size_t j = shift; j < 128; ++j) err = std::max(err, std::abs(std::abs(W.at(i, j)) - std::abs(V.at(i, j - shift))));
    }
    EXPECT_LT(err, 1e-8);
}

TEST(Stft, TranslationCovariance) {
    const Grid g = Grid::make(1, 10.0, 128);
    const SampledFunction phi = gaussian(g, Point{0.0}, 1.0);
    const SampledFunction f = gaussian(g, Point{-1.0}, 1.3);
    const PhaseSpaceField V = stft(f, phi);
    const PhaseSpaceField W = stft(circular_shift(f, Index{9, 0, 0, 0}), phi);
    double err = 0.0;
    for (std::size_t i = 0; i < 128; ++i) {
        for (std::size_t j = 0; j < 128; ++j) err = std::max(err, std::abs(std::abs(W.at(i, j)) - std::abs(V.at((i + 128 - 9) % 128, j))));
    }
    EXPECT_LT(err, 1e-12);
}

TEST(Stft, LinearInSignalConjugateLinearInWindow) {
    const Grid g = Grid::make(1, 4.0, 32);
    std::mt19937_64 rng(11);
    const SampledFunction f = random_function(g, rng);
    const SampledFunction h = random_function(g, rng);
    const SampledFunction phi = random_function(g, rng);
    const cplx c{0.3, -1.2};
    SampledFunction comb(g);
    SampledFunction cphi(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        comb.values[k] = c * f.values[k] + h.values[k];
        cphi.values[k] = c * phi.values[k];
    }
    const PhaseSpaceField A = stft(comb, phi);
    const PhaseSpaceField B = stft(f, phi);
    const PhaseSpaceField C = stft(h, phi);
    const PhaseSpaceField D = stft(f, cphi);
    for (std::size_t k = 0; k < A.values.size(); ++k) {
        EXPECT_NEAR(std::abs(A.values[k] - (c * B.values[k] + C.values[k])), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(D.values[k] - std::conj(c) * B.values[k]), 0.0, 1e-12);
    }
}

TEST(Istft, RoundTripAndLinearity) {
    const Grid g = Grid::make(1, 10.0, 128);
    const SampledFunction phi = gaussian(g, Point{0.0}, 1.0);
    const SampledFunction f = hermite(g, 4);
    const PhaseSpaceField V = stft(f, phi);
    const SampledFunction back = istft(V, phi);
    SampledFunction diff(g);
    for (std::size_t k = 0; k < g.size(); ++k) diff.values[k] = back.values[k] - f.values[k];
    EXPECT_LT(l2_norm(diff) / l2_norm(f), 1e-6);

    EXPECT_EQ(max_abs(istft(PhaseSpaceField(g, g.dual()), phi).values), 0.0);
    PhaseSpaceField scaled = V;
    for (auto& v : scaled.values) v *= cplx{2.0, 1.0};
    const SampledFunction sb = istft(scaled, phi);
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(std::abs(sb.values[k] - cplx{2.0, 1.0} * back.values[k]), 0.0, 1e-12);
}

TEST(Stft, TwoDimensionalMoyal) {
    const Grid g = Grid::make(2, 6.0, 24);
    const SampledFunction phi = gaussian(g, Point{0.0, 0.0}, 1.0);
    const SampledFunction f = gaussian(g, Point{0.5, -0.5}, 0.9);
    const PhaseSpaceField V = stft(f, phi);
    EXPECT_NEAR(l2_norm(V.as_function()), l2_norm(f) * l2_norm(phi), 1e-6);
}
