#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "modop/error.hpp"
#include "modop/gswindows.hpp"
#include "modop/psido.hpp"
#include "modop/stft.hpp"

using namespace modop;

namespace {

const QuantizationParam kA0 = QuantizationParam::scalar(0.0);
const QuantizationParam kAhalf = QuantizationParam::scalar(0.5);

SampledFunction modulated(const Grid& g, double x0, double b, double spread) {
    SampledFunction f = gaussian(g, Point{x0}, spread);
    for (std::size_t k = 0; k < f.size(); ++k) f.values[k] *= std::polar(1.0, b * g.point(k)[0]);
    return f;
}

}  // namespace

TEST(ApplyKn, IdentityAndMultipliers) {
    const Grid g = Grid::make(1, 10.0, 128);
    const SampledFunction f = gaussian(g, Point{0.5}, 1.0);
    EXPECT_LT(max_abs_diff(apply_kn(symbols::one(g), f).values, f.values), 1e-12);
    // Op(xi) = -i d/dx and Op(x) = multiplication by x
    const SampledFunction d = apply_kn(symbols::xi(g), gaussian(g, Point{0.0}, 1.0));
    const SampledFunction m = apply_kn(parse_symbol("x", g), f);
    const SampledFunction h0 = gaussian(g, Point{0.0}, 1.0);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double x = g.point(k)[0];
        EXPECT_NEAR(std::abs(d.values[k] - cplx{0.0, x} * h0.values[k]), 0.0, 1e-10);
        EXPECT_NEAR(std::abs(m.values[k] - x * f.values[k]), 0.0, 1e-12);
    }
}

TEST(ApplyKn, HarmonicOscillatorOnHermite) {
    // Op(x^2 + xi^2) h_n = (2n + 1) h_n
    const Grid g = Grid::make(1, 12.0, 256);
    const Symbol a = parse_symbol("sum(poly_x 2, poly_xi 2, const -2)", g);
    for (int n : {0, 1, 5}) {
        const SampledFunction h = hermite(g, n);
        const SampledFunction out = apply_kn(a, h);
        double err = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) err = std::max(err, std::abs(out.values[k] - (2.0 * n + 1) * h.values[k]));
        EXPECT_LT(err, 1e-8) << n;
    }
}

TEST(ApplyKn, FftAndDirectAgree) {
    const Grid g = Grid::make(1, 8.0, 64);
    for (const char* text : {"gauss_sym 1 1", "x_xi", "prod(sin_x, cos_xi)", "sum(xi, gauss_sym 2 0.5)"}) {
        const Symbol a = parse_symbol(text, g);
        const SampledFunction f = modulated(g, -1.0, 1.0, 0.9);
        EXPECT_LT(max_abs_diff(apply_kn(a, f, ApplyMethod::Fft).values, apply_kn(a, f, ApplyMethod::Direct).values), 1e-10)
            << text;
    }
}

TEST(ApplyKn, Linearity) {
    const Grid g = Grid::make(1, 8.0, 64);
    const Symbol a = parse_symbol("prod(gauss_x 2, poly_xi 1)", g);
    const SampledFunction f = modulated(g, 1.0, -0.5, 1.0);
    const SampledFunction h = modulated(g, -1.0, 0.5, 0.8);
    SampledFunction comb(g);
    const cplx c{0.5, 2.0};
    for (std::size_t k = 0; k < g.size(); ++k) comb.values[k] = c * f.values[k] + h.values[k];
    const SampledFunction lhs = apply_kn(a, comb);
    const SampledFunction af = apply_kn(a, f);
    const SampledFunction ah = apply_kn(a, h);
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(std::abs(lhs.values[k] - (c * af.values[k] + ah.values[k])), 0.0, 1e-12);
}

TEST(ApplyKn, RejectsUndecayedSpectrum) {
    const Grid g = Grid::make(1, 8.0, 64);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0.0, 1.0);
    SampledFunction f(g);
    for (auto& v : f.values) v = n(rng);
    EXPECT_THROW(apply_kn(symbols::one(g), f), AliasingError);
    EXPECT_THROW(apply_kn(symbols::one(g), SampledFunction(Grid::make(2, 4.0, 16))), InvalidArgument);
}

TEST(ApplyKn, ResamplesExactSymbols) {
    const Grid g = Grid::make(1, 8.0, 64);
    const Symbol a = symbols::x_times_xi(Grid::make(1, 4.0, 32));
    const SampledFunction f = gaussian(g, Point{0.0}, 1.0);
    EXPECT_LT(max_abs_diff(apply_kn(a, f).values, apply_kn(symbols::x_times_xi(g), f).values), 1e-12);
}

TEST(Dense, IdentityMatrix) {
    const Grid g = Grid::make(1, 4.0, 32);
    const Eigen::MatrixXcd M = dense_matrix(symbols::one(g), kA0, g);
    EXPECT_LT((M - Eigen::MatrixXcd::Identity(32, 32)).cwiseAbs().maxCoeff(), 1e-12);
    const Eigen::MatrixXcd W = dense_matrix(symbols::one(g), kAhalf, g);
    EXPECT_LT((W - Eigen::MatrixXcd::Identity(32, 32)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_THROW(dense_matrix(symbols::one(g), kA0, Grid::make(1, 4.0, 128)), BudgetError);
}

TEST(Dense, WeylOfRealSymbolIsHermitian) {
    const Grid g = Grid::make(1, 6.0, 48);
    for (const char* text : {"x_xi", "gauss_sym 1 2", "prod(sin_x, poly_xi 2)"}) {
        const Eigen::MatrixXcd M = dense_matrix(parse_symbol(text, g), kAhalf, g);
        EXPECT_LT((M - M.adjoint()).cwiseAbs().maxCoeff(), 1e-12 * M.cwiseAbs().maxCoeff()) << text;
    }
    const Eigen::MatrixXcd K = dense_matrix(symbols::x_times_xi(g), kA0, g);
    EXPECT_GT((K - K.adjoint()).cwiseAbs().maxCoeff(), 0.1);
}

TEST(Dense, MatchesFftApplicationOnResolvedSymbols) {
    // midpoints x - A(x - y) of far pairs wrap on the torus; N = 64 pushes that below 1e-12
    const Grid g = Grid::make(1, std::sqrt(32 * std::numbers::pi), 64);
    const Symbol a = symbols::gaussian(g, 1.0, 1.0);
    const SampledFunction f = modulated(g, 0.0, 0.0, 1.0);
    for (double t : {0.0, 0.5, 1.0}) {
        const QuantizationParam A = QuantizationParam::scalar(t);
        const SampledFunction viaFft = apply(a, A, f);
        const SampledFunction viaMatrix = apply_matrix(dense_matrix(a, A, g), f);
        EXPECT_LT(max_abs_diff(viaFft.values, viaMatrix.values), 1e-10) << t;
    }
}

TEST(Apply, QuantizationConsistency) {
    // Op_{1/2}(x xi) = Op_0(x xi - i/2)
    const Grid g = Grid::make(1, 10.0, 128);
    const SampledFunction f = modulated(g, 0.5, 1.0, 1.0);
    const SampledFunction weyl = apply(symbols::x_times_xi(g), kAhalf, f);
    SampledFunction expected = apply_kn(symbols::x_times_xi(g), f);
    for (std::size_t k = 0; k < g.size(); ++k) expected.values[k] -= cplx{0.0, 0.5} * f.values[k];
    EXPECT_LT(max_abs_diff(weyl.values, expected.values), 1e-9);
}

TEST(Apply, AdjointSymbolGivesAdjointOperator) {
    const Grid g = Grid::make(1, 8.0, 64);
    const Symbol a = symbols::gaussian(g, 1.0, 0.8, 1.0);
    const Symbol b = adjoint_symbol(a);
    const SampledFunction f = modulated(g, 0.5, 0.5, 1.0);
    const SampledFunction h = modulated(g, -0.5, -1.0, 0.9);
    const cplx lhs = inner(apply_kn(a, f), h);
    const cplx rhs = inner(f, apply_kn(b, h));
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-8);
}

TEST(Apply, WeylOfRealSymbolIsSymmetric) {
    const Grid g = Grid::make(1, 8.0, 64);
    const Symbol a = symbols::gaussian(g, 1.2, 0.9);
    const SampledFunction f = modulated(g, 0.5, 0.5, 1.0);
    const SampledFunction h = modulated(g, -0.5, -1.0, 0.9);
    EXPECT_NEAR(std::abs(inner(apply(a, kAhalf, f), h) - inner(f, apply(a, kAhalf, h))), 0.0, 1e-8);
}
