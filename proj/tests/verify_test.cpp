#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "modop/error.hpp"
#include "modop/gswindows.hpp"
#include "modop/verify.hpp"

using namespace modop;

namespace {

const Grid kGrid = Grid::make(1, 8.0, 128);
const KernelOptions kFull{4, 2, 128};

double periodic_distance(double d, double period) { return std::abs(d - period * std::round(d / period)); }

}  // namespace

TEST(BuildH, ConstantSymbolIsTranslatedWindow) {
    // a = 1: H(x, xi, y) = sqrt(2 pi) phi(y - x)
    const SampledFunction phi = gaussian(kGrid, Point{0.0}, 1.0);
    const KernelTensor H = build_H(symbols::one(kGrid), Weight(), Weight(), Weight(), phi, kFull);
    EXPECT_LE(H.n_x(), 32u);
    EXPECT_LE(H.n_xi(), 32u);
    const auto ys = kGrid.coordinates(0);
    double err = 0.0;
    for (std::size_t ix = 0; ix < H.n_x(); ++ix) {
        for (std::size_t ixi = 0; ixi < H.n_xi(); ++ixi) {
            for (std::size_t iy = 0; iy < H.n_y(); ++iy) {
                const double d = periodic_distance(ys[iy] - H.xs[ix], 16.0);
                const double exact = std::sqrt(2 * std::numbers::pi) * std::pow(std::numbers::pi, -0.25) * std::exp(-d * d / 2);
                err = std::max(err, std::abs(H.values[H.index(ix, ixi, iy)] - exact));
            }
        }
    }
    EXPECT_LT(err, 1e-10);
}

TEST(BuildH, LinearInOneOverOmega) {
    const SampledFunction phi = gaussian(kGrid, Point{0.0}, 1.0);
    const Symbol a = symbols::gaussian(kGrid, 1.0, 1.0);
    const KernelOptions opts{8, 4, 64};
    const KernelTensor H1 = build_H(a, Weight(), Weight(), Weight(), phi, opts);
    const KernelTensor H2 = build_H(a, Weight::constant(2.0), Weight(), Weight(), phi, opts);
    for (std::size_t k = 0; k < H1.values.size(); ++k) EXPECT_NEAR(std::abs(H2.values[k] - 0.5 * H1.values[k]), 0.0, 1e-15);
    const KernelTensor Hs = build_H(parse_symbol("scale(-3, gauss_sym 1 1)", kGrid), Weight(), Weight(), Weight(), phi, opts);
    for (std::size_t k = 0; k < H1.values.size(); ++k) EXPECT_NEAR(std::abs(Hs.values[k] + 3.0 * H1.values[k]), 0.0, 1e-14);
}

TEST(BuildH, WeightsV1V2Cancel) {
    const SampledFunction phi = gaussian(kGrid, Point{0.0}, 1.0);
    const Symbol a = symbols::gaussian(kGrid, 1.0, 1.0);
    const KernelOptions opts{8, 4, 64};
    const KernelTensor H = build_H(a, Weight(), Weight(), Weight(), phi, opts);
    const KernelTensor Hv = build_H(a, Weight(), parse_weight("poly 2"), parse_weight("subexp 0.2 1"), phi, opts);
    EXPECT_LT(max_abs_diff(H.values, Hv.values), 1e-12 * max_abs(H.values));
}

TEST(BuildH, ZeroSymbolAndValidation) {
    const SampledFunction phi = gaussian(kGrid, Point{0.0}, 1.0);
    const Symbol zero = Symbol::from_field(PhaseSpaceField(kGrid, kGrid.dual()));
    const KernelTensor H = build_H(zero, Weight(), Weight(), Weight(), phi, KernelOptions{8, 4, 32});
    EXPECT_EQ(max_abs(H.values), 0.0);
    EXPECT_THROW(check_H_decay(H, 0.5), DegenerateInput);
    EXPECT_THROW(build_H(zero, Weight(), Weight(), Weight(), phi, KernelOptions{8, 4, 7}), InvalidArgument);
    EXPECT_THROW(build_H(zero, Weight(), Weight(), Weight(), gaussian(Grid::make(1, 8.0, 64), Point{0.0}, 1.0)),
                 InvalidArgument);
}

TEST(Identity, ConstantAndGaussianSymbols) {
    const SampledFunction phi = gaussian(kGrid, Point{0.0}, 1.0);
    const SampledFunction f = gaussian(kGrid, Point{0.5}, 1.0);
    const IdentityResidual one = check_stft_identity(symbols::one(kGrid), f, phi, Weight(), Weight(), Weight(), kFull);
    EXPECT_LE(one.max_rel, 1e-6);
    const IdentityResidual g =
        check_stft_identity(symbols::gaussian(kGrid, 1.0, 1.0), f, phi, parse_weight("poly 1"), Weight(), Weight(), kFull);
    EXPECT_LE(g.max_rel, 1e-6);
    EXPECT_LE(g.l2_rel, 1e-6);
}

TEST(Identity, ResidualShrinksWithQuadrature) {
    const SampledFunction phi = gaussian(kGrid, Point{0.0}, 1.0);
    const SampledFunction f = gaussian(kGrid, Point{0.5}, 1.0);
    const Symbol a = symbols::gaussian(kGrid, 1.0, 1.0);
    double prev = std::numeric_limits<double>::infinity();
    for (int M : {32, 64, 128}) {
        const double r = check_stft_identity(a, f, phi, Weight(), Weight(), Weight(), KernelOptions{4, 2, M}).max_rel;
        EXPECT_LT(r, prev / 2) << M;
        prev = r;
    }
}

TEST(Decay, ConstantSymbolRateIsHalf) {
    // H ~ e^{-d^2/2}: against d^{1/s} with s = 1/2 the fitted rate is 1/2
    const SampledFunction phi = gaussian(kGrid, Point{0.0}, 1.0);
    const KernelTensor H = build_H(symbols::one(kGrid), Weight(), Weight(), Weight(), phi, kFull);
    const std::vector<KernelDecay> d = check_H_decay(H, 0.5, 1);
    ASSERT_EQ(d.size(), 2u);
    EXPECT_TRUE(d[0].passed);
    EXPECT_NEAR(d[0].r_fitted, 0.5, 0.02);
    EXPECT_GE(d[0].quality, 0.99);
    EXPECT_TRUE(d[1].passed);
    EXPECT_THROW(check_H_decay(H, 0.5, 3), InvalidArgument);
}

TEST(Decay, GaussianSymbolQuarterRate) {
    const SampledFunction phi = gaussian(kGrid, Point{0.0}, 1.0);
    const KernelTensor H = build_H(symbols::gaussian(kGrid, 1.0, 1.0), Weight(), Weight(), Weight(), phi, kFull);
    const std::vector<KernelDecay> d = check_H_decay(H, 0.5);
    EXPECT_TRUE(d[0].passed);
    EXPECT_NEAR(d[0].r_fitted, 0.25, 0.025);
}

TEST(Factorize, TrivialAndExponentialWeights) {
    const SampledFunction phi = gaussian(kGrid, Point{0.0}, 1.0);
    const KernelTensor H = build_H(symbols::one(kGrid), Weight(), Weight(), Weight(), phi, KernelOptions{8, 8, 128});
    const Factorization t = factorize(H, Weight());
    EXPECT_EQ(t.H0.values, H.values);
    EXPECT_EQ(t.reconstruction, 0.0);
    for (const auto& v : t.psi.values) EXPECT_EQ(v, cplx{1.0});
    const Factorization e = factorize(H, parse_weight("subexp 0.125 0.5"));
    EXPECT_LT(e.reconstruction, 1e-14);
    // H0 = sqrt(2 pi) phi(d) e^{d^2 / 8}: still Gaussian, at rate 1/2 - 1/8
    const std::vector<KernelDecay> d = check_H_decay(e.H0, 0.5, 0, kDefaultDecayQuality, &H);
    EXPECT_NEAR(d[0].r_fitted, 0.375, 0.02);
}

TEST(TestSets, DefaultAndRandom) {
    const auto set = default_testset();
    EXPECT_EQ(set.size(), 20u);
    EXPECT_EQ(set.front().id, "hermite 0");
    for (const auto& t : set) EXPECT_NEAR(l2_norm(t.make(kGrid)), 1.0, 1e-8) << t.id;
    const auto a = random_gaussians(5, 42);
    const auto b = random_gaussians(5, 42);
    const auto c = random_gaussians(5, 43);
    ASSERT_EQ(a.size(), 5u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].id, b[i].id);
        EXPECT_EQ(a[i].make(kGrid).values, b[i].make(kGrid).values);
    }
    EXPECT_NE(a[0].id, c[0].id);
}

TEST(EmpiricalBound, IdentityOperatorHasRatioOne) {
    const std::vector<Grid> grids{Grid::make(1, 10.0, 128), Grid::make(1, 10.0, 256)};
    const BoundReport r = empirical_bound(symbols::one(grids[0]), QuantizationParam::scalar(0.0), Weight(), Weight(),
                                          parse_space("Lpq p=2 q=2"), default_testset(), grids);
    ASSERT_EQ(r.ratios.size(), 2u);
    for (const auto& row : r.ratios) {
        EXPECT_EQ(row.size(), 20u);
        for (const auto& e : row) EXPECT_NEAR(e.ratio, 1.0, 1e-8) << e.id;
    }
    EXPECT_LT(r.drift, 1e-8);
    EXPECT_EQ(r.evidence, Evidence::BeurlingEvidence);
    EXPECT_TRUE(r.hypotheses_verified);
    EXPECT_TRUE(r.passed);
}

TEST(EmpiricalBound, Homogeneous) {
    const std::vector<Grid> grids{Grid::make(1, 10.0, 128)};
    const auto tests = random_gaussians(4, 7);
    const MixedNormSpec spec = parse_space("Lpq p=2 q=1");
    const BoundReport base = empirical_bound(parse_symbol("gauss_sym 1 2", grids[0]), QuantizationParam::scalar(0.5),
                                             Weight(), Weight(), spec, tests, grids);
    for (double c : {2.0, 0.5, -1.0}) {
        const std::string text = "scale(" + std::to_string(c) + ", gauss_sym 1 2)";
        const BoundReport r = empirical_bound(parse_symbol(text, grids[0]), QuantizationParam::scalar(0.5), Weight(),
                                              Weight(), spec, tests, grids);
        for (std::size_t i = 0; i < r.ratios[0].size(); ++i) {
            EXPECT_NEAR(r.ratios[0][i].ratio, std::abs(c) * base.ratios[0][i].ratio, 1e-12 * base.ratios[0][i].ratio);
        }
    }
}

TEST(EmpiricalBound, EveryModeNeedsBeurlingEvidence) {
    const std::vector<Grid> grids{Grid::make(1, 10.0, 128)};
    BoundOptions opts;
    opts.mode = ClassMode::EveryR;
    opts.s = opts.sigma = 2.0;
    const BoundReport r = empirical_bound(symbols::subexp(grids[0], 0.1, 2.0, 2.0), QuantizationParam::scalar(0.0),
                                          Weight(), parse_weight("subexp_phase 0.1 2 0.1 2"), parse_space("Lpq p=2 q=2"),
                                          {modulated_gaussian(0.0, 0.0)}, grids, opts);
    if (r.evidence != Evidence::BeurlingEvidence) {
        EXPECT_FALSE(r.hypotheses_verified);
        EXPECT_FALSE(r.passed);
    }
    EXPECT_THROW(empirical_bound(symbols::one(grids[0]), QuantizationParam::scalar(0.0), Weight(), Weight(),
                                 parse_space("Lpq p=2 q=2"), {}, grids),
                 InvalidArgument);
}

TEST(QuantInvariance, ClassUnchangedForPolynomialSymbol) {
    const Grid g = Grid::make(1, 10.0, 64);
    const QuantInvarianceReport r = check_quant_invariance(symbols::x_times_xi(g), Weight::polynomial(2), 1.0, 1.0,
                                                           QuantizationParam::scalar(0.0), QuantizationParam::scalar(0.5));
    EXPECT_TRUE(r.matches);
    EXPECT_EQ(r.before.evidence, Evidence::BeurlingEvidence);
}
