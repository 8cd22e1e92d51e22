#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "modop/grid.hpp"
#include "modop/gswindows.hpp"
#include "modop/modspace.hpp"
#include "modop/symbols.hpp"
#include "modop/weights.hpp"

namespace modop {

// H(x, xi, y) on a coarse (x, xi) selection of the phase-space grid and the
// full spatial grid in y. Flat index ((ix * n_xi) + ixi) * n_y + iy.
struct KernelTensor {
    std::vector<double> xs;
    std::vector<double> xis;
    std::vector<int> x_index;   // positions of xs in grid_y
    std::vector<int> xi_index;  // positions of xis in grid_y.dual()
    Grid grid_y;
    std::vector<cplx> values;
    int quadrature_points = 0;
    std::string description;
    std::vector<std::string> warnings;

    std::size_t n_x() const { return xs.size(); }
    std::size_t n_xi() const { return xis.size(); }
    std::size_t n_y() const { return grid_y.size(); }
    std::size_t index(std::size_t ix, std::size_t ixi, std::size_t iy) const { return (ix * n_xi() + ixi) * n_y() + iy; }
};

// The coarse selection takes at most 32 points per axis, spaced by the
// stride and centered on the origin. Keeping |xi| well inside pi/dx leaves
// room for the zeta quadrature, which spans the same band.
struct KernelOptions {
    int x_stride = 4;
    int xi_stride = 2;
    // Points in the z quadrature (spacing dx, centered); zeta is its FFT dual.
    int quadrature_points = 64;
};

// With Phi = a(x + z, xi + zeta) / (omega(x, xi) v1(z) v2(zeta)) and phi2 = phi v1:
// H(x, xi, y) = (2 pi)^{-1/2} int int conj(Phi) phi2(z) v2(zeta) e^{i (y - x - z) zeta} dz dzeta.
KernelTensor build_H(const Symbol& a, const Weight& omega, const Weight& v1, const Weight& v2,
                     const SampledFunction& phi, const KernelOptions& opts = {});

struct IdentityResidual {
    double max_abs = 0.0;   // max |lhs - rhs|
    double max_rel = 0.0;   // max |lhs - rhs| / max |lhs|
    double l2_rel = 0.0;    // ||lhs - rhs||_2 / ||lhs||_2
    double lhs_scale = 0.0;  // max |lhs|
    std::vector<std::string> warnings;
};

// V_phi(Op(a) f)(x, xi) against (2 pi)^{-1} sum_y f(y) e^{-i y xi} conj(H(x, xi, y)) dy omega(x, xi)
// on the coarse selection.
IdentityResidual check_stft_identity(const Symbol& a, const SampledFunction& f, const SampledFunction& phi,
                                     const Weight& omega, const Weight& v1, const Weight& v2,
                                     const KernelOptions& opts = {});

// Same comparison against a kernel that was already built.
IdentityResidual stft_identity_residual(const KernelTensor& H, const Symbol& a, const SampledFunction& f,
                                        const SampledFunction& phi, const Weight& omega);

struct KernelDecay {
    int order = 0;
    double r_fitted = 0.0;
    double quality = 0.0;
    std::size_t samples = 0;
    bool passed = false;
};

// For alpha = 0..orders, fits the envelope max_{x, xi} |d_y^alpha H| at distance
// |x - y| (periodic, at most L) against c - r |x - y|^{1/s}. Envelope values below 1e-14 of the
// largest are dropped. Throws DegenerateInput for a zero tensor.
// With `mask`, distances are kept where the envelope of `mask` clears the floor.
std::vector<KernelDecay> check_H_decay(const KernelTensor& H, double s, int orders = 0,
                                       double threshold = kDefaultDecayQuality, const KernelTensor* mask = nullptr);

struct Factorization {
    KernelTensor H0;
    SampledFunction psi;           // 1 / v0 on the y grid
    double reconstruction = 0.0;   // max |H - H0 psi(y - x)| / max |H|
};

// H0(x, xi, y) = H(x, xi, y) v0(y - x), psi = 1 / v0, with y - x wrapped into [-L, L].
Factorization factorize(const KernelTensor& H, const Weight& v0);

struct TestFunction {
    std::string id;
    std::function<SampledFunction(const Grid&)> make;
};

// Hermite 0..10 plus Gaussians shifted and modulated on a small lattice.
std::vector<TestFunction> default_testset();

// Gaussian of the given spread centered at x0 times e^{i b x}.
TestFunction modulated_gaussian(double x0, double b, double spread = 1.0);

// Shifts and modulations drawn uniformly from [-max_shift, max_shift] x [-max_freq, max_freq].
std::vector<TestFunction> random_gaussians(int count, std::uint64_t seed, double max_shift = 3.0,
                                           double max_freq = 3.0);

struct BoundOptions {
    std::string window = "gauss 0 1";
    double drift_tolerance = 0.1;
    double floor = 1e-12;  // test functions with a smaller denominator are skipped
    double s = 1.0;
    double sigma = 1.0;
    ClassMode mode = ClassMode::SomeR;
};

struct RatioEntry {
    std::string id;
    double ratio = 0.0;
};

struct BoundReport {
    std::vector<std::vector<RatioEntry>> ratios;  // one list per refinement grid
    std::vector<double> sups;                      // sup ratio per refinement
    double sup_ratio = 0.0;                        // sup on the finest grid
    double drift = 0.0;                            // |sup(coarse) - sup(fine)| / sup(fine), worst consecutive pair
    Evidence evidence = Evidence::Neither;         // classification of a against omega0
    bool hypotheses_verified = false;
    bool passed = false;  // finite sup and drift within tolerance; never set without verified hypotheses
    std::vector<std::string> warnings;
};

// ||Op_A(a) f||_{M(omega, B)} / ||f||_{M(omega0 omega, B)} over the test set, on each grid.
BoundReport empirical_bound(const Symbol& a, const QuantizationParam& A, const Weight& omega, const Weight& omega0,
                            const MixedNormSpec& spec, const std::vector<TestFunction>& testset,
                            const std::vector<Grid>& refinements, const BoundOptions& opts = {});

struct QuantInvarianceReport {
    Classification before;
    Classification after;
    bool matches = false;
    std::vector<std::string> warnings;
};

QuantInvarianceReport check_quant_invariance(const Symbol& a, const Weight& omega, double s, double sigma,
                                             const QuantizationParam& A1, const QuantizationParam& A2);

}  // namespace modop
