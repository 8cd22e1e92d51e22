#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "modop/grid.hpp"
#include "modop/jet.hpp"
#include "modop/weights.hpp"

namespace modop {

// Univariate factor of a separable symbol term, evaluated as a Taylor jet.
struct Factor {
    // eval(x, m): jet of order m at x. Empty means the constant 1.
    std::function<Jet(double, int)> eval;
    // Polynomial degree, or -1 when the factor is not a polynomial.
    int degree = 0;
    std::string text = "1";

    static Factor one();
    static Factor from_fn(JetFn fn, int degree, std::string text);

    Jet at(double x, int order) const;
    // k-th derivative as a new factor.
    Factor derivative(int k) const;
    Factor conjugated() const;
    bool vanishes() const { return degree == -2; }
};

Factor operator*(const Factor& a, const Factor& b);

struct SeparableTerm {
    cplx coef{1.0, 0.0};
    Factor fx = Factor::one();
    Factor fxi = Factor::one();
};

// Symbol with exact derivatives: a finite sum of products f(x) g(xi).
struct ExactSymbol {
    std::vector<SeparableTerm> terms;

    cplx derivative(int alpha, int beta, double x, double xi) const;
    cplx value(double x, double xi) const { return derivative(0, 0, x, xi); }

    ExactSymbol conjugated() const;
    // d_x^k d_xi^k of every term (vanishing terms dropped).
    ExactSymbol mixed_derivative(int k) const;
    ExactSymbol scaled(cplx c) const;
    std::string describe() const;

    friend ExactSymbol operator+(const ExactSymbol& a, const ExactSymbol& b);
    friend ExactSymbol operator*(const ExactSymbol& a, const ExactSymbol& b);
};

struct SymbolMeta {
    std::string name = "sampled";
    double s = 1.0;
    double sigma = 1.0;
    std::string omega0 = "one";
    ClassMode mode = ClassMode::SomeR;
};

// Phase-space symbol a(x, xi) for d = 1: samples on grid x grid.dual(), and
// optionally an exact representation whose order-0 values match the samples.
struct Symbol {
    PhaseSpaceField field;
    std::optional<ExactSymbol> exact;
    SymbolMeta meta;
    std::vector<std::string> warnings;

    static Symbol from_field(PhaseSpaceField field, std::string name = "sampled");
    static Symbol from_exact(ExactSymbol exact, const Grid& gx, std::string name);

    const Grid& grid_x() const { return field.grid_x; }
    const Grid& grid_xi() const { return field.grid_xi; }

    // Exact value when available, otherwise bilinear interpolation of the samples.
    cplx eval(double x, double xi) const;
    // Same symbol on another spatial grid; needs the exact representation.
    Symbol resampled(const Grid& gx) const;
    Symbol conjugated() const;
};

// Quantization matrix A (d x d, row-major); d = 1 at present.
struct QuantizationParam {
    int d = 1;
    std::vector<double> A{0.0};

    static QuantizationParam scalar(double t, int d = 1);
    double scalar_value() const;
};

namespace symbols {
Symbol one(const Grid& g);
Symbol xi(const Grid& g);
Symbol x_times_xi(const Grid& g);
// <xi>^2 = 1 + xi^2
Symbol bracket_xi2(const Grid& g);
Symbol sin_x(const Grid& g);
// exp(-x^2 / (2 wx^2) - xi^2 / (2 wxi^2)) * e^{i b x}
Symbol gaussian(const Grid& g, double wx, double wxi, double b = 0.0);
// exp(r <x>^{1/s} + r <xi>^{1/sigma})
Symbol subexp(const Grid& g, double r, double s, double sigma);
}  // namespace symbols

// Symbol DSL (see README): `one`, `xi`, `x_xi`, `sin_x`, `<xi>^2`,
// `gauss_sym wx wxi`, `sym prod(poly_xi 2, subexp_x 0.5 1.0)`, sum(...), prod(...).
Symbol parse_symbol(const std::string& text, const Grid& g);

struct GammaReport {
    double value = 0.0;
    int alpha = 0;
    int beta = 0;
    int attained_order = 0;
    std::vector<double> order_sups;  // sup at each |alpha + beta| = k
    double growth = 1.0;             // max over orders of sup(full grid) / sup(inner half box)
    std::string route;               // "exact", "spectral" or "finite-difference"
    std::vector<std::string> warnings;
};

inline constexpr int kMaxSymbolOrder = 6;

// Truncated sup over |alpha + beta| <= K of |d_x^alpha d_xi^beta a| / (h^{|alpha+beta|} alpha!^sigma beta!^s omega).
GammaReport gamma_seminorm(const Symbol& a, const Weight& omega, double s, double sigma, double h,
                           int K = kMaxSymbolOrder);

enum class Evidence { RoumieuEvidence, BeurlingEvidence, Neither };
std::string to_string(Evidence e);

struct ClassificationOptions {
    std::vector<double> h_sweep{4.0, 2.0, 1.0, 0.5, 0.25, 0.125};
    double threshold = 1e6;
    double growth_tol = 2.0;
};

struct HProfileEntry {
    double h = 0.0;
    GammaReport report;
    bool finite = false;  // below threshold and no growth toward the grid edge
    bool stable = false;  // finite and the per-order sups stop increasing at K
};

struct Classification {
    Evidence evidence = Evidence::Neither;
    std::vector<HProfileEntry> profile;
};

Classification classify_symbol(const Symbol& a, const Weight& omega, double s, double sigma,
                               int K = kMaxSymbolOrder, const ClassificationOptions& opts = {});

// ||omega_R^{-1} V_Phi a||_{L^{inf,inf}} with
// omega_R(x, xi, eta, y) = omega(x, xi) e^{-R(|y|^{1/s} + |eta|^{1/sigma})}.
// Coarse grids only: each axis <= 32 points and the 4-D field within budget.
double stft_symbol_check(const Symbol& a, const PhaseSpaceField& window, const Weight& omega, double R, double s,
                         double sigma);

// 2-D Gaussian window on the symbol's phase-space grid.
PhaseSpaceField phase_space_gaussian(const Grid& gx, const Grid& gxi, double spread = 1.0);

inline constexpr double kSpectralGuard = 1e-8;

// a_2 = e^{i <(A1 - A2) D_xi, D_x>} a. Decayed samples go through the FFT
// multiplier e^{i (A1 - A2) eta y}; otherwise exact symbols use the series
// sum_k (-i c)^k / k! d_x^k d_xi^k a (exact for polynomial factors,
// optimally truncated otherwise).
Symbol quantization_change(const Symbol& a, const QuantizationParam& A1, const QuantizationParam& A2);

// Symbol b with Op(b) = Op(a)^*: conjugate, then the multiplier with A1 - A2 = I.
Symbol adjoint_symbol(const Symbol& a);

// True when the transform of the samples is below `tol` (relative) on its
// boundary, so the periodic extension is smooth at grid resolution.
bool spectrally_resolved(const PhaseSpaceField& field, double tol = kSpectralGuard);

}  // namespace modop
