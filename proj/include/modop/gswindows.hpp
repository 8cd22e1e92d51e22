#pragma once

#include <string>
#include <vector>

#include "modop/grid.hpp"

namespace modop {

// pi^{-d/4} spread^{-d/2} exp(-|x - center|^2 / (2 spread^2)); unit L2 norm.
SampledFunction gaussian(const Grid& g, const Point& center, double spread);

// L2-normalized Hermite function h_n (d = 1) via the three-term recurrence.
// Throws ResolutionError when sqrt(2n+1) exceeds 0.75 min(L, pi/dx).
SampledFunction hermite(const Grid& g, int n);

// Window DSL: `gauss c spread` (`gauss c1 c2 spread` in 2-D), `hermite n`.
SampledFunction parse_window(const std::string& text, const Grid& g);

struct DecayReport {
    double r_fitted_space = 0.0;
    double r_fitted_freq = 0.0;
    double s = 0.0;
    double sigma = 0.0;
    double quality_space = 0.0;
    double quality_freq = 0.0;
    double regression_quality = 0.0;  // min of the two sides
    bool passed = false;
};

inline constexpr double kDecayFloor = 1e-14;
inline constexpr double kDefaultDecayQuality = 0.95;

// Fits log|f| ~ c - r |x|^{1/s} and log|fhat| ~ c - r |xi|^{1/sigma} by least
// squares over samples above kDecayFloor. Passes when both rates are
// positive and both R^2 values reach `threshold`.
DecayReport check_gs_decay(const SampledFunction& f, double s, double sigma,
                           double threshold = kDefaultDecayQuality);

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double r_squared = 0.0;
    std::size_t samples = 0;
};

// Ordinary least squares y ~ intercept + slope * t. Fewer than three points
// or a constant y give r_squared = 0.
LineFit fit_line(const std::vector<double>& t, const std::vector<double>& y);

struct SeminormReport {
    double value = 0.0;
    Index alpha{};  // attaining multi-indices
    Index beta{};
    int attained_order = 0;  // |alpha| + |beta| at the sup
    std::vector<std::string> warnings;
};

// sup_{|alpha|,|beta| <= K} sup_x |x^alpha d^beta f| / (h^{|alpha|+|beta|} alpha!^s beta!^sigma),
// derivatives spectral. Warns when |f| on the boundary exceeds 1e-10.
SeminormReport gf_seminorm(const SampledFunction& f, double s, double sigma, double h, int K = 8);

}  // namespace modop
