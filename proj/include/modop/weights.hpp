#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "modop/grid.hpp"

namespace modop {

// Which coordinates a weight factor reads. On a phase-space point with n
// coordinates, X is the first n/2 and Xi the last n/2; All reads every one.
enum class Part { All, X, Xi };

// Moderateness class a weight claims to belong to.
struct ClaimedClass {
    enum class Kind { None, P_E, P_s, P0_s, P_ssigma, P0_ssigma } kind = Kind::None;
    double s = 0.0;
    double sigma = 0.0;
};

// Positive parametric weight on R^n, immutable value type.
//
//   constant c             c
//   polynomial t           (1 + |z|^2)^{t/2}
//   subexp r s             e^{r |z|^{1/s}}
//   subexp_phase r1 s r2 sigma   e^{r1 |x|^{1/s} + r2 |xi|^{1/sigma}}
//   product, reciprocal, sampled (multilinear interpolation, clamped)
class Weight {
public:
    Weight();  // constant 1

    static Weight constant(double c);
    static Weight polynomial(double t, Part part = Part::All);
    static Weight subexp(double r, double s, Part part = Part::All);
    static Weight subexp_phase(double r1, double s, double r2, double sigma);
    static Weight product(const Weight& a, const Weight& b);
    static Weight reciprocal(const Weight& a);
    static Weight sampled(SampledFunction samples);

    // Evaluates at the first n coordinates of z. Throws EvaluationError
    // when the value is not finite and positive.
    double operator()(const Point& z, int n) const;

    // Values at every point of g.
    std::vector<double> on_grid(const Grid& g) const;

    std::string describe() const;

    ClaimedClass claimed{};

private:
    struct Node;
    explicit Weight(std::shared_ptr<const Node> node);
    double eval(const Point& z, int n) const;

    std::shared_ptr<const Node> node_;
};

Weight operator*(const Weight& a, const Weight& b);

// Weight DSL, e.g. `prod(poly 2, subexp 1.0 1.0)`, `recip(poly_xi 2)`, `one`.
Weight parse_weight(const std::string& text);

struct ModerationReport {
    double max_ratio = 0.0;
    Point worst_x{};
    Point worst_y{};
    bool passed = false;
    double tested_constant = 0.0;
};

// max w(x+y) / (w(x) v(y)) over grid pairs with x, y, x+y all on g.
// A finite sweep is evidence for moderateness, not a proof.
ModerationReport check_moderate(const Weight& w, const Weight& v, const Grid& g, double C);

enum class ClassMode { SomeR, EveryR };
enum class Layout { Spatial, Phase };

struct ClassReport {
    std::vector<double> r_values;
    std::vector<ModerationReport> per_r;
    bool passed = false;
};

// Decreasing sweep used for Beurling-type (every r) evidence.
inline const std::vector<double> kEveryRSweep{1.0, 1e-1, 1e-2, 1e-3};

// Sweeps w(x+y) <= C w(x) e^{r (|y|^{1/s} + |eta|^{1/sigma})}. With Layout::Spatial
// the bound is e^{r |y|^{1/s}} over all coordinates and sigma is unused.
ClassReport check_class(const Weight& w, double s, double sigma, double r, const Grid& g, ClassMode mode,
                        double C, Layout layout = Layout::Phase);

struct SmoothEquivalent {
    Weight omega0;  // sampled on the input grid
    double ratio_min = 0.0;
    double ratio_max = 0.0;
    Point worst{};
};

// Gaussian mollification w * G_width sampled on g; ratios omega0/w over the
// interior |x_i| <= L_i - 6 width. If K is given and a ratio leaves [1/K, K]
// an EvaluationError names the worst point.
SmoothEquivalent smooth_equivalent(const Weight& w, const Grid& g, std::optional<double> width = std::nullopt,
                                   std::optional<double> K = std::nullopt);

}  // namespace modop
