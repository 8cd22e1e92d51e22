#include "modop/gswindows.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "modop/dsl.hpp"
#include "modop/error.hpp"
#include "modop/stft.hpp"

namespace modop {

SampledFunction gaussian(const Grid& g, const Point& center, double spread) {
    if (!(spread > 0.0)) throw InvalidArgument("gaussian spread must be positive");
    const int d = g.dim();
    const double amp = std::pow(std::numbers::pi, -0.25 * d) * std::pow(spread, -0.5 * d);
    SampledFunction f(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const Point x = g.point(k);
        double r2 = 0.0;
        for (int i = 0; i < d; ++i) {
            const double dx = x[static_cast<std::size_t>(i)] - center[static_cast<std::size_t>(i)];
            r2 += dx * dx;
        }
        f.values[k] = amp * std::exp(-r2 / (2.0 * spread * spread));
    }
    return f;
}

SampledFunction hermite(const Grid& g, int n) {
    if (g.dim() != 1) throw InvalidArgument("hermite functions are one-dimensional");
    if (n < 0) throw InvalidArgument("hermite index must be nonnegative");
    const Axis& a = g.axis(0);
    const double reach = std::sqrt(2.0 * n + 1.0);
    const double limit = 0.75 * std::min(a.half_width, a.dual().half_width);
    if (reach > limit) {
        throw ResolutionError("hermite index " + std::to_string(n) + " needs sqrt(2n+1) = " + std::to_string(reach) +
                              " <= " + std::to_string(limit) + " on this grid");
    }
    SampledFunction f(g);
    const double h0_amp = std::pow(std::numbers::pi, -0.25);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double x = g.point(k)[0];
        double prev = 0.0;
        double cur = h0_amp * std::exp(-0.5 * x * x);
        for (int m = 0; m < n; ++m) {
            const double next = std::sqrt(2.0 / (m + 1.0)) * x * cur - std::sqrt(m / (m + 1.0)) * prev;
            prev = cur;
            cur = next;
        }
        f.values[k] = cur;
    }
    return f;
}

SampledFunction parse_window(const std::string& text, const Grid& g) {
    const dsl::Node n = dsl::parse(text);
    if (!n.children.empty()) throw InvalidArgument("window '" + text + "' takes numeric arguments only");
    if (n.name == "gauss") {
        const auto d = static_cast<std::size_t>(g.dim());
        if (n.numbers.size() != 2 && n.numbers.size() != d + 1) {
            throw InvalidArgument("gauss window takes `gauss center spread` or one center per axis");
        }
        Point c{};
        for (std::size_t i = 0; i < d; ++i) c[i] = n.numbers.size() == 2 ? n.numbers[0] : n.numbers[i];
        return gaussian(g, c, n.numbers.back());
    }
    if (n.name == "hermite") {
        if (n.numbers.size() != 1) throw InvalidArgument("hermite window takes `hermite n`");
        const double idx = n.numbers[0];
        if (idx != std::floor(idx)) throw InvalidArgument("hermite index must be an integer");
        return hermite(g, static_cast<int>(idx));
    }
    throw InvalidArgument("unknown window '" + n.name + "'");
}

LineFit fit_line(const std::vector<double>& t, const std::vector<double>& y) {
    LineFit fit;
    fit.samples = t.size();
    if (t.size() < 3) return fit;
    const double n = static_cast<double>(t.size());
    double mt = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        mt += t[i];
        my += y[i];
    }
    mt /= n;
    my /= n;
    double stt = 0.0;
    double sty = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        stt += (t[i] - mt) * (t[i] - mt);
        sty += (t[i] - mt) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (stt <= 0.0) return fit;
    fit.slope = sty / stt;
    fit.intercept = my - fit.slope * mt;
    if (syy <= 1e-300) return fit;
    fit.r_squared = std::clamp(sty * sty / (stt * syy), 0.0, 1.0);
    return fit;
}

namespace {

LineFit decay_fit(const SampledFunction& f, double exponent_base) {
    std::vector<double> t;
    std::vector<double> y;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double m = std::abs(f.values[k]);
        if (m <= kDecayFloor) continue;
        t.push_back(std::pow(norm(f.grid.point(k), 0, f.grid.dim()), 1.0 / exponent_base));
        y.push_back(std::log(m));
    }
    return fit_line(t, y);
}

double factorial(int n) { return std::tgamma(n + 1.0); }

double multi_factorial(const Index& a, int d) {
    double f = 1.0;
    for (int i = 0; i < d; ++i) f *= factorial(a[static_cast<std::size_t>(i)]);
    return f;
}

int order_of(const Index& a, int d) {
    int s = 0;
    for (int i = 0; i < d; ++i) s += a[static_cast<std::size_t>(i)];
    return s;
}

// All multi-indices in N^d with |a| <= K.
std::vector<Index> multi_indices(int d, int K) {
    std::vector<Index> out;
    Index a{};
    std::function<void(int, int)> rec = [&](int axis, int left) {
        if (axis == d) {
            out.push_back(a);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            a[static_cast<std::size_t>(axis)] = k;
            rec(axis + 1, left - k);
        }
        a[static_cast<std::size_t>(axis)] = 0;
    };
    rec(0, K);
    return out;
}

}  // namespace

DecayReport check_gs_decay(const SampledFunction& f, double s, double sigma, double threshold) {
    if (!(s > 0.0) || !(sigma > 0.0)) throw InvalidArgument("decay check needs s, sigma > 0");
    if (max_abs(f.values) <= kDecayFloor) throw DegenerateInput("every sample is below the decay floor");
    DecayReport rep;
    rep.s = s;
    rep.sigma = sigma;
    const LineFit space = decay_fit(f, s);
    const LineFit freq = decay_fit(fourier(f), sigma);
    rep.r_fitted_space = -space.slope;
    rep.r_fitted_freq = -freq.slope;
    rep.quality_space = space.r_squared;
    rep.quality_freq = freq.r_squared;
    rep.regression_quality = std::min(space.r_squared, freq.r_squared);
    rep.passed = rep.r_fitted_space > 0.0 && rep.r_fitted_freq > 0.0 && rep.regression_quality >= threshold;
    return rep;
}

SeminormReport gf_seminorm(const SampledFunction& f, double s, double sigma, double h, int K) {
    if (K < 0 || K > 8) throw InvalidArgument("seminorm order K must lie in [0, 8]");
    if (!(h > 0.0)) throw InvalidArgument("seminorm scale h must be positive");
    const Grid& g = f.grid;
    const int d = g.dim();
    SeminormReport rep;

    double boundary = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const Index idx = g.unravel(k);
        for (int i = 0; i < d; ++i) {
            if (idx[static_cast<std::size_t>(i)] == 0) boundary = std::max(boundary, std::abs(f.values[k]));
        }
    }
    if (boundary > 1e-10) {
        rep.warnings.push_back("function is " + std::to_string(boundary) +
                               " at the grid boundary; spectral derivatives are contaminated by truncation");
    }

    const auto indices = multi_indices(d, K);
    for (const Index& beta : indices) {
        const SampledFunction deriv = spectral_derivative(f, beta);
        const int nb = order_of(beta, d);
        const double beta_fac = std::pow(multi_factorial(beta, d), sigma);
        for (const Index& alpha : indices) {
            const int na = order_of(alpha, d);
            const double denom = std::pow(h, na + nb) * std::pow(multi_factorial(alpha, d), s) * beta_fac;
            for (std::size_t k = 0; k < g.size(); ++k) {
                const Point x = g.point(k);
                double mono = 1.0;
                for (int i = 0; i < d; ++i) mono *= std::pow(x[static_cast<std::size_t>(i)], alpha[static_cast<std::size_t>(i)]);
                const double v = std::abs(mono * deriv.values[k]) / denom;
                if (v > rep.value) {
                    rep.value = v;
                    rep.alpha = alpha;
                    rep.beta = beta;
                    rep.attained_order = na + nb;
                }
            }
        }
    }
    return rep;
}

}  // namespace modop
