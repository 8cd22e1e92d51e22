#include "modop/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "modop/error.hpp"
#include "modop/fft.hpp"
#include "modop/gswindows.hpp"
#include "modop/parallel.hpp"
#include "modop/psido.hpp"
#include "modop/stft.hpp"

namespace modop {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr int kMaxCoarse = 32;

std::vector<int> centered_selection(int n, int stride) {
    if (stride < 1) throw InvalidArgument("coarse stride must be positive");
    const int count = std::min(kMaxCoarse, n / stride);
    std::vector<int> idx;
    for (int k = 0; k < count; ++k) idx.push_back(n / 2 + (k - count / 2) * stride);
    return idx;
}

std::vector<double> pick(const std::vector<double>& v, const std::vector<int>& idx) {
    std::vector<double> out;
    for (int i : idx) out.push_back(v[static_cast<std::size_t>(i)]);
    return out;
}

}  // namespace

KernelTensor build_H(const Symbol& a, const Weight& omega, const Weight& v1, const Weight& v2,
                     const SampledFunction& phi, const KernelOptions& opts) {
    const Grid& g = a.grid_x();
    if (g.dim() != 1) throw InvalidArgument("kernel construction supports d = 1 only");
    if (!(phi.grid == g)) throw InvalidArgument("window grid differs from the symbol grid");
    const int N = g.axis(0).points;
    const int M = opts.quadrature_points;
    if (M < 8 || M % 2 != 0) throw InvalidArgument("quadrature needs an even number of points >= 8");

    KernelTensor H;
    H.x_index = centered_selection(N, opts.x_stride);
    H.xi_index = centered_selection(N, opts.xi_stride);
    H.xs = pick(g.coordinates(0), H.x_index);
    H.xis = pick(g.dual().coordinates(0), H.xi_index);
    H.grid_y = g;
    H.quadrature_points = M;
    H.description = a.meta.name;
    check_budget(H.n_x() * H.n_xi() * H.n_y() * sizeof(cplx) + static_cast<std::size_t>(M) * M * sizeof(cplx) * 2,
                 "kernel tensor");
    H.values.assign(H.n_x() * H.n_xi() * H.n_y(), cplx{});

    const double dx = g.axis(0).spacing();
    const double dzeta = kTwoPi / (M * dx);
    std::vector<double> z(static_cast<std::size_t>(M));
    std::vector<double> zeta(static_cast<std::size_t>(M));
    std::vector<double> w1(z.size());
    std::vector<double> w2(z.size());
    std::vector<cplx> phi2(z.size());
    for (int k = 0; k < M; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        z[uk] = (k - M / 2) * dx;
        zeta[uk] = (k - M / 2) * dzeta;
        w1[uk] = v1(Point{z[uk]}, 1);
        w2[uk] = v2(Point{zeta[uk]}, 1);
        const int idx = k - M / 2 + N / 2;
        phi2[uk] = (idx >= 0 && idx < N) ? phi.values[static_cast<std::size_t>(idx)] * w1[uk] : cplx{};
    }
    if (!a.exact) {
        const double L = g.axis(0).half_width;
        const double W = g.dual().axis(0).half_width;
        const double reach_x = std::abs(H.xs.front()) + std::abs(z.front());
        const double reach_xi = std::abs(H.xis.front()) + std::abs(zeta.front());
        if (reach_x > 1.25 * L || reach_xi > 1.25 * W) {
            H.warnings.push_back("quadrature leaves the sampled symbol box by more than 25%; values are clamped");
        }
    }

    const std::size_t nxi = H.n_xi();
    const double pref = dx / std::sqrt(kTwoPi);
    parallel_for(H.n_x() * nxi, [&](std::size_t cell) {
        const std::size_t ix = cell / nxi;
        const std::size_t ixi = cell % nxi;
        const double x = H.xs[ix];
        const double xi = H.xis[ixi];
        const double w = omega(Point{x, xi}, 2);
        std::vector<cplx> B(static_cast<std::size_t>(M) * M);
        std::vector<cplx> shifted_a(B.size(), cplx{});
        if (a.exact) {
            // Separable terms: M evaluations per factor instead of M^2.
            std::vector<cplx> fx(z.size());
            std::vector<cplx> fxi(z.size());
            for (const auto& t : a.exact->terms) {
                for (std::size_t k = 0; k < z.size(); ++k) {
                    fx[k] = t.coef * t.fx.at(x + z[k], 0).value();
                    fxi[k] = t.fxi.at(xi + zeta[k], 0).value();
                }
                for (std::size_t k = 0; k < z.size(); ++k) {
                    for (std::size_t j = 0; j < z.size(); ++j) shifted_a[k * z.size() + j] += fx[k] * fxi[j];
                }
            }
        } else {
            for (std::size_t k = 0; k < z.size(); ++k) {
                for (std::size_t j = 0; j < z.size(); ++j) shifted_a[k * z.size() + j] = a.eval(x + z[k], xi + zeta[j]);
            }
        }
        for (std::size_t k = 0; k < z.size(); ++k) {
            for (std::size_t j = 0; j < z.size(); ++j) {
                const cplx Phi = shifted_a[k * z.size() + j] / (w * w1[k] * w2[j]);
                B[k * z.size() + j] = std::conj(Phi) * phi2[k] * w2[j];
            }
        }
        // G(z, m) = dzeta sum_j B(z, zeta_j) e^{i m dx zeta_j}
        fft::transform_axes(B, {M, M}, {1}, fft::Sign::Backward);
        const int ix_fine = H.x_index[ix];
        for (std::size_t iy = 0; iy < H.n_y(); ++iy) {
            cplx s{};
            for (int k = 0; k < M; ++k) {
                int m = (static_cast<int>(iy) - ix_fine - k + M / 2) % M;
                if (m < 0) m += M;
                const double sign = (m % 2 == 0) ? 1.0 : -1.0;
                s += B[static_cast<std::size_t>(k) * M + static_cast<std::size_t>(m)] * sign;
            }
            H.values[H.index(ix, ixi, iy)] = s * dzeta * pref;
        }
    });
    for (const auto& v : H.values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw EvaluationError("kernel H is not finite");
    }
    return H;
}

IdentityResidual stft_identity_residual(const KernelTensor& H, const Symbol& a, const SampledFunction& f,
                                        const SampledFunction& phi, const Weight& omega) {
    if (!(f.grid == H.grid_y)) throw InvalidArgument("function grid differs from the kernel grid");
    const PhaseSpaceField V = stft(apply_kn(a, f), phi);
    const auto ys = H.grid_y.coordinates(0);
    const double dy = H.grid_y.cell_volume();

    IdentityResidual r;
    double diff2 = 0.0;
    double lhs2 = 0.0;
    for (std::size_t ix = 0; ix < H.n_x(); ++ix) {
        for (std::size_t ixi = 0; ixi < H.n_xi(); ++ixi) {
            const double xi = H.xis[ixi];
            cplx s{};
            for (std::size_t iy = 0; iy < ys.size(); ++iy) {
                s += f.values[iy] * std::polar(1.0, -ys[iy] * xi) * std::conj(H.values[H.index(ix, ixi, iy)]);
            }
            const cplx rhs = s * dy * omega(Point{H.xs[ix], xi}, 2) / kTwoPi;
            const cplx lhs = V.at(static_cast<std::size_t>(H.x_index[ix]), static_cast<std::size_t>(H.xi_index[ixi]));
            const double d = std::abs(lhs - rhs);
            r.max_abs = std::max(r.max_abs, d);
            r.lhs_scale = std::max(r.lhs_scale, std::abs(lhs));
            diff2 += d * d;
            lhs2 += std::norm(lhs);
        }
    }
    r.max_rel = r.lhs_scale > 0.0 ? r.max_abs / r.lhs_scale : r.max_abs;
    r.l2_rel = lhs2 > 0.0 ? std::sqrt(diff2 / lhs2) : std::sqrt(diff2);
    r.warnings = H.warnings;
    return r;
}

IdentityResidual check_stft_identity(const Symbol& a, const SampledFunction& f, const SampledFunction& phi,
                                     const Weight& omega, const Weight& v1, const Weight& v2,
                                     const KernelOptions& opts) {
    return stft_identity_residual(build_H(a, omega, v1, v2, phi, opts), a, f, phi, omega);
}

namespace {

// Envelope over (x, xi) of |d_y^alpha H| per distance |x - y| in grid steps.
// y lives on the periodic grid, so distances wrap at L.
std::vector<double> envelope(const KernelTensor& H, int alpha) {
    const double dy = H.grid_y.axis(0).spacing();
    const auto n = static_cast<long>(H.n_y());
    std::vector<double> env(H.n_y() / 2 + 1, 0.0);
    for (std::size_t ix = 0; ix < H.n_x(); ++ix) {
        for (std::size_t ixi = 0; ixi < H.n_xi(); ++ixi) {
            SampledFunction row(H.grid_y);
            std::copy_n(H.values.begin() + static_cast<std::ptrdiff_t>(H.index(ix, ixi, 0)), H.n_y(), row.values.begin());
            if (alpha > 0) row = spectral_derivative(row, Index{alpha, 0, 0, 0});
            const auto ys = H.grid_y.coordinates(0);
            for (std::size_t iy = 0; iy < ys.size(); ++iy) {
                const long steps = std::lround(std::abs(ys[iy] - H.xs[ix]) / dy);
                const auto d = static_cast<std::size_t>(std::min(steps, n - steps));
                env[d] = std::max(env[d], std::abs(row.values[iy]));
            }
        }
    }
    return env;
}

std::vector<bool> above_floor(const std::vector<double>& env) {
    const double peak = *std::max_element(env.begin(), env.end());
    std::vector<bool> keep(env.size());
    for (std::size_t d = 0; d < env.size(); ++d) keep[d] = env[d] > kDecayFloor * peak;
    return keep;
}

}  // namespace

std::vector<KernelDecay> check_H_decay(const KernelTensor& H, double s, int orders, double threshold,
                                       const KernelTensor* mask) {
    if (!(s > 0.0)) throw InvalidArgument("decay exponent s must be positive");
    if (orders < 0 || orders > 2) throw InvalidArgument("kernel decay orders must lie in [0, 2]");
    if (max_abs(H.values) == 0.0) throw DegenerateInput("kernel tensor is identically zero");
    const double dy = H.grid_y.axis(0).spacing();
    std::vector<KernelDecay> out;
    for (int alpha = 0; alpha <= orders; ++alpha) {
        const std::vector<double> env = envelope(H, alpha);
        const std::vector<bool> keep = above_floor(mask ? envelope(*mask, alpha) : env);
        std::vector<double> t;
        std::vector<double> y;
        for (std::size_t d = 0; d < env.size(); ++d) {
            if (!keep[d] || env[d] <= 0.0) continue;
            t.push_back(std::pow(static_cast<double>(d) * dy, 1.0 / s));
            y.push_back(std::log(env[d]));
        }
        const LineFit fit = fit_line(t, y);
        KernelDecay k;
        k.order = alpha;
        k.r_fitted = -fit.slope;
        k.quality = fit.r_squared;
        k.samples = fit.samples;
        k.passed = k.r_fitted > 0.0 && k.quality >= threshold;
        out.push_back(k);
    }
    return out;
}

Factorization factorize(const KernelTensor& H, const Weight& v0) {
    const double period = 2.0 * H.grid_y.axis(0).half_width;
    auto wrapped = [](double d, double p) { return d - p * std::round(d / p); };
    Factorization out;
    out.H0 = H;
    out.psi = SampledFunction(H.grid_y);
    const auto ys = H.grid_y.coordinates(0);
    for (std::size_t iy = 0; iy < ys.size(); ++iy) out.psi.values[iy] = 1.0 / v0(Point{ys[iy]}, 1);
    double worst = 0.0;
    for (std::size_t ix = 0; ix < H.n_x(); ++ix) {
        for (std::size_t iy = 0; iy < ys.size(); ++iy) {
            const double w = v0(Point{wrapped(ys[iy] - H.xs[ix], period)}, 1);
            for (std::size_t ixi = 0; ixi < H.n_xi(); ++ixi) {
                const std::size_t k = H.index(ix, ixi, iy);
                out.H0.values[k] = H.values[k] * w;
                worst = std::max(worst, std::abs(H.values[k] - out.H0.values[k] * (1.0 / w)));
            }
        }
    }
    const double peak = max_abs(H.values);
    out.reconstruction = peak > 0.0 ? worst / peak : worst;
    out.H0.description = "H0(" + H.description + ")";
    return out;
}

std::vector<TestFunction> default_testset() {
    std::vector<TestFunction> set;
    for (int n = 0; n <= 10; ++n) {
        set.push_back({"hermite " + std::to_string(n), [n](const Grid& g) { return hermite(g, n); }});
    }
    for (double x0 : {-2.0, 0.0, 2.0}) {
        for (double b : {-2.0, 0.0, 2.0}) {
            set.push_back(modulated_gaussian(x0, b));
        }
    }
    return set;
}

TestFunction modulated_gaussian(double x0, double b, double spread) {
    auto fmt = [](double v) {
        std::ostringstream os;
        os << v;
        return os.str();
    };
    return {"gauss x0=" + fmt(x0) + " b=" + fmt(b), [x0, b, spread](const Grid& g) {
                SampledFunction f = gaussian(g, Point{x0}, spread);
                const auto xs = g.coordinates(0);
                for (std::size_t k = 0; k < xs.size(); ++k) f.values[k] *= std::polar(1.0, b * xs[k]);
                return f;
            }};
}

std::vector<TestFunction> random_gaussians(int count, std::uint64_t seed, double max_shift, double max_freq) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> shift(-max_shift, max_shift);
    std::uniform_real_distribution<double> freq(-max_freq, max_freq);
    std::uniform_real_distribution<double> spread(0.7, 1.5);
    std::vector<TestFunction> set;
    for (int i = 0; i < count; ++i) {
        const double x0 = shift(rng);
        const double b = freq(rng);
        set.push_back(modulated_gaussian(x0, b, spread(rng)));
    }
    return set;
}

BoundReport empirical_bound(const Symbol& a, const QuantizationParam& A, const Weight& omega, const Weight& omega0,
                            const MixedNormSpec& spec, const std::vector<TestFunction>& testset,
                            const std::vector<Grid>& refinements, const BoundOptions& opts) {
    if (testset.empty()) throw InvalidArgument("empirical bound needs a nonempty test set");
    if (refinements.empty()) throw InvalidArgument("empirical bound needs at least one grid");

    BoundReport rep;
    const Weight denom_weight = omega0 * omega;
    for (const Grid& g : refinements) {
        const Symbol ag = a.resampled(g);
        const SampledFunction phi = parse_window(opts.window, g);
        std::vector<RatioEntry> row;
        double sup = 0.0;
        for (const auto& t : testset) {
            const SampledFunction f = t.make(g);
            const double den = mod_norm(f, phi, denom_weight, spec);
            if (!(den > opts.floor)) {
                rep.warnings.push_back("skipped " + t.id + ": denominator below floor");
                continue;
            }
            const double num = mod_norm(apply(ag, A, f), phi, omega, spec);
            row.push_back({t.id, num / den});
            sup = std::max(sup, num / den);
        }
        for (const auto& w : ag.warnings) rep.warnings.push_back(w);
        rep.ratios.push_back(std::move(row));
        rep.sups.push_back(sup);
    }
    rep.sup_ratio = rep.sups.back();
    for (std::size_t i = 1; i < rep.sups.size(); ++i) {
        rep.drift = std::max(rep.drift, std::abs(rep.sups[i - 1] - rep.sups[i]) / rep.sups[i]);
    }

    const Symbol a0 = a.resampled(refinements.front());
    rep.evidence = classify_symbol(a0, omega0, opts.s, opts.sigma).evidence;
    rep.hypotheses_verified = opts.mode == ClassMode::EveryR ? rep.evidence == Evidence::BeurlingEvidence
                                                             : rep.evidence != Evidence::Neither;
    if (!rep.hypotheses_verified) rep.warnings.push_back("hypotheses unverified: symbol class evidence is " + to_string(rep.evidence));
    rep.passed = rep.hypotheses_verified && std::isfinite(rep.sup_ratio) && rep.drift <= opts.drift_tolerance;
    return rep;
}

QuantInvarianceReport check_quant_invariance(const Symbol& a, const Weight& omega, double s, double sigma,
                                             const QuantizationParam& A1, const QuantizationParam& A2) {
    QuantInvarianceReport rep;
    rep.before = classify_symbol(a, omega, s, sigma);
    const Symbol b = quantization_change(a, A1, A2);
    rep.after = classify_symbol(b, omega, s, sigma);
    rep.matches = rep.before.evidence == rep.after.evidence;
    rep.warnings = b.warnings;
    return rep;
}

}  // namespace modop
