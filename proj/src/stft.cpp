#include "modop/stft.hpp"

#include <cmath>
#include <numbers>

#include "modop/error.hpp"
#include "modop/fft.hpp"
#include "modop/parallel.hpp"

namespace modop {

namespace {

double parity(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

std::vector<int> shape_of(const Grid& g) {
    std::vector<int> s;
    for (const auto& a : g.axes()) s.push_back(a.points);
    return s;
}

int wrap(int k, int n) {
    k %= n;
    return k < 0 ? k + n : k;
}

}  // namespace

SampledFunction fourier_axes(const SampledFunction& f, const std::vector<int>& axes, bool inverse) {
    const Grid& g = f.grid;
    std::vector<bool> transformed(static_cast<std::size_t>(g.dim()), false);
    for (int a : axes) {
        if (a < 0 || a >= g.dim()) throw InvalidArgument("fourier axis out of range");
        transformed[static_cast<std::size_t>(a)] = true;
    }
    std::vector<Axis> out_axes = g.axes();
    double scale = 1.0;
    for (int a : axes) {
        const Axis& ax = g.axis(a);
        out_axes[static_cast<std::size_t>(a)] = ax.dual();
        scale *= ax.spacing() / std::sqrt(2.0 * std::numbers::pi) * parity(ax.points / 2);
    }

    std::vector<cplx> data = f.values;
    auto ramp = [&](std::size_t flat) {
        const Index idx = g.unravel(flat);
        double s = 1.0;
        for (int a : axes) s *= parity(idx[static_cast<std::size_t>(a)]);
        return s;
    };
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= ramp(i);
    fft::transform_axes(data, shape_of(g), axes, inverse ? fft::Sign::Backward : fft::Sign::Forward);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= ramp(i) * scale;

    SampledFunction out;
    out.grid = Grid::from_axes(std::move(out_axes));
    out.values = std::move(data);
    return out;
}

SampledFunction fourier(const SampledFunction& f) {
    std::vector<int> axes(static_cast<std::size_t>(f.grid.dim()));
    for (int i = 0; i < f.grid.dim(); ++i) axes[static_cast<std::size_t>(i)] = i;
    return fourier_axes(f, axes, false);
}

SampledFunction inverse_fourier(const SampledFunction& fhat) {
    std::vector<int> axes(static_cast<std::size_t>(fhat.grid.dim()));
    for (int i = 0; i < fhat.grid.dim(); ++i) axes[static_cast<std::size_t>(i)] = i;
    return fourier_axes(fhat, axes, true);
}

PhaseSpaceField partial_fourier(const PhaseSpaceField& F, FieldBlock block) {
    const int dx = F.grid_x.dim();
    const int dxi = F.grid_xi.dim();
    std::vector<int> axes;
    if (block == FieldBlock::First) {
        for (int i = 0; i < dx; ++i) axes.push_back(i);
    } else {
        for (int i = 0; i < dxi; ++i) axes.push_back(dx + i);
    }
    return PhaseSpaceField::from_function(fourier_axes(F.as_function(), axes, false), dx);
}

SampledFunction spectral_derivative(const SampledFunction& f, const Index& order) {
    bool any = false;
    for (int i = 0; i < f.grid.dim(); ++i) {
        if (order[static_cast<std::size_t>(i)] < 0) throw InvalidArgument("negative derivative order");
        any = any || order[static_cast<std::size_t>(i)] > 0;
    }
    if (!any) return f;
    SampledFunction fhat = fourier(f);
    for (std::size_t k = 0; k < fhat.values.size(); ++k) {
        const Point xi = fhat.grid.point(k);
        cplx m{1.0, 0.0};
        for (int i = 0; i < f.grid.dim(); ++i) {
            const auto u = static_cast<std::size_t>(i);
            for (int p = 0; p < order[u]; ++p) m *= cplx{0.0, xi[u]};
        }
        fhat.values[k] *= m;
    }
    SampledFunction out = inverse_fourier(fhat);
    out.grid = f.grid;
    return out;
}

SampledFunction circular_shift(const SampledFunction& f, const Index& shift) {
    const Grid& g = f.grid;
    SampledFunction out(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        Index idx = g.unravel(k);
        for (int i = 0; i < g.dim(); ++i) {
            const auto u = static_cast<std::size_t>(i);
            idx[u] = wrap(idx[u] - shift[u], g.axis(i).points);
        }
        out.values[k] = f.values[g.flat(idx)];
    }
    return out;
}

PhaseSpaceField stft(const SampledFunction& f, const SampledFunction& phi) {
    if (!(f.grid == phi.grid)) throw InvalidArgument("stft: function and window live on different grids");
    if (max_abs(phi.values) == 0.0) throw InvalidArgument("stft: window is identically zero");
    const Grid& g = f.grid;
    const std::size_t n = g.size();
    check_budget(n * n * sizeof(cplx) * 2, "stft phase-space field");

    const Grid prod = g.product(g);
    SampledFunction columns(prod);
    parallel_for(n, [&](std::size_t j) {
        const Index xj = g.unravel(j);
        for (std::size_t k = 0; k < n; ++k) {
            Index yk = g.unravel(k);
            for (int i = 0; i < g.dim(); ++i) {
                const auto u = static_cast<std::size_t>(i);
                const int np = g.axis(i).points;
                yk[u] = wrap(yk[u] - xj[u] + np / 2, np);
            }
            columns.values[j * n + k] = f.values[k] * std::conj(phi.values[g.flat(yk)]);
        }
    });
    std::vector<int> axes;
    for (int i = 0; i < g.dim(); ++i) axes.push_back(g.dim() + i);
    return PhaseSpaceField::from_function(fourier_axes(columns, axes, false), g.dim());
}

SampledFunction istft(const PhaseSpaceField& F, const SampledFunction& phi) {
    const Grid& g = phi.grid;
    if (!(F.grid_x == g) || !(F.grid_xi == g.dual())) {
        throw InvalidArgument("istft: field grids do not match the window grid");
    }
    const double phi_norm2 = std::pow(l2_norm(phi), 2);
    if (phi_norm2 == 0.0) throw InvalidArgument("istft: window has zero norm");
    const int d = g.dim();
    std::vector<int> axes;
    for (int i = 0; i < d; ++i) axes.push_back(d + i);
    // G(x, y) = (2 pi)^{-d/2} sum_xi F(x, xi) e^{i y xi} dxi
    const SampledFunction G = fourier_axes(F.as_function(), axes, true);
    const std::size_t n = g.size();
    SampledFunction out(g);
    const double w = g.cell_volume() / phi_norm2;
    parallel_for(n, [&](std::size_t k) {
        const Index yk = g.unravel(k);
        cplx acc{};
        for (std::size_t j = 0; j < n; ++j) {
            const Index xj = g.unravel(j);
            Index rel{};
            for (int i = 0; i < d; ++i) {
                const auto u = static_cast<std::size_t>(i);
                const int np = g.axis(i).points;
                rel[u] = wrap(yk[u] - xj[u] + np / 2, np);
            }
            acc += G.values[j * n + k] * phi.values[g.flat(rel)];
        }
        out.values[k] = acc * w;
    });
    return out;
}

}  // namespace modop
