#include "modop/psido.hpp"

#include <cmath>
#include <numbers>

#include "modop/error.hpp"
#include "modop/fft.hpp"
#include "modop/parallel.hpp"
#include "modop/stft.hpp"

namespace modop {

namespace {

Symbol on_grid(const Symbol& a, const Grid& g) {
    if (g.dim() != 1) throw InvalidArgument("operators support d = 1 only");
    if (a.grid_x() == g && a.grid_xi() == g.dual()) return a;
    return a.resampled(g);
}

void guard_spectrum(const SampledFunction& fhat) {
    const double peak = max_abs(fhat.values);
    const std::size_t n = fhat.size();
    const double edge = std::max(std::abs(fhat.values.front()), std::abs(fhat.values[n - 1]));
    if (edge > kSpectralGuard * peak) {
        throw AliasingError("input is not decayed at the frequency boundary (relative " + std::to_string(edge / peak) +
                            "); refine the grid");
    }
}

}  // namespace

SampledFunction apply_kn(const Symbol& sym, const SampledFunction& f, ApplyMethod method) {
    const Symbol a = on_grid(sym, f.grid);
    const SampledFunction fhat = fourier(f);
    guard_spectrum(fhat);

    const std::size_t n = f.size();
    const auto xs = f.grid.coordinates(0);
    const auto xis = fhat.grid.coordinates(0);
    const double dxi = fhat.grid.cell_volume();
    SampledFunction out(f.grid);

    if (method == ApplyMethod::Direct) {
        const double scale = dxi / std::sqrt(2.0 * std::numbers::pi);
        parallel_for(n, [&](std::size_t i) {
            cplx s{};
            for (std::size_t j = 0; j < n; ++j) s += a.field.at(i, j) * fhat.values[j] * std::polar(1.0, xs[i] * xis[j]);
            out.values[i] = s * scale;
        });
        return out;
    }

    parallel_for(n, [&](std::size_t i) {
        SampledFunction row(fhat.grid);
        for (std::size_t j = 0; j < n; ++j) row.values[j] = a.field.at(i, j) * fhat.values[j];
        out.values[i] = inverse_fourier(row).values[i];
    });
    return out;
}

SampledFunction apply(const Symbol& a, const QuantizationParam& A, const SampledFunction& f) {
    const Symbol b = on_grid(a, f.grid);
    if (A.scalar_value() == 0.0) return apply_kn(b, f);
    return apply_kn(quantization_change(b, A, QuantizationParam::scalar(0.0)), f);
}

Eigen::MatrixXcd dense_matrix(const Symbol& a, const QuantizationParam& A, const Grid& g) {
    if (g.dim() != 1) throw InvalidArgument("dense matrices support d = 1 only");
    const int n = g.axis(0).points;
    if (n > kMaxDensePoints) {
        throw BudgetError("dense matrix needs N <= " + std::to_string(kMaxDensePoints) + ", got " + std::to_string(n));
    }
    const double t = A.scalar_value();
    const auto xs = g.coordinates(0);
    const auto xis = g.dual().coordinates(0);
    const double scale = g.dual().cell_volume() * g.cell_volume() / (2.0 * std::numbers::pi);
    Eigen::MatrixXcd M(n, n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        for (std::size_t k = 0; k < xs.size(); ++k) {
            const double d = xs[i] - xs[k];
            const double arg = xs[i] - t * d;
            cplx s{};
            for (double xi : xis) s += a.eval(arg, xi) * std::polar(1.0, d * xi);
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = s * scale;
        }
    });
    return M;
}

SampledFunction apply_matrix(const Eigen::MatrixXcd& M, const SampledFunction& f) {
    if (static_cast<std::size_t>(M.cols()) != f.size()) throw InvalidArgument("matrix and function sizes differ");
    const Eigen::Map<const Eigen::VectorXcd> v(f.values.data(), static_cast<Eigen::Index>(f.size()));
    const Eigen::VectorXcd r = M * v;
    return SampledFunction(f.grid, std::vector<cplx>(r.data(), r.data() + r.size()));
}

}  // namespace modop
