#pragma once

#include <Eigen/Dense>

#include "modop/grid.hpp"
#include "modop/symbols.hpp"

namespace modop {

// Kohn-Nirenberg evaluation: one forward FFT of f, then per x either an
// inverse FFT of a(x, .) fhat whose x-th entry is kept (Fft) or a direct
// weighted sum over xi (Direct).
enum class ApplyMethod { Fft, Direct };

// (Op_0(a) f)(x) = (2 pi)^{-d/2} sum_xi a(x, xi) fhat(xi) e^{i x xi} dxi.
// Throws AliasingError when fhat is not below kSpectralGuard (relative) at the
// frequency boundary.
SampledFunction apply_kn(const Symbol& a, const SampledFunction& f, ApplyMethod method = ApplyMethod::Fft);

// Op_A(a) f through the symbol of the same operator at A = 0.
SampledFunction apply(const Symbol& a, const QuantizationParam& A, const SampledFunction& f);

inline constexpr int kMaxDensePoints = 64;

// M[x, y] = (2 pi)^{-1} sum_xi a(x - A(x - y), xi) e^{i (x - y) xi} dxi dx.
// Off-grid arguments use the exact symbol when present and linear
// interpolation of the samples otherwise. N <= kMaxDensePoints.
Eigen::MatrixXcd dense_matrix(const Symbol& a, const QuantizationParam& A, const Grid& g);

SampledFunction apply_matrix(const Eigen::MatrixXcd& M, const SampledFunction& f);

}  // namespace modop
