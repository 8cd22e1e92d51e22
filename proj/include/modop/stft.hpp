#pragma once

#include <vector>

#include "modop/grid.hpp"

namespace modop {

// Unitary Fourier transform (2 pi)^{-d/2} int f(x) e^{-i<x,xi>} dx along the
// listed axes; transformed axes move to their FFT-dual axes. The grid offset
// -L is absorbed by alternating-sign phase ramps, so any even N works.
SampledFunction fourier_axes(const SampledFunction& f, const std::vector<int>& axes, bool inverse = false);

// Full transform onto grid.dual().
SampledFunction fourier(const SampledFunction& f);
// Inverse transform; input lives on a frequency grid, output on its dual.
SampledFunction inverse_fourier(const SampledFunction& fhat);

enum class FieldBlock { First, Second };

// Unitary transform along the x block (First) or the xi block (Second).
PhaseSpaceField partial_fourier(const PhaseSpaceField& F, FieldBlock block);

// d^order f by multiplying the transform with (i xi)^order.
SampledFunction spectral_derivative(const SampledFunction& f, const Index& order);

// Circular shift by whole grid steps: out[k] = f[k - shift] (periodic).
SampledFunction circular_shift(const SampledFunction& f, const Index& shift);

// V_phi f(x, xi) = (2 pi)^{-d/2} sum_y f(y) conj(phi(y - x)) e^{-i<y,xi>} dy
// on grid x grid.dual(). Window translation is periodic.
PhaseSpaceField stft(const SampledFunction& f, const SampledFunction& phi);

// Adjoint of stft divided by ||phi||^2; exact left inverse on the discrete torus.
SampledFunction istft(const PhaseSpaceField& F, const SampledFunction& phi);

}  // namespace modop
