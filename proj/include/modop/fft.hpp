#pragma once

#include <complex>
#include <span>
#include <vector>

namespace modop::fft {

enum class Sign { Forward = -1, Backward = +1 };

// Unnormalized in-place DFT along the listed axes of a row-major array:
// out[m] = sum_k in[k] exp(sign * 2 pi i k m / n). Any even or odd length.
void transform_axes(std::span<std::complex<double>> data, const std::vector<int>& shape,
                    const std::vector<int>& axes, Sign sign);

}  // namespace modop::fft
