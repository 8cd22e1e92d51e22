#include "modop/fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "modop/error.hpp"

namespace modop::fft {

namespace {
// Planner calls are not thread-safe in FFTW; execution is.
std::mutex planner_mutex;
}  // namespace

void transform_axes(std::span<std::complex<double>> data, const std::vector<int>& shape,
                    const std::vector<int>& axes, Sign sign) {
    if (axes.empty() || data.empty()) return;
    std::vector<int> strides(shape.size(), 1);
    for (int i = static_cast<int>(shape.size()) - 2; i >= 0; --i) {
        strides[static_cast<std::size_t>(i)] = strides[static_cast<std::size_t>(i) + 1] * shape[static_cast<std::size_t>(i) + 1];
    }
    std::vector<bool> is_axis(shape.size(), false);
    std::vector<fftw_iodim> dims;
    for (int a : axes) {
        if (a < 0 || a >= static_cast<int>(shape.size())) throw InvalidArgument("fft axis out of range");
        is_axis[static_cast<std::size_t>(a)] = true;
        const auto u = static_cast<std::size_t>(a);
        dims.push_back(fftw_iodim{shape[u], strides[u], strides[u]});
    }
    std::vector<fftw_iodim> loops;
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (!is_axis[i]) loops.push_back(fftw_iodim{shape[i], strides[i], strides[i]});
    }
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex);
        plan = fftw_plan_guru_dft(static_cast<int>(dims.size()), dims.data(), static_cast<int>(loops.size()),
                                  loops.empty() ? nullptr : loops.data(), ptr, ptr,
                                  sign == Sign::Forward ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    if (plan == nullptr) throw Error("FFTW could not create a plan");
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex);
        fftw_destroy_plan(plan);
    }
}

}  // namespace modop::fft
