#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace modop {

using cplx = std::complex<double>;

// Product grids (phase space, symbol phase space) carry up to four axes.
inline constexpr int kMaxAxes = 4;

using Point = std::array<double, kMaxAxes>;
using Index = std::array<int, kMaxAxes>;

// One uniformly sampled axis [-L, L) with N points.
struct Axis {
    double half_width = 0.0;
    int points = 0;

    double spacing() const { return 2.0 * half_width / points; }
    // pi / L; spacing * freq_spacing * points == 2 pi.
    double freq_spacing() const;
    double coordinate(int k) const { return -half_width + k * spacing(); }
    // FFT-dual axis: half-width pi / spacing, same point count.
    Axis dual() const;

    // Half-widths compare with 1e-12 relative tolerance so dual().dual() == *this.
    bool operator==(const Axis& other) const;
};

// Truncated uniform sampling of R^d with implicit periodization.
//
// Samples are x_k = -L + k * spacing per axis; flat indices are row-major
// with axis 0 slowest. Immutable once built.
class Grid {
public:
    Grid() = default;

    // Validating constructor: d in {1,2}, L > 0, N even and >= 8.
    static Grid make(int dim, double half_width, int points);
    // Arbitrary axes (used for product grids); each axis needs L > 0, N even >= 2.
    static Grid from_axes(std::vector<Axis> axes);

    int dim() const { return static_cast<int>(axes_.size()); }
    const Axis& axis(int i) const { return axes_.at(static_cast<std::size_t>(i)); }
    const std::vector<Axis>& axes() const { return axes_; }

    std::size_t size() const { return size_; }
    // Product of axis spacings (quadrature weight).
    double cell_volume() const;

    Index unravel(std::size_t flat) const;
    std::size_t flat(const Index& idx) const;
    Point point(std::size_t flat) const;
    std::vector<double> coordinates(int axis) const;

    Grid dual() const;
    // Concatenate axes: (this axes..., other axes...).
    Grid product(const Grid& other) const;
    // Axes [first, first + count).
    Grid slice(int first, int count) const;

    bool operator==(const Grid& other) const { return axes_ == other.axes_; }

private:
    explicit Grid(std::vector<Axis> axes);

    std::vector<Axis> axes_;
    std::size_t size_ = 0;
};

// Euclidean norm of the first `count` coordinates starting at `first`.
double norm(const Point& p, int first, int count);

// Key-value serialization: dim, half_width, points.
std::string to_config(const Grid& g);
Grid grid_from_config(const std::string& text);

// Samples on a grid.
struct SampledFunction {
    Grid grid;
    std::vector<cplx> values;

    SampledFunction() = default;
    SampledFunction(Grid g, std::vector<cplx> v);
    explicit SampledFunction(Grid g);

    std::size_t size() const { return values.size(); }
};

// Complex array over the product of a spatial grid and a frequency grid,
// row-major (x-index major, xi-index minor).
struct PhaseSpaceField {
    Grid grid_x;
    Grid grid_xi;
    std::vector<cplx> values;

    PhaseSpaceField() = default;
    PhaseSpaceField(Grid gx, Grid gxi, std::vector<cplx> v);
    PhaseSpaceField(Grid gx, Grid gxi);

    std::size_t rows() const { return grid_x.size(); }
    std::size_t cols() const { return grid_xi.size(); }
    cplx& at(std::size_t ix, std::size_t ixi) { return values[ix * cols() + ixi]; }
    const cplx& at(std::size_t ix, std::size_t ixi) const { return values[ix * cols() + ixi]; }

    // View as a function on grid_x x grid_xi.
    SampledFunction as_function() const;
    static PhaseSpaceField from_function(const SampledFunction& f, int x_axes);
};

// L2 norm with quadrature weight cell_volume.
double l2_norm(const SampledFunction& f);
// sum f * conj(g) * cell_volume.
cplx inner(const SampledFunction& f, const SampledFunction& g);
double max_abs(std::span<const cplx> v);
double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace modop
