#include "modop/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "modop/error.hpp"

namespace modop {

double Axis::freq_spacing() const { return std::numbers::pi / half_width; }

Axis Axis::dual() const { return Axis{std::numbers::pi / spacing(), points}; }

bool Axis::operator==(const Axis& other) const {
    return points == other.points &&
           std::abs(half_width - other.half_width) <= 1e-12 * std::max(half_width, other.half_width);
}

Grid::Grid(std::vector<Axis> axes) : axes_(std::move(axes)) {
    size_ = 1;
    for (const auto& a : axes_) size_ *= static_cast<std::size_t>(a.points);
}

Grid Grid::make(int dim, double half_width, int points) {
    if (dim != 1 && dim != 2) {
        throw InvalidArgument("grid dimension must be 1 or 2, got " + std::to_string(dim));
    }
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw InvalidArgument("grid half_width must be positive");
    }
    if (points % 2 != 0) {
        throw InvalidArgument("grid points per axis must be even, got " + std::to_string(points));
    }
    if (points < 8) {
        throw InvalidArgument("grid needs at least 8 points per axis, got " + std::to_string(points));
    }
    return Grid(std::vector<Axis>(static_cast<std::size_t>(dim), Axis{half_width, points}));
}

Grid Grid::from_axes(std::vector<Axis> axes) {
    if (axes.empty() || axes.size() > kMaxAxes) {
        throw InvalidArgument("grid must have between 1 and 4 axes");
    }
    for (const auto& a : axes) {
        if (!(a.half_width > 0.0) || !std::isfinite(a.half_width)) {
            throw InvalidArgument("axis half_width must be positive");
        }
        if (a.points < 2 || a.points % 2 != 0) {
            throw InvalidArgument("axis point count must be even and >= 2");
        }
    }
    return Grid(std::move(axes));
}

double Grid::cell_volume() const {
    double v = 1.0;
    for (const auto& a : axes_) v *= a.spacing();
    return v;
}

Index Grid::unravel(std::size_t flat) const {
    Index idx{};
    for (int i = dim() - 1; i >= 0; --i) {
        const auto n = static_cast<std::size_t>(axes_[static_cast<std::size_t>(i)].points);
        idx[static_cast<std::size_t>(i)] = static_cast<int>(flat % n);
        flat /= n;
    }
    return idx;
}

std::size_t Grid::flat(const Index& idx) const {
    std::size_t f = 0;
    for (int i = 0; i < dim(); ++i) {
        f = f * static_cast<std::size_t>(axes_[static_cast<std::size_t>(i)].points) +
            static_cast<std::size_t>(idx[static_cast<std::size_t>(i)]);
    }
    return f;
}

Point Grid::point(std::size_t flat) const {
    const Index idx = unravel(flat);
    Point p{};
    for (int i = 0; i < dim(); ++i) {
        const auto u = static_cast<std::size_t>(i);
        p[u] = axes_[u].coordinate(idx[u]);
    }
    return p;
}

std::vector<double> Grid::coordinates(int axis) const {
    const Axis& a = this->axis(axis);
    std::vector<double> c(static_cast<std::size_t>(a.points));
    for (int k = 0; k < a.points; ++k) c[static_cast<std::size_t>(k)] = a.coordinate(k);
    return c;
}

Grid Grid::dual() const {
    std::vector<Axis> d;
    d.reserve(axes_.size());
    for (const auto& a : axes_) d.push_back(a.dual());
    return Grid(std::move(d));
}

Grid Grid::product(const Grid& other) const {
    std::vector<Axis> axes = axes_;
    axes.insert(axes.end(), other.axes_.begin(), other.axes_.end());
    return from_axes(std::move(axes));
}

Grid Grid::slice(int first, int count) const {
    if (first < 0 || count <= 0 || first + count > dim()) {
        throw InvalidArgument("grid slice out of range");
    }
    return Grid(std::vector<Axis>(axes_.begin() + first, axes_.begin() + first + count));
}

double norm(const Point& p, int first, int count) {
    double s = 0.0;
    for (int i = first; i < first + count; ++i) s += p[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)];
    return std::sqrt(s);
}

std::string to_config(const Grid& g) {
    const Axis& a = g.axis(0);
    for (const auto& other : g.axes()) {
        if (!(other == a)) throw InvalidArgument("only isotropic grids serialize to config");
    }
    std::ostringstream os;
    os.precision(17);
    os << "dim = " << g.dim() << "\n"
       << "half_width = " << a.half_width << "\n"
       << "points = " << a.points << "\n";
    return os.str();
}

Grid grid_from_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    for (const char* key : {"dim", "half_width", "points"}) {
        if (!kv.contains(key)) throw InvalidArgument(std::string("grid config missing key '") + key + "'");
    }
    try {
        return Grid::make(std::stoi(kv["dim"]), std::stod(kv["half_width"]), std::stoi(kv["points"]));
    } catch (const std::invalid_argument&) {
        throw InvalidArgument("grid config has a non-numeric value");
    } catch (const std::out_of_range&) {
        throw InvalidArgument("grid config value out of range");
    }
}

SampledFunction::SampledFunction(Grid g, std::vector<cplx> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.size()) {
        throw InvalidArgument("sample count " + std::to_string(values.size()) + " does not match grid size " +
                              std::to_string(grid.size()));
    }
    for (const auto& z : values) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw InvalidArgument("sampled function contains non-finite values");
        }
    }
}

SampledFunction::SampledFunction(Grid g) : grid(std::move(g)), values(grid.size(), cplx{}) {}

PhaseSpaceField::PhaseSpaceField(Grid gx, Grid gxi, std::vector<cplx> v)
    : grid_x(std::move(gx)), grid_xi(std::move(gxi)), values(std::move(v)) {
    if (values.size() != grid_x.size() * grid_xi.size()) {
        throw InvalidArgument("phase-space field shape mismatch");
    }
    for (const auto& z : values) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw InvalidArgument("phase-space field contains non-finite values");
        }
    }
}

PhaseSpaceField::PhaseSpaceField(Grid gx, Grid gxi)
    : grid_x(std::move(gx)), grid_xi(std::move(gxi)), values(grid_x.size() * grid_xi.size(), cplx{}) {}

SampledFunction PhaseSpaceField::as_function() const {
    SampledFunction f;
    f.grid = grid_x.product(grid_xi);
    f.values = values;
    return f;
}

PhaseSpaceField PhaseSpaceField::from_function(const SampledFunction& f, int x_axes) {
    PhaseSpaceField F;
    F.grid_x = f.grid.slice(0, x_axes);
    F.grid_xi = f.grid.slice(x_axes, f.grid.dim() - x_axes);
    F.values = f.values;
    return F;
}

double l2_norm(const SampledFunction& f) {
    double s = 0.0;
    for (const auto& z : f.values) s += std::norm(z);
    return std::sqrt(s * f.grid.cell_volume());
}

cplx inner(const SampledFunction& f, const SampledFunction& g) {
    if (!(f.grid == g.grid)) throw InvalidArgument("inner product of functions on different grids");
    cplx s{};
    for (std::size_t i = 0; i < f.values.size(); ++i) s += f.values[i] * std::conj(g.values[i]);
    return s * f.grid.cell_volume();
}

double max_abs(std::span<const cplx> v) {
    double m = 0.0;
    for (const auto& z : v) m = std::max(m, std::abs(z));
    return m;
}

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) throw InvalidArgument("size mismatch in max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace modop
