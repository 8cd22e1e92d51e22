#include "modop/modspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "modop/error.hpp"
#include "modop/fft.hpp"
#include "modop/stft.hpp"

namespace modop {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double parse_exponent(const std::string& key, const std::string& text) {
    if (text == "inf" || text == "infinity") return kInf;
    double v = 0.0;
    try {
        std::size_t used = 0;
        v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
        throw InvalidArgument("space exponent " + key + "='" + text + "' is not a number");
    }
    if (!(v >= 1.0)) throw InvalidArgument("space exponent " + key + " must be >= 1 (quasi-norms are unsupported)");
    return v;
}

// (sum |a_i|^p w)^{1/p}, or max for p = inf.
double lp(const std::vector<double>& a, double p, double w) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : a) m = std::max(m, x);
        return m;
    }
    // scale by the max to keep pow in range
    double m = 0.0;
    for (double x : a) m = std::max(m, x);
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (double x : a) s += std::pow(x / m, p);
    return m * std::pow(s * w, 1.0 / p);
}

}  // namespace

MixedNormSpec parse_space(const std::string& text) {
    std::istringstream is(text);
    std::string head;
    is >> head;
    if (head != "Lpq") throw InvalidArgument("space spec must start with 'Lpq', got '" + head + "'");
    std::string rest;
    std::getline(is, rest);
    MixedNormSpec spec;
    // split on key= boundaries; the weight expression may contain spaces
    std::vector<std::pair<std::string, std::string>> kv;
    std::size_t pos = 0;
    rest = trim(rest);
    while (pos < rest.size()) {
        const auto eq = rest.find('=', pos);
        if (eq == std::string::npos) throw InvalidArgument("space spec '" + text + "' has a token without '='");
        const std::string key = trim(rest.substr(pos, eq - pos));
        std::size_t next = rest.size();
        for (const char* k : {" p=", " q=", " v="}) {
            const auto at = rest.find(k, eq + 1);
            if (at != std::string::npos) next = std::min(next, at);
        }
        kv.emplace_back(key, trim(rest.substr(eq + 1, next - eq - 1)));
        pos = next;
    }
    for (const auto& [key, value] : kv) {
        if (key == "p") {
            spec.p = parse_exponent("p", value);
        } else if (key == "q") {
            spec.q = parse_exponent("q", value);
        } else if (key == "v") {
            spec.v = parse_weight(value);
        } else {
            throw InvalidArgument("unknown space key '" + key + "'");
        }
    }
    return spec;
}

std::string describe(const MixedNormSpec& spec) {
    auto e = [](double x) {
        if (std::isinf(x)) return std::string("inf");
        std::ostringstream os;
        os << x;
        return os.str();
    };
    return "Lpq p=" + e(spec.p) + " q=" + e(spec.q) + " v=" + spec.v.describe();
}

double mixed_norm(const PhaseSpaceField& F, const MixedNormSpec& spec) {
    const std::size_t nx = F.rows();
    const std::size_t nxi = F.cols();
    const int dx = F.grid_x.dim();
    const int dxi = F.grid_xi.dim();
    const int n = dx + dxi;
    std::vector<double> inner_norms(nxi);
    std::vector<double> column(nx);
    std::vector<Point> xs(nx);
    for (std::size_t i = 0; i < nx; ++i) xs[i] = F.grid_x.point(i);
    for (std::size_t j = 0; j < nxi; ++j) {
        const Point xi = F.grid_xi.point(j);
        for (std::size_t i = 0; i < nx; ++i) {
            Point z = xs[i];
            for (int a = 0; a < dxi; ++a) z[static_cast<std::size_t>(dx + a)] = xi[static_cast<std::size_t>(a)];
            column[i] = std::abs(F.at(i, j)) * spec.v(z, n);
        }
        inner_norms[j] = lp(column, spec.p, F.grid_x.cell_volume());
    }
    return lp(inner_norms, spec.q, F.grid_xi.cell_volume());
}

double mod_norm(const SampledFunction& f, const SampledFunction& phi, const Weight& omega, const MixedNormSpec& spec) {
    PhaseSpaceField V = stft(f, phi);
    const int dx = V.grid_x.dim();
    const int n = dx + V.grid_xi.dim();
    for (std::size_t i = 0; i < V.rows(); ++i) {
        const Point x = V.grid_x.point(i);
        for (std::size_t j = 0; j < V.cols(); ++j) {
            const Point xi = V.grid_xi.point(j);
            Point z = x;
            for (int a = 0; a < V.grid_xi.dim(); ++a) z[static_cast<std::size_t>(dx + a)] = xi[static_cast<std::size_t>(a)];
            V.at(i, j) *= omega(z, n);
        }
    }
    return mixed_norm(V, spec);
}

PhaseSpaceField convolve(const PhaseSpaceField& F, const PhaseSpaceField& psi) {
    if (!(F.grid_x == psi.grid_x) || !(F.grid_xi == psi.grid_xi)) {
        throw InvalidArgument("convolution operands live on different grids");
    }
    const Grid g = F.grid_x.product(F.grid_xi);
    std::vector<int> shape;
    std::vector<int> axes;
    for (int i = 0; i < g.dim(); ++i) {
        shape.push_back(g.axis(i).points);
        axes.push_back(i);
    }
    // Move psi's origin (index N/2) to index 0 before the circular product.
    std::vector<cplx> a = F.values;
    std::vector<cplx> b(psi.values.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        Index idx = g.unravel(k);
        for (int i = 0; i < g.dim(); ++i) {
            const auto u = static_cast<std::size_t>(i);
            idx[u] = (idx[u] + g.axis(i).points / 2) % g.axis(i).points;
        }
        b[k] = psi.values[g.flat(idx)];
    }
    fft::transform_axes(a, shape, axes, fft::Sign::Forward);
    fft::transform_axes(b, shape, axes, fft::Sign::Forward);
    for (std::size_t k = 0; k < a.size(); ++k) a[k] *= b[k];
    fft::transform_axes(a, shape, axes, fft::Sign::Backward);
    const double scale = g.cell_volume() / static_cast<double>(g.size());
    for (auto& z : a) z *= scale;
    return PhaseSpaceField(F.grid_x, F.grid_xi, std::move(a));
}

double l1_norm(const PhaseSpaceField& psi, const Weight& v) {
    const int dx = psi.grid_x.dim();
    const int n = dx + psi.grid_xi.dim();
    double s = 0.0;
    for (std::size_t i = 0; i < psi.rows(); ++i) {
        const Point x = psi.grid_x.point(i);
        for (std::size_t j = 0; j < psi.cols(); ++j) {
            const Point xi = psi.grid_xi.point(j);
            Point z = x;
            for (int a = 0; a < psi.grid_xi.dim(); ++a) z[static_cast<std::size_t>(dx + a)] = xi[static_cast<std::size_t>(a)];
            s += std::abs(psi.at(i, j)) * v(z, n);
        }
    }
    return s * psi.grid_x.cell_volume() * psi.grid_xi.cell_volume();
}

MinkowskiReport check_minkowski(const PhaseSpaceField& F, const PhaseSpaceField& psi, const MixedNormSpec& spec,
                                const Weight& v) {
    MinkowskiReport rep;
    rep.lhs = mixed_norm(convolve(F, psi), spec);
    rep.rhs = mixed_norm(F, spec) * l1_norm(psi, v);
    rep.passed = rep.lhs <= rep.constant * rep.rhs;
    return rep;
}

PhaseSpaceField shifted(const PhaseSpaceField& F, const Index& shift_x, const Index& shift_xi) {
    PhaseSpaceField out(F.grid_x, F.grid_xi);
    for (std::size_t i = 0; i < F.rows(); ++i) {
        Index ix = F.grid_x.unravel(i);
        bool ok = true;
        for (int a = 0; a < F.grid_x.dim(); ++a) {
            const auto u = static_cast<std::size_t>(a);
            ix[u] -= shift_x[u];
            if (ix[u] < 0 || ix[u] >= F.grid_x.axis(a).points) ok = false;
        }
        if (!ok) continue;
        const std::size_t src_i = F.grid_x.flat(ix);
        for (std::size_t j = 0; j < F.cols(); ++j) {
            Index jx = F.grid_xi.unravel(j);
            bool okj = true;
            for (int a = 0; a < F.grid_xi.dim(); ++a) {
                const auto u = static_cast<std::size_t>(a);
                jx[u] -= shift_xi[u];
                if (jx[u] < 0 || jx[u] >= F.grid_xi.axis(a).points) okj = false;
            }
            if (okj) out.at(i, j) = F.at(src_i, F.grid_xi.flat(jx));
        }
    }
    return out;
}

}  // namespace modop
