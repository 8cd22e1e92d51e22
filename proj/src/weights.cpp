#include "modop/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <variant>

#include "modop/dsl.hpp"
#include "modop/error.hpp"
#include "modop/parallel.hpp"

namespace modop {

namespace {

struct Constant {
    double c;
};
struct Polynomial {
    double t;
    Part part;
};
struct SubExp {
    double r, s;
    Part part;
};
struct SubExpPhase {
    double r1, s, r2, sigma;
};
struct Product {
    Weight a, b;
};
struct Reciprocal {
    Weight a;
};
struct Sampled {
    SampledFunction samples;
};

double part_norm(const Point& z, int n, Part part) {
    switch (part) {
        case Part::All:
            return norm(z, 0, n);
        case Part::X:
            return n == 1 ? std::abs(z[0]) : norm(z, 0, n / 2);
        case Part::Xi:
            if (n < 2) throw InvalidArgument("xi-part weight evaluated on a one-coordinate point");
            return norm(z, n / 2, n - n / 2);
    }
    return 0.0;
}

const char* part_suffix(Part p) {
    switch (p) {
        case Part::X:
            return "_x";
        case Part::Xi:
            return "_xi";
        default:
            return "";
    }
}

std::string point_text(const Point& z, int n) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < n; ++i) os << (i ? ", " : "") << z[static_cast<std::size_t>(i)];
    os << ")";
    return os.str();
}

double interpolate(const SampledFunction& f, const Point& z) {
    const Grid& g = f.grid;
    const int d = g.dim();
    Index base{};
    std::array<double, kMaxAxes> frac{};
    for (int i = 0; i < d; ++i) {
        const auto u = static_cast<std::size_t>(i);
        const Axis& a = g.axis(i);
        double pos = (z[u] + a.half_width) / a.spacing();
        pos = std::clamp(pos, 0.0, static_cast<double>(a.points - 1));
        int k = std::min(static_cast<int>(std::floor(pos)), a.points - 2);
        base[u] = k;
        frac[u] = pos - k;
    }
    double acc = 0.0;
    for (int corner = 0; corner < (1 << d); ++corner) {
        Index idx = base;
        double w = 1.0;
        for (int i = 0; i < d; ++i) {
            const auto u = static_cast<std::size_t>(i);
            const bool up = (corner >> i) & 1;
            idx[u] += up ? 1 : 0;
            w *= up ? frac[u] : 1.0 - frac[u];
        }
        if (w != 0.0) acc += w * f.values[g.flat(idx)].real();
    }
    return acc;
}

}  // namespace

struct Weight::Node {
    std::variant<Constant, Polynomial, SubExp, SubExpPhase, Product, Reciprocal, Sampled> kind;
};

Weight::Weight() : node_(std::make_shared<const Node>(Node{Constant{1.0}})) {}

Weight::Weight(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Weight Weight::constant(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("constant weight must be positive");
    return Weight(std::make_shared<const Node>(Node{Constant{c}}));
}

Weight Weight::polynomial(double t, Part part) {
    if (!std::isfinite(t)) throw InvalidArgument("polynomial weight exponent must be finite");
    return Weight(std::make_shared<const Node>(Node{Polynomial{t, part}}));
}

Weight Weight::subexp(double r, double s, Part part) {
    if (!(s > 0.0) || !std::isfinite(r)) throw InvalidArgument("subexp weight needs s > 0 and finite r");
    return Weight(std::make_shared<const Node>(Node{SubExp{r, s, part}}));
}

Weight Weight::subexp_phase(double r1, double s, double r2, double sigma) {
    if (!(s > 0.0) || !(sigma > 0.0)) throw InvalidArgument("subexp_phase weight needs s, sigma > 0");
    return Weight(std::make_shared<const Node>(Node{SubExpPhase{r1, s, r2, sigma}}));
}

Weight Weight::product(const Weight& a, const Weight& b) {
    return Weight(std::make_shared<const Node>(Node{Product{a, b}}));
}

Weight Weight::reciprocal(const Weight& a) { return Weight(std::make_shared<const Node>(Node{Reciprocal{a}})); }

Weight Weight::sampled(SampledFunction samples) {
    for (const auto& v : samples.values) {
        if (!(v.real() > 0.0) || v.imag() != 0.0) {
            throw EvaluationError("sampled weight must be real and strictly positive");
        }
    }
    return Weight(std::make_shared<const Node>(Node{Sampled{std::move(samples)}}));
}

Weight operator*(const Weight& a, const Weight& b) { return Weight::product(a, b); }

double Weight::eval(const Point& z, int n) const {
    return std::visit(
        [&](const auto& k) -> double {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Constant>) {
                return k.c;
            } else if constexpr (std::is_same_v<K, Polynomial>) {
                const double r = part_norm(z, n, k.part);
                return std::pow(1.0 + r * r, 0.5 * k.t);
            } else if constexpr (std::is_same_v<K, SubExp>) {
                return std::exp(k.r * std::pow(part_norm(z, n, k.part), 1.0 / k.s));
            } else if constexpr (std::is_same_v<K, SubExpPhase>) {
                if (n < 2) throw InvalidArgument("subexp_phase weight needs a phase-space point");
                return std::exp(k.r1 * std::pow(part_norm(z, n, Part::X), 1.0 / k.s) +
                                k.r2 * std::pow(part_norm(z, n, Part::Xi), 1.0 / k.sigma));
            } else if constexpr (std::is_same_v<K, Product>) {
                return k.a.eval(z, n) * k.b.eval(z, n);
            } else if constexpr (std::is_same_v<K, Reciprocal>) {
                return 1.0 / k.a.eval(z, n);
            } else {
                if (k.samples.grid.dim() != n) throw InvalidArgument("sampled weight evaluated in wrong dimension");
                return interpolate(k.samples, z);
            }
        },
        node_->kind);
}

double Weight::operator()(const Point& z, int n) const {
    const double v = eval(z, n);
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw EvaluationError("weight " + describe() + " is not finite and positive at " + point_text(z, n) +
                              " (value " + std::to_string(v) + ")");
    }
    return v;
}

std::vector<double> Weight::on_grid(const Grid& g) const {
    std::vector<double> out(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) out[k] = (*this)(g.point(k), g.dim());
    return out;
}

std::string Weight::describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Constant>) {
                if (k.c == 1.0) {
                    os << "one";
                } else {
                    os << "const " << k.c;
                }
            } else if constexpr (std::is_same_v<K, Polynomial>) {
                os << "poly" << part_suffix(k.part) << " " << k.t;
            } else if constexpr (std::is_same_v<K, SubExp>) {
                os << "subexp" << part_suffix(k.part) << " " << k.r << " " << k.s;
            } else if constexpr (std::is_same_v<K, SubExpPhase>) {
                os << "subexp_phase " << k.r1 << " " << k.s << " " << k.r2 << " " << k.sigma;
            } else if constexpr (std::is_same_v<K, Product>) {
                os << "prod(" << k.a.describe() << ", " << k.b.describe() << ")";
            } else if constexpr (std::is_same_v<K, Reciprocal>) {
                os << "recip(" << k.a.describe() << ")";
            } else {
                os << "sampled[" << k.samples.size() << "]";
            }
        },
        node_->kind);
    return os.str();
}

namespace {

Weight weight_from_node(const dsl::Node& n) {
    auto need = [&](std::size_t count) {
        if (n.numbers.size() != count || !n.children.empty()) {
            throw InvalidArgument("weight '" + n.name + "' takes " + std::to_string(count) + " numeric argument(s)");
        }
    };
    auto part_of = [](const std::string& name, const std::string& stem) {
        if (name == stem) return Part::All;
        if (name == stem + "_x") return Part::X;
        if (name == stem + "_xi") return Part::Xi;
        throw InvalidArgument("unknown weight '" + name + "'");
    };
    if (n.name == "one") {
        need(0);
        return Weight();
    }
    if (n.name == "const") {
        need(1);
        return Weight::constant(n.numbers[0]);
    }
    if (n.name.starts_with("poly")) {
        need(1);
        return Weight::polynomial(n.numbers[0], part_of(n.name, "poly"));
    }
    if (n.name == "subexp_phase") {
        need(4);
        return Weight::subexp_phase(n.numbers[0], n.numbers[1], n.numbers[2], n.numbers[3]);
    }
    if (n.name.starts_with("subexp")) {
        need(2);
        return Weight::subexp(n.numbers[0], n.numbers[1], part_of(n.name, "subexp"));
    }
    if (n.name == "prod") {
        if (n.children.empty() || !n.numbers.empty()) throw InvalidArgument("prod(...) takes weight arguments");
        Weight w = weight_from_node(n.children[0]);
        for (std::size_t i = 1; i < n.children.size(); ++i) w = w * weight_from_node(n.children[i]);
        return w;
    }
    if (n.name == "recip") {
        if (n.children.size() != 1 || !n.numbers.empty()) throw InvalidArgument("recip(...) takes one weight");
        return Weight::reciprocal(weight_from_node(n.children[0]));
    }
    throw InvalidArgument("unknown weight '" + n.name + "'");
}

}  // namespace

Weight parse_weight(const std::string& text) { return weight_from_node(dsl::parse(text)); }

ModerationReport check_moderate(const Weight& w, const Weight& v, const Grid& g, double C) {
    if (!(C > 0.0)) throw InvalidArgument("moderateness constant must be positive");
    const int d = g.dim();
    const std::vector<double> wv = w.on_grid(g);
    const std::vector<double> vv = v.on_grid(g);

    // v must be even wherever the mirrored point is on the grid.
    for (std::size_t j = 0; j < g.size(); ++j) {
        Index idx = g.unravel(j);
        bool has_mirror = true;
        for (int i = 0; i < d; ++i) {
            const auto u = static_cast<std::size_t>(i);
            if (idx[u] == 0) has_mirror = false;
            idx[u] = g.axis(i).points - idx[u];
        }
        if (!has_mirror) continue;
        const double a = vv[j];
        const double b = vv[g.flat(idx)];
        if (std::abs(a - b) > 1e-9 * std::max(a, b)) {
            throw InvalidArgument("moderating weight " + v.describe() + " is not even on the grid");
        }
    }

    const std::size_t n = g.size();
    std::vector<double> best(n, 0.0);
    std::vector<std::size_t> best_y(n, 0);
    parallel_for(n, [&](std::size_t ix) {
        const Index xi = g.unravel(ix);
        for (std::size_t iy = 0; iy < n; ++iy) {
            const Index yi = g.unravel(iy);
            Index sum{};
            bool inside = true;
            for (int i = 0; i < d; ++i) {
                const auto u = static_cast<std::size_t>(i);
                sum[u] = xi[u] + yi[u] - g.axis(i).points / 2;
                if (sum[u] < 0 || sum[u] >= g.axis(i).points) inside = false;
            }
            if (!inside) continue;
            const double ratio = wv[g.flat(sum)] / (wv[ix] * vv[iy]);
            if (ratio > best[ix]) {
                best[ix] = ratio;
                best_y[ix] = iy;
            }
        }
    });
    ModerationReport rep;
    rep.tested_constant = C;
    std::size_t arg = 0;
    for (std::size_t ix = 0; ix < n; ++ix) {
        if (best[ix] > rep.max_ratio) {
            rep.max_ratio = best[ix];
            arg = ix;
        }
    }
    rep.worst_x = g.point(arg);
    rep.worst_y = g.point(best_y[arg]);
    rep.passed = rep.max_ratio <= C;
    return rep;
}

ClassReport check_class(const Weight& w, double s, double sigma, double r, const Grid& g, ClassMode mode, double C,
                        Layout layout) {
    if (!(s > 0.0) || (layout == Layout::Phase && !(sigma > 0.0))) {
        throw InvalidArgument("class check needs s, sigma > 0");
    }
    if (layout == Layout::Phase && g.dim() % 2 != 0) {
        throw InvalidArgument("phase-space class check needs an even number of grid axes");
    }
    ClassReport rep;
    rep.r_values = mode == ClassMode::SomeR ? std::vector<double>{r} : kEveryRSweep;
    rep.passed = true;
    for (double rv : rep.r_values) {
        const Weight bound = layout == Layout::Phase ? Weight::subexp_phase(rv, s, rv, sigma) : Weight::subexp(rv, s);
        rep.per_r.push_back(check_moderate(w, bound, g, C));
        rep.passed = rep.passed && rep.per_r.back().passed;
    }
    return rep;
}

SmoothEquivalent smooth_equivalent(const Weight& w, const Grid& g, std::optional<double> width,
                                   std::optional<double> K) {
    const int d = g.dim();
    const double wd = width.value_or(0.5 * g.axis(0).spacing() * std::sqrt(static_cast<double>(g.axis(0).points)));
    if (!(wd > 0.0)) throw InvalidArgument("mollifier width must be positive");

    // Stencil on the grid lattice, normalized to unit discrete mass.
    std::array<int, kMaxAxes> reach{};
    std::size_t stencil_size = 1;
    for (int i = 0; i < d; ++i) {
        reach[static_cast<std::size_t>(i)] = static_cast<int>(std::ceil(6.0 * wd / g.axis(i).spacing()));
        stencil_size *= static_cast<std::size_t>(2 * reach[static_cast<std::size_t>(i)] + 1);
    }
    std::vector<Point> offsets(stencil_size);
    std::vector<double> kernel(stencil_size);
    double mass = 0.0;
    for (std::size_t s = 0; s < stencil_size; ++s) {
        std::size_t rem = s;
        Point off{};
        double r2 = 0.0;
        for (int i = d - 1; i >= 0; --i) {
            const auto u = static_cast<std::size_t>(i);
            const auto span = static_cast<std::size_t>(2 * reach[u] + 1);
            const int k = static_cast<int>(rem % span) - reach[u];
            rem /= span;
            off[u] = k * g.axis(i).spacing();
            r2 += off[u] * off[u];
        }
        offsets[s] = off;
        kernel[s] = std::exp(-r2 / (2.0 * wd * wd));
        mass += kernel[s];
    }
    for (auto& k : kernel) k /= mass;

    SampledFunction samples(g);
    parallel_for(g.size(), [&](std::size_t k) {
        const Point x = g.point(k);
        double acc = 0.0;
        for (std::size_t s = 0; s < stencil_size; ++s) {
            Point p = x;
            for (int i = 0; i < d; ++i) p[static_cast<std::size_t>(i)] -= offsets[s][static_cast<std::size_t>(i)];
            acc += kernel[s] * w(p, d);
        }
        samples.values[k] = acc;
    });

    SmoothEquivalent out;
    out.ratio_min = std::numeric_limits<double>::infinity();
    out.ratio_max = 0.0;
    double worst_dev = -1.0;
    bool any = false;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const Point x = g.point(k);
        bool interior = true;
        for (int i = 0; i < d; ++i) {
            if (std::abs(x[static_cast<std::size_t>(i)]) > g.axis(i).half_width - 6.0 * wd) interior = false;
        }
        if (!interior) continue;
        any = true;
        const double ratio = samples.values[k].real() / w(x, d);
        out.ratio_min = std::min(out.ratio_min, ratio);
        out.ratio_max = std::max(out.ratio_max, ratio);
        const double dev = std::abs(std::log(ratio));
        if (dev > worst_dev) {
            worst_dev = dev;
            out.worst = x;
        }
    }
    if (!any) throw InvalidArgument("grid has no interior points for mollifier width " + std::to_string(wd));
    if (K && (out.ratio_max > *K || out.ratio_min < 1.0 / *K)) {
        throw EvaluationError("smoothed weight leaves [1/K, K] with K = " + std::to_string(*K) + " at " +
                              point_text(out.worst, d) + "; weight is not moderate at this scale");
    }
    out.omega0 = Weight::sampled(std::move(samples));
    out.omega0.claimed = w.claimed;
    return out;
}

}  // namespace modop
