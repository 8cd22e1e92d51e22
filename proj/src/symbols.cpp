#include "modop/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "modop/dsl.hpp"
#include "modop/error.hpp"
#include "modop/stft.hpp"

namespace modop {

// ---------------------------------------------------------------- factors

Factor Factor::one() { return Factor{}; }

Factor Factor::from_fn(JetFn fn, int degree, std::string text) {
    Factor f;
    f.eval = [fn = std::move(fn)](double x, int m) { return fn(Jet::variable(x, m)); };
    f.degree = degree;
    f.text = std::move(text);
    return f;
}

Jet Factor::at(double x, int order) const {
    if (vanishes()) return Jet::constant(0.0, order);
    if (!eval) return Jet::constant(1.0, order);
    return eval(x, order);
}

Factor Factor::derivative(int k) const {
    if (k == 0 || vanishes()) return *this;
    Factor d;
    if (degree >= 0 && k > degree) {
        d.degree = -2;
        d.text = "0";
        return d;
    }
    d.degree = degree >= 0 ? degree - k : -1;
    d.text = "d" + std::to_string(k) + "[" + text + "]";
    Factor base = *this;
    d.eval = [base, k](double x, int m) {
        const Jet full = base.at(x, m + k);
        Jet out = Jet::constant(0.0, m);
        // c'_j = c_{j+k} (j+k)! / j!
        for (int j = 0; j <= m; ++j) {
            double ratio = 1.0;
            for (int i = j + 1; i <= j + k; ++i) ratio *= i;
            out[j] = full[j + k] * ratio;
        }
        return out;
    };
    return d;
}

Factor Factor::conjugated() const {
    if (!eval || vanishes()) return *this;
    Factor c = *this;
    Factor base = *this;
    c.eval = [base](double x, int m) { return conj(base.at(x, m)); };
    c.text = "conj[" + text + "]";
    return c;
}

Factor operator*(const Factor& a, const Factor& b) {
    if (a.vanishes()) return a;
    if (b.vanishes()) return b;
    if (!a.eval) return b;
    if (!b.eval) return a;
    Factor p;
    p.degree = (a.degree >= 0 && b.degree >= 0) ? a.degree + b.degree : -1;
    p.text = a.text + "*" + b.text;
    p.eval = [a, b](double x, int m) { return a.at(x, m) * b.at(x, m); };
    return p;
}

// ---------------------------------------------------------- exact symbols

cplx ExactSymbol::derivative(int alpha, int beta, double x, double xi) const {
    cplx s{};
    for (const auto& t : terms) {
        if (t.fx.vanishes() || t.fxi.vanishes()) continue;
        s += t.coef * t.fx.at(x, alpha).derivative(alpha) * t.fxi.at(xi, beta).derivative(beta);
    }
    return s;
}

ExactSymbol ExactSymbol::conjugated() const {
    ExactSymbol out;
    for (const auto& t : terms) out.terms.push_back({std::conj(t.coef), t.fx.conjugated(), t.fxi.conjugated()});
    return out;
}

ExactSymbol ExactSymbol::mixed_derivative(int k) const {
    ExactSymbol out;
    for (const auto& t : terms) {
        SeparableTerm d{t.coef, t.fx.derivative(k), t.fxi.derivative(k)};
        if (!d.fx.vanishes() && !d.fxi.vanishes()) out.terms.push_back(std::move(d));
    }
    return out;
}

ExactSymbol ExactSymbol::scaled(cplx c) const {
    ExactSymbol out = *this;
    for (auto& t : out.terms) t.coef *= c;
    return out;
}

std::string ExactSymbol::describe() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        os << (i ? " + " : "") << terms[i].coef << "*" << terms[i].fx.text << "(x)*" << terms[i].fxi.text << "(xi)";
    }
    return terms.empty() ? "0" : os.str();
}

ExactSymbol operator+(const ExactSymbol& a, const ExactSymbol& b) {
    ExactSymbol out = a;
    out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
    return out;
}

ExactSymbol operator*(const ExactSymbol& a, const ExactSymbol& b) {
    ExactSymbol out;
    for (const auto& s : a.terms) {
        for (const auto& t : b.terms) out.terms.push_back({s.coef * t.coef, s.fx * t.fx, s.fxi * t.fxi});
    }
    return out;
}

// ----------------------------------------------------------------- symbols

namespace {

void require_1d(const Grid& g, const char* what) {
    if (g.dim() != 1) throw InvalidArgument(std::string(what) + " supports d = 1 only");
}

cplx interpolate_field(const PhaseSpaceField& F, double x, double xi) {
    const Axis& ax = F.grid_x.axis(0);
    const Axis& axi = F.grid_xi.axis(0);
    auto locate = [](const Axis& a, double v, int& k, double& t) {
        double pos = std::clamp((v + a.half_width) / a.spacing(), 0.0, static_cast<double>(a.points - 1));
        k = std::min(static_cast<int>(std::floor(pos)), a.points - 2);
        t = pos - k;
    };
    int i = 0;
    int j = 0;
    double tx = 0.0;
    double txi = 0.0;
    locate(ax, x, i, tx);
    locate(axi, xi, j, txi);
    const auto ui = static_cast<std::size_t>(i);
    const auto uj = static_cast<std::size_t>(j);
    return (1 - tx) * (1 - txi) * F.at(ui, uj) + tx * (1 - txi) * F.at(ui + 1, uj) + (1 - tx) * txi * F.at(ui, uj + 1) +
           tx * txi * F.at(ui + 1, uj + 1);
}

// Samples on xs x xis, row-major; each factor is evaluated once per coordinate.
std::vector<cplx> sample_exact(const ExactSymbol& e, const std::vector<double>& xs, const std::vector<double>& xis) {
    std::vector<cplx> out(xs.size() * xis.size(), cplx{});
    std::vector<cplx> fx(xs.size());
    std::vector<cplx> fxi(xis.size());
    for (const auto& t : e.terms) {
        if (t.fx.vanishes() || t.fxi.vanishes()) continue;
        for (std::size_t i = 0; i < xs.size(); ++i) fx[i] = t.coef * t.fx.at(xs[i], 0).value();
        for (std::size_t j = 0; j < xis.size(); ++j) fxi[j] = t.fxi.at(xis[j], 0).value();
        for (std::size_t i = 0; i < xs.size(); ++i) {
            for (std::size_t j = 0; j < xis.size(); ++j) out[i * xis.size() + j] += fx[i] * fxi[j];
        }
    }
    return out;
}

ExactSymbol single(Factor fx, Factor fxi, cplx coef = 1.0) { return ExactSymbol{{SeparableTerm{coef, std::move(fx), std::move(fxi)}}}; }

Factor identity_factor(const char* name) {
    return Factor::from_fn([](const Jet& x) { return x; }, 1, name);
}

Factor bracket_power(double t, const std::string& var) {
    const bool even_int = t >= 0 && std::floor(t / 2) * 2 == t;
    return Factor::from_fn([t](const Jet& x) { return pow(x * x + 1.0, 0.5 * t); }, even_int ? static_cast<int>(t) : -1,
                           "<" + var + ">^" + std::to_string(t));
}

Factor subexp_factor(double r, double s, const std::string& var) {
    return Factor::from_fn([r, s](const Jet& x) { return exp(pow(x * x + 1.0, 0.5 / s) * r); }, -1,
                           "exp(" + std::to_string(r) + "<" + var + ">^(1/" + std::to_string(s) + "))");
}

Factor gauss_factor(double w, double b, const std::string& var) {
    if (!(w > 0.0)) throw InvalidArgument("gaussian symbol width must be positive");
    return Factor::from_fn(
        [w, b](const Jet& x) { return exp(x * x * cplx{-0.5 / (w * w), 0.0} + x * cplx{0.0, b}); }, -1,
        "gauss_" + var + "(" + std::to_string(w) + ")");
}

}  // namespace

Symbol Symbol::from_field(PhaseSpaceField field, std::string name) {
    require_1d(field.grid_x, "symbols");
    Symbol a;
    a.field = std::move(field);
    a.meta.name = std::move(name);
    return a;
}

Symbol Symbol::from_exact(ExactSymbol exact, const Grid& gx, std::string name) {
    require_1d(gx, "symbols");
    Symbol a;
    a.field = PhaseSpaceField(gx, gx.dual());
    a.field.values = sample_exact(exact, gx.coordinates(0), gx.dual().coordinates(0));
    for (const auto& v : a.field.values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw EvaluationError("symbol " + name + " is not finite on the grid");
        }
    }
    a.exact = std::move(exact);
    a.meta.name = std::move(name);
    return a;
}

cplx Symbol::eval(double x, double xi) const {
    if (exact) return exact->value(x, xi);
    return interpolate_field(field, x, xi);
}

Symbol Symbol::resampled(const Grid& gx) const {
    if (!exact) {
        if (field.grid_x == gx && field.grid_xi == gx.dual()) return *this;
        throw InvalidArgument("sampled symbol " + meta.name + " cannot be moved to another grid");
    }
    Symbol out = from_exact(*exact, gx, meta.name);
    out.meta = meta;
    out.warnings = warnings;
    return out;
}

Symbol Symbol::conjugated() const {
    Symbol out = *this;
    for (auto& v : out.field.values) v = std::conj(v);
    if (exact) out.exact = exact->conjugated();
    out.meta.name = "conj(" + meta.name + ")";
    return out;
}

QuantizationParam QuantizationParam::scalar(double t, int d) {
    if (!std::isfinite(t)) throw InvalidArgument("quantization parameter must be finite");
    if (d != 1) throw InvalidArgument("quantization parameters support d = 1 only");
    return QuantizationParam{d, {t}};
}

double QuantizationParam::scalar_value() const {
    if (d != 1 || A.size() != 1) throw InvalidArgument("quantization parameters support d = 1 only");
    return A[0];
}

namespace symbols {

Symbol one(const Grid& g) { return Symbol::from_exact(single(Factor::one(), Factor::one()), g, "one"); }

Symbol xi(const Grid& g) { return Symbol::from_exact(single(Factor::one(), identity_factor("xi")), g, "xi"); }

Symbol x_times_xi(const Grid& g) {
    return Symbol::from_exact(single(identity_factor("x"), identity_factor("xi")), g, "x_xi");
}

Symbol bracket_xi2(const Grid& g) { return Symbol::from_exact(single(Factor::one(), bracket_power(2.0, "xi")), g, "<xi>^2"); }

Symbol sin_x(const Grid& g) {
    return Symbol::from_exact(single(Factor::from_fn([](const Jet& x) { return sin(x); }, -1, "sin"), Factor::one()), g,
                              "sin_x");
}

Symbol gaussian(const Grid& g, double wx, double wxi, double b) {
    return Symbol::from_exact(single(gauss_factor(wx, b, "x"), gauss_factor(wxi, 0.0, "xi")), g, "gauss_sym");
}

Symbol subexp(const Grid& g, double r, double s, double sigma) {
    Symbol a = Symbol::from_exact(single(subexp_factor(r, s, "x"), subexp_factor(r, sigma, "xi")), g, "subexp_sym");
    a.meta.s = s;
    a.meta.sigma = sigma;
    return a;
}

}  // namespace symbols

namespace {

ExactSymbol symbol_from_node(const dsl::Node& n) {
    auto need = [&](std::size_t count) {
        if (n.numbers.size() != count || !n.children.empty()) {
            throw InvalidArgument("symbol '" + n.name + "' takes " + std::to_string(count) + " numeric argument(s)");
        }
    };
    const Factor one = Factor::one();
    if (n.name == "sum" || n.name == "prod") {
        if (n.children.empty() || !n.numbers.empty()) throw InvalidArgument(n.name + "(...) takes symbol arguments");
        ExactSymbol acc = symbol_from_node(n.children[0]);
        for (std::size_t i = 1; i < n.children.size(); ++i) {
            acc = n.name == "sum" ? acc + symbol_from_node(n.children[i]) : acc * symbol_from_node(n.children[i]);
        }
        return acc;
    }
    if (n.name == "scale") {
        if (n.numbers.size() != 1 || n.children.size() != 1) throw InvalidArgument("scale(c, symbol) expected");
        return symbol_from_node(n.children[0]).scaled(n.numbers[0]);
    }
    if (n.name == "one") return need(0), single(one, one);
    if (n.name == "const") return need(1), single(one, one, n.numbers[0]);
    if (n.name == "x") return need(0), single(identity_factor("x"), one);
    if (n.name == "xi") return need(0), single(one, identity_factor("xi"));
    if (n.name == "x_xi") return need(0), single(identity_factor("x"), identity_factor("xi"));
    if (n.name == "bracket_xi2" || n.name == "<xi>^2") return need(0), single(one, bracket_power(2.0, "xi"));
    if (n.name == "poly_x") return need(1), single(bracket_power(n.numbers[0], "x"), one);
    if (n.name == "poly_xi") return need(1), single(one, bracket_power(n.numbers[0], "xi"));
    if (n.name == "subexp_x") return need(2), single(subexp_factor(n.numbers[0], n.numbers[1], "x"), one);
    if (n.name == "subexp_xi") return need(2), single(one, subexp_factor(n.numbers[0], n.numbers[1], "xi"));
    if (n.name == "sin_x") return need(0), single(Factor::from_fn([](const Jet& x) { return sin(x); }, -1, "sin"), one);
    if (n.name == "cos_x") return need(0), single(Factor::from_fn([](const Jet& x) { return cos(x); }, -1, "cos"), one);
    if (n.name == "sin_xi") return need(0), single(one, Factor::from_fn([](const Jet& x) { return sin(x); }, -1, "sin"));
    if (n.name == "cos_xi") return need(0), single(one, Factor::from_fn([](const Jet& x) { return cos(x); }, -1, "cos"));
    if (n.name == "gauss_x") return need(1), single(gauss_factor(n.numbers[0], 0.0, "x"), one);
    if (n.name == "gauss_xi") return need(1), single(one, gauss_factor(n.numbers[0], 0.0, "xi"));
    if (n.name == "modulate_x") {
        need(1);
        const double b = n.numbers[0];
        return single(Factor::from_fn([b](const Jet& x) { return exp(x * cplx{0.0, b}); }, -1, "e^{ibx}"), one);
    }
    if (n.name == "gauss_sym") {
        need(2);
        return single(gauss_factor(n.numbers[0], 0.0, "x"), gauss_factor(n.numbers[1], 0.0, "xi"));
    }
    throw InvalidArgument("unknown symbol '" + n.name + "'");
}

}  // namespace

Symbol parse_symbol(const std::string& text, const Grid& g) {
    std::string body = text;
    const auto first = body.find_first_not_of(" \t");
    if (first != std::string::npos && body.compare(first, 4, "sym ") == 0) body = body.substr(first + 4);
    Symbol a = Symbol::from_exact(symbol_from_node(dsl::parse(body)), g, text);
    return a;
}

// ------------------------------------------------------ spectral utilities

bool spectrally_resolved(const PhaseSpaceField& field, double tol) {
    const SampledFunction fhat = fourier(field.as_function());
    const double peak = max_abs(fhat.values);
    if (peak == 0.0) return true;
    double edge = 0.0;
    for (std::size_t k = 0; k < fhat.size(); ++k) {
        const Index idx = fhat.grid.unravel(k);
        for (int a = 0; a < fhat.grid.dim(); ++a) {
            const int i = idx[static_cast<std::size_t>(a)];
            if (i == 0 || i == fhat.grid.axis(a).points - 1) {
                edge = std::max(edge, std::abs(fhat.values[k]));
                break;
            }
        }
    }
    return edge <= tol * peak;
}

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

// Central differences along one axis of the (x, xi) field, one-sided at the edges.
std::vector<cplx> difference(const std::vector<cplx>& v, std::size_t rows, std::size_t cols, int axis, double h) {
    std::vector<cplx> out(v.size());
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            auto at = [&](std::ptrdiff_t ii, std::ptrdiff_t jj) {
                return v[static_cast<std::size_t>(ii) * cols + static_cast<std::size_t>(jj)];
            };
            const auto n = static_cast<std::ptrdiff_t>(axis == 0 ? rows : cols);
            const auto k = static_cast<std::ptrdiff_t>(axis == 0 ? i : j);
            auto sample = [&](std::ptrdiff_t kk) {
                return axis == 0 ? at(kk, static_cast<std::ptrdiff_t>(j)) : at(static_cast<std::ptrdiff_t>(i), kk);
            };
            cplx d;
            if (k == 0) {
                d = (sample(1) - sample(0)) / h;
            } else if (k == n - 1) {
                d = (sample(n - 1) - sample(n - 2)) / h;
            } else {
                d = (sample(k + 1) - sample(k - 1)) / (2.0 * h);
            }
            out[i * cols + j] = d;
        }
    }
    return out;
}

// |d_x^alpha d_xi^beta a| / omega on the symbol grid for every alpha + beta <= K.
struct DerivativeTable {
    int K = 0;
    std::vector<std::vector<double>> ratio;  // index alpha * (K + 1) + beta
    std::string route;
    std::vector<std::string> warnings;
    const std::vector<double>& at(int alpha, int beta) const {
        return ratio[static_cast<std::size_t>(alpha * (K + 1) + beta)];
    }
};

DerivativeTable derivative_table(const Symbol& a, const Weight& omega, int K) {
    if (K < 0 || K > kMaxSymbolOrder) throw InvalidArgument("symbol seminorm order K must lie in [0, 6]");
    const PhaseSpaceField& F = a.field;
    const std::size_t rows = F.rows();
    const std::size_t cols = F.cols();
    const auto xs = F.grid_x.coordinates(0);
    const auto xis = F.grid_xi.coordinates(0);
    std::vector<double> w(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) w[i * cols + j] = omega(Point{xs[i], xis[j]}, 2);
    }

    DerivativeTable tab;
    tab.K = K;
    tab.ratio.assign(static_cast<std::size_t>((K + 1) * (K + 1)), {});
    auto store = [&](int alpha, int beta, const std::vector<cplx>& d) {
        std::vector<double> r(rows * cols);
        for (std::size_t k = 0; k < r.size(); ++k) r[k] = std::abs(d[k]) / w[k];
        tab.ratio[static_cast<std::size_t>(alpha * (K + 1) + beta)] = std::move(r);
    };

    if (a.exact) {
        tab.route = "exact";
        // Separable terms: jets per x and per xi, combined per (alpha, beta).
        const auto& terms = a.exact->terms;
        std::vector<std::vector<Jet>> jx(terms.size());
        std::vector<std::vector<Jet>> jxi(terms.size());
        for (std::size_t t = 0; t < terms.size(); ++t) {
            for (double x : xs) jx[t].push_back(terms[t].fx.at(x, K));
            for (double xi : xis) jxi[t].push_back(terms[t].fxi.at(xi, K));
        }
        for (int alpha = 0; alpha <= K; ++alpha) {
            for (int beta = 0; alpha + beta <= K; ++beta) {
                std::vector<cplx> d(rows * cols, cplx{});
                const double fa = factorial(alpha);
                const double fb = factorial(beta);
                for (std::size_t t = 0; t < terms.size(); ++t) {
                    if (terms[t].fx.vanishes() || terms[t].fxi.vanishes()) continue;
                    for (std::size_t i = 0; i < rows; ++i) {
                        const cplx ax = terms[t].coef * jx[t][i][alpha] * fa;
                        if (ax == cplx{}) continue;
                        for (std::size_t j = 0; j < cols; ++j) d[i * cols + j] += ax * jxi[t][j][beta] * fb;
                    }
                }
                store(alpha, beta, d);
            }
        }
        return tab;
    }

    const SampledFunction f = F.as_function();
    if (spectrally_resolved(F)) {
        tab.route = "spectral";
        for (int alpha = 0; alpha <= K; ++alpha) {
            for (int beta = 0; alpha + beta <= K; ++beta) {
                store(alpha, beta, spectral_derivative(f, Index{alpha, beta, 0, 0}).values);
            }
        }
        return tab;
    }

    tab.route = "finite-difference";
    tab.warnings.push_back("sampled symbol is not spectrally resolved; derivatives use finite differences");
    std::vector<cplx> dx = F.values;
    for (int alpha = 0; alpha <= K; ++alpha) {
        std::vector<cplx> dxi = dx;
        for (int beta = 0; alpha + beta <= K; ++beta) {
            store(alpha, beta, dxi);
            dxi = difference(dxi, rows, cols, 1, F.grid_xi.axis(0).spacing());
        }
        dx = difference(dx, rows, cols, 0, F.grid_x.axis(0).spacing());
    }
    return tab;
}

GammaReport gamma_from_table(const DerivativeTable& tab, const PhaseSpaceField& F, double s, double sigma, double h) {
    const int K = tab.K;
    GammaReport rep;
    rep.route = tab.route;
    rep.warnings = tab.warnings;
    rep.order_sups.assign(static_cast<std::size_t>(K + 1), 0.0);
    std::vector<double> inner_sups(static_cast<std::size_t>(K + 1), 0.0);
    const auto xs = F.grid_x.coordinates(0);
    const auto xis = F.grid_xi.coordinates(0);
    const double lx = 0.5 * F.grid_x.axis(0).half_width;
    const double lxi = 0.5 * F.grid_xi.axis(0).half_width;
    const std::size_t cols = F.cols();
    for (int alpha = 0; alpha <= K; ++alpha) {
        for (int beta = 0; alpha + beta <= K; ++beta) {
            const double denom =
                std::pow(h, alpha + beta) * std::pow(factorial(alpha), sigma) * std::pow(factorial(beta), s);
            const auto& r = tab.at(alpha, beta);
            const auto order = static_cast<std::size_t>(alpha + beta);
            for (std::size_t k = 0; k < r.size(); ++k) {
                const double v = r[k] / denom;
                if (v > rep.value) {
                    rep.value = v;
                    rep.alpha = alpha;
                    rep.beta = beta;
                    rep.attained_order = alpha + beta;
                }
                rep.order_sups[order] = std::max(rep.order_sups[order], v);
                if (std::abs(xs[k / cols]) <= lx && std::abs(xis[k % cols]) <= lxi) {
                    inner_sups[order] = std::max(inner_sups[order], v);
                }
            }
        }
    }
    rep.growth = 1.0;
    for (int k = 0; k <= K; ++k) {
        const double full = rep.order_sups[static_cast<std::size_t>(k)];
        if (full < 1e-3 * rep.value || full == 0.0) continue;
        const double inner = inner_sups[static_cast<std::size_t>(k)];
        rep.growth = std::max(rep.growth, inner > 0.0 ? full / inner : std::numeric_limits<double>::infinity());
    }
    return rep;
}

}  // namespace

GammaReport gamma_seminorm(const Symbol& a, const Weight& omega, double s, double sigma, double h, int K) {
    if (!(h > 0.0) || !(s > 0.0) || !(sigma > 0.0)) throw InvalidArgument("gamma seminorm needs h, s, sigma > 0");
    return gamma_from_table(derivative_table(a, omega, K), a.field, s, sigma, h);
}

std::string to_string(Evidence e) {
    switch (e) {
        case Evidence::RoumieuEvidence:
            return "RoumieuEvidence";
        case Evidence::BeurlingEvidence:
            return "BeurlingEvidence";
        case Evidence::Neither:
            return "Neither";
    }
    return "Neither";
}

Classification classify_symbol(const Symbol& a, const Weight& omega, double s, double sigma, int K,
                               const ClassificationOptions& opts) {
    if (!(s > 0.0) || !(sigma > 0.0)) throw InvalidArgument("classification needs s, sigma > 0");
    const DerivativeTable tab = derivative_table(a, omega, K);
    Classification out;
    bool all_stable = true;
    bool any_stable = false;
    for (double h : opts.h_sweep) {
        HProfileEntry e;
        e.h = h;
        e.report = gamma_from_table(tab, a.field, s, sigma, h);
        e.finite = e.report.value <= opts.threshold && e.report.growth <= opts.growth_tol;
        const auto& m = e.report.order_sups;
        const bool tail_settled =
            K == 0 || m[static_cast<std::size_t>(K)] <= m[static_cast<std::size_t>(K - 1)] ||
            m[static_cast<std::size_t>(K)] <= 1e-12 * e.report.value;
        e.stable = e.finite && tail_settled;
        all_stable = all_stable && e.stable;
        any_stable = any_stable || e.stable;
        out.profile.push_back(std::move(e));
    }
    out.evidence = all_stable ? Evidence::BeurlingEvidence
                              : (any_stable ? Evidence::RoumieuEvidence : Evidence::Neither);
    return out;
}

PhaseSpaceField phase_space_gaussian(const Grid& gx, const Grid& gxi, double spread) {
    const Grid p = gx.product(gxi);
    SampledFunction g(p);
    for (std::size_t k = 0; k < p.size(); ++k) {
        const Point z = p.point(k);
        const double r2 = norm(z, 0, p.dim()) * norm(z, 0, p.dim());
        g.values[k] = std::exp(-r2 / (2.0 * spread * spread)) / (std::sqrt(std::numbers::pi) * spread);
    }
    return PhaseSpaceField::from_function(g, gx.dim());
}

double stft_symbol_check(const Symbol& a, const PhaseSpaceField& window, const Weight& omega, double R, double s,
                         double sigma) {
    if (!(s > 0.0) || !(sigma > 0.0) || !(R >= 0.0)) throw InvalidArgument("stft symbol check needs s, sigma > 0, R >= 0");
    const PhaseSpaceField& F = a.field;
    if (!(window.grid_x == F.grid_x) || !(window.grid_xi == F.grid_xi)) {
        throw InvalidArgument("stft symbol check: window grid differs from the symbol grid");
    }
    if (F.grid_x.axis(0).points > 32 || F.grid_xi.axis(0).points > 32) {
        throw BudgetError("stft symbol check is limited to 32 points per phase-space axis");
    }
    const std::size_t n = F.values.size();
    check_budget(n * n * sizeof(cplx) * 3, "4-D symbol STFT");

    const PhaseSpaceField V = stft(F.as_function(), window.as_function());
    // V.grid_x = (x, xi), V.grid_xi = (eta, y)
    double best = 0.0;
    for (std::size_t i = 0; i < V.rows(); ++i) {
        const Point xxi = V.grid_x.point(i);
        const double w = omega(xxi, 2);
        for (std::size_t j = 0; j < V.cols(); ++j) {
            const Point ey = V.grid_xi.point(j);
            const double growth = std::exp(R * (std::pow(std::abs(ey[1]), 1.0 / s) + std::pow(std::abs(ey[0]), 1.0 / sigma)));
            best = std::max(best, std::abs(V.at(i, j)) * growth / w);
        }
    }
    return best;
}

// ---------------------------------------------------- quantization change

namespace {

constexpr int kMaxSeriesTerms = 12;

double sup_on_grid(const ExactSymbol& e, const PhaseSpaceField& F) {
    return max_abs(sample_exact(e, F.grid_x.coordinates(0), F.grid_xi.coordinates(0)));
}

Symbol change_by_fft(const Symbol& a, double c) {
    const SampledFunction f = a.field.as_function();
    SampledFunction fhat = fourier(f);
    for (std::size_t k = 0; k < fhat.size(); ++k) {
        const Point ey = fhat.grid.point(k);  // (eta, y): eta dual to x, y dual to xi
        fhat.values[k] *= std::polar(1.0, c * ey[0] * ey[1]);
    }
    SampledFunction back = inverse_fourier(fhat);
    back.grid = f.grid;
    Symbol out = Symbol::from_field(PhaseSpaceField::from_function(back, 1), a.meta.name);
    out.meta = a.meta;
    out.warnings = a.warnings;
    return out;
}

Symbol change_by_series(const Symbol& a, double c) {
    const ExactSymbol& e = *a.exact;
    ExactSymbol acc;
    std::vector<std::string> warnings = a.warnings;
    const double base = std::max(sup_on_grid(e, a.field), 1e-300);
    double prev = std::numeric_limits<double>::infinity();
    bool terminated = false;
    for (int k = 0; k <= kMaxSeriesTerms; ++k) {
        const ExactSymbol dk = e.mixed_derivative(k);
        if (dk.terms.empty()) {
            terminated = true;
            break;
        }
        // (-i c)^k / k!
        const cplx coef = std::pow(cplx{0.0, -c}, k) / factorial(k);
        const ExactSymbol term = dk.scaled(coef);
        const double mag = sup_on_grid(term, a.field);
        if (k > 0 && mag > prev) {
            warnings.push_back("quantization series is asymptotic; truncated at its smallest term (order " +
                               std::to_string(k - 1) + ", relative size " + std::to_string(prev / base) + ")");
            terminated = true;
            break;
        }
        acc = acc + term;
        prev = mag;
        if (mag <= 1e-15 * base) {
            terminated = true;
            break;
        }
    }
    if (!terminated) {
        warnings.push_back("quantization series truncated after " + std::to_string(kMaxSeriesTerms) +
                           " terms, last relative size " + std::to_string(prev / base));
    }
    Symbol out = Symbol::from_exact(std::move(acc), a.grid_x(), a.meta.name);
    out.meta = a.meta;
    out.warnings = std::move(warnings);
    return out;
}

}  // namespace

Symbol quantization_change(const Symbol& a, const QuantizationParam& A1, const QuantizationParam& A2) {
    require_1d(a.grid_x(), "quantization change");
    const double c = A1.scalar_value() - A2.scalar_value();
    if (c == 0.0) return a;
    if (spectrally_resolved(a.field)) return change_by_fft(a, c);
    if (a.exact) return change_by_series(a, c);
    throw AliasingError("symbol " + a.meta.name +
                        " is not decayed in the spectral boundary and has no exact representation; refine the grid");
}

Symbol adjoint_symbol(const Symbol& a) {
    Symbol b = quantization_change(a.conjugated(), QuantizationParam::scalar(1.0), QuantizationParam::scalar(0.0));
    b.meta.name = "adjoint(" + a.meta.name + ")";
    return b;
}

}  // namespace modop
