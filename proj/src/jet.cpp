#include "modop/jet.hpp"

#include <cmath>

#include "modop/error.hpp"

namespace modop {

namespace {
void check_order(int order) {
    if (order < 0 || order >= Jet::kCapacity) {
        throw InvalidArgument("jet order " + std::to_string(order) + " outside [0, " + std::to_string(Jet::kCapacity - 1) +
                              "]");
    }
}
}  // namespace

Jet Jet::constant(cplx c, int order) {
    check_order(order);
    Jet j;
    j.order_ = order;
    j.c_[0] = c;
    return j;
}

Jet Jet::variable(double x0, int order) {
    Jet j = constant(x0, order);
    if (order >= 1) j.c_[1] = 1.0;
    return j;
}

Jet::cplx Jet::derivative(int k) const {
    if (k < 0 || k > order_) throw InvalidArgument("jet derivative order out of range");
    return c_[static_cast<std::size_t>(k)] * std::tgamma(k + 1.0);
}

Jet& Jet::operator+=(const Jet& o) {
    order_ = std::min(order_, o.order_);
    for (int k = 0; k <= order_; ++k) (*this)[k] += o[k];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    order_ = std::min(order_, o.order_);
    for (int k = 0; k <= order_; ++k) (*this)[k] -= o[k];
    return *this;
}

Jet& Jet::operator*=(cplx s) {
    for (int k = 0; k <= order_; ++k) (*this)[k] *= s;
    return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    r.order_ = std::min(a.order_, b.order_);
    for (int k = 0; k <= r.order_; ++k) {
        Jet::cplx s{};
        for (int j = 0; j <= k; ++j) s += a[j] * b[k - j];
        r[k] = s;
    }
    return r;
}

Jet exp(const Jet& u) {
    Jet y;
    y.order_ = u.order_;
    y[0] = std::exp(u[0]);
    for (int k = 1; k <= u.order_; ++k) {
        Jet::cplx s{};
        for (int j = 1; j <= k; ++j) s += static_cast<double>(j) * u[j] * y[k - j];
        y[k] = s / static_cast<double>(k);
    }
    return y;
}

Jet log(const Jet& u) {
    if (u[0] == Jet::cplx{}) throw EvaluationError("log of a jet with zero constant term");
    Jet y;
    y.order_ = u.order_;
    y[0] = std::log(u[0]);
    for (int k = 1; k <= u.order_; ++k) {
        Jet::cplx s = static_cast<double>(k) * u[k];
        for (int j = 1; j < k; ++j) s -= static_cast<double>(j) * y[j] * u[k - j];
        y[k] = s / (static_cast<double>(k) * u[0]);
    }
    return y;
}

Jet pow(const Jet& u, double p) {
    if (u[0] == Jet::cplx{}) throw EvaluationError("fractional power of a jet with zero constant term");
    Jet y;
    y.order_ = u.order_;
    y[0] = std::pow(u[0], p);
    for (int k = 1; k <= u.order_; ++k) {
        Jet::cplx s{};
        for (int j = 1; j <= k; ++j) s += (p * j - (k - j)) * u[j] * y[k - j];
        y[k] = s / (static_cast<double>(k) * u[0]);
    }
    return y;
}

namespace {
void sin_cos(const Jet& u, Jet& s, Jet& c) {
    s = Jet::constant(std::sin(u[0]), u.order());
    c = Jet::constant(std::cos(u[0]), u.order());
    for (int k = 1; k <= u.order(); ++k) {
        Jet::cplx ss{};
        Jet::cplx cc{};
        for (int j = 1; j <= k; ++j) {
            ss += static_cast<double>(j) * u[j] * c[k - j];
            cc -= static_cast<double>(j) * u[j] * s[k - j];
        }
        s[k] = ss / static_cast<double>(k);
        c[k] = cc / static_cast<double>(k);
    }
}
}  // namespace

Jet sin(const Jet& u) {
    Jet s;
    Jet c;
    sin_cos(u, s, c);
    return s;
}

Jet cos(const Jet& u) {
    Jet s;
    Jet c;
    sin_cos(u, s, c);
    return c;
}

Jet conj(const Jet& u) {
    Jet r = u;
    for (int k = 0; k <= u.order_; ++k) r[k] = std::conj(u[k]);
    return r;
}

}  // namespace modop
