#pragma once

#include <array>
#include <complex>
#include <functional>

namespace modop {

// Truncated Taylor series c_0 + c_1 t + ... + c_K t^K of a univariate
// function around a point; the k-th derivative is k! c_k.
class Jet {
public:
    static constexpr int kCapacity = 24;
    using cplx = std::complex<double>;

    Jet() = default;
    static Jet constant(cplx c, int order);
    // Independent variable seeded at x0.
    static Jet variable(double x0, int order);

    int order() const { return order_; }
    cplx operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
    cplx& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
    cplx value() const { return c_[0]; }
    cplx derivative(int k) const;

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(cplx s);

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(Jet a, cplx s) { return a *= s; }
    friend Jet operator*(cplx s, Jet a) { return a *= s; }
    friend Jet operator+(Jet a, cplx s) {
        a.c_[0] += s;
        return a;
    }
    friend Jet operator*(const Jet& a, const Jet& b);
    Jet operator-() const { return *this * cplx{-1.0, 0.0}; }

    friend Jet exp(const Jet& u);
    friend Jet log(const Jet& u);
    friend Jet pow(const Jet& u, double p);
    friend Jet sqrt(const Jet& u) { return pow(u, 0.5); }
    friend Jet sin(const Jet& u);
    friend Jet cos(const Jet& u);
    friend Jet conj(const Jet& u);

private:
    std::array<cplx, kCapacity> c_{};
    int order_ = 0;
};

// Univariate expression evaluated on jets, e.g. [](const Jet& x) { return exp(-0.5 * x * x); }.
using JetFn = std::function<Jet(const Jet&)>;

}  // namespace modop
