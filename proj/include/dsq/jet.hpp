#pragma once
// Second-order forward jets in N variables: value, gradient and Hessian
// propagated through arithmetic and elementary functions.

#include <array>
#include <cmath>
#include <complex>
#include <limits>

namespace dsq {

template <int N>
struct Jet {
    using C = std::complex<double>;
    C v{0.0};
    std::array<C, N> d{};
    std::array<std::array<C, N>, N> h{};

    Jet() = default;
    Jet(C value) : v(value) {}
    Jet(double value) : v(value) {}

    static Jet variable(double value, int k)
    {
        Jet j(value);
        j.d[k] = 1.0;
        return j;
    }

    /// ∂_k as a jet whose Hessian is unknown (NaN): valid for one more derivative.
    Jet partial(int k) const
    {
        Jet j(d[k]);
        for (int a = 0; a < N; ++a) j.d[a] = h[k][a];
        const double nan = std::numeric_limits<double>::quiet_NaN();
        for (auto& row : j.h) row.fill(C(nan, nan));
        return j;
    }
};

template <int N> Jet<N> operator+(const Jet<N>& a, const Jet<N>& b)
{
    Jet<N> r;
    r.v = a.v + b.v;
    for (int i = 0; i < N; ++i) {
        r.d[i] = a.d[i] + b.d[i];
        for (int j = 0; j < N; ++j) r.h[i][j] = a.h[i][j] + b.h[i][j];
    }
    return r;
}

template <int N> Jet<N> operator*(std::complex<double> s, const Jet<N>& a)
{
    Jet<N> r;
    r.v = s * a.v;
    for (int i = 0; i < N; ++i) {
        r.d[i] = s * a.d[i];
        for (int j = 0; j < N; ++j) r.h[i][j] = s * a.h[i][j];
    }
    return r;
}
template <int N> Jet<N> operator*(double s, const Jet<N>& a) { return std::complex<double>(s) * a; }
template <int N> Jet<N> operator-(const Jet<N>& a) { return -1.0 * a; }
template <int N> Jet<N> operator-(const Jet<N>& a, const Jet<N>& b) { return a + (-b); }

template <int N> Jet<N> operator*(const Jet<N>& a, const Jet<N>& b)
{
    Jet<N> r;
    r.v = a.v * b.v;
    for (int i = 0; i < N; ++i) {
        r.d[i] = a.d[i] * b.v + a.v * b.d[i];
        for (int j = 0; j < N; ++j)
            r.h[i][j] = a.h[i][j] * b.v + a.d[i] * b.d[j] + a.d[j] * b.d[i] + a.v * b.h[i][j];
    }
    return r;
}

/// g(a) given g, g', g'' at a.v.
template <int N>
Jet<N> chain(const Jet<N>& a, std::complex<double> g0, std::complex<double> g1, std::complex<double> g2)
{
    Jet<N> r;
    r.v = g0;
    for (int i = 0; i < N; ++i) {
        r.d[i] = g1 * a.d[i];
        for (int j = 0; j < N; ++j) r.h[i][j] = g2 * a.d[i] * a.d[j] + g1 * a.h[i][j];
    }
    return r;
}

template <int N> Jet<N> exp(const Jet<N>& a)
{
    const auto e = std::exp(a.v);
    return chain(a, e, e, e);
}
template <int N> Jet<N> sin(const Jet<N>& a) { return chain(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
template <int N> Jet<N> cos(const Jet<N>& a) { return chain(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }
template <int N> Jet<N> sinh(const Jet<N>& a) { return chain(a, std::sinh(a.v), std::cosh(a.v), std::sinh(a.v)); }
template <int N> Jet<N> cosh(const Jet<N>& a) { return chain(a, std::cosh(a.v), std::sinh(a.v), std::cosh(a.v)); }
template <int N> Jet<N> reciprocal(const Jet<N>& a)
{
    const auto x = a.v;
    return chain(a, 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x));
}
template <int N> Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) { return a * reciprocal(b); }
template <int N> Jet<N> tanh(const Jet<N>& a) { return sinh(a) / cosh(a); }

} // namespace dsq
