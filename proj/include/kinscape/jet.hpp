#pragma once

// Second-order forward-mode differentiation over at most six variables.
//
// A Jet carries a value together with its gradient and Hessian with respect
// to the seeded variables. Landscape functions are written once as templates
// over the scalar type and instantiated with double (values) or Jet (exact
// gradients and Hessians).

#include <array>
#include <cmath>

namespace kinscape {

struct Jet {
    static constexpr int kMaxVars = 6;

    double v = 0.0;
    int n = 0;
    std::array<double, kMaxVars> g{};
    std::array<double, kMaxVars * kMaxVars> h{};

    Jet() = default;
    Jet(double value) : v(value) {}  // NOLINT: constants promote implicitly

    static Jet variable(double value, int index, int nvars) {
        Jet j(value);
        j.n = nvars;
        j.g[index] = 1.0;
        return j;
    }

    double grad(int i) const { return g[i]; }
    double hess(int i, int k) const { return h[i * kMaxVars + k]; }
};

namespace detail {

// Applies a scalar function with first/second derivatives d1, d2 at a.v.
inline Jet chain(const Jet& a, double value, double d1, double d2) {
    Jet r(value);
    r.n = a.n;
    for (int i = 0; i < a.n; ++i) r.g[i] = d1 * a.g[i];
    for (int i = 0; i < a.n; ++i)
        for (int k = 0; k < a.n; ++k)
            r.h[i * Jet::kMaxVars + k] = d1 * a.h[i * Jet::kMaxVars + k] + d2 * a.g[i] * a.g[k];
    return r;
}

}  // namespace detail

inline Jet operator-(const Jet& a) { return detail::chain(a, -a.v, -1.0, 0.0); }

inline Jet operator+(const Jet& a, const Jet& b) {
    Jet r(a.v + b.v);
    r.n = a.n > b.n ? a.n : b.n;
    for (int i = 0; i < r.n; ++i) r.g[i] = a.g[i] + b.g[i];
    for (int i = 0; i < r.n; ++i)
        for (int k = 0; k < r.n; ++k) {
            const int idx = i * Jet::kMaxVars + k;
            r.h[idx] = a.h[idx] + b.h[idx];
        }
    return r;
}

inline Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }

inline Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.v * b.v);
    r.n = a.n > b.n ? a.n : b.n;
    for (int i = 0; i < r.n; ++i) r.g[i] = a.v * b.g[i] + b.v * a.g[i];
    for (int i = 0; i < r.n; ++i)
        for (int k = 0; k < r.n; ++k) {
            const int idx = i * Jet::kMaxVars + k;
            r.h[idx] = a.v * b.h[idx] + b.v * a.h[idx] + a.g[i] * b.g[k] + b.g[i] * a.g[k];
        }
    return r;
}

inline Jet operator*(double s, const Jet& a) { return detail::chain(a, s * a.v, s, 0.0); }
inline Jet operator*(const Jet& a, double s) { return s * a; }
inline Jet operator/(const Jet& a, double s) { return (1.0 / s) * a; }

inline Jet& operator+=(Jet& a, const Jet& b) { return a = a + b; }
inline Jet& operator-=(Jet& a, const Jet& b) { return a = a - b; }
inline Jet& operator*=(Jet& a, const Jet& b) { return a = a * b; }

inline Jet sin(const Jet& a) {
    const double s = std::sin(a.v);
    return detail::chain(a, s, std::cos(a.v), -s);
}

inline Jet cos(const Jet& a) {
    const double c = std::cos(a.v);
    return detail::chain(a, c, -std::sin(a.v), -c);
}

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.v; }

}  // namespace kinscape
