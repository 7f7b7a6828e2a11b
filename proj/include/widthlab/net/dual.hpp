#pragma once

#include <cmath>
#include <ostream>

#include <Eigen/Core>

namespace widthlab::net {

// Forward-mode scalar: value plus one infinitesimal component. Nesting
// Dual<Dual<double>> gives exact second-order mixed derivatives; reverse
// accumulation run on top of that yields third-order contractions.
template <class T>
struct Dual {
    T v{};
    T d{};

    Dual() = default;
    Dual(double value) : v(value), d() {}  // NOLINT: implicit by design (literals in generic code)
    Dual(T value, T deriv) : v(std::move(value)), d(std::move(deriv)) {}

    Dual& operator+=(const Dual& o) {
        v += o.v;
        d += o.d;
        return *this;
    }
    Dual& operator-=(const Dual& o) {
        v -= o.v;
        d -= o.d;
        return *this;
    }
    Dual& operator*=(const Dual& o) {
        d = d * o.v + v * o.d;
        v = v * o.v;
        return *this;
    }

    friend Dual operator+(Dual a, const Dual& b) { return a += b; }
    friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
    friend Dual operator-(const Dual& a) { return Dual(-a.v, -a.d); }
    friend Dual operator*(const Dual& a, const Dual& b) {
        return Dual(a.v * b.v, a.d * b.v + a.v * b.d);
    }
    friend Dual operator/(const Dual& a, const Dual& b) {
        const T q = a.v / b.v;
        return Dual(q, (a.d - q * b.d) / b.v);
    }
    friend bool operator==(const Dual& a, const Dual& b) { return a.v == b.v && a.d == b.d; }
    friend bool operator!=(const Dual& a, const Dual& b) { return !(a == b); }

    friend std::ostream& operator<<(std::ostream& os, const Dual& x) {
        return os << '(' << x.v << " + eps*" << x.d << ')';
    }
};

// underlying double of an arbitrarily nested dual (drives branch decisions)
inline double leaf_value(double x) { return x; }
template <class T>
double leaf_value(const Dual<T>& x) {
    return leaf_value(x.v);
}

using std::tanh;
template <class T>
Dual<T> tanh(const Dual<T>& x) {
    const T t = tanh(x.v);
    return Dual<T>(t, x.d * (T(1.0) - t * t));
}

using D1 = Dual<double>;
using D2 = Dual<Dual<double>>;

}  // namespace widthlab::net

namespace Eigen {

template <class T>
struct NumTraits<widthlab::net::Dual<T>> : NumTraits<double> {
    using Real = widthlab::net::Dual<T>;
    using NonInteger = widthlab::net::Dual<T>;
    using Nested = widthlab::net::Dual<T>;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 2 * NumTraits<T>::ReadCost,
        AddCost = 2 * NumTraits<T>::AddCost,
        MulCost = 3 * NumTraits<T>::MulCost,
    };
};

}  // namespace Eigen
