#pragma once

#include <cmath>
#include <complex>

namespace maxlenqm {

/// Order-2 forward-mode jet: value together with first and second
/// derivative with respect to one underlying variable.  Products use the
/// truncated Leibniz rule, so operator chains built from jets carry exact
/// derivatives (no finite-difference error).
template <class T>
struct Jet {
    T v{};
    T d1{};
    T d2{};
};

using RJet = Jet<double>;
using cplx = std::complex<double>;
using CJet = Jet<cplx>;

/// Seed jet of the integration variable itself: d/dx x = 1.
inline RJet jet_seed(double x) { return {x, 1.0, 0.0}; }

template <class T>
Jet<T> operator+(const Jet<T>& a, const Jet<T>& b) {
    return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2};
}

template <class T>
Jet<T> operator-(const Jet<T>& a, const Jet<T>& b) {
    return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2};
}

template <class T>
Jet<T> operator-(const Jet<T>& a) {
    return {-a.v, -a.d1, -a.d2};
}

template <class T>
Jet<T> operator*(const Jet<T>& a, const Jet<T>& b) {
    return {a.v * b.v,
            a.d1 * b.v + a.v * b.d1,
            a.d2 * b.v + T(2) * a.d1 * b.d1 + a.v * b.d2};
}

template <class T, class S>
Jet<T> operator*(const S& c, const Jet<T>& a) {
    return {T(c) * a.v, T(c) * a.d1, T(c) * a.d2};
}

template <class T, class S>
Jet<T> operator*(const Jet<T>& a, const S& c) {
    return {a.v * T(c), a.d1 * T(c), a.d2 * T(c)};
}

template <class T, class S>
Jet<T> operator+(const Jet<T>& a, const S& c) {
    return {a.v + T(c), a.d1, a.d2};
}

template <class T, class S>
Jet<T> operator+(const S& c, const Jet<T>& a) {
    return a + c;
}

template <class T, class S>
Jet<T> operator-(const Jet<T>& a, const S& c) {
    return {a.v - T(c), a.d1, a.d2};
}

template <class T, class S>
Jet<T> operator-(const S& c, const Jet<T>& a) {
    return {T(c) - a.v, -a.d1, -a.d2};
}

template <class T>
Jet<T> operator/(const Jet<T>& a, const Jet<T>& b) {
    const T inv = T(1) / b.v;
    const T v = a.v * inv;
    const T d1 = (a.d1 - v * b.d1) * inv;
    const T d2 = (a.d2 - T(2) * d1 * b.d1 - v * b.d2) * inv;
    return {v, d1, d2};
}

template <class T, class S>
Jet<T> operator/(const Jet<T>& a, const S& c) {
    return a * (T(1) / T(c));
}

/// Compose a scalar function given its value and first two derivatives at
/// u.v with the inner jet u (Faa di Bruno truncated at order 2).
template <class T>
Jet<T> jet_chain(const T& f0, const T& f1, const T& f2, const Jet<T>& u) {
    return {f0, f1 * u.d1, f2 * u.d1 * u.d1 + f1 * u.d2};
}

inline RJet jet_atan(const RJet& u) {
    const double w = 1.0 + u.v * u.v;
    return jet_chain(std::atan(u.v), 1.0 / w, -2.0 * u.v / (w * w), u);
}

inline RJet jet_tan(const RJet& u) {
    const double t = std::tan(u.v);
    const double s = 1.0 + t * t;
    return jet_chain(t, s, 2.0 * t * s, u);
}

inline RJet jet_exp(const RJet& u) {
    const double e = std::exp(u.v);
    return jet_chain(e, e, e, u);
}

inline RJet jet_sqrt(const RJet& u) {
    const double r = std::sqrt(u.v);
    return jet_chain(r, 0.5 / r, -0.25 / (r * u.v), u);
}

/// Promote a real jet to a complex one.
inline CJet jet_complex(const RJet& u) {
    return {cplx(u.v), cplx(u.d1), cplx(u.d2)};
}

/// exp(i * p) for a real phase jet p.
inline CJet jet_cis(const RJet& p) {
    const cplx i(0.0, 1.0);
    const cplx e = std::exp(i * p.v);
    const cplx ip1 = i * p.d1;
    return {e, ip1 * e, (i * p.d2 + ip1 * ip1) * e};
}

} // namespace maxlenqm
