#pragma once

#include <cmath>
#include <type_traits>

// Forward-mode dual numbers. Nesting Dual<Dual<double>> propagates exact second
// derivatives through arbitrary arithmetic: seed the inner slot on one coordinate
// and the outer slot on another to read off a mixed partial.

namespace warpcurv {

template <class T>
struct Dual {
  T v{};  // value
  T d{};  // derivative part

  Dual() = default;
  template <class U, class = std::enable_if_t<std::is_arithmetic_v<U>>>
  Dual(U value) : v(T(value)) {}
  Dual(T value, T deriv) : v(value), d(deriv) {}
};

using Dual1 = Dual<double>;
using Dual2 = Dual<Dual1>;

inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) {
  return value_of(x.v);
}

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
  return {a.v + b.v, a.d + b.d};
}
template <class T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
  return {a.v - b.v, a.d - b.d};
}
template <class T>
Dual<T> operator-(const Dual<T>& a) {
  return {-a.v, -a.d};
}
template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d};
}
template <class T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  T q = a.v / b.v;
  return {q, (a.d - q * b.d) / b.v};
}

template <class T, class U, class = std::enable_if_t<std::is_arithmetic_v<U>>>
Dual<T> operator+(const Dual<T>& a, U b) {
  return {a.v + T(b), a.d};
}
template <class T, class U, class = std::enable_if_t<std::is_arithmetic_v<U>>>
Dual<T> operator+(U a, const Dual<T>& b) {
  return b + a;
}
template <class T, class U, class = std::enable_if_t<std::is_arithmetic_v<U>>>
Dual<T> operator-(const Dual<T>& a, U b) {
  return {a.v - T(b), a.d};
}
template <class T, class U, class = std::enable_if_t<std::is_arithmetic_v<U>>>
Dual<T> operator-(U a, const Dual<T>& b) {
  return {T(a) - b.v, -b.d};
}
template <class T, class U, class = std::enable_if_t<std::is_arithmetic_v<U>>>
Dual<T> operator*(const Dual<T>& a, U b) {
  return {a.v * b, a.d * b};
}
template <class T, class U, class = std::enable_if_t<std::is_arithmetic_v<U>>>
Dual<T> operator*(U a, const Dual<T>& b) {
  return b * a;
}
template <class T, class U, class = std::enable_if_t<std::is_arithmetic_v<U>>>
Dual<T> operator/(const Dual<T>& a, U b) {
  return {a.v / b, a.d / b};
}
template <class T, class U, class = std::enable_if_t<std::is_arithmetic_v<U>>>
Dual<T> operator/(U a, const Dual<T>& b) {
  return Dual<T>(a) / b;
}

using std::cos;
using std::cosh;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sinh;
using std::sqrt;
using std::tanh;

template <class T>
Dual<T> exp(const Dual<T>& a) {
  T e = exp(a.v);
  return {e, a.d * e};
}
template <class T>
Dual<T> log(const Dual<T>& a) {
  return {log(a.v), a.d / a.v};
}
template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  T r = sqrt(a.v);
  return {r, a.d / (2.0 * r)};
}
template <class T>
Dual<T> sin(const Dual<T>& a) {
  return {sin(a.v), a.d * cos(a.v)};
}
template <class T>
Dual<T> cos(const Dual<T>& a) {
  return {cos(a.v), -(a.d * sin(a.v))};
}
template <class T>
Dual<T> sinh(const Dual<T>& a) {
  return {sinh(a.v), a.d * cosh(a.v)};
}
template <class T>
Dual<T> cosh(const Dual<T>& a) {
  return {cosh(a.v), a.d * sinh(a.v)};
}
template <class T>
Dual<T> tanh(const Dual<T>& a) {
  T th = tanh(a.v);
  return {th, a.d * (1.0 - th * th)};
}
template <class T>
Dual<T> pow(const Dual<T>& a, double p) {
  T f = pow(a.v, p);
  return {f, a.d * (p * pow(a.v, p - 1.0))};
}

// Lift a scalar function known through (value, first, second derivative) at
// value_of(t) into dual arithmetic. Used for profiles whose value comes from
// quadrature but whose derivatives are elementary.
inline double lift_c2(double f, double /*fp*/, double /*fpp*/, double /*t*/) { return f; }

inline Dual1 lift_c2(double f, double fp, double /*fpp*/, const Dual1& t) {
  return {f, fp * t.d};
}

inline Dual2 lift_c2(double f, double fp, double fpp, const Dual2& t) {
  // t = t0 + t1 e1 + t2 e2 + t12 e1 e2; the e1 e2 slot of f(t) is fp t12 + fpp t1 t2
  Dual1 fv{f, fp * t.v.d};
  Dual1 fd{fp * t.d.v, fpp * t.v.d * t.d.v + fp * t.d.d};
  return {fv, fd};
}

}  // namespace warpcurv
