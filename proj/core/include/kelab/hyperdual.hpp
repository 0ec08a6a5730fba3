#pragma once

#include <cmath>

namespace kelab {

// Hyper-dual number v + d1 e1 + d2 e2 + d12 e1 e2 with e1^2 = e2^2 = 0.
// Propagates first derivatives along two seed directions and the mixed second
// derivative exactly (no truncation error), so second derivatives of smooth
// fields come out to rounding accuracy.
template <class T>
struct HyperDual {
  T v{};
  T d1{};
  T d2{};
  T d12{};

  constexpr HyperDual() = default;
  constexpr HyperDual(T value) : v(value) {}  // NOLINT(google-explicit-constructor)
  constexpr HyperDual(T value, T e1, T e2, T e12) : v(value), d1(e1), d2(e2), d12(e12) {}

  HyperDual& operator+=(const HyperDual& o) {
    v += o.v;
    d1 += o.d1;
    d2 += o.d2;
    d12 += o.d12;
    return *this;
  }
  HyperDual& operator-=(const HyperDual& o) {
    v -= o.v;
    d1 -= o.d1;
    d2 -= o.d2;
    d12 -= o.d12;
    return *this;
  }
  HyperDual& operator*=(const HyperDual& o) { return *this = *this * o; }

  friend HyperDual operator+(HyperDual a, const HyperDual& b) { return a += b; }
  friend HyperDual operator-(HyperDual a, const HyperDual& b) { return a -= b; }
  friend HyperDual operator-(const HyperDual& a) { return {-a.v, -a.d1, -a.d2, -a.d12}; }
  friend HyperDual operator*(const HyperDual& a, const HyperDual& b) {
    return {a.v * b.v, a.v * b.d1 + a.d1 * b.v, a.v * b.d2 + a.d2 * b.v,
            a.v * b.d12 + a.d1 * b.d2 + a.d2 * b.d1 + a.d12 * b.v};
  }
  friend HyperDual operator/(const HyperDual& a, const HyperDual& b) {
    const T inv = T(1) / b.v;
    return a * HyperDual::chain(b, inv, -inv * inv, T(2) * inv * inv * inv);
  }

  // f(x) from f(x.v), f'(x.v), f''(x.v).
  static HyperDual chain(const HyperDual& x, T f, T f1, T f2) {
    return {f, f1 * x.d1, f1 * x.d2, f1 * x.d12 + f2 * x.d1 * x.d2};
  }

  friend HyperDual exp(const HyperDual& x) {
    const T e = std::exp(x.v);
    return chain(x, e, e, e);
  }
  friend HyperDual expm1(const HyperDual& x) {
    const T e = std::exp(x.v);
    return chain(x, std::expm1(x.v), e, e);
  }
  friend HyperDual log(const HyperDual& x) {
    const T inv = T(1) / x.v;
    return chain(x, std::log(x.v), inv, -inv * inv);
  }
  friend HyperDual log1p(const HyperDual& x) {
    const T inv = T(1) / (T(1) + x.v);
    return chain(x, std::log1p(x.v), inv, -inv * inv);
  }
  friend HyperDual sqrt(const HyperDual& x) {
    const T s = std::sqrt(x.v);
    return chain(x, s, T(0.5) / s, T(-0.25) / (s * x.v));
  }
};

template <class T>
T value_of(const T& x) {
  return x;
}
template <class T>
T value_of(const HyperDual<T>& x) {
  return x.v;
}

}  // namespace kelab
