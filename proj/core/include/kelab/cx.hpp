#pragma once

#include <complex>
#include <utility>

namespace kelab {

// Minimal complex number over an arbitrary real scalar. std::complex is only
// specified for float, double and long double, and the curvature code needs
// complex arithmetic over hyper-dual scalars.
template <class S>
struct Cx {
  S re{};
  S im{};

  Cx() = default;
  Cx(S r, S i) : re(std::move(r)), im(std::move(i)) {}
  Cx(std::complex<double> z) : re(z.real()), im(z.imag()) {}  // NOLINT(google-explicit-constructor)

  friend Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
  friend Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
  friend Cx operator*(const Cx& a, const Cx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Cx operator*(const S& s, const Cx& a) { return {s * a.re, s * a.im}; }
  Cx& operator+=(const Cx& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Cx& operator-=(const Cx& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
};

template <class S>
Cx<S> conj(const Cx<S>& z) {
  return {z.re, -z.im};
}

// |z|^2
template <class S>
S norm2(const Cx<S>& z) {
  return z.re * z.re + z.im * z.im;
}

}  // namespace kelab
