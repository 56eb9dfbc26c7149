#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "kq/jets/jet.hpp"

namespace kq {

// Complex-valued coefficient field as a (real, imaginary) pair of jets. Only
// first powers of i occur in the quantization formulas, so a full complex
// jet ring is not needed.
struct ComplexJet {
  Jet re;
  Jet im;

  static ComplexJet real(Jet r) {
    Jet z = r * 0.0;
    return {std::move(r), std::move(z)};
  }
  static ComplexJet imag(Jet i) {
    Jet z = i * 0.0;
    return {std::move(z), std::move(i)};
  }

  int order() const { return std::min(re.order(), im.order()); }

  ComplexJet& operator+=(const ComplexJet& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  ComplexJet& operator-=(const ComplexJet& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  ComplexJet operator-() const { return {-re, -im}; }
  ComplexJet times_i() const { return {-im, re}; }
  ComplexJet conj() const { return {re, -im}; }
  ComplexJet derivative(int i) const { return {re.derivative(i), im.derivative(i)}; }
  ComplexJet derivative(std::span<const int> alpha) const { return {re.derivative(alpha), im.derivative(alpha)}; }

  double max_abs_value() const { return std::max(std::abs(re.value()), std::abs(im.value())); }
};

inline ComplexJet operator+(ComplexJet a, const ComplexJet& b) { return a += b; }
inline ComplexJet operator-(ComplexJet a, const ComplexJet& b) { return a -= b; }
inline ComplexJet operator*(const ComplexJet& a, const ComplexJet& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline ComplexJet operator*(const Jet& a, const ComplexJet& b) { return {a * b.re, a * b.im}; }
inline ComplexJet operator*(const ComplexJet& a, double s) { return {a.re * s, a.im * s}; }
inline ComplexJet operator*(double s, const ComplexJet& a) { return a * s; }

}  // namespace kq
