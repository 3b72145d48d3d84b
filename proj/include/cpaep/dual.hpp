// Copyright 2026 The cpaep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CPAEP_DUAL_HPP
#define CPAEP_DUAL_HPP

#include <cmath>
#include <complex>
#include <type_traits>

namespace cpaep
{

// Forward-mode dual number a + b*eps with eps^2 = 0. Instantiated over
// std::complex<double> it yields exact complex derivatives of analytic functions;
// nesting (Dual<Dual<T>>) gives second derivatives.
template <typename T>
struct Dual
{
  T val{};
  T der{};

  constexpr Dual() = default;
  constexpr Dual(const T &v) : val(v) {}
  constexpr Dual(const T &v, const T &d) : val(v), der(d) {}

  Dual &operator+=(const Dual &o)
  {
    val += o.val;
    der += o.der;
    return *this;
  }
  Dual &operator-=(const Dual &o)
  {
    val -= o.val;
    der -= o.der;
    return *this;
  }
  Dual &operator*=(const Dual &o)
  {
    der = der * o.val + val * o.der;
    val *= o.val;
    return *this;
  }
  Dual &operator/=(const Dual &o)
  {
    const T inv = T(1.0) / o.val;
    der = (der - val * inv * o.der) * inv;
    val *= inv;
    return *this;
  }
};

namespace detail
{
template <typename S>
struct is_dual : std::false_type
{
};
template <typename T>
struct is_dual<Dual<T>> : std::true_type
{
};
template <typename S>
struct is_complex : std::false_type
{
};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type
{
};
}  // namespace detail

// Plain numbers (real or complex) that can be mixed with a Dual.
template <typename S>
concept PlainScalar = std::is_arithmetic_v<S> || detail::is_complex<S>::value;

template <typename T>
Dual<T> operator-(const Dual<T> &a)
{
  return {-a.val, -a.der};
}
template <typename T>
Dual<T> operator+(Dual<T> a, const Dual<T> &b)
{
  return a += b;
}
template <typename T>
Dual<T> operator-(Dual<T> a, const Dual<T> &b)
{
  return a -= b;
}
template <typename T>
Dual<T> operator*(Dual<T> a, const Dual<T> &b)
{
  return a *= b;
}
template <typename T>
Dual<T> operator/(Dual<T> a, const Dual<T> &b)
{
  return a /= b;
}

template <typename T, PlainScalar S>
Dual<T> operator+(const Dual<T> &a, const S &s)
{
  return {a.val + s, a.der};
}
template <typename T, PlainScalar S>
Dual<T> operator+(const S &s, const Dual<T> &a)
{
  return {s + a.val, a.der};
}
template <typename T, PlainScalar S>
Dual<T> operator-(const Dual<T> &a, const S &s)
{
  return {a.val - s, a.der};
}
template <typename T, PlainScalar S>
Dual<T> operator-(const S &s, const Dual<T> &a)
{
  return {s - a.val, -a.der};
}
template <typename T, PlainScalar S>
Dual<T> operator*(const Dual<T> &a, const S &s)
{
  return {a.val * s, a.der * s};
}
template <typename T, PlainScalar S>
Dual<T> operator*(const S &s, const Dual<T> &a)
{
  return {s * a.val, s * a.der};
}
template <typename T, PlainScalar S>
Dual<T> operator/(const Dual<T> &a, const S &s)
{
  return {a.val / s, a.der / s};
}
template <typename T, PlainScalar S>
Dual<T> operator/(const S &s, const Dual<T> &a)
{
  const T inv = T(1.0) / a.val;
  return {s * inv, -(s * inv) * inv * a.der};
}

template <typename T>
Dual<T> exp(const Dual<T> &a)
{
  using std::exp;
  const T e = exp(a.val);
  return {e, e * a.der};
}

// Seeds d/dx at x.
template <typename T>
Dual<T> make_variable(const T &x)
{
  return {x, T(1.0)};
}

}  // namespace cpaep

#endif  // CPAEP_DUAL_HPP
