#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace dmod {

/// Arbitrary-precision signed integer used for every stored entry.
using Integer = boost::multiprecision::cpp_int;

/// Integer column vector.
using IntVector = std::vector<Integer>;

inline Integer abs(const Integer& x) { return x < 0 ? Integer(-x) : x; }

inline Integer gcd(const Integer& a, const Integer& b) {
  return boost::multiprecision::gcd(a, b);
}

inline std::optional<std::int64_t> to_int64(const Integer& x) {
  if (x > std::numeric_limits<std::int64_t>::max() ||
      x < std::numeric_limits<std::int64_t>::min())
    return std::nullopt;
  return static_cast<std::int64_t>(x);
}

inline std::string to_string(const Integer& x) { return x.str(); }

namespace detail {

/// Thrown by the checked 64-bit kernels. Callers catch it and rerun on
/// Integer, so it never escapes the public API.
struct Overflow {};

/// Arithmetic policy. The int64 specialization traps on overflow instead of
/// wrapping; the Integer specialization cannot overflow.
template <class T> struct Arith;

template <> struct Arith<std::int64_t> {
  using T = std::int64_t;
  static T add(T a, T b) {
    T r;
    if (__builtin_add_overflow(a, b, &r)) throw Overflow{};
    return r;
  }
  static T sub(T a, T b) {
    T r;
    if (__builtin_sub_overflow(a, b, &r)) throw Overflow{};
    return r;
  }
  static T mul(T a, T b) {
    T r;
    if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
    return r;
  }
  static T neg(T a) {
    if (a == std::numeric_limits<T>::min()) throw Overflow{};
    return -a;
  }
  static T abs(T a) { return a < 0 ? neg(a) : a; }
  static T gcd(T a, T b) { return std::gcd(abs(a), abs(b)); }
  static T div(T a, T b) {
    if (a == std::numeric_limits<T>::min() && b == -1) throw Overflow{};
    return a / b;
  }
  static T from(const Integer& x) {
    auto v = to_int64(x);
    if (!v) throw Overflow{};
    return *v;
  }
  static Integer widen(T x) { return Integer(x); }
};

template <> struct Arith<Integer> {
  using T = Integer;
  static T add(const T& a, const T& b) { return a + b; }
  static T sub(const T& a, const T& b) { return a - b; }
  static T mul(const T& a, const T& b) { return a * b; }
  static T neg(const T& a) { return -a; }
  static T abs(const T& a) { return dmod::abs(a); }
  static T gcd(const T& a, const T& b) { return dmod::gcd(a, b); }
  static T div(const T& a, const T& b) { return a / b; }
  static T from(const Integer& x) { return x; }
  static Integer widen(const T& x) { return x; }
};

} // namespace detail

} // namespace dmod
