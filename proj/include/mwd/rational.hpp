#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <type_traits>
#include <utility>

namespace mwd {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational scalar, always in lowest terms with positive denominator.
//
// This is a value wrapper around boost::multiprecision::cpp_rational. The
// wrapper exists so the type can be dropped into Eigen matrices: the raw
// boost number type trips Eigen's scalar-promotion probes (its byte-container
// constructor trait is not SFINAE-friendly against matrix expressions), while
// a plain class with non-template constructors converts cleanly.
class Rational {
 public:
  using Rep = boost::multiprecision::cpp_rational;

  Rational() = default;
  template <typename T, typename = std::enable_if_t<std::is_integral_v<T>>>
  Rational(T n) : v_(static_cast<long long>(n)) {}  // NOLINT: implicit by design
  Rational(std::int64_t num, std::int64_t den) : v_(static_cast<long long>(num), static_cast<long long>(den)) {}
  Rational(const BigInt& num, const BigInt& den) : v_(num, den) {}
  explicit Rational(Rep v) : v_(std::move(v)) {}

  const Rep& rep() const noexcept { return v_; }
  BigInt num() const { return numerator(v_); }
  BigInt den() const { return denominator(v_); }

  bool is_zero() const { return v_.is_zero(); }
  bool is_integer() const { return denominator(v_) == 1; }
  int sign() const { return v_.sign(); }

  double to_double() const { return v_.convert_to<double>(); }

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(Rep(a.v_ + b.v_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(Rep(a.v_ - b.v_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(Rep(a.v_ * b.v_)); }
  friend Rational operator/(const Rational& a, const Rational& b) { return Rational(Rep(a.v_ / b.v_)); }
  Rational operator-() const { return Rational(Rep(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) { v_ /= o.v_; return *this; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  Rep v_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

// Serialized form is "num" for integers and "num/den" otherwise.
std::string to_string(const Rational& r);
Rational rational_from_string(const std::string& text);

}  // namespace mwd

namespace Eigen {

template <typename T>
struct NumTraits;

template <>
struct NumTraits<mwd::Rational> {
  typedef mwd::Rational Real;
  typedef mwd::Rational NonInteger;
  typedef mwd::Rational Nested;
  typedef mwd::Rational Literal;

  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline Real highest() { return Real(0); }
  static inline Real lowest() { return Real(0); }
  static inline int digits10() { return 0; }

  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 150,
    MulCost = 100
  };
};

}  // namespace Eigen
