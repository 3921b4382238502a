#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace anholonomy {

struct OverflowError : std::overflow_error {
  using std::overflow_error::overflow_error;
};

// Signed 128-bit integer with overflow detection on +, -, *.
//
// The ladder labels m_N and the slope d_N are products of circuit
// parameters, so they outgrow 64 bits quickly (3^41 > 2^63).  128 bits
// cover every size the library handles numerically; anything wider
// trips an OverflowError instead of wrapping silently.
class WideInt {
 public:
  constexpr WideInt() : v_(0) {}
  constexpr WideInt(long long x) : v_(x) {}  // NOLINT: implicit by design
  constexpr WideInt(int x) : v_(x) {}        // NOLINT

  static WideInt pow2(int k) {
    if (k < 0 || k > 125) throw OverflowError("WideInt::pow2 exponent out of range");
    WideInt r;
    r.v_ = static_cast<__int128>(1) << k;
    return r;
  }

  friend WideInt operator+(WideInt a, WideInt b) {
    WideInt r;
    if (__builtin_add_overflow(a.v_, b.v_, &r.v_)) throw OverflowError("WideInt add overflow");
    return r;
  }
  friend WideInt operator-(WideInt a, WideInt b) {
    WideInt r;
    if (__builtin_sub_overflow(a.v_, b.v_, &r.v_)) throw OverflowError("WideInt sub overflow");
    return r;
  }
  friend WideInt operator*(WideInt a, WideInt b) {
    WideInt r;
    if (__builtin_mul_overflow(a.v_, b.v_, &r.v_)) throw OverflowError("WideInt mul overflow");
    return r;
  }
  WideInt operator-() const { return WideInt(0) - *this; }
  WideInt& operator+=(WideInt b) { return *this = *this + b; }
  WideInt& operator-=(WideInt b) { return *this = *this - b; }
  WideInt& operator*=(WideInt b) { return *this = *this * b; }

  friend bool operator==(WideInt a, WideInt b) { return a.v_ == b.v_; }
  friend bool operator!=(WideInt a, WideInt b) { return a.v_ != b.v_; }
  friend bool operator<(WideInt a, WideInt b) { return a.v_ < b.v_; }
  friend bool operator<=(WideInt a, WideInt b) { return a.v_ <= b.v_; }
  friend bool operator>(WideInt a, WideInt b) { return a.v_ > b.v_; }
  friend bool operator>=(WideInt a, WideInt b) { return a.v_ >= b.v_; }

  bool odd() const { return (v_ & 1) != 0; }

  // floor((*this)/2); arithmetic shift, exact for negatives too.
  WideInt floor_div2() const {
    WideInt r;
    r.v_ = v_ >> 1;
    return r;
  }

  // Euclidean remainder mod 2: always 0 or 1.
  int mod2() const { return static_cast<int>(v_ & 1); }

  // Euclidean remainder mod 2^n: always in [0, 2^n).
  WideInt mod_pow2(int n) const {
    if (n < 0 || n > 125) throw OverflowError("WideInt::mod_pow2 exponent out of range");
    __int128 m = static_cast<__int128>(1) << n;
    __int128 x = v_ % m;
    if (x < 0) x += m;
    WideInt r;
    r.v_ = x;
    return r;
  }

  // Euclidean remainder mod m > 0: always in [0, m).
  WideInt mod_euclid(WideInt m) const {
    if (m.v_ <= 0) throw OverflowError("WideInt::mod_euclid needs a positive modulus");
    __int128 x = v_ % m.v_;
    if (x < 0) x += m.v_;
    WideInt r;
    r.v_ = x;
    return r;
  }

  long long to_int64() const {
    if (v_ > static_cast<__int128>(INT64_MAX) || v_ < static_cast<__int128>(INT64_MIN))
      throw OverflowError("WideInt does not fit in 64 bits");
    return static_cast<long long>(v_);
  }

  double to_double() const { return static_cast<double>(v_); }

  std::string str() const {
    if (v_ == 0) return "0";
    unsigned __int128 u = v_ < 0 ? -static_cast<unsigned __int128>(v_) : static_cast<unsigned __int128>(v_);
    std::string digits;
    while (u != 0) {
      digits.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
      u /= 10;
    }
    if (v_ < 0) digits.push_back('-');
    return std::string(digits.rbegin(), digits.rend());
  }

 private:
  __int128 v_;
};

}  // namespace anholonomy
