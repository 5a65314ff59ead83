#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hfsign {

// Signed arbitrary-precision integer, base 2^32 magnitude. Covers what the
// integer elimination routines need: ring ops, truncated divmod, gcd.
class BigInt {
 public:
  BigInt() = default;
  BigInt(long long v);  // NOLINT: implicit by design
  static BigInt from_string(const std::string& s);

  bool is_zero() const { return sign_ == 0; }
  int signum() const { return sign_; }
  bool fits_int64() const;
  long long to_int64() const;  // throws when out of range
  std::string str() const;

  BigInt operator-() const;
  BigInt abs() const;

  friend BigInt operator+(const BigInt& a, const BigInt& b);
  friend BigInt operator-(const BigInt& a, const BigInt& b);
  friend BigInt operator*(const BigInt& a, const BigInt& b);
  // truncated toward zero, like C++ integer division
  friend BigInt operator/(const BigInt& a, const BigInt& b);
  friend BigInt operator%(const BigInt& a, const BigInt& b);

  BigInt& operator+=(const BigInt& b) { return *this = *this + b; }
  BigInt& operator-=(const BigInt& b) { return *this = *this - b; }
  BigInt& operator*=(const BigInt& b) { return *this = *this * b; }

  friend bool operator==(const BigInt& a, const BigInt& b);
  friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
  friend bool operator<(const BigInt& a, const BigInt& b);
  friend bool operator<=(const BigInt& a, const BigInt& b) { return !(b < a); }
  friend bool operator>(const BigInt& a, const BigInt& b) { return b < a; }
  friend bool operator>=(const BigInt& a, const BigInt& b) { return !(a < b); }

  static BigInt gcd(BigInt a, BigInt b);
  // magnitude comparison: -1, 0, +1
  static int cmp_abs(const BigInt& a, const BigInt& b);

 private:
  int sign_ = 0;                // -1, 0, +1
  std::vector<uint32_t> mag_;   // little-endian, no trailing zeros

  void trim();
  static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a,
                                       const std::vector<uint32_t>& b);
  static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a,
                                       const std::vector<uint32_t>& b);  // a >= b
  static std::vector<uint32_t> mul_mag(const std::vector<uint32_t>& a,
                                       const std::vector<uint32_t>& b);
  static void divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                         std::vector<uint32_t>& q, std::vector<uint32_t>& r);
};

}  // namespace hfsign
