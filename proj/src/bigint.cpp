#include "hfsign/bigint.hpp"

#include <algorithm>
#include <stdexcept>

namespace hfsign {

namespace {
constexpr uint64_t kBase = 1ULL << 32;
}

BigInt::BigInt(long long v) {
  if (v == 0) return;
  sign_ = v > 0 ? 1 : -1;
  unsigned long long m =
      v > 0 ? static_cast<unsigned long long>(v)
            : ~static_cast<unsigned long long>(v) + 1ULL;  // safe for LLONG_MIN
  while (m) {
    mag_.push_back(static_cast<uint32_t>(m & 0xffffffffULL));
    m >>= 32;
  }
}

BigInt BigInt::from_string(const std::string& s) {
  BigInt out;
  size_t k = 0;
  int sign = 1;
  if (k < s.size() && (s[k] == '+' || s[k] == '-')) {
    if (s[k] == '-') sign = -1;
    ++k;
  }
  if (k == s.size()) throw std::invalid_argument("empty integer literal");
  for (; k < s.size(); ++k) {
    if (s[k] < '0' || s[k] > '9') throw std::invalid_argument("bad digit");
    out = out * BigInt(10) + BigInt(s[k] - '0');
  }
  if (!out.is_zero() && sign < 0) out.sign_ = -1;
  return out;
}

void BigInt::trim() {
  while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
  if (mag_.empty()) sign_ = 0;
}

bool BigInt::fits_int64() const {
  if (mag_.size() < 2) return true;
  if (mag_.size() > 2) return false;
  uint64_t m = (static_cast<uint64_t>(mag_[1]) << 32) | mag_[0];
  return sign_ > 0 ? m <= 0x7fffffffffffffffULL : m <= 0x8000000000000000ULL;
}

long long BigInt::to_int64() const {
  if (!fits_int64()) throw std::overflow_error("BigInt does not fit in int64");
  uint64_t m = 0;
  if (mag_.size() > 1) m = static_cast<uint64_t>(mag_[1]) << 32;
  if (!mag_.empty()) m |= mag_[0];
  if (sign_ >= 0) return static_cast<long long>(m);
  return -static_cast<long long>(m - 1) - 1;
}

std::string BigInt::str() const {
  if (is_zero()) return "0";
  std::vector<uint32_t> work = mag_;
  std::string digits;
  while (!work.empty()) {
    uint64_t rem = 0;
    for (size_t k = work.size(); k-- > 0;) {
      uint64_t cur = (rem << 32) | work[k];
      work[k] = static_cast<uint32_t>(cur / 1000000000ULL);
      rem = cur % 1000000000ULL;
    }
    while (!work.empty() && work.back() == 0) work.pop_back();
    for (int d = 0; d < 9; ++d) {
      digits.push_back(static_cast<char>('0' + rem % 10));
      rem /= 10;
    }
  }
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
  if (sign_ < 0) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

BigInt BigInt::operator-() const {
  BigInt out = *this;
  out.sign_ = -out.sign_;
  return out;
}

BigInt BigInt::abs() const {
  BigInt out = *this;
  if (out.sign_ < 0) out.sign_ = 1;
  return out;
}

int BigInt::cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t k = a.size(); k-- > 0;)
    if (a[k] != b[k]) return a[k] < b[k] ? -1 : 1;
  return 0;
}

int BigInt::cmp_abs(const BigInt& a, const BigInt& b) { return cmp_mag(a.mag_, b.mag_); }

std::vector<uint32_t> BigInt::add_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
  std::vector<uint32_t> out;
  out.reserve(std::max(a.size(), b.size()) + 1);
  uint64_t carry = 0;
  for (size_t k = 0; k < std::max(a.size(), b.size()) || carry; ++k) {
    uint64_t cur = carry;
    if (k < a.size()) cur += a[k];
    if (k < b.size()) cur += b[k];
    out.push_back(static_cast<uint32_t>(cur & 0xffffffffULL));
    carry = cur >> 32;
  }
  return out;
}

std::vector<uint32_t> BigInt::sub_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
  std::vector<uint32_t> out;
  out.reserve(a.size());
  int64_t borrow = 0;
  for (size_t k = 0; k < a.size(); ++k) {
    int64_t cur = static_cast<int64_t>(a[k]) - borrow - (k < b.size() ? b[k] : 0);
    if (cur < 0) {
      cur += static_cast<int64_t>(kBase);
      borrow = 1;
    } else {
      borrow = 0;
    }
    out.push_back(static_cast<uint32_t>(cur));
  }
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

std::vector<uint32_t> BigInt::mul_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<uint64_t> acc(a.size() + b.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    uint64_t carry = 0;
    for (size_t j = 0; j < b.size(); ++j) {
      uint64_t cur = acc[i + j] + static_cast<uint64_t>(a[i]) * b[j] + carry;
      acc[i + j] = cur & 0xffffffffULL;
      carry = cur >> 32;
    }
    size_t k = i + b.size();
    while (carry) {
      uint64_t cur = acc[k] + carry;
      acc[k] = cur & 0xffffffffULL;
      carry = cur >> 32;
      ++k;
    }
  }
  std::vector<uint32_t> out(acc.size());
  for (size_t k = 0; k < acc.size(); ++k) out[k] = static_cast<uint32_t>(acc[k]);
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

void BigInt::divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                        std::vector<uint32_t>& q, std::vector<uint32_t>& r) {
  q.clear();
  r.clear();
  if (b.empty()) throw std::domain_error("division by zero");
  if (cmp_mag(a, b) < 0) {
    r = a;
    return;
  }
  if (b.size() == 1) {
    uint64_t d = b[0];
    q.assign(a.size(), 0);
    uint64_t rem = 0;
    for (size_t k = a.size(); k-- > 0;) {
      uint64_t cur = (rem << 32) | a[k];
      q[k] = static_cast<uint32_t>(cur / d);
      rem = cur % d;
    }
    while (!q.empty() && q.back() == 0) q.pop_back();
    if (rem) r.push_back(static_cast<uint32_t>(rem));
    return;
  }
  // bitwise long division; magnitudes in this codebase stay small
  int bits = static_cast<int>(a.size()) * 32;
  std::vector<uint32_t> rem;
  q.assign(a.size(), 0);
  for (int bit = bits - 1; bit >= 0; --bit) {
    // rem = rem*2 + bit(a)
    uint32_t carry = 0;
    for (size_t k = 0; k < rem.size(); ++k) {
      uint32_t nxt = rem[k] >> 31;
      rem[k] = (rem[k] << 1) | carry;
      carry = nxt;
    }
    if (carry) rem.push_back(carry);
    if ((a[bit >> 5] >> (bit & 31)) & 1u) {
      if (rem.empty()) rem.push_back(1);
      else {
        uint64_t cur = rem[0] + 1ULL;
        rem[0] = static_cast<uint32_t>(cur);
        size_t k = 1;
        uint64_t c = cur >> 32;
        while (c) {
          if (k == rem.size()) rem.push_back(0);
          cur = rem[k] + c;
          rem[k] = static_cast<uint32_t>(cur);
          c = cur >> 32;
          ++k;
        }
      }
    }
    if (cmp_mag(rem, b) >= 0) {
      rem = sub_mag(rem, b);
      q[bit >> 5] |= 1u << (bit & 31);
    }
  }
  while (!q.empty() && q.back() == 0) q.pop_back();
  r = rem;
}

BigInt operator+(const BigInt& a, const BigInt& b) {
  if (a.sign_ == 0) return b;
  if (b.sign_ == 0) return a;
  BigInt out;
  if (a.sign_ == b.sign_) {
    out.sign_ = a.sign_;
    out.mag_ = BigInt::add_mag(a.mag_, b.mag_);
    return out;
  }
  int c = BigInt::cmp_mag(a.mag_, b.mag_);
  if (c == 0) return BigInt();
  if (c > 0) {
    out.sign_ = a.sign_;
    out.mag_ = BigInt::sub_mag(a.mag_, b.mag_);
  } else {
    out.sign_ = b.sign_;
    out.mag_ = BigInt::sub_mag(b.mag_, a.mag_);
  }
  return out;
}

BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

BigInt operator*(const BigInt& a, const BigInt& b) {
  BigInt out;
  if (a.sign_ == 0 || b.sign_ == 0) return out;
  out.sign_ = a.sign_ * b.sign_;
  out.mag_ = BigInt::mul_mag(a.mag_, b.mag_);
  return out;
}

BigInt operator/(const BigInt& a, const BigInt& b) {
  std::vector<uint32_t> q, r;
  BigInt::divmod_mag(a.mag_, b.mag_, q, r);
  BigInt out;
  out.mag_ = std::move(q);
  out.sign_ = out.mag_.empty() ? 0 : a.sign_ * b.sign_;
  return out;
}

BigInt operator%(const BigInt& a, const BigInt& b) {
  std::vector<uint32_t> q, r;
  BigInt::divmod_mag(a.mag_, b.mag_, q, r);
  BigInt out;
  out.mag_ = std::move(r);
  out.sign_ = out.mag_.empty() ? 0 : a.sign_;
  return out;
}

bool operator==(const BigInt& a, const BigInt& b) {
  return a.sign_ == b.sign_ && a.mag_ == b.mag_;
}

bool operator<(const BigInt& a, const BigInt& b) {
  if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
  int c = BigInt::cmp_mag(a.mag_, b.mag_);
  return a.sign_ >= 0 ? c < 0 : c > 0;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
  a = a.abs();
  b = b.abs();
  while (!b.is_zero()) {
    BigInt r = a % b;
    a = b;
    b = r;
  }
  return a;
}

}  // namespace hfsign
