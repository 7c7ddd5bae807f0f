/// @file common.hpp
/// @brief Shared fixed-width types, error taxonomy, checked integer helpers.
///
/// Every module reports failures through the exception classes declared here:
///  - invalid_argument_error: the caller violated a documented precondition
///    (maps to CLI exit code 2);
///  - undecided_error: a computation hit a stated cap and refuses to guess
///    (maps to CLI exit code 3);
///  - integrity_error: an internal invariant that is supposed to be
///    unbreakable failed — always a bug, never a recoverable condition.

#ifndef DERANGE_COMMON_HPP
#define DERANGE_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace derange {

using u8 = std::uint8_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

/// Base class for all library errors.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition was violated by the caller.
class invalid_argument_error : public error {
 public:
  using error::error;
};

/// A computation exceeded a stated cap; the result is deliberately withheld
/// rather than guessed.
class undecided_error : public error {
 public:
  using error::error;
};

/// An internal invariant failed; indicates a bug in the library itself.
class integrity_error : public error {
 public:
  using error::error;
};

/// Throws integrity_error with location context when cond is false.
#define DERANGE_CHECK(cond, msg)                                          \
  do {                                                                    \
    if (!(cond)) {                                                        \
      throw ::derange::integrity_error(std::string("integrity check [") + \
                                       #cond + "] failed: " + (msg));     \
    }                                                                     \
  } while (0)

/// Throws invalid_argument_error when cond is false.
#define DERANGE_REQUIRE(cond, msg)                                 \
  do {                                                             \
    if (!(cond)) {                                                 \
      throw ::derange::invalid_argument_error(std::string(msg));   \
    }                                                              \
  } while (0)

/// Decimal rendering of a 128-bit unsigned value (std::to_string lacks one).
inline std::string u128_str(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(char('0' + int(v % 10)));
    v /= 10;
  }
  return std::string(s.rbegin(), s.rend());
}

/// u64 multiplication that throws on overflow.
inline u64 checked_mul(u64 a, u64 b) {
  u64 r = 0;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw error("u64 multiplication overflow: " + std::to_string(a) + " * " +
                std::to_string(b));
  }
  return r;
}

/// u128 multiplication that throws on overflow.
inline u128 checked_mul_u128(u128 a, u128 b) {
  if (a != 0 && b > ~u128(0) / a) {
    throw error("u128 multiplication overflow");
  }
  return a * b;
}

/// a^e over u64 with overflow checking.
inline u64 checked_pow(u64 a, u64 e) {
  u64 r = 1;
  for (u64 i = 0; i < e; ++i) r = checked_mul(r, a);
  return r;
}

/// FNV-1a 64-bit hash, used for catalog version hashes.
inline u64 fnv1a(const std::string& data) {
  u64 h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Lower-case hexadecimal rendering of a u64 (16 digits, zero-padded).
inline std::string hex16(u64 v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

}  // namespace derange

#endif  // DERANGE_COMMON_HPP
