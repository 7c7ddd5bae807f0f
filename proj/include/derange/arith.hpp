/// @file arith.hpp
/// @brief Exact elementary number theory: factorization, multiplicative
///        orders, divisors, primitive prime divisors.
///
/// All routines are deterministic. Factorization is plain trial division
/// with a 2-3-5 wheel; inputs are bounded by 2^63 and in practice stay
/// far smaller (group orders and q^n - 1 values at desk scale), so no
/// probabilistic machinery is used or wanted.

#ifndef DERANGE_ARITH_HPP
#define DERANGE_ARITH_HPP

#include <algorithm>
#include <numeric>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "derange/common.hpp"

namespace derange {

/// A positive integer together with its sorted prime factorization.
struct Factorization {
  u64 value = 1;
  std::vector<std::pair<u64, int>> factors;  // (prime, exponent), primes increasing

  /// Recomputes prime^exponent products; used by validity checks.
  u64 product() const {
    u64 r = 1;
    for (const auto& [p, e] : factors) {
      for (int i = 0; i < e; ++i) r = checked_mul(r, p);
    }
    return r;
  }
};

/// Trial-division factorization of 1 <= n <= 2^63.
inline Factorization factorize(u64 n) {
  DERANGE_REQUIRE(n >= 1, "factorize: n must be >= 1");
  DERANGE_REQUIRE(n <= (u64(1) << 63), "factorize: n exceeds 2^63");
  Factorization out;
  out.value = n;
  auto strip = [&](u64 p) {
    if (n % p != 0) return;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.factors.emplace_back(p, e);
  };
  strip(2);
  strip(3);
  strip(5);
  // 2-3-5 wheel: candidate steps cycling through residues coprime to 30.
  static const u64 wheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
  u64 d = 7;
  int w = 0;
  while (d <= n / d) {
    strip(d);
    d += wheel[w];
    w = (w + 1) & 7;
  }
  if (n > 1) out.factors.emplace_back(n, 1);
  return out;
}

/// Deterministic primality test (trial division).
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  const Factorization f = factorize(n);
  return f.factors.size() == 1 && f.factors[0].second == 1;
}

/// All divisors of the factorized value, sorted increasing.
inline std::vector<u64> divisors(const Factorization& f) {
  std::vector<u64> out{1};
  for (const auto& [p, e] : f.factors) {
    const size_t base = out.size();
    u64 pk = 1;
    for (int i = 1; i <= e; ++i) {
      pk = checked_mul(pk, p);
      for (size_t j = 0; j < base; ++j) out.push_back(checked_mul(out[j], pk));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// a^e mod n without overflow (128-bit intermediate).
inline u64 powmod(u64 a, u64 e, u64 n) {
  DERANGE_REQUIRE(n >= 1, "powmod: modulus must be >= 1");
  u64 r = 1 % n;
  a %= n;
  while (e > 0) {
    if (e & 1) r = u64((u128(r) * a) % n);
    a = u64((u128(a) * a) % n);
    e >>= 1;
  }
  return r;
}

/// Multiplicative inverse of a mod n (extended Euclid); requires
/// gcd(a, n) = 1. By convention modinv(a, 1) = 0.
inline u64 modinv(u64 a, u64 n) {
  DERANGE_REQUIRE(n >= 1, "modinv: modulus must be >= 1");
  if (n == 1) return 0;
  a %= n;
  DERANGE_REQUIRE(std::gcd(a, n) == 1, "modinv: a and n must be coprime");
  i64 r0 = i64(n), r1 = i64(a), t0 = 0, t1 = 1;
  while (r1 != 0) {
    const i64 q = r0 / r1;
    std::tie(r0, r1) = std::pair<i64, i64>(r1, r0 - q * r1);
    std::tie(t0, t1) = std::pair<i64, i64>(t1, t0 - q * t1);
  }
  DERANGE_CHECK(r0 == 1, "modinv: gcd state broken");
  const u64 inv = u64(t0 < 0 ? t0 + i64(n) : t0);
  DERANGE_CHECK(u64((u128(inv) * a) % n) == 1, "modinv: result check failed");
  return inv;
}

/// Least k >= 1 with a^k == 1 mod n; requires gcd(a, n) = 1.
inline u64 mult_order(u64 a, u64 n) {
  DERANGE_REQUIRE(n >= 2, "mult_order: modulus must be >= 2");
  a %= n;
  DERANGE_REQUIRE(std::gcd(a, n) == 1, "mult_order: a and n must be coprime");
  // Euler phi(n) from the factorization of n; the order divides it.
  const Factorization fn = factorize(n);
  u64 phi = 1;
  for (const auto& [p, e] : fn.factors) {
    u64 pk = 1;
    for (int i = 0; i < e - 1; ++i) pk = checked_mul(pk, p);
    phi = checked_mul(phi, checked_mul(pk, p - 1));
  }
  u64 order = phi;
  for (const auto& [p, e] : factorize(phi).factors) {
    (void)e;
    while (order % p == 0 && powmod(a, order / p, n) == 1) order /= p;
  }
  DERANGE_CHECK(powmod(a, order, n) == 1, "mult_order: result does not annihilate");
  return order;
}

/// Largest prime r with r | q^n - 1 and r not dividing q^k - 1 for k < n;
/// std::nullopt in the classical exceptional cases (no such prime).
inline std::optional<u64> zsygmondy_ppd(u64 q, u64 n) {
  DERANGE_REQUIRE(q >= 2, "zsygmondy_ppd: q must be >= 2");
  DERANGE_REQUIRE(n >= 1, "zsygmondy_ppd: n must be >= 1");
  u64 qn = 1;
  for (u64 i = 0; i < n; ++i) {
    qn = checked_mul(qn, q);
    DERANGE_REQUIRE(qn <= (u64(1) << 63), "zsygmondy_ppd: q^n exceeds 2^63");
  }
  const u64 value = qn - 1;
  if (value == 1) return std::nullopt;
  const Factorization f = factorize(value);
  // r is primitive iff the multiplicative order of q modulo r equals n.
  for (auto it = f.factors.rbegin(); it != f.factors.rend(); ++it) {
    const u64 r = it->first;
    if (q % r == 0) continue;
    if (mult_order(q % r, r) == n) return r;
  }
  return std::nullopt;
}

}  // namespace derange

#endif  // DERANGE_ARITH_HPP
