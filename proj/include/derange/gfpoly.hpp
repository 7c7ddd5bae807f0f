/// @file gfpoly.hpp
/// @brief Univariate polynomials over GF(p^f): arithmetic, gcd, modular
///        powers, deterministic factorization, and minimal polynomials of
///        field elements over subfields.
///
/// Factorization is fully deterministic: squarefree reduction (with p-th
/// root extraction in characteristic p), distinct-degree splitting via
/// gcd(x^{q^d} - x, f), then equal-degree splitting by lexicographic trial
/// division over all monic polynomials of the target degree. The trial
/// space q^d is capped; inputs beyond the cap raise undecided_error rather
/// than fall back to randomness.

#ifndef DERANGE_GFPOLY_HPP
#define DERANGE_GFPOLY_HPP

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "derange/gf.hpp"

namespace derange {

/// Polynomial over a field context; little-endian element codes with no
/// trailing zeros (the zero polynomial has an empty coefficient vector).
struct Poly {
  const FieldCtx* ctx = nullptr;
  std::vector<u32> c;

  int degree() const { return int(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  bool is_monic() const { return !c.empty() && c.back() == 1; }
  u32 coeff(size_t i) const { return i < c.size() ? c[i] : 0; }
  friend bool operator==(const Poly&, const Poly&) = default;
};

inline void poly_trim(Poly& a) {
  while (!a.c.empty() && a.c.back() == 0) a.c.pop_back();
}

inline Poly poly_zero(const FieldCtx& F) { return {&F, {}}; }
inline Poly poly_one(const FieldCtx& F) { return {&F, {1}}; }
inline Poly poly_x(const FieldCtx& F) { return {&F, {0, 1}}; }

/// Builds a polynomial from little-endian element codes.
inline Poly poly_from_codes(const FieldCtx& F, std::vector<u32> codes) {
  for (u32 cd : codes) DERANGE_REQUIRE(cd < F.q(), "poly: code out of range");
  Poly r{&F, std::move(codes)};
  poly_trim(r);
  return r;
}

/// x - a.
inline Poly poly_linear(const FieldElem& a) {
  const FieldCtx& F = ctx_of(a);
  return {&F, {F.neg(a.code), 1}};
}

inline const FieldCtx& poly_ctx(const Poly& a) {
  DERANGE_CHECK(a.ctx != nullptr, "poly without context");
  return *a.ctx;
}

inline Poly operator+(const Poly& a, const Poly& b) {
  DERANGE_CHECK(a.ctx == b.ctx, "poly context mismatch");
  const FieldCtx& F = poly_ctx(a);
  Poly r{a.ctx, std::vector<u32>(std::max(a.c.size(), b.c.size()), 0)};
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = F.add(a.coeff(i), b.coeff(i));
  poly_trim(r);
  return r;
}

inline Poly operator-(const Poly& a, const Poly& b) {
  DERANGE_CHECK(a.ctx == b.ctx, "poly context mismatch");
  const FieldCtx& F = poly_ctx(a);
  Poly r{a.ctx, std::vector<u32>(std::max(a.c.size(), b.c.size()), 0)};
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = F.sub(a.coeff(i), b.coeff(i));
  poly_trim(r);
  return r;
}

inline Poly operator*(const Poly& a, const Poly& b) {
  DERANGE_CHECK(a.ctx == b.ctx, "poly context mismatch");
  const FieldCtx& F = poly_ctx(a);
  if (a.is_zero() || b.is_zero()) return poly_zero(F);
  Poly r{a.ctx, std::vector<u32>(a.c.size() + b.c.size() - 1, 0)};
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (size_t j = 0; j < b.c.size(); ++j) {
      r.c[i + j] = F.add(r.c[i + j], F.mul(a.c[i], b.c[j]));
    }
  }
  poly_trim(r);
  return r;
}

inline Poly poly_scale(const Poly& a, u32 s) {
  const FieldCtx& F = poly_ctx(a);
  Poly r = a;
  for (auto& cd : r.c) cd = F.mul(cd, s);
  poly_trim(r);
  return r;
}

/// Quotient and remainder; the divisor must be nonzero.
inline std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b) {
  DERANGE_CHECK(a.ctx == b.ctx, "poly context mismatch");
  DERANGE_REQUIRE(!b.is_zero(), "poly division by zero");
  const FieldCtx& F = poly_ctx(a);
  if (a.c.size() < b.c.size()) return {poly_zero(F), a};
  const u32 lead_inv = F.inv(b.c.back());
  Poly rem = a;
  Poly quo{a.ctx, std::vector<u32>(a.c.size() - b.c.size() + 1, 0)};
  for (size_t sh = quo.c.size(); sh-- > 0;) {
    const size_t i = sh + b.c.size() - 1;  // position of the leading term
    if (rem.c[i] == 0) continue;
    const u32 qd = F.mul(rem.c[i], lead_inv);
    quo.c[sh] = qd;
    for (size_t j = 0; j < b.c.size(); ++j) {
      rem.c[sh + j] = F.sub(rem.c[sh + j], F.mul(qd, b.c[j]));
    }
  }
  poly_trim(rem);
  poly_trim(quo);
  return {quo, rem};
}

inline Poly poly_mod(const Poly& a, const Poly& b) {
  return poly_divmod(a, b).second;
}
inline Poly poly_div_exact(const Poly& a, const Poly& b) {
  auto [q, r] = poly_divmod(a, b);
  DERANGE_CHECK(r.is_zero(), "poly_div_exact: division not exact");
  return q;
}

inline Poly poly_monic(const Poly& a) {
  if (a.is_zero()) return a;
  return poly_scale(a, poly_ctx(a).inv(a.c.back()));
}

/// Monic gcd (gcd(0, 0) = 0).
inline Poly poly_gcd(Poly a, Poly b) {
  DERANGE_CHECK(a.ctx == b.ctx, "poly context mismatch");
  while (!b.is_zero()) {
    Poly r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(a);
}

inline Poly poly_pow_mod(Poly base, u64 e, const Poly& m) {
  const FieldCtx& F = poly_ctx(base);
  Poly r = poly_one(F);
  base = poly_mod(base, m);
  while (e > 0) {
    if (e & 1) r = poly_mod(r * base, m);
    base = poly_mod(base * base, m);
    e >>= 1;
  }
  return r;
}

/// x^{q^d} modulo m, computed by d successive q-th powers of the residue.
inline Poly poly_xqd_mod(u64 d, const Poly& m) {
  const FieldCtx& F = poly_ctx(m);
  Poly r = poly_mod(poly_x(F), m);
  for (u64 i = 0; i < d; ++i) r = poly_pow_mod(r, F.q(), m);
  return r;
}

inline FieldElem poly_eval(const Poly& a, const FieldElem& x) {
  const FieldCtx& F = poly_ctx(a);
  DERANGE_CHECK(x.ctx == a.ctx, "poly_eval: context mismatch");
  FieldElem acc = F.zero();
  for (size_t i = a.c.size(); i-- > 0;) acc = acc * x + F.elem(a.c[i]);
  return acc;
}

inline Poly poly_derivative(const Poly& a) {
  const FieldCtx& F = poly_ctx(a);
  if (a.c.size() <= 1) return poly_zero(F);
  Poly r{a.ctx, std::vector<u32>(a.c.size() - 1, 0)};
  for (size_t i = 1; i < a.c.size(); ++i) {
    // i * a_i; the integer i mod p is the prime-subfield element whose
    // mixed-radix code equals its value.
    r.c[i - 1] = F.mul(a.c[i], u32(i % F.p()));
  }
  poly_trim(r);
  return r;
}

/// Deterministic irreducibility test over GF(q).
inline bool poly_is_irreducible(const Poly& f) {
  const FieldCtx& F = poly_ctx(f);
  const int n = f.degree();
  DERANGE_REQUIRE(n >= 1, "irreducibility: degree must be positive");
  if (n == 1) return true;
  const Poly fm = poly_monic(f);
  const Poly x = poly_mod(poly_x(F), fm);
  if (poly_xqd_mod(u64(n), fm) != x) return false;
  const Factorization nf = factorize(u64(n));
  for (const auto& [ell, e] : nf.factors) {
    (void)e;
    const Poly g = poly_gcd(poly_xqd_mod(u64(n) / ell, fm) - x, fm);
    if (g.degree() != 0) return false;
  }
  return true;
}

namespace detail {

/// p-th root of f (valid when f' = 0, i.e. f is a polynomial in x^p with
/// p-th power coefficients).
inline Poly poly_pth_root(const Poly& f) {
  const FieldCtx& F = poly_ctx(f);
  const u64 p = F.p();
  Poly r{f.ctx, {}};
  r.c.resize(f.c.size() / p + 1, 0);
  for (size_t i = 0; i < f.c.size(); ++i) {
    if (f.c[i] == 0) continue;
    DERANGE_CHECK(i % p == 0, "pth_root: not a p-th power");
    r.c[i / p] = F.frobenius_code(f.c[i], F.f() - 1);  // p-th root in GF(p^m)
  }
  poly_trim(r);
  return r;
}

/// Equal-degree splitting by exhaustive lexicographic trial division:
/// g is a squarefree product of monic irreducibles all of degree d, so any
/// monic degree-d divisor is automatically one of them.
inline void poly_edf_bruteforce(Poly g, int d, std::vector<Poly>& out) {
  const FieldCtx& F = poly_ctx(g);
  if (g.degree() == d) {
    out.push_back(poly_monic(g));
    return;
  }
  u64 space = 1;
  for (int i = 0; i < d; ++i) {
    space = checked_mul(space, F.q());
    if (space > (u64(1) << 20)) {
      throw undecided_error(
          "poly_factor: equal-degree split exceeds q^d <= 2^20 cap");
    }
  }
  // Odometer over the d low-order coefficient codes.
  std::vector<u32> word(size_t(d), 0);
  while (g.degree() > d) {
    // Advance to the next candidate (starting above the zero word, since
    // x^d alone may divide only once and is handled like any candidate).
    Poly cand{&F, {}};
    cand.c.assign(word.begin(), word.end());
    cand.c.push_back(1);
    auto [q, r] = poly_divmod(g, cand);
    if (r.is_zero()) {
      out.push_back(cand);
      g = q;
      continue;  // same candidate cannot divide twice (g squarefree)
    }
    size_t k = word.size();
    bool advanced = false;
    while (k > 0) {
      --k;
      if (++word[k] < F.q()) {
        advanced = true;
        break;
      }
      word[k] = 0;
    }
    DERANGE_CHECK(advanced, "poly_edf: candidate space exhausted");
  }
  if (g.degree() == d) out.push_back(poly_monic(g));
  else DERANGE_CHECK(g.degree() == 0, "poly_edf: non-trivial residue");
}

/// Distinct irreducible factors of a squarefree monic polynomial.
inline std::vector<Poly> poly_factor_squarefree(Poly s) {
  const FieldCtx& F = poly_ctx(s);
  std::vector<Poly> out;
  int d = 1;
  while (2 * d <= s.degree()) {
    const Poly xqd = poly_xqd_mod(u64(d), s);
    const Poly g = poly_gcd(xqd - poly_mod(poly_x(F), s), s);
    if (g.degree() > 0) {
      poly_edf_bruteforce(g, d, out);
      s = poly_div_exact(s, g);
    }
    ++d;
  }
  if (s.degree() > 0) out.push_back(poly_monic(s));
  return out;
}

}  // namespace detail

/// Monic irreducible factors with multiplicities, sorted by (degree, then
/// lexicographic coefficient codes from the top). Deterministic.
inline std::vector<std::pair<Poly, int>> poly_factor(Poly f) {
  const FieldCtx& F = poly_ctx(f);
  DERANGE_REQUIRE(!f.is_zero(), "poly_factor: zero polynomial");
  f = poly_monic(f);
  std::vector<std::pair<Poly, int>> out;
  while (f.degree() > 0) {
    const Poly fp = poly_derivative(f);
    if (fp.is_zero()) {
      // f = g(x)^p; recurse on the p-th root with multiplicities scaled.
      const Poly g = detail::poly_pth_root(f);
      for (auto& [h, e] : poly_factor(g)) {
        bool merged = false;
        for (auto& [h0, e0] : out) {
          if (h0 == h) {
            e0 += e * int(F.p());
            merged = true;
            break;
          }
        }
        if (!merged) out.emplace_back(h, e * int(F.p()));
      }
      break;
    }
    const Poly w = poly_gcd(f, fp);
    const Poly s = poly_div_exact(f, w);  // distinct factors with p∤e
    DERANGE_CHECK(s.degree() > 0, "poly_factor: empty squarefree part");
    for (const Poly& h : detail::poly_factor_squarefree(s)) {
      int e = 0;
      while (true) {
        auto [q, r] = poly_divmod(f, h);
        if (!r.is_zero()) break;
        f = q;
        ++e;
      }
      DERANGE_CHECK(e > 0, "poly_factor: lost factor");
      out.emplace_back(h, e);
    }
    // Any remaining part has only factors with multiplicity divisible by p;
    // the loop handles it via the derivative-zero branch.
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.degree() != b.first.degree())
      return a.first.degree() < b.first.degree();
    const auto& ac = a.first.c;
    const auto& bc = b.first.c;
    for (size_t i = ac.size(); i-- > 0;) {
      if (ac[i] != bc[i]) return ac[i] < bc[i];
    }
    return false;
  });
  return out;
}

/// Diagnostic rendering: "[c0,c1,...]" of element codes.
inline std::string poly_to_string(const Poly& a) {
  std::string s = "[";
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (i) s.push_back(',');
    s += std::to_string(a.c[i]);
  }
  s.push_back(']');
  return s;
}

/// Minimal polynomial of a over the subfield GF(p^j), j | f, returned over
/// the cached GF(p^j) context. Computed as the product of the distinct
/// Frobenius conjugates a^{(p^j)^i}, with coefficients pulled back through
/// the canonical subfield embedding.
inline Poly minimal_polynomial(const FieldElem& a, u64 j) {
  const FieldCtx& big = ctx_of(a);
  DERANGE_REQUIRE(j >= 1 && big.f() % j == 0,
                  "minimal_polynomial: j must divide f");
  const FieldCtx& sub = field_cached(big.p(), j);
  const bool big_is_cached = (&big == &field_cached(big.p(), big.f()));
  const SubfieldEmbedding fresh =
      big_is_cached ? SubfieldEmbedding{}
                    : subfield_embedding(sub, big);
  const SubfieldEmbedding& emb =
      big_is_cached ? subfield_embedding_cached(big.p(), j, big.f()) : fresh;

  // Frobenius orbit of a under x -> x^{p^j}.
  std::vector<FieldElem> orbit;
  FieldElem b = a;
  do {
    orbit.push_back(b);
    b = frobenius(b, j);
  } while (!(b == a));

  Poly prod = poly_one(big);
  for (const FieldElem& r : orbit) prod = prod * poly_linear(r);

  Poly out{&sub, std::vector<u32>(prod.c.size(), 0)};
  for (size_t i = 0; i < prod.c.size(); ++i) {
    const FieldElem ci = big.elem(prod.c[i]);
    DERANGE_CHECK(emb.contains(ci) || ci.code <= 1,
                  "minimal_polynomial: coefficient escaped the subfield");
    out.c[i] = ci.code <= 1 ? ci.code : emb.down(ci).code;
  }
  poly_trim(out);
  return out;
}

}  // namespace derange

#endif  // DERANGE_GFPOLY_HPP
