/// @file gf.hpp
/// @brief Exact arithmetic in GF(p^f), p^f <= 2^32, with canonical moduli,
///        Zech-logarithm tables, Frobenius maps, and subfield embeddings.
///
/// Canonical modulus policy: for p^f <= 2^16 the modulus is the Conway
/// polynomial of GF(p^f), computed on demand by the standard recursive
/// definition (minimal in the signed-lexicographic candidate order among
/// primitive polynomials compatible with the Conway polynomials of all
/// proper subfields) and memoized per process. Beyond 2^16 the modulus is
/// the lexicographically least primitive monic polynomial, compared by the
/// coefficient word (c_{f-1}, ..., c_0). Both rules are deterministic, so
/// matrix entries are reproducible across runs and implementations.
///
/// Elements are stored as mixed-radix codes: the element with coordinates
/// (c_0, ..., c_{f-1}) in the power basis 1, x, ..., x^{f-1} has code
/// sum c_i p^i. The textual form is "p^f:[c0,c1,...]" with exactly f
/// coordinates; round-trips are bit-exact.

#ifndef DERANGE_GF_HPP
#define DERANGE_GF_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "derange/arith.hpp"
#include "derange/common.hpp"

namespace derange {

namespace detail {

/// Dense polynomials over GF(p) as little-endian coefficient vectors,
/// used only while constructing field moduli (no FieldCtx exists yet).
using PP = std::vector<u32>;

inline void pp_trim(PP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline PP pp_mul(const PP& a, const PP& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  PP r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      r[i + j] = u32((r[i + j] + u64(a[i]) * b[j]) % p);
    }
  }
  pp_trim(r);
  return r;
}

/// Remainder of a modulo monic m.
inline PP pp_mod(PP a, const PP& m, u64 p) {
  DERANGE_CHECK(!m.empty() && m.back() == 1, "pp_mod: modulus must be monic");
  const size_t dm = m.size() - 1;
  while (a.size() > dm) {
    const u64 c = a.back();
    const size_t shift = a.size() - 1 - dm;
    if (c != 0) {
      for (size_t j = 0; j < m.size(); ++j) {
        const u64 sub = (c * m[j]) % p;
        a[shift + j] = u32((a[shift + j] + p - sub) % p);
      }
    }
    a.pop_back();
    pp_trim(a);
    if (a.size() <= dm) break;
  }
  pp_trim(a);
  return a;
}

/// x^e modulo monic m over GF(p).
inline PP pp_xpow_mod(u64 e, const PP& m, u64 p) {
  PP result{1};
  PP base{0, 1};
  base = pp_mod(base, m, p);
  while (e > 0) {
    if (e & 1) result = pp_mod(pp_mul(result, base, p), m, p);
    base = pp_mod(pp_mul(base, base, p), m, p);
    e >>= 1;
  }
  return result;
}

/// General power of a residue class modulo monic m.
inline PP pp_pow_mod(PP base, u64 e, const PP& m, u64 p) {
  PP result{1};
  base = pp_mod(std::move(base), m, p);
  while (e > 0) {
    if (e & 1) result = pp_mod(pp_mul(result, base, p), m, p);
    base = pp_mod(pp_mul(base, base, p), m, p);
    e >>= 1;
  }
  return result;
}

/// Evaluates a GF(p)-coefficient polynomial at a residue class mod m.
inline PP pp_eval_at(const PP& poly, const PP& h, const PP& m, u64 p) {
  PP acc;  // zero
  for (size_t i = poly.size(); i-- > 0;) {
    acc = pp_mod(pp_mul(acc, h, p), m, p);
    if (poly[i] != 0) {
      if (acc.empty()) acc = PP{poly[i]};
      else acc[0] = u32((acc[0] + poly[i]) % p);
      pp_trim(acc);
    }
  }
  return acc;
}

/// True iff the residue class of x modulo cand has multiplicative order
/// exactly p^f - 1 (which also certifies irreducibility and primitivity).
inline bool pp_x_is_primitive(const PP& cand, u64 p,
                              const Factorization& qm1_fact) {
  const u64 qm1 = qm1_fact.value;
  if (pp_xpow_mod(qm1, cand, p) != PP{1}) return false;
  for (const auto& [r, e] : qm1_fact.factors) {
    (void)e;
    if (pp_xpow_mod(qm1 / r, cand, p) == PP{1}) return false;
  }
  return true;
}

PP conway_polynomial(u64 p, u64 f);  // forward declaration (mutual recursion)

/// Checks Conway compatibility: the canonical norm of the candidate's root
/// into each maximal proper subfield must be a root of that subfield's
/// Conway polynomial.
inline bool pp_conway_compatible(const PP& cand, u64 p, u64 f, u64 qm1) {
  const Factorization ff = factorize(f);
  for (const auto& [ell, e] : ff.factors) {
    (void)e;
    const u64 d = f / ell;
    u64 pd = 1;
    for (u64 i = 0; i < d; ++i) pd *= p;
    const PP sub = conway_polynomial(p, d);
    const PP normed = pp_xpow_mod(qm1 / (pd - 1), cand, p);
    if (!pp_eval_at(sub, normed, cand, p).empty()) return false;
  }
  return true;
}

/// The Conway polynomial of GF(p^f) (little-endian, monic, length f+1).
/// Candidates are scanned in the standard order: the word
/// (a_{f-1}, ..., a_0) increases lexicographically, where the candidate is
/// x^f + sum_i (-1)^{f-i} a_i x^i.
inline PP conway_polynomial(u64 p, u64 f) {
  static std::map<std::pair<u64, u64>, PP> cache;
  static std::mutex mu;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({p, f});
    if (it != cache.end()) return it->second;
  }
  u64 q = 1;
  for (u64 i = 0; i < f; ++i) q = checked_mul(q, p);
  const Factorization qm1 = factorize(q - 1);

  std::vector<u32> word(f, 0);  // word[k] = a_{f-1-k}
  PP found;
  while (true) {
    PP cand(f + 1, 0);
    cand[f] = 1;
    for (u64 k = 0; k < f; ++k) {
      const u64 i = f - 1 - k;  // power of x for word position k
      const u64 a = word[k];
      cand[i] = ((f - i) % 2 == 0) ? u32(a) : u32((p - a) % p);
    }
    if (pp_x_is_primitive(cand, p, qm1) &&
        (f == 1 || pp_conway_compatible(cand, p, f, q - 1))) {
      found = cand;
      break;
    }
    // Odometer increment of the word.
    u64 k = f;
    while (k > 0) {
      --k;
      if (++word[k] < p) break;
      word[k] = 0;
      DERANGE_CHECK(k != 0 || word[0] != 0,
                    "conway_polynomial: candidate space exhausted");
    }
  }
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(std::make_pair(p, f), found);
  return found;
}

/// Lexicographically least primitive monic polynomial of degree f over
/// GF(p), compared by the plain coefficient word (c_{f-1}, ..., c_0).
/// Fallback modulus for 2^16 < p^f <= 2^32.
inline PP lex_least_primitive(u64 p, u64 f) {
  u64 q = 1;
  for (u64 i = 0; i < f; ++i) q = checked_mul(q, p);
  const Factorization qm1 = factorize(q - 1);
  std::vector<u32> word(f, 0);  // word[k] = c_{f-1-k}
  while (true) {
    PP cand(f + 1, 0);
    cand[f] = 1;
    for (u64 k = 0; k < f; ++k) cand[f - 1 - k] = word[k];
    if (pp_x_is_primitive(cand, p, qm1)) return cand;
    u64 k = f;
    while (k > 0) {
      --k;
      if (++word[k] < p) break;
      word[k] = 0;
      DERANGE_CHECK(k != 0 || word[0] != 0,
                    "lex_least_primitive: candidate space exhausted");
    }
  }
}

}  // namespace detail

class FieldCtx;

/// One element of a finite field: a context pointer plus a mixed-radix
/// coordinate code. Values are cheap to copy; equality requires the same
/// context object.
struct FieldElem {
  const FieldCtx* ctx = nullptr;
  u32 code = 0;
  friend bool operator==(const FieldElem&, const FieldElem&) = default;
};

/// Immutable context for GF(p^f). Construction computes the canonical
/// modulus and, for p^f <= 2^16, full exponential/logarithm/Zech tables.
class FieldCtx {
 public:
  static constexpr u32 kNoLog = 0xffffffffu;

  FieldCtx(u64 p, u64 f) : p_(p), f_(f) {
    DERANGE_REQUIRE(is_prime(p), "field: p must be prime");
    DERANGE_REQUIRE(f >= 1, "field: f must be >= 1");
    u64 q = 1;
    for (u64 i = 0; i < f; ++i) {
      q = checked_mul(q, p);
      DERANGE_REQUIRE(q <= (u64(1) << 32), "field: p^f exceeds 2^32");
    }
    q_ = q;
    modulus_ = (q_ <= (u64(1) << 16)) ? detail::conway_polynomial(p, f)
                                      : detail::lex_least_primitive(p, f);
    qm1_fact_ = factorize(q_ - 1);
    if (q_ <= (u64(1) << 16)) build_tables();
  }

  FieldCtx(const FieldCtx&) = delete;
  FieldCtx& operator=(const FieldCtx&) = delete;
  FieldCtx(FieldCtx&&) = default;

  u64 p() const { return p_; }
  u64 f() const { return f_; }
  u64 q() const { return q_; }
  /// Monic modulus, little-endian, length f+1, coefficients in [0, p).
  const detail::PP& modulus() const { return modulus_; }
  const Factorization& unit_order_factorization() const { return qm1_fact_; }

  // ---- code-level arithmetic -------------------------------------------

  u32 add(u32 a, u32 b) const {
    if (p_ == 2) return a ^ b;
    if (f_ == 1) return u32((u64(a) + b) % p_);
    u32 r = 0;
    u64 mul = 1;
    for (u64 i = 0; i < f_; ++i) {
      const u64 da = (a / mul) % p_;
      const u64 db = (b / mul) % p_;
      r += u32(((da + db) % p_) * mul);
      mul *= p_;
    }
    return r;
  }

  u32 neg(u32 a) const {
    if (p_ == 2) return a;
    if (f_ == 1) return a == 0 ? 0 : u32(p_ - a);
    u32 r = 0;
    u64 mul = 1;
    for (u64 i = 0; i < f_; ++i) {
      const u64 da = (a / mul) % p_;
      r += u32(((p_ - da) % p_) * mul);
      mul *= p_;
    }
    return r;
  }

  u32 sub(u32 a, u32 b) const { return add(a, neg(b)); }

  u32 mul(u32 a, u32 b) const {
    if (a == 0 || b == 0) return 0;
    if (zech_ready_) {
      const u64 k = (u64(log_[a]) + log_[b]) % (q_ - 1);
      return exp_[k];
    }
    return mul_big(a, b);
  }

  u32 inv(u32 a) const {
    DERANGE_REQUIRE(a != 0, "field inverse of zero");
    if (zech_ready_) {
      const u64 k = (q_ - 1 - log_[a]) % (q_ - 1);
      return exp_[k];
    }
    return pow(a, q_ - 2);
  }

  u32 div(u32 a, u32 b) const { return mul(a, inv(b)); }

  u32 pow(u32 a, u64 e) const {
    if (a == 0) {
      DERANGE_REQUIRE(e != 0, "field pow: 0^0 undefined");
      return 0;
    }
    const u64 em = e % (q_ - 1 == 0 ? 1 : q_ - 1);  // a^{q-1} = 1
    if (em == 0) return 1;
    if (zech_ready_) {
      const u64 k = (u64(log_[a]) * em) % (q_ - 1);
      return exp_[k];
    }
    u32 r = 1, base = a;
    u64 ee = em;
    while (ee > 0) {
      if (ee & 1) r = mul_big(r, base);
      base = mul_big(base, base);
      ee >>= 1;
    }
    return r;
  }

  /// a^{p^j}; j is reduced modulo f.
  u32 frobenius_code(u32 a, u64 j) const {
    if (a == 0 || a == 1) return a;
    const u64 jm = j % f_;
    if (jm == 0) return a;
    const u64 e = powmod(p_ % (q_ - 1), jm, q_ - 1);
    return pow(a, e);
  }

  u64 order_code(u32 a) const {
    DERANGE_REQUIRE(a != 0, "element_order: zero input");
    if (a == 1) return 1;
    u64 order = q_ - 1;
    for (const auto& [r, e] : qm1_fact_.factors) {
      (void)e;
      while (order % r == 0 && pow(a, order / r) == 1) order /= r;
    }
    return order;
  }

  // ---- element factory --------------------------------------------------

  FieldElem zero() const { return {this, 0}; }
  FieldElem one() const { return {this, 1}; }
  /// The canonical primitive element: the class of x for f >= 2, and the
  /// root of the canonical modulus x - g for prime fields (g = 1 in GF(2)).
  FieldElem gen() const {
    if (f_ >= 2) return {this, u32(p_)};
    return {this, u32((p_ - modulus_[0]) % p_)};
  }
  FieldElem elem(u32 code) const {
    DERANGE_REQUIRE(code < q_, "elem: code out of range");
    return {this, code};
  }
  FieldElem from_coeffs(const std::vector<u32>& c) const {
    DERANGE_REQUIRE(c.size() <= f_, "from_coeffs: too many coefficients");
    u64 code = 0;
    u64 mul = 1;
    for (u64 i = 0; i < f_; ++i) {
      const u64 ci = i < c.size() ? c[i] : 0;
      DERANGE_REQUIRE(ci < p_, "from_coeffs: coefficient out of range");
      code += ci * mul;
      mul *= p_;
    }
    return {this, u32(code)};
  }
  std::vector<u32> coeffs(u32 code) const {
    std::vector<u32> c(f_);
    for (u64 i = 0; i < f_; ++i) {
      c[i] = u32(code % p_);
      code /= u32(p_);
    }
    return c;
  }

 private:
  void build_tables() {
    const u64 n = q_ - 1;
    exp_.resize(n);
    log_.assign(q_, kNoLog);
    u32 cur = 1;
    for (u64 i = 0; i < n; ++i) {
      DERANGE_CHECK(log_[cur] == kNoLog, "field tables: generator not primitive");
      exp_[i] = cur;
      log_[cur] = u32(i);
      cur = mul_by_x(cur);
    }
    DERANGE_CHECK(cur == 1, "field tables: generator order mismatch");
    zech_.resize(n);
    for (u64 k = 0; k < n; ++k) {
      const u32 s = add(1, exp_[k]);
      zech_[k] = (s == 0) ? kNoLog : log_[s];
    }
    zech_ready_ = true;
  }

  /// Multiplication by the class of x via digit shift and reduction.
  u32 mul_by_x(u32 a) const {
    std::vector<u64> d(f_ + 1, 0);
    u32 t = a;
    for (u64 i = 0; i < f_; ++i) {
      d[i + 1] = t % p_;
      t /= u32(p_);
    }
    const u64 top = d[f_];
    if (top != 0) {
      for (u64 j = 0; j < f_; ++j) {
        d[j] = (d[j] + (p_ - (top * modulus_[j]) % p_)) % p_;
      }
    }
    u64 code = 0, mul = 1;
    for (u64 i = 0; i < f_; ++i) {
      code += d[i] * mul;
      mul *= p_;
    }
    return u32(code);
  }

  /// Schoolbook polynomial multiplication with reduction (no tables).
  u32 mul_big(u32 a, u32 b) const {
    if (f_ == 1) return u32((u128(a) * b) % p_);
    std::vector<u64> da(f_), db(f_);
    u32 t = a;
    for (u64 i = 0; i < f_; ++i) {
      da[i] = t % p_;
      t /= u32(p_);
    }
    t = b;
    for (u64 i = 0; i < f_; ++i) {
      db[i] = t % p_;
      t /= u32(p_);
    }
    std::vector<u64> acc(2 * f_ - 1, 0);
    for (u64 i = 0; i < f_; ++i) {
      if (da[i] == 0) continue;
      for (u64 j = 0; j < f_; ++j) acc[i + j] += da[i] * db[j];
    }
    for (u64 i = 0; i < acc.size(); ++i) acc[i] %= p_;
    for (u64 i = 2 * f_ - 2; i + 1 > f_; --i) {
      const u64 c = acc[i] % p_;
      if (c != 0) {
        for (u64 j = 0; j <= f_; ++j) {
          const u64 sub = (c * modulus_[j]) % p_;
          acc[i - f_ + j] = (acc[i - f_ + j] + p_ - sub) % p_;
        }
      }
      acc[i] = 0;
    }
    u64 code = 0, mul = 1;
    for (u64 i = 0; i < f_; ++i) {
      code += (acc[i] % p_) * mul;
      mul *= p_;
    }
    return u32(code);
  }

  u64 p_, f_, q_ = 0;
  detail::PP modulus_;
  Factorization qm1_fact_;
  bool zech_ready_ = false;
  std::vector<u32> exp_, log_, zech_;
};

/// Constructs a fresh context (the spec-level `field` operation).
inline FieldCtx field(u64 p, u64 f) { return FieldCtx(p, f); }

/// Process-wide context registry; all higher modules share these instances
/// so that FieldElem context pointers stay valid and comparable.
inline const FieldCtx& field_cached(u64 p, u64 f) {
  static std::map<std::pair<u64, u64>, std::unique_ptr<FieldCtx>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, f}];
  if (!slot) slot = std::make_unique<FieldCtx>(p, f);
  return *slot;
}

// ---- FieldElem operators ----------------------------------------------

inline const FieldCtx& ctx_of(const FieldElem& a) {
  DERANGE_CHECK(a.ctx != nullptr, "FieldElem without context");
  return *a.ctx;
}

inline FieldElem operator+(const FieldElem& a, const FieldElem& b) {
  DERANGE_CHECK(a.ctx == b.ctx, "field element context mismatch");
  return {a.ctx, ctx_of(a).add(a.code, b.code)};
}
inline FieldElem operator-(const FieldElem& a, const FieldElem& b) {
  DERANGE_CHECK(a.ctx == b.ctx, "field element context mismatch");
  return {a.ctx, ctx_of(a).sub(a.code, b.code)};
}
inline FieldElem operator-(const FieldElem& a) {
  return {a.ctx, ctx_of(a).neg(a.code)};
}
inline FieldElem operator*(const FieldElem& a, const FieldElem& b) {
  DERANGE_CHECK(a.ctx == b.ctx, "field element context mismatch");
  return {a.ctx, ctx_of(a).mul(a.code, b.code)};
}
inline FieldElem operator/(const FieldElem& a, const FieldElem& b) {
  DERANGE_CHECK(a.ctx == b.ctx, "field element context mismatch");
  return {a.ctx, ctx_of(a).div(a.code, b.code)};
}
inline FieldElem inv(const FieldElem& a) {
  return {a.ctx, ctx_of(a).inv(a.code)};
}
inline FieldElem pow(const FieldElem& a, u64 e) {
  return {a.ctx, ctx_of(a).pow(a.code, e)};
}
inline bool is_zero(const FieldElem& a) { return a.code == 0; }
inline bool is_one(const FieldElem& a) { return a.code == 1; }

/// a^{p^j} (the spec-level `frobenius` operation).
inline FieldElem frobenius(const FieldElem& a, u64 j) {
  return {a.ctx, ctx_of(a).frobenius_code(a.code, j)};
}

/// Multiplicative order of a nonzero element.
inline u64 element_order(const FieldElem& a) {
  return ctx_of(a).order_code(a.code);
}

/// True iff a lies in the copy of GF(p^j) inside GF(p^f); requires j | f.
inline bool subfield_test(const FieldElem& a, u64 j) {
  const FieldCtx& c = ctx_of(a);
  DERANGE_REQUIRE(j >= 1 && c.f() % j == 0, "subfield_test: j must divide f");
  return frobenius(a, j) == a;
}

// ---- textual format ----------------------------------------------------

/// Canonical text form "p^f:[c0,c1,...]" with exactly f coordinates.
inline std::string format_elem(const FieldElem& a) {
  const FieldCtx& c = ctx_of(a);
  std::string s = std::to_string(c.p()) + "^" + std::to_string(c.f()) + ":[";
  const auto co = c.coeffs(a.code);
  for (size_t i = 0; i < co.size(); ++i) {
    if (i) s.push_back(',');
    s += std::to_string(co[i]);
  }
  s.push_back(']');
  return s;
}

/// Strict parser for the canonical element format; the (p, f) prefix must
/// match the supplied context.
inline FieldElem parse_elem(const FieldCtx& c, const std::string& text) {
  const auto caret = text.find('^');
  const auto colon = text.find(':');
  DERANGE_REQUIRE(caret != std::string::npos && colon != std::string::npos &&
                      caret < colon,
                  "parse_elem: malformed element text");
  DERANGE_REQUIRE(colon + 1 < text.size() && text[colon + 1] == '[' &&
                      text.back() == ']',
                  "parse_elem: missing coefficient brackets");
  u64 p = 0, f = 0;
  try {
    p = std::stoull(text.substr(0, caret));
    f = std::stoull(text.substr(caret + 1, colon - caret - 1));
  } catch (const std::exception&) {
    throw invalid_argument_error("parse_elem: bad field prefix");
  }
  DERANGE_REQUIRE(p == c.p() && f == c.f(),
                  "parse_elem: field prefix does not match context");
  std::vector<u32> coeffs;
  std::string body = text.substr(colon + 2, text.size() - colon - 3);
  size_t pos = 0;
  while (pos <= body.size()) {
    const size_t comma = body.find(',', pos);
    const std::string tok =
        body.substr(pos, comma == std::string::npos ? body.size() - pos
                                                    : comma - pos);
    DERANGE_REQUIRE(!tok.empty(), "parse_elem: empty coefficient");
    try {
      coeffs.push_back(u32(std::stoul(tok)));
    } catch (const std::exception&) {
      throw invalid_argument_error("parse_elem: bad coefficient");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  DERANGE_REQUIRE(coeffs.size() == c.f(),
                  "parse_elem: expected exactly f coefficients");
  return c.from_coeffs(coeffs);
}

// ---- subfield embeddings ------------------------------------------------

/// Canonical embedding GF(p^j) -> GF(p^f) for j | f: the subfield generator
/// maps to the least power of the big-field generator that is a root of the
/// subfield modulus. For Conway-aligned contexts this is the norm-compatible
/// power G^{(p^f-1)/(p^j-1)}.
struct SubfieldEmbedding {
  const FieldCtx* sub = nullptr;
  const FieldCtx* big = nullptr;
  std::vector<u32> to_big;                 // indexed by subfield code
  std::unordered_map<u32, u32> to_sub;     // inverse map

  FieldElem up(const FieldElem& a) const {
    DERANGE_CHECK(a.ctx == sub, "embedding: wrong source context");
    return {big, to_big[a.code]};
  }
  /// Pulls a big-field element back into the subfield; requires membership.
  FieldElem down(const FieldElem& a) const {
    DERANGE_CHECK(a.ctx == big, "embedding: wrong source context");
    auto it = to_sub.find(a.code);
    DERANGE_REQUIRE(it != to_sub.end(),
                    "embedding: element not in subfield image");
    return {sub, it->second};
  }
  bool contains(const FieldElem& a) const {
    return a.ctx == big && to_sub.count(a.code) > 0;
  }
};

inline SubfieldEmbedding subfield_embedding(const FieldCtx& sub,
                                            const FieldCtx& big) {
  DERANGE_REQUIRE(sub.p() == big.p(), "embedding: characteristic mismatch");
  DERANGE_REQUIRE(big.f() % sub.f() == 0, "embedding: degree must divide");
  DERANGE_REQUIRE(sub.q() <= (u64(1) << 16),
                  "embedding: subfield larger than 2^16 unsupported");
  SubfieldEmbedding out;
  out.sub = &sub;
  out.big = &big;
  const u64 qs = sub.q();
  out.to_big.assign(qs, 0);

  if (&sub == &big) {
    for (u64 cde = 0; cde < qs; ++cde) {
      out.to_big[cde] = u32(cde);
      out.to_sub.emplace(u32(cde), u32(cde));
    }
    return out;
  }

  // Locate the canonical image of the subfield generator: the least power
  // of the big generator annihilated by the subfield modulus.
  const u64 e = (big.q() - 1) / (qs - 1);
  const FieldElem G = big.gen();
  u32 image = 0;
  bool found = false;
  for (u64 i = 1; i < qs && !found; ++i) {
    const FieldElem cand = pow(G, e * i);
    // Evaluate the subfield modulus at cand inside the big field. A
    // prime-subfield integer's mixed-radix code equals its value, so the
    // GF(p) coefficients lift code-identically.
    FieldElem acc = big.zero();
    const auto& m = sub.modulus();
    for (size_t d = m.size(); d-- > 0;) {
      acc = acc * cand + big.elem(m[d]);
    }
    if (is_zero(acc)) {
      image = cand.code;
      found = true;
    }
  }
  DERANGE_CHECK(found, "embedding: no root of subfield modulus found");

  // Tabulate: subfield code (c_0, ..., c_{j-1}) evaluated at the image.
  const FieldElem img = big.elem(image);
  for (u64 cde = 0; cde < qs; ++cde) {
    const auto co = sub.coeffs(u32(cde));
    FieldElem acc = big.zero();
    for (size_t i = co.size(); i-- > 0;) {
      acc = acc * img + big.elem(co[i]);
    }
    out.to_big[cde] = acc.code;
    const bool fresh = out.to_sub.emplace(acc.code, u32(cde)).second;
    DERANGE_CHECK(fresh, "embedding: map not injective");
  }
  return out;
}

/// Cached canonical embedding between the cached contexts.
inline const SubfieldEmbedding& subfield_embedding_cached(u64 p, u64 fsub,
                                                          u64 fbig) {
  static std::map<std::tuple<u64, u64, u64>, std::unique_ptr<SubfieldEmbedding>>
      cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, fsub, fbig}];
  if (!slot) {
    slot = std::make_unique<SubfieldEmbedding>(
        subfield_embedding(field_cached(p, fsub), field_cached(p, fbig)));
  }
  return *slot;
}

}  // namespace derange

#endif  // DERANGE_GF_HPP
