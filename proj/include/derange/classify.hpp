/// Decision procedures for total derangement in almost simple groups.
///
/// An element of an almost simple group G with socle T is *totally deranged*
/// if it lies in no core-free maximal subgroup of G (equivalently, it is a
/// derangement in every faithful primitive action of G).  Nontrivial cases
/// exist for exactly two families: T = Sp4(2^f) with a graph-field
/// automorphism in G, and T = POmega+_{2m}(q) with 2m = 2^l >= 8 and a graph
/// (or graph-times-field) automorphism in G.  Membership reduces to explicit
/// divisibility conditions on the orders of the semisimple and unipotent
/// parts of x^e, where x lies in the coset Inndiag(T)*alpha for alpha of odd
/// order e in the group generated by the field automorphism phi.
///
/// This header implements those conditions as pure predicates:
///   - theorem1_exists:      existence of totally deranged elements in G
///   - theorem2_params:      the order-level membership test (trace a..d)
///   - theorem2_element:     the same test on an explicit matrix, extracting
///                           the parameters from its Jordan decomposition;
///                           `singer` strictness additionally constrains the
///                           eigenvalue shape of the semisimple part
///   - enumerate_td_orders:  exhaustive sweep of admissible order triples
///   - theorem3_invgen:      invariable generation of T by {x, x^a}
///   - theorem4_unique:      membership in a unique (non-core-free) maximal
///                           subgroup, predicted to be G ∩ <Inndiag(T), phi>
///
/// Every verdict carries an ordered per-condition boolean trace so that any
/// disagreement with the brute-force oracles is diagnosable to one clause.
/// All arithmetic is exact and overflow-checked; verdicts degrade to
/// `undecided` (never to a silent wrong answer) when a size cap is exceeded.

#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "derange/arith.hpp"
#include "derange/gf.hpp"
#include "derange/grpmat.hpp"
#include "derange/linalg.hpp"

namespace derange {
namespace classify {

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

enum class Family { Sp4charTwo, OmegaPlus2m, other };

inline std::string family_name(Family f) {
  switch (f) {
    case Family::Sp4charTwo: return "Sp4charTwo";
    case Family::OmegaPlus2m: return "OmegaPlus2m";
    default: return "other";
  }
}

/// The socle data: T = Sp_{2m}(p^f) (family Sp4charTwo, m = 2) or
/// T = POmega+_{2m}(p^f) (family OmegaPlus2m), or any other simple group.
struct GroupSpec {
  Family family = Family::other;
  u64 p = 2;  // defining characteristic
  u32 f = 1;  // field exponent, q = p^f
  u32 m = 2;  // half the natural dimension
};

enum class GraphKind { duality, triality };

/// What G looks like modulo Inndiag(T): whether it contains a graph or
/// graph-field automorphism (the condition G not<= <Inndiag(T), phi>), which
/// kind of graph automorphism (triality exists only for OmegaPlus with
/// m = 4), and the power i of phi carried by the distinguished generator
/// (rho^i for Sp4, y*phi^i for OmegaPlus).
struct OuterSpec {
  bool contains_graph_or_graph_field = false;
  GraphKind graph_kind = GraphKind::duality;
  u32 phi_power = 1;
};

/// Order data of the coset element: x in Inndiag(T)*alpha with alpha in
/// <phi> of odd order e, q = q0^e, and x^e = su = us with s semisimple and
/// u unipotent.  u_order must be 1 or p; xe_order = lcm(s_order, u_order).
struct CosetParams {
  u32 e = 1;
  u64 s_order = 1;
  u64 u_order = 1;
  u64 xe_order = 1;
};

enum class Tri { true_, false_, undecided };

inline std::string tri_name(Tri t) {
  switch (t) {
    case Tri::true_: return "true";
    case Tri::false_: return "false";
    default: return "undecided";
  }
}

/// Decision with an ordered per-condition trace.  value is true_ exactly
/// when every traced condition holds (undecided only on size-cap overflow).
struct Verdict {
  Tri value = Tri::false_;
  std::vector<std::pair<std::string, bool>> conditions;
  std::string witness;

  bool is_true() const { return value == Tri::true_; }
  bool condition(const std::string& key) const {
    for (const auto& [k, v] : conditions)
      if (k == key) return v;
    throw std::invalid_argument("Verdict: no condition '" + key + "'");
  }
};

enum class Strictness { literal, singer };

// ---------------------------------------------------------------------------
// Validation (malformed data is rejected with std::invalid_argument;
// in-theorem failures are verdicts, never exceptions)
// ---------------------------------------------------------------------------

namespace detail {

inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  const Factorization fac = factorize(n);
  return fac.factors.size() == 1 && fac.factors[0].second == 1;
}

inline void validate_spec(const GroupSpec& g) {
  if (!is_prime_u64(g.p)) throw std::invalid_argument("GroupSpec: p not prime");
  if (g.f < 1) throw std::invalid_argument("GroupSpec: f must be >= 1");
  if (g.m < 1) throw std::invalid_argument("GroupSpec: m must be >= 1");
}

inline void validate_outer(const GroupSpec& g, const OuterSpec& o) {
  if (o.phi_power < 1)
    throw std::invalid_argument("OuterSpec: phi_power must be >= 1");
  if (o.graph_kind == GraphKind::triality &&
      !(g.family == Family::OmegaPlus2m && g.m == 4))
    throw std::invalid_argument(
        "OuterSpec: triality exists only for OmegaPlus2m with m = 4");
}

inline void validate_coset(const GroupSpec& g, const CosetParams& cp) {
  if (cp.e < 1 || cp.e % 2 == 0)
    throw std::invalid_argument("CosetParams: e must be odd");
  if (g.f % cp.e != 0)
    throw std::invalid_argument("CosetParams: e must divide f");
  if (cp.u_order != 1 && cp.u_order != g.p)
    throw std::invalid_argument(
        "CosetParams: u_order must be 1 or p (unipotent part of x^e)");
  if (cp.s_order < 1 || cp.s_order % g.p == 0)
    throw std::invalid_argument(
        "CosetParams: s_order must be coprime to p (semisimple part)");
  const u64 lcm = std::lcm(cp.s_order, cp.u_order);
  if (cp.xe_order != lcm)
    throw std::invalid_argument(
        "CosetParams: xe_order must equal lcm(s_order, u_order)");
}

/// p^(f*m/(e*k)) - checked; the exponent is integral for every prime k
/// dividing 2f with k not dividing e (k = 2 uses m even; odd k divides f/e).
inline u64 subfield_bound(u64 p, u32 f, u32 m, u32 e, u64 k) {
  const u64 num = u64(f) * m;
  const u64 den = u64(e) * k;
  DERANGE_CHECK(num % den == 0, "classify: fractional subfield exponent");
  u64 r = 1;
  for (u64 i = 0; i < num / den; ++i) r = checked_mul(r, p);
  return r;
}

inline bool is_power_of(u64 n, u64 b) {
  if (n == 0) return false;
  while (n % b == 0) n /= b;
  return n == 1;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Shared condition kernels
// ---------------------------------------------------------------------------

namespace detail {

/// The family shape condition: Sp_{2m}(q) with 2m = 4, p = 2 and T simple
/// (f >= 2), or POmega+_{2m}(q) with 2m = 2^l >= 8.
inline bool family_ok(const GroupSpec& g) {
  switch (g.family) {
    case Family::Sp4charTwo:
      return g.p == 2 && g.m == 2 && g.f >= 2;
    case Family::OmegaPlus2m:
      return g.m >= 4 && is_power_of(g.m, 2);
    default:
      return false;
  }
}

struct OrderTrace {
  bool a = false, b = false, c = false, d = false;
  bool undecided = false;  // size cap exceeded before a verdict was reached
  bool all() const { return a && b && c && d; }
};

/// Conditions (a)-(d) on (|s|, |u|, |x^e|) for x in Inndiag(T)*alpha with
/// alpha of odd order e and q = q0^e:
///   (a) u = 1 or |u| = p > 2
///   (b) |s| divides q0^m - 1 and |x^e| does not divide 2(q0^{m/2} + 1)
///   (c) |s| does not divide q0^{m/k} - 1 for every prime k | 2f with k∤e
///   (d) k divides |s| and k does not divide (q0^m - 1)/|s|, for every
///       prime k | e.
/// Exponents are evaluated as powers of p (f*m/(e*k) is always integral).
inline OrderTrace order_conditions(const GroupSpec& g, u32 e, u64 s_order,
                                   u64 u_order, u64 xe_order) {
  OrderTrace t;
  // Cap: all bounds below are at most q0^m = p^{f m / e}.
  {
    const u64 exp = u64(g.f) * g.m / e;
    if (exp > 62) {
      t.undecided = true;
      return t;
    }
  }
  const u64 q0m = subfield_bound(g.p, g.f, g.m, e, 1);

  t.a = u_order == 1 || (u_order == g.p && g.p > 2);

  const u64 half = checked_mul(2, subfield_bound(g.p, g.f, g.m, e, 2) + 1);
  t.b = (q0m - 1) % s_order == 0 && half % xe_order != 0;

  t.c = true;
  for (const auto& [k, mult] : factorize(2 * u64(g.f)).factors) {
    (void)mult;
    if (e % k == 0) continue;
    if ((subfield_bound(g.p, g.f, g.m, e, k) - 1) % s_order == 0) t.c = false;
  }

  t.d = true;
  for (const auto& [k, mult] : factorize(e).factors) {
    (void)mult;
    if (s_order % k != 0) {
      t.d = false;
      continue;
    }
    // (q0^m - 1)/|s| is integral only when (b)'s first clause holds; when it
    // does not, the overall verdict is already false and we record d = false.
    if ((q0m - 1) % s_order != 0 || ((q0m - 1) / s_order) % k == 0)
      t.d = false;
  }
  return t;
}

inline Verdict assemble(std::vector<std::pair<std::string, bool>> conds,
                        bool undecided, std::string success_witness) {
  Verdict v;
  v.conditions = std::move(conds);
  if (undecided) {
    v.value = Tri::undecided;
    v.witness = "size cap exceeded (q0^m above 2^62)";
    return v;
  }
  std::string failing;
  for (const auto& [k, val] : v.conditions)
    if (!val && failing.empty()) failing = k;
  if (failing.empty()) {
    v.value = Tri::true_;
    v.witness = std::move(success_witness);
  } else {
    v.value = Tri::false_;
    v.witness = "condition '" + failing + "' fails";
  }
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Existence
// ---------------------------------------------------------------------------

/// Does G contain a totally deranged element?  True exactly when the socle
/// family is in scope and G contains the required graph(-field)
/// automorphism.  Cross-checkable against enumerate_td_orders: existence
/// holds iff some odd e | f admits a nonempty sweep (e = 1 always suffices).
inline Verdict theorem1_exists(const GroupSpec& spec, const OuterSpec& outer) {
  detail::validate_spec(spec);
  detail::validate_outer(spec, outer);
  const bool fam = detail::family_ok(spec);
  const bool out = outer.contains_graph_or_graph_field;
  Verdict v = detail::assemble(
      {{"family", fam}, {"outer", out}}, false,
      family_name(spec.family) + " with graph(-field) automorphism");
  return v;
}

// ---------------------------------------------------------------------------
// Membership, order level
// ---------------------------------------------------------------------------

/// Is x totally deranged, given its coset order data?  Trace keys:
/// family, outer, a, b, c, d.
inline Verdict theorem2_params(const GroupSpec& spec, const OuterSpec& outer,
                               const CosetParams& cp) {
  detail::validate_spec(spec);
  detail::validate_outer(spec, outer);
  detail::validate_coset(spec, cp);
  const bool fam = detail::family_ok(spec);
  const bool out = outer.contains_graph_or_graph_field;
  const detail::OrderTrace t =
      detail::order_conditions(spec, cp.e, cp.s_order, cp.u_order, cp.xe_order);
  return detail::assemble({{"family", fam},
                           {"outer", out},
                           {"a", t.a},
                           {"b", t.b},
                           {"c", t.c},
                           {"d", t.d}},
                          t.undecided,
                          "x^e = su with |s| = " + std::to_string(cp.s_order) +
                              ", |u| = " + std::to_string(cp.u_order) +
                              ", |x^e| = " + std::to_string(cp.xe_order) +
                              ", e = " + std::to_string(cp.e));
}

// ---------------------------------------------------------------------------
// Membership, element level
// ---------------------------------------------------------------------------

namespace detail {

/// Matrix-group membership for the declared family; rejects non-members.
/// For OmegaPlus the test is taken in the isometry group Omega (Dickson
/// kernel in characteristic 2, spinor kernel with determinant one in odd
/// characteristic); the desk-scale element tests all live in even
/// characteristic where the center is trivial.
inline void require_member(const GroupSpec& g, const Mat& x) {
  const FieldCtx& F = field_cached(static_cast<u32>(g.p), g.f);
  const u32 n = 2 * g.m;
  DERANGE_REQUIRE(x.ctx == &F, "theorem2_element: wrong field of definition");
  DERANGE_REQUIRE(x.is_square() && x.rows == n,
                  "theorem2_element: wrong dimension");
  if (g.family == Family::Sp4charTwo) {
    DERANGE_REQUIRE(preserves_form(x, symplectic_form(F, n)),
                    "theorem2_element: not symplectic");
  } else if (g.family == Family::OmegaPlus2m) {
    const FormSpec qf = quadratic_plus_form(F, n);
    DERANGE_REQUIRE(preserves_form(x, qf),
                    "theorem2_element: quadratic form not preserved");
    if (g.p == 2) {
      DERANGE_REQUIRE(dickson_invariant(x, qf) == 0,
                      "theorem2_element: nonzero Dickson invariant");
    } else {
      DERANGE_REQUIRE(det(x) == 1,
                      "theorem2_element: determinant not one");
      DERANGE_REQUIRE(spinor_norm(x, qf) == 0,
                      "theorem2_element: nontrivial spinor norm");
    }
  } else {
    throw std::invalid_argument("theorem2_element: family out of scope");
  }
}

}  // namespace detail

/// Element-level membership: extract (|s|, |u|, |x^e|) from the Jordan
/// decomposition of the supplied matrix and decide.  For e = 1 the matrix
/// is x itself; for e > 1 the caller supplies the linear part of x^e (the
/// norm over the degree-e descent).  `singer` strictness additionally
/// requires the semisimple part to have Singer shape: every eigenvalue of
/// order exactly |s|, with |s| of full degree m over GF(q0).
inline Verdict theorem2_element(const GroupSpec& spec, const OuterSpec& outer,
                                const Mat& x, u32 e, Strictness strictness) {
  detail::validate_spec(spec);
  detail::validate_outer(spec, outer);
  if (e < 1 || e % 2 == 0 || spec.f % e != 0)
    throw std::invalid_argument("theorem2_element: e must be odd and divide f");
  detail::require_member(spec, x);

  const JordanParts jp = jordan_decomposition(x);
  const bool fam = detail::family_ok(spec);
  const bool out = outer.contains_graph_or_graph_field;
  const detail::OrderTrace t = detail::order_conditions(
      spec, e, jp.semi_order, jp.unip_order, jp.order);

  std::vector<std::pair<std::string, bool>> conds = {{"family", fam},
                                                     {"outer", out},
                                                     {"a", t.a},
                                                     {"b", t.b},
                                                     {"c", t.c},
                                                     {"d", t.d}};
  if (strictness == Strictness::singer) {
    // Singer shape of s: all eigenvalue orders equal |s| and the
    // multiplicative degree of |s| over q0 is exactly m.
    const EigenProfile ep = eigen_profile(jp.s);
    u64 total = 0;
    bool uniform = true;
    for (const auto& [ord, cnt] : ep.entries) {
      total += cnt;
      if (ord != jp.semi_order) uniform = false;
    }
    DERANGE_CHECK(total == 2 * u64(spec.m),
                  "theorem2_element: eigenvalue count mismatch");
    u64 q0 = 1;
    for (u32 i = 0; i < spec.f / e; ++i) q0 = checked_mul(q0, spec.p);
    const bool degree_m =
        jp.semi_order > 1 &&
        mult_order(q0 % jp.semi_order, jp.semi_order) == spec.m;
    conds.emplace_back("singer", uniform && degree_m);
  }

  return detail::assemble(
      std::move(conds), t.undecided,
      "|s| = " + std::to_string(jp.semi_order) +
          ", |u| = " + std::to_string(jp.unip_order) +
          ", |x^e| = " + std::to_string(jp.order) + ", e = " +
          std::to_string(e));
}

// ---------------------------------------------------------------------------
// Exhaustive order sweep
// ---------------------------------------------------------------------------

/// All (s_order, u_order, xe_order) triples passing theorem2_params for the
/// given spec/outer/e, in ascending order.  Requires q0^m <= 2^40.  Only
/// divisors of q0^m - 1 can satisfy (b), so the sweep ranges over them,
/// with u in {1} or {1, p} according to characteristic.
inline std::vector<std::array<u64, 3>> enumerate_td_orders(
    const GroupSpec& spec, const OuterSpec& outer, u32 e) {
  detail::validate_spec(spec);
  detail::validate_outer(spec, outer);
  if (e < 1 || e % 2 == 0 || spec.f % e != 0)
    throw std::invalid_argument(
        "enumerate_td_orders: e must be odd and divide f");
  u64 q0m = 1;
  for (u64 i = 0, exp = u64(spec.f) * spec.m / e; i < exp; ++i) {
    q0m = checked_mul(q0m, spec.p);
    DERANGE_REQUIRE(q0m <= (u64(1) << 40),
                    "enumerate_td_orders: q0^m above the 2^40 cap");
  }

  std::vector<std::array<u64, 3>> out;
  if (!detail::family_ok(spec) || !outer.contains_graph_or_graph_field)
    return out;

  std::vector<u64> svals = divisors(factorize(q0m - 1));
  std::vector<u64> uvals = {1};
  if (spec.p > 2) uvals.push_back(spec.p);
  for (u64 s : svals)
    for (u64 u : uvals) {
      CosetParams cp{e, s, u, checked_mul(s, u)};  // coprime, so lcm = s*u
      if (theorem2_params(spec, outer, cp).is_true())
        out.push_back({s, u, cp.xe_order});
    }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Invariable generation
// ---------------------------------------------------------------------------

/// Is T invariably generated by {x, x^a}?  Requires x in T (so e = 1,
/// q0 = q).  Trace keys: a (family), b (a outside <Inndiag(T), phi>),
/// c (order conditions on x = su).
inline Verdict theorem3_invgen(const GroupSpec& spec, const OuterSpec& a_data,
                               const CosetParams& cp) {
  detail::validate_spec(spec);
  detail::validate_outer(spec, a_data);
  if (cp.e != 1)
    throw std::invalid_argument("theorem3_invgen: requires x in T (e = 1)");
  detail::validate_coset(spec, cp);

  const bool fam = detail::family_ok(spec);
  const bool out = a_data.contains_graph_or_graph_field;
  // At e = 1 the order conditions coincide with (a)-(c) of the membership
  // test, with (d) vacuous; c below is their conjunction.
  const detail::OrderTrace t =
      detail::order_conditions(spec, 1, cp.s_order, cp.u_order, cp.xe_order);
  return detail::assemble(
      {{"a", fam}, {"b", out}, {"c", t.a && t.b && t.c}}, t.undecided,
      "T invariably generated by {x, x^a}, |x| = " +
          std::to_string(cp.xe_order));
}

// ---------------------------------------------------------------------------
// Unique maximal overgroup
// ---------------------------------------------------------------------------

/// Is x contained in a unique maximal subgroup of G (necessarily not
/// core-free)?  On top of the membership conditions this requires G to be
/// generated over T by the distinguished outer element with phi-power i
/// where i | f/e and f/(e*i) is a power of 2 (graph-field for Sp4, duality
/// for OmegaPlus) or 3 (triality, m = 4 only).  When true, the unique
/// maximal overgroup is G ∩ <Inndiag(T), phi>.
inline Verdict theorem4_unique(const GroupSpec& spec, const OuterSpec& outer,
                               const CosetParams& cp) {
  const Verdict pre = theorem2_params(spec, outer, cp);
  if (pre.value == Tri::undecided) {
    Verdict v;
    v.value = Tri::undecided;
    v.conditions = {{"pre", false}, {"generator", false}, {"index", false}};
    v.witness = pre.witness;
    return v;
  }

  const u32 i = outer.phi_power;
  const u32 fe = spec.f / cp.e;  // integral: validate_coset checked e | f
  const bool generator =
      outer.contains_graph_or_graph_field && i >= 1 && fe % i == 0;
  const u64 base =
      (spec.family == Family::OmegaPlus2m &&
       outer.graph_kind == GraphKind::triality)
          ? 3
          : 2;
  const bool index = generator && detail::is_power_of(fe / i, base);

  Verdict v = detail::assemble(
      {{"pre", pre.is_true()}, {"generator", generator}, {"index", index}},
      false, "unique maximal overgroup: G ∩ <Inndiag(T), phi>");
  return v;
}

}  // namespace classify
}  // namespace derange
