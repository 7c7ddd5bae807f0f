// Tests for the total-derangement decision procedures: existence, the
// order-level and element-level membership tests with their per-condition
// traces, the exhaustive order sweeps (frozen expected values), invariable
// generation, the unique-maximal-overgroup test, input validation, and the
// cross-procedure implications that the statements guarantee.

#include <array>
#include <set>
#include <stdexcept>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "derange/classify.hpp"
#include "derange/groups.hpp"

using namespace derange;
using namespace derange::classify;

namespace {

const GroupSpec sp44{Family::Sp4charTwo, 2, 2, 2};
const GroupSpec omega8_2{Family::OmegaPlus2m, 2, 1, 4};
const GroupSpec omega8_8{Family::OmegaPlus2m, 2, 3, 4};

OuterSpec graph_outer(GraphKind kind = GraphKind::duality, u32 i = 1) {
  return OuterSpec{true, kind, i};
}

OuterSpec no_outer() { return OuterSpec{false, GraphKind::duality, 1}; }

CosetParams params(u32 e, u64 s, u64 u) {
  return CosetParams{e, s, u, std::lcm(s, u)};
}

/// Block-diagonal join of two square matrices over the same field.
Mat block_diag(const Mat& a, const Mat& b) {
  const FieldCtx& F = mat_ctx(a);
  Mat out = mat_zero(F, a.rows + b.rows, a.cols + b.cols);
  for (u32 i = 0; i < a.rows; ++i)
    for (u32 j = 0; j < a.cols; ++j) out.at(i, j) = a.at(i, j);
  for (u32 i = 0; i < b.rows; ++i)
    for (u32 j = 0; j < b.cols; ++j)
      out.at(a.rows + i, a.cols + j) = b.at(i, j);
  return out;
}

}  // namespace

TEST_CASE("existence of totally deranged elements", "[classify]") {
  CHECK(theorem1_exists(sp44, graph_outer()).is_true());
  CHECK_FALSE(theorem1_exists(sp44, no_outer()).is_true());
  CHECK(theorem1_exists(omega8_2, graph_outer()).is_true());
  CHECK(theorem1_exists(omega8_2, graph_outer(GraphKind::triality)).is_true());

  // 2m = 12 is not a power of two.
  GroupSpec omega12{Family::OmegaPlus2m, 2, 1, 6};
  Verdict v12 = theorem1_exists(omega12, graph_outer());
  CHECK_FALSE(v12.is_true());
  CHECK_FALSE(v12.condition("family"));

  // Out-of-scope family, Sp4 in odd characteristic, Sp4(2) (socle not
  // simple): all excluded through the family clause.
  CHECK_FALSE(theorem1_exists({Family::other, 2, 2, 2}, graph_outer()).is_true());
  CHECK_FALSE(
      theorem1_exists({Family::Sp4charTwo, 3, 2, 2}, graph_outer()).is_true());
  CHECK_FALSE(
      theorem1_exists({Family::Sp4charTwo, 2, 1, 2}, graph_outer()).is_true());
}

TEST_CASE("order-level membership: pinned verdicts", "[classify]") {
  // Sp4(4), the full-torus-order element: the motivating positive case.
  CHECK(theorem2_params(sp44, graph_outer(), params(1, 15, 1)).is_true());

  // Sp4(4), |s| = |x| = 5: fails (b) because 5 divides 2(q0 + 1) = 10.
  Verdict v5 = theorem2_params(sp44, graph_outer(), params(1, 5, 1));
  CHECK_FALSE(v5.is_true());
  CHECK(v5.condition("a"));
  CHECK_FALSE(v5.condition("b"));

  // Sp4(4), |s| = 17 (not dividing q0^m - 1 = 15): fails (b).
  Verdict v17 = theorem2_params(sp44, graph_outer(), params(1, 17, 1));
  CHECK_FALSE(v17.is_true());
  CHECK_FALSE(v17.condition("b"));

  // |s| = 1 (unipotent or trivial x): fails (c), since 1 divides q0^{m/k}-1.
  Verdict v1 = theorem2_params(sp44, graph_outer(), params(1, 1, 1));
  CHECK_FALSE(v1.is_true());
  CHECK_FALSE(v1.condition("c"));

  // Without the graph-field automorphism the outer clause fails.
  Verdict vno = theorem2_params(sp44, no_outer(), params(1, 15, 1));
  CHECK_FALSE(vno.is_true());
  CHECK_FALSE(vno.condition("outer"));
  CHECK(vno.condition("a"));
  CHECK(vno.condition("b"));

  // POmega8+(3), |s| = 5, |u| = 3, |x| = 15, graph automorphism: in odd
  // characteristic a nontrivial unipotent part is allowed by (a).
  GroupSpec om83{Family::OmegaPlus2m, 3, 1, 4};
  CHECK(theorem2_params(om83, graph_outer(), params(1, 5, 3)).is_true());

  // Same data in characteristic 2 is malformed (u must be 1 or p).
  CHECK_THROWS_AS(theorem2_params(omega8_2, graph_outer(), params(1, 5, 3)),
                  std::invalid_argument);
}

TEST_CASE("order-level membership: descent case e = 3", "[classify]") {
  // POmega8+(8) with e = 3, q0 = 2: condition (d) with k = 3 forces
  // 3 | |s| and 3 coprime to (q0^m - 1)/|s|.
  Verdict v15 = theorem2_params(omega8_8, graph_outer(), params(3, 15, 1));
  CHECK(v15.is_true());
  CHECK(v15.condition("d"));

  Verdict v5 = theorem2_params(omega8_8, graph_outer(), params(3, 5, 1));
  CHECK_FALSE(v5.is_true());
  CHECK_FALSE(v5.condition("d"));  // 3 does not divide |s| = 5

  Verdict v3 = theorem2_params(omega8_8, graph_outer(), params(3, 3, 1));
  CHECK_FALSE(v3.is_true());
  CHECK_FALSE(v3.condition("c"));  // 3 divides q0^{m/2} - 1 = 3
}

TEST_CASE("frozen order sweeps", "[classify]") {
  using Triple = std::array<u64, 3>;
  const std::vector<Triple> expected = {{15, 1, 15}};
  CHECK(enumerate_td_orders(sp44, graph_outer(), 1) == expected);
  CHECK(enumerate_td_orders(omega8_2, graph_outer(), 1) == expected);
  CHECK(enumerate_td_orders(omega8_8, graph_outer(), 3) == expected);

  // Family or outer failure empties the sweep.
  CHECK(enumerate_td_orders(sp44, no_outer(), 1).empty());
  CHECK(enumerate_td_orders({Family::OmegaPlus2m, 2, 1, 6}, graph_outer(), 1)
            .empty());

  // POmega8+(3): both u = 1 and u = 3 variants of each surviving s occur.
  GroupSpec om83{Family::OmegaPlus2m, 3, 1, 4};
  auto sweep = enumerate_td_orders(om83, graph_outer(), 1);
  CHECK(!sweep.empty());
  std::set<u64> useen;
  for (const Triple& t : sweep) {
    useen.insert(t[1]);
    CHECK(t[2] == std::lcm(t[0], t[1]));
  }
  CHECK(useen == std::set<u64>{1, 3});
}

TEST_CASE("malformed parameters are rejected", "[classify]") {
  // e even / e not dividing f.
  CHECK_THROWS_AS(theorem2_params(sp44, graph_outer(), params(2, 15, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      theorem2_params({Family::Sp4charTwo, 2, 4, 2}, graph_outer(),
                      params(3, 15, 1)),
      std::invalid_argument);
  // u_order outside {1, p}.
  CHECK_THROWS_AS(theorem2_params(sp44, graph_outer(), params(1, 15, 4)),
                  std::invalid_argument);
  // s_order divisible by p (not a semisimple order).
  CHECK_THROWS_AS(theorem2_params(sp44, graph_outer(), params(1, 6, 1)),
                  std::invalid_argument);
  // xe_order inconsistent with lcm(s, u).
  CHECK_THROWS_AS(
      theorem2_params(sp44, graph_outer(), CosetParams{1, 15, 1, 30}),
      std::invalid_argument);
  // p not prime.
  CHECK_THROWS_AS(
      theorem2_params({Family::Sp4charTwo, 4, 2, 2}, graph_outer(),
                      params(1, 15, 1)),
      std::invalid_argument);
  // Triality outside OmegaPlus with m = 4.
  CHECK_THROWS_AS(
      theorem2_params(sp44, graph_outer(GraphKind::triality), params(1, 15, 1)),
      std::invalid_argument);
}

TEST_CASE("element-level membership on Sp4(4) classes", "[classify][element]") {
  const auto& classes = groups::sp4_classes();
  REQUIRE(classes.size() == 27);

  for (const auto& c : classes) {
    INFO("class of order " << c.order << " size " << c.size);
    Verdict lit =
        theorem2_element(sp44, graph_outer(), c.rep_mat, 1, Strictness::literal);
    // Exactly the order-15 classes are totally deranged.
    CHECK(lit.is_true() == (c.order == 15));

    Verdict sing =
        theorem2_element(sp44, graph_outer(), c.rep_mat, 1, Strictness::singer);
    // Monotone: singer adds a condition.
    if (sing.is_true()) CHECK(lit.is_true());
    // Singer mode accepts exactly the all-15 eigenvalue classes.
    CHECK(sing.is_true() == (c.order == 15 && c.all15));
  }
}

TEST_CASE("element-level: membership failures are rejected", "[classify]") {
  const FieldCtx& F4 = field_cached(2, 2);
  // A non-symplectic invertible matrix: diag(g, 1, 1, 1).
  Mat bad = mat_identity(F4, 4);
  bad.at(0, 0) = F4.gen().code;
  CHECK_THROWS(
      theorem2_element(sp44, graph_outer(), bad, 1, Strictness::literal));
  // Wrong dimension.
  CHECK_THROWS(theorem2_element(sp44, graph_outer(), mat_identity(F4, 6), 1,
                                Strictness::literal));
  // Wrong field of definition.
  const FieldCtx& F2 = field_cached(2, 1);
  CHECK_THROWS(theorem2_element(sp44, graph_outer(), mat_identity(F2, 4), 1,
                                Strictness::literal));
}

TEST_CASE("element-level on Omega8+(2): the two order-15 shapes",
          "[classify][element]") {
  const FieldCtx& F2 = field_cached(2, 1);

  // Singer shape: a semisimple element of order 15 = q^m - 1 with all
  // eigenvalues of order 15 (degree 4 over GF(2)).
  Mat singer = singer_semisimple(ClassicalFamily::OmegaPlus, F2, 4, 15);
  Verdict slit =
      theorem2_element(omega8_2, graph_outer(), singer, 1, Strictness::literal);
  Verdict ssing =
      theorem2_element(omega8_2, graph_outer(), singer, 1, Strictness::singer);
  CHECK(slit.is_true());
  CHECK(ssing.is_true());

  // Split shape: an order-15 element preserving a pair of complementary
  // minus-type 4-spaces (eigenvalue orders {5,5,5,5,3,3,3,3}), built from
  // order-5 and order-3 elements of two Omega4-(2) blocks and standardized
  // onto the reference plus form.
  Mat u = mat_zero(F2, 4, 4);
  u.at(0, 1) = 1;  // x0 x1
  u.at(2, 2) = 1;  // x2^2 + x2 x3 + x3^2
  u.at(2, 3) = 1;
  u.at(3, 3) = 1;
  FormSpec minus4{FormSpec::Kind::quadratic, u};
  REQUIRE(quadratic_type(minus4) == '-');

  // Exhaust Omega4-(2) (order 60) by closure over Eichler generators.
  std::vector<Mat> gens;
  std::vector<std::vector<u32>> vecs = enumerate_vectors(F2, 4, false);
  for (const auto& a : vecs) {
    if (minus4.q(a) != 0) continue;
    for (const auto& b : vecs)
      if (minus4.b(a, b) == 0) {
        Mat e = eichler(minus4, a, b);
        if (!(e == mat_identity(F2, 4))) gens.push_back(e);
      }
  }
  std::vector<Mat> elems = {mat_identity(F2, 4)};
  auto contains = [&](const Mat& g) {
    for (const Mat& h : elems)
      if (h == g) return true;
    return false;
  };
  for (size_t i = 0; i < elems.size(); ++i)
    for (const Mat& g : gens) {
      Mat h = elems[i] * g;
      if (!contains(h)) elems.push_back(h);
    }
  REQUIRE(elems.size() == 60);

  Mat o5 = mat_identity(F2, 4), o3 = mat_identity(F2, 4);
  bool got5 = false, got3 = false;
  for (const Mat& g : elems) {
    const u64 o = mat_order(g);
    if (o == 5 && !got5) o5 = g, got5 = true;
    if (o == 3 && !got3) o3 = g, got3 = true;
  }
  REQUIRE((got5 && got3));

  // minus perp minus is plus type in dimension 8.
  FormSpec sum8{FormSpec::Kind::quadratic, block_diag(u, u)};
  REQUIRE(quadratic_type(sum8) == '+');
  Mat c = groups::quadratic_standardize(sum8);
  Mat split = c * block_diag(o5, o3) * mat_inv(c);
  REQUIRE(mat_order(split) == 15);
  REQUIRE(preserves_form(split, quadratic_plus_form(F2, 8)));

  Verdict plit =
      theorem2_element(omega8_2, graph_outer(), split, 1, Strictness::literal);
  Verdict psing =
      theorem2_element(omega8_2, graph_outer(), split, 1, Strictness::singer);
  CHECK(plit.is_true());        // the order data alone passes
  CHECK_FALSE(psing.is_true()); // the eigenvalue shape does not
  CHECK_FALSE(psing.condition("singer"));
}

TEST_CASE("invariable generation verdicts", "[classify]") {
  CHECK(theorem3_invgen(sp44, graph_outer(), params(1, 15, 1)).is_true());

  Verdict v17 = theorem3_invgen(sp44, graph_outer(), params(1, 17, 1));
  CHECK_FALSE(v17.is_true());
  CHECK_FALSE(v17.condition("c"));  // 17 does not divide q^m - 1 = 15

  Verdict vid = theorem3_invgen(sp44, graph_outer(), params(1, 1, 1));
  CHECK_FALSE(vid.is_true());

  Verdict vin = theorem3_invgen(sp44, no_outer(), params(1, 15, 1));
  CHECK_FALSE(vin.is_true());
  CHECK_FALSE(vin.condition("b"));

  // x must lie in T.
  CHECK_THROWS_AS(theorem3_invgen(omega8_8, graph_outer(), params(3, 15, 1)),
                  std::invalid_argument);
}

TEST_CASE("unique maximal overgroup verdicts", "[classify]") {
  // Sp4(4), G = <T, rho>: f/(e*i) = 2, a power of two.
  Verdict v = theorem4_unique(sp44, graph_outer(GraphKind::duality, 1),
                              params(1, 15, 1));
  CHECK(v.is_true());
  CHECK(v.witness.find("<Inndiag(T), phi>") != std::string::npos);

  // Sp4(64): f/(e*i) = 6 is not a power of two (|s| = q^m - 1 = 4095
  // passes the membership test, isolating the index clause).
  GroupSpec sp64{Family::Sp4charTwo, 2, 6, 2};
  Verdict v64 = theorem4_unique(sp64, graph_outer(GraphKind::duality, 1),
                                params(1, 4095, 1));
  CHECK_FALSE(v64.is_true());
  CHECK(v64.condition("pre"));
  CHECK_FALSE(v64.condition("index"));

  // Sp4(2^4) with i = 2: f/(e*i) = 2 works.
  GroupSpec sp16{Family::Sp4charTwo, 2, 4, 2};
  Verdict v16 = theorem4_unique(sp16, graph_outer(GraphKind::duality, 2),
                                params(1, 255, 1));
  CHECK(v16.is_true());

  // POmega8+(8) duality: f/(e*i) = 3 fails; triality with the same data
  // succeeds (power of three).
  Verdict vdual = theorem4_unique(omega8_8, graph_outer(GraphKind::duality, 1),
                                  params(1, 4095, 1));
  CHECK_FALSE(vdual.is_true());
  CHECK(vdual.condition("pre"));
  CHECK_FALSE(vdual.condition("index"));
  Verdict vtri = theorem4_unique(omega8_8, graph_outer(GraphKind::triality, 1),
                                 params(1, 4095, 1));
  CHECK(vtri.is_true());

  // i must divide f/e.
  Verdict vbad = theorem4_unique(sp44, graph_outer(GraphKind::duality, 3),
                                 params(1, 15, 1));
  CHECK_FALSE(vbad.is_true());
  CHECK_FALSE(vbad.condition("generator"));
}

TEST_CASE("existence matches sweep nonemptiness", "[classify][property]") {
  // Over a grid of specs and outer flags with q0^m <= 2^20: existence holds
  // iff some odd e | f yields a nonempty sweep (e = 1 always suffices).
  std::vector<GroupSpec> specs;
  for (u32 fexp = 1; fexp <= 5; ++fexp)
    specs.push_back({Family::Sp4charTwo, 2, fexp, 2});
  for (u64 p : {u64(2), u64(3)})
    for (u32 fexp = 1; fexp <= (p == 2 ? 3u : 2u); ++fexp) {
      specs.push_back({Family::OmegaPlus2m, p, fexp, 4});
      specs.push_back({Family::OmegaPlus2m, p, fexp, 6});  // out of theorem
    }
  specs.push_back({Family::other, 2, 2, 2});

  for (const GroupSpec& spec : specs)
    for (bool outer : {false, true}) {
      OuterSpec o{outer, GraphKind::duality, 1};
      bool any = false;
      for (u32 e = 1; e <= spec.f; e += 2)
        if (spec.f % e == 0 && !enumerate_td_orders(spec, o, e).empty())
          any = true;
      INFO("family " << family_name(spec.family) << " p " << spec.p << " f "
                     << spec.f << " m " << spec.m << " outer " << outer);
      CHECK(theorem1_exists(spec, o).is_true() == any);
      // And when existence holds, e = 1 already witnesses it.
      if (theorem1_exists(spec, o).is_true())
        CHECK(!enumerate_td_orders(spec, o, 1).empty());
    }
}

TEST_CASE("invariable generation implies total derangement",
          "[classify][property]") {
  // For every divisor triple at e = 1, a true invariable-generation verdict
  // forces a true membership verdict with the same data.
  for (const GroupSpec& spec :
       {sp44, omega8_2, GroupSpec{Family::OmegaPlus2m, 3, 1, 4}}) {
    u64 qm = 1;
    for (u32 i = 0; i < spec.f * spec.m; ++i) qm *= spec.p;
    for (u64 s : divisors(factorize(qm - 1)))
      for (u64 u : std::vector<u64>{1, spec.p}) {
        // u = p is always a well-formed unipotent order; condition (a)
        // decides whether it is admissible (never in characteristic 2).
        CosetParams cp = params(1, s, u);
        Verdict t3 = theorem3_invgen(spec, graph_outer(), cp);
        Verdict t2 = theorem2_params(spec, graph_outer(), cp);
        INFO("spec " << family_name(spec.family) << " q^m " << qm << " s "
                     << s << " u " << u);
        if (t3.is_true()) CHECK(t2.is_true());
        // At e = 1 the two tests coincide exactly.
        CHECK(t3.is_true() == t2.is_true());
      }
  }
}

TEST_CASE("unique overgroup implies total derangement", "[classify][property]") {
  for (u32 fexp : {2u, 3u, 4u, 6u}) {
    GroupSpec spec{Family::Sp4charTwo, 2, fexp, 2};
    for (u32 e = 1; e <= fexp; e += 2) {
      if (fexp % e != 0) continue;
      for (u32 i = 1; i <= fexp; ++i) {
        if ((fexp / e) % i != 0) continue;
        for (const auto& t : enumerate_td_orders(spec, graph_outer(), e)) {
          OuterSpec o{true, GraphKind::duality, i};
          CosetParams cp{e, t[0], t[1], t[2]};
          Verdict t4 = theorem4_unique(spec, o, cp);
          if (t4.is_true()) CHECK(theorem2_params(spec, o, cp).is_true());
          CHECK(t4.condition("pre"));
        }
      }
    }
  }
}
