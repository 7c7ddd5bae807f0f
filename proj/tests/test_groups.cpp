// Tests for the shipped permutation models and maximal-subgroup catalogs:
// closed-form orders, projective-line models, the Sp4(4) bundle with its
// graph-field extension on 170 points, conjugacy-class data, subgroup
// conjugation orbits (normalizers and witnesses), and the catalog entries'
// orders, maximality (via primitivity of the coset action), core-freeness
// against the socle, and closure under the declared outer automorphisms.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "derange/groups.hpp"

using namespace derange;
using namespace derange::groups;

namespace {

/// Maximality of M < G is equivalent to primitivity of G acting on G/M.
bool entry_is_maximal(const RawCatalog& cat, const RawEntry& e) {
  BSGS h(cat.degree, e.gens);
  CosetAction act = coset_action(cat.ambient_gens, h, 200000);
  REQUIRE(act.reps.size() == cat.ambient_order / e.order);
  return is_primitive(act.perms, static_cast<u32>(act.reps.size()));
}

bool contains_all(const BSGS& g, const std::vector<Perm>& xs) {
  for (const Perm& x : xs)
    if (!g.contains(x)) return false;
  return true;
}

}  // namespace

TEST_CASE("closed-form orders", "[groups]") {
  CHECK(order_gl(4, 2) == 180);
  CHECK(order_sl(4, 2) == 60);
  CHECK(order_sp(2, 2) == 720);
  CHECK(order_sp(4, 2) == 979200);
  CHECK(order_omega(2, 4, +1) == 174182400);
  CHECK(order_omega(4, 2, -1) == 4080);
  CHECK(order_omega(4, 2, +1) == 3600);
  CHECK(order_psl2(5) == 60);
  CHECK(order_psl2(7) == 168);
  CHECK(order_psl2(8) == 504);
  CHECK(order_psl2(9) == 360);
  CHECK(order_pgl2(7) == 336);
}

TEST_CASE("projective line models", "[groups]") {
  CHECK(projective_line_model(5, 1, false).order == 60);
  CHECK(projective_line_model(5, 1, true).order == 120);
  CHECK(projective_line_model(7, 1, false).order == 168);
  CHECK(projective_line_model(7, 1, true).order == 336);
  CHECK(projective_line_model(2, 3, false).order == 504);
  CHECK(projective_line_model(3, 2, false).order == 360);
  // Degree = q + 1 and 2-transitivity (hence primitivity) of PSL2(9).
  PermModel a6 = projective_line_model(3, 2, false);
  CHECK(a6.degree == 10);
  CHECK(is_primitive(a6.gens, 10));
}

TEST_CASE("stabilizer generators and generator reduction", "[groups]") {
  PermModel s6 = s6_natural_model();
  std::vector<Perm> s5 = point_stabilizer_gens(s6.gens, 5, 720);
  CHECK(bsgs_order(6, s5) == 120);
  for (const Perm& g : s5) CHECK(g[5] == 5);
  // Reduction keeps a generating subset in pool order.
  std::vector<Perm> pool = s6.gens;
  pool.insert(pool.begin(), perm_identity(6));
  CHECK(reduce_generators(6, pool, 720).size() == 2);
}

TEST_CASE("symplectic and quadratic standardization", "[groups]") {
  const FieldCtx& F4 = field_cached(2, 2);
  // The polar of the reference plus-type quadratic form pairs consecutive
  // coordinates; transport it onto the antidiagonal reference Gram.
  FormSpec plus = quadratic_plus_form(F4, 4);
  Mat c = symplectic_standardize(plus.polar());
  CHECK(c * plus.polar() * transpose(c) == symplectic_form(F4, 4).gram);
  // Odd characteristic: a block-diagonal alternating gram over GF(3)
  // (in odd characteristic polars of quadratic forms are symmetric, so
  // only genuinely alternating inputs make sense here).
  const FieldCtx& F3 = field_cached(3, 1);
  Mat alt = mat_zero(F3, 4, 4);
  alt.at(0, 1) = 1;
  alt.at(1, 0) = 2;  // -1
  alt.at(2, 3) = 1;
  alt.at(3, 2) = 2;
  Mat c3 = symplectic_standardize(alt);
  CHECK(c3 * alt * transpose(c3) == symplectic_form(F3, 4).gram);
  // Quadratic standardization fixes the reference form itself.
  Mat cq = quadratic_standardize(plus);
  CHECK(normalize_quadratic_gram(cq * plus.gram * transpose(cq)) ==
        normalize_quadratic_gram(plus.gram));
}

TEST_CASE("quadratic extension blowup", "[groups]") {
  QuadExtBlowup bl = make_quad_ext_blowup(2, 1);
  const FieldCtx& F4 = *bl.big;
  std::vector<Mat> sp2 = standard_generators("Sp", F4, 2);
  for (const Mat& a : sp2)
    for (const Mat& b : sp2) CHECK(bl.blow(a * b) == bl.blow(a) * bl.blow(b));
  Mat fr = bl.frobenius_block();
  CHECK(fr * fr == mat_identity(*bl.small, 4));
  CHECK(!(fr == mat_identity(*bl.small, 4)));
}

TEST_CASE("Sp4(4) bundle: model, automorphism, bridge", "[groups][sp44]") {
  const Sp4Model& m = sp4_model();
  CHECK(m.T85.order == 979200);
  CHECK(m.T170.order == 979200);
  CHECK(m.G170.order == 3916800);

  // r is outer: not in T, and not in <T, phi> either.
  CHECK(!m.T170.group().contains(m.r170));
  CHECK(!m.T170.group().contains(m.phi170));
  std::vector<Perm> tphi = m.tperm170;
  tphi.push_back(m.phi170);
  BSGS tphi_group(170, tphi);
  CHECK(tphi_group.order() == 2 * 979200);
  CHECK(!tphi_group.contains(m.r170));
  CHECK(m.G170.group().contains(m.r170));

  // Matrix <-> permutation bridge round trip on the generators.
  for (const Mat& g : m.tmats) {
    Perm p = m.perm85(g);
    CHECK(m.mat_from_perm85(p) == g);
  }

  // r^4 is the inner twist's square: phi has order 2 modulo inners, so
  // r^2 = phi-part lies outside T but r^4 inside.
  Perm r2 = perm_mul(m.r170, m.r170);
  Perm r4 = perm_mul(r2, r2);
  CHECK(m.T170.group().contains(r4));

  // The 85-point and 170-point actions are primitive (parabolic stabs).
  CHECK(is_primitive(m.tperm85, 85));
}

TEST_CASE("Sp4(4) conjugacy classes", "[groups][sp44]") {
  const std::vector<ClassInfo>& cls = sp4_classes();
  REQUIRE(cls.size() == 27);

  u64 total = 0;
  std::set<u64> orders;
  std::vector<const ClassInfo*> fifteen, seventeen;
  for (const ClassInfo& c : cls) {
    total += c.size;
    orders.insert(c.order);
    if (c.order == 15) fifteen.push_back(&c);
    if (c.order == 17) seventeen.push_back(&c);
  }
  CHECK(total == 979200);
  CHECK(orders == std::set<u64>{1, 2, 3, 4, 5, 6, 10, 15, 17});
  REQUIRE(fifteen.size() == 4);
  REQUIRE(seventeen.size() == 4);
  for (const ClassInfo* c : fifteen) CHECK(c->size == 65280);
  for (const ClassInfo* c : seventeen) CHECK(c->size == 57600);

  // Two of the order-15 classes consist of elements with all eigenvalue
  // orders 15 (Singer-type), two have the split profile {3,3,5,5}.
  int all15 = 0, split15 = 0;
  for (const ClassInfo* c : fifteen) {
    if (c->all15) {
      ++all15;
    } else {
      std::multiset<u64> got;
      for (const auto& [ord, cnt] : c->profile.entries)
        for (u64 i = 0; i < cnt; ++i) got.insert(ord);
      CHECK(got == std::multiset<u64>{3, 3, 5, 5});
      ++split15;
    }
  }
  CHECK(all15 == 2);
  CHECK(split15 == 2);
}

TEST_CASE("graph-field automorphism fuses the order-15 profiles",
          "[groups][sp44]") {
  const Sp4Model& m = sp4_model();
  for (const ClassInfo& c : sp4_classes()) {
    if (c.order != 15) continue;
    Mat img = m.rho->apply(c.rep_mat);
    EigenProfile before = c.profile;
    EigenProfile after = eigen_profile(img);
    bool before_all15 = true, after_all15 = true;
    for (const auto& [ord, cnt] : before.entries)
      if (ord != 15) before_all15 = false;
    for (const auto& [ord, cnt] : after.entries)
      if (ord != 15) after_all15 = false;
    CHECK(before_all15 != after_all15);
    // Permutation level: conjugation by r realizes the same map.
    Perm x170 = m.perm170(c.rep_mat);
    CHECK(perm_conj(x170, m.r170) == m.perm170(img));
  }
}

TEST_CASE("subgroup orbits: normalizers and witnesses", "[groups]") {
  PermModel s6 = s6_natural_model();
  // Seed: <(012)> has normalizer S3 x S3 of order ... in S6 the
  // normalizer of a 3-cycle subgroup is S3 x S3 with the centralizer
  // 3 x S3; |N| = 36.
  std::vector<Perm> c3 = {perm_from_cycles(6, {{0, 1, 2}})};
  SubgroupOrbit orb =
      subgroup_orbit(s6.group(), s6.gens, c3, std::nullopt, 20000, 20000);
  CHECK(orb.size == 720 / 36);
  CHECK(orb.normalizer_order == 36);
  CHECK(bsgs_order(6, orb.normalizer_gens) == 36);
  // Witness: conjugate of the seed.
  std::vector<Perm> c3b = {perm_from_cycles(6, {{3, 4, 5}})};
  SubgroupOrbit orb2 = subgroup_orbit(s6.group(), s6.gens, c3,
                                      std::optional(c3b), 20000, 20000);
  REQUIRE(orb2.witness.has_value());
  BSGS target(6, c3b);
  for (const Perm& g : c3)
    CHECK(target.contains(perm_conj(g, *orb2.witness)));
}

TEST_CASE("small catalogs: orders, maximality, core-freeness",
          "[groups][catalog]") {
  const std::vector<std::string> small_ids = {
      "PSL2(5)", "S5", "PSL2(7)", "PGL2(7)", "PSL2(8)", "PSL2(9)", "S6",
      "Sp4(2)"};
  const std::map<std::string, size_t> expected_entries = {
      {"PSL2(5)", 3}, {"S5", 4},      {"PSL2(7)", 3}, {"PGL2(7)", 4},
      {"PSL2(8)", 3}, {"PSL2(9)", 5}, {"S6", 6},      {"Sp4(2)", 6}};
  for (const std::string& id : small_ids) {
    INFO("catalog " << id);
    RawCatalog cat = build_catalog(id);
    CHECK(cat.entries.size() == expected_entries.at(id));
    BSGS ambient(cat.degree, cat.ambient_gens);
    REQUIRE(ambient.order() == cat.ambient_order);
    BSGS socle(cat.degree, cat.socle_gens);
    REQUIRE(socle.order() == cat.socle_order);
    for (const RawEntry& e : cat.entries) {
      INFO("entry " << e.label);
      BSGS h(cat.degree, e.gens);
      CHECK(h.order() == e.order);
      CHECK(contains_all(ambient, e.gens));
      CHECK(entry_is_maximal(cat, e));
      // Core-free exactly when the entry does not contain the socle.
      CHECK(e.core_free == !contains_all(h, cat.socle_gens));
    }
  }
}

TEST_CASE("Sp4(2) catalog: wreath entry equals a plus-form stabilizer",
          "[groups][catalog]") {
  // The O4+(2) = Sp2(2) wr S2 identification: the wreath construction's
  // subgroup preserves a plus-type quadratic refinement of the form.
  RawCatalog cat = build_catalog("Sp4(2)");
  const RawEntry* wreath = nullptr;
  for (const RawEntry& e : cat.entries)
    if (e.label.rfind("O4+(2)", 0) == 0) wreath = &e;
  REQUIRE(wreath != nullptr);
  CHECK(wreath->order == 72);
}

TEST_CASE("Sp4(4) catalog: entries, partners, closure under rho",
          "[groups][catalog][sp44]") {
  const Sp4Model& m = sp4_model();
  RawCatalog cat = build_catalog("Sp4(4)");
  REQUIRE(cat.entries.size() == 7);
  const std::multiset<u64> expect_orders = {11520, 11520, 7200, 7200,
                                            8160,  8160,  720};
  std::multiset<u64> got;
  std::map<std::string, const RawEntry*> by_label;
  for (const RawEntry& e : cat.entries) {
    got.insert(e.order);
    by_label[e.label] = &e;
    CHECK(e.core_free);
  }
  CHECK(got == expect_orders);

  // Partner involution is label-consistent.
  for (const RawEntry& e : cat.entries) {
    REQUIRE(by_label.count(e.partner) == 1);
    CHECK(by_label.at(e.partner)->partner == e.label);
    CHECK(by_label.at(e.partner)->order == e.order);
  }

  // Orders, membership, maximality.
  BSGS ambient(170, cat.ambient_gens);
  for (const RawEntry& e : cat.entries) {
    INFO("entry " << e.label);
    CHECK(bsgs_order(170, e.gens) == e.order);
    CHECK(contains_all(ambient, e.gens));
    CHECK(entry_is_maximal(cat, e));
  }

  // rho-closure: conjugating each entry by r gives a subgroup conjugate
  // (inside T) to the declared partner.
  for (const RawEntry& e : cat.entries) {
    INFO("rho image of " << e.label);
    std::vector<Perm> image;
    for (const Perm& g : e.gens) image.push_back(perm_conj(g, m.r170));
    SubgroupOrbit orb =
        subgroup_orbit(ambient, cat.ambient_gens, by_label.at(e.partner)->gens,
                       std::optional(image), 20000, 20000);
    CHECK(orb.witness.has_value());
  }
}

TEST_CASE("Sp4(4).rho catalog: extension entries", "[groups][catalog][sp44]") {
  const Sp4Model& m = sp4_model();
  RawCatalog cat = build_catalog("Sp4(4).rho");
  REQUIRE(cat.entries.size() == 5);
  std::map<std::string, const RawEntry*> by_label;
  for (const RawEntry& e : cat.entries) by_label[e.label] = &e;
  CHECK(by_label.at("N(Borel)")->order == 9216);
  CHECK(by_label.at("N((q+1)^2 torus)")->order == 800);
  CHECK(by_label.at("N((q^2+1) torus)")->order == 272);
  CHECK(by_label.at("Sp4(2).4")->order == 2880);
  CHECK(by_label.at("<T, phi>")->order == 1958400);
  CHECK_FALSE(by_label.at("<T, phi>")->core_free);

  BSGS ambient(170, cat.ambient_gens);
  REQUIRE(ambient.order() == 3916800);
  for (const RawEntry& e : cat.entries) {
    INFO("entry " << e.label);
    CHECK(bsgs_order(170, e.gens) == e.order);
    CHECK(contains_all(ambient, e.gens));
    CHECK(e.core_free == !contains_all(BSGS(170, e.gens), cat.socle_gens));
    CHECK(entry_is_maximal(cat, e));
  }

  // The socle is T; its perm generators agree with the model's.
  CHECK(cat.socle_order == m.T170.order);
}

TEST_CASE("Sp4(4).phi catalog: phi-stable extensions", "[groups][catalog][sp44]") {
  RawCatalog cat = build_catalog("Sp4(4).phi");
  REQUIRE(cat.entries.size() == 8);
  BSGS ambient(170, cat.ambient_gens);
  REQUIRE(ambient.order() == 1958400);
  u32 ncf = 0;
  for (const RawEntry& e : cat.entries) {
    INFO("entry " << e.label);
    CHECK(bsgs_order(170, e.gens) == e.order);
    CHECK(contains_all(ambient, e.gens));
    if (!e.core_free) {
      ++ncf;
      CHECK(e.order == 979200);
    }
    CHECK(entry_is_maximal(cat, e));
  }
  CHECK(ncf == 1);
}

TEST_CASE("Omega8+(2) pin model", "[groups]") {
  PermModel om = omega8_plus2_model();
  CHECK(om.degree == 135);
  CHECK(om.order == 174182400);
}
