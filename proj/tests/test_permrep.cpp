// Tests for the permutation layer: composition conventions, stabilizer
// chains, element enumeration, canonical coset representatives, conjugacy
// classes with witnesses, subgroup meeting, subspace actions, and
// primitivity.

#include <algorithm>
#include <map>
#include <set>

#include <catch2/catch_amalgamated.hpp>

#include "derange/permrep.hpp"

using namespace derange;

namespace {

// Permutation of degree n from a list of cycles.
Perm pc(u32 n, const std::vector<std::vector<u32>>& cycles) {
  Perm p = perm_identity(n);
  for (const auto& c : cycles) {
    for (size_t i = 0; i < c.size(); ++i) {
      p[c[i]] = c[(i + 1) % c.size()];
    }
  }
  return p;
}

std::vector<Perm> s4_gens() {
  return {pc(4, {{0, 1}}), pc(4, {{0, 1, 2, 3}})};
}

std::vector<Perm> v4_gens() {
  return {pc(4, {{0, 1}, {2, 3}}), pc(4, {{0, 2}, {1, 3}})};
}

std::vector<Perm> all_elements(const BSGS& g) {
  std::vector<Perm> out;
  g.for_each_element([&](const Perm& p) { out.push_back(p); });
  return out;
}

}  // namespace

TEST_CASE("permutation arithmetic and conventions", "[permrep]") {
  // (p * q)(i) = q(p(i)): apply p first.
  const Perm p = pc(4, {{0, 1}});
  const Perm q = pc(4, {{1, 2}});
  const Perm pq = perm_mul(p, q);
  CHECK(pq[0] == 2);  // 0 ->p 1 ->q 2
  CHECK(pq[1] == 0);
  CHECK(pq[2] == 1);
  CHECK(pq[3] == 3);

  CHECK(perm_is_identity(perm_mul(p, perm_inv(p))));
  CHECK(perm_is_identity(perm_mul(perm_inv(p), p)));

  // x^g = g^{-1} x g agrees with explicit products.
  const Perm x = pc(5, {{0, 1, 2}});
  const Perm g = pc(5, {{0, 3}});
  CHECK(perm_conj(x, g) == perm_mul(perm_mul(perm_inv(g), x), g));
  CHECK(perm_conj(x, g) == pc(5, {{3, 1, 2}}));  // labels move through g

  CHECK(perm_order(pc(6, {{0, 1, 2, 3, 4}})) == 5);
  CHECK(perm_order(pc(6, {{0, 1}, {2, 3, 4}})) == 6);
  CHECK(perm_order(perm_identity(6)) == 1);
  CHECK(perm_pow(pc(6, {{0, 1, 2, 3, 4}}), 5) == perm_identity(6));
  CHECK(perm_pow(pc(6, {{0, 1, 2, 3, 4}}), 7) ==
        perm_pow(pc(6, {{0, 1, 2, 3, 4}}), 2));

  CHECK(fixed_points(pc(5, {{0, 1, 2}})) == std::vector<u32>{3, 4});
  CHECK(perm_cycles_string(pc(5, {{0, 2, 1}, {3, 4}})) == "(0 2 1)(3 4)");
  CHECK(perm_cycles_string(perm_identity(3)) == "()");

  CHECK_THROWS_AS(perm_validate(Perm{0, 0, 1}), invalid_argument_error);
  CHECK_THROWS_AS(perm_validate(Perm{0, 3}), invalid_argument_error);
}

TEST_CASE("stabilizer chain orders and membership", "[permrep]") {
  CHECK(bsgs_order(4, s4_gens()) == 24);
  CHECK(bsgs_order(4, v4_gens()) == 4);
  CHECK(bsgs_order(4, {pc(4, {{0, 1, 2}}), pc(4, {{1, 2, 3}})}) == 12);  // A4
  CHECK(bsgs_order(6, {pc(6, {{0, 1}}), pc(6, {{0, 1, 2, 3, 4, 5}})}) == 720);
  CHECK(bsgs_order(4, {pc(4, {{0, 1, 2, 3}}), pc(4, {{1, 3}})}) == 8);  // D8
  CHECK(bsgs_order(5, {pc(5, {{0, 1, 2, 3, 4}})}) == 5);
  CHECK(bsgs_order(3, {}) == 1);  // trivial group

  // PSL(2,7) as Moebius maps on the projective line over F7 (point 7 = inf):
  // z+1, 2z (2 is a square mod 7), -1/z.
  const Perm a = pc(8, {{0, 1, 2, 3, 4, 5, 6}});
  const Perm b = pc(8, {{1, 2, 4}, {3, 6, 5}});
  const Perm c = pc(8, {{0, 7}, {1, 6}, {2, 3}, {4, 5}});
  const BSGS psl27(8, {a, b, c});
  CHECK(psl27.order() == 168);
  CHECK(is_primitive({a, b, c}, 8));

  const BSGS s4(4, s4_gens());
  const BSGS a4(4, {pc(4, {{0, 1, 2}}), pc(4, {{1, 2, 3}})});
  CHECK(s4.contains(pc(4, {{0, 3, 1}})));
  CHECK(s4.contains(perm_identity(4)));
  CHECK_FALSE(s4.contains(perm_identity(5)));         // wrong degree
  CHECK(a4.contains(pc(4, {{0, 1}, {2, 3}})));        // even
  CHECK_FALSE(a4.contains(pc(4, {{0, 1}})));          // odd
  CHECK_FALSE(a4.contains(pc(4, {{0, 1, 2, 3}})));    // odd

  // Order is invariant under shuffling, inverting, and padding generators.
  std::vector<Perm> gens = {a, b, c};
  std::vector<Perm> shuffled = {c, perm_inv(a), b, perm_mul(a, b),
                                perm_identity(8)};
  CHECK(bsgs_order(8, shuffled) == 168);
  std::reverse(gens.begin(), gens.end());
  CHECK(bsgs_order(8, gens) == 168);
}

TEST_CASE("chain completion with skipped base points", "[permrep]") {
  // Regression: the action of the six elementary transvections of SL4(2)
  // on the 15 nonzero vectors. Sifted Schreier generators here regularly
  // skip base points, so residues must be recorded as strong generators
  // at every intermediate level, not only at the escape level; an earlier
  // version kept the level groups un-nested and reported 17280.
  const std::vector<Perm> gens = {
      {0, 1, 2, 3, 4, 5, 6, 11, 12, 13, 14, 7, 8, 9, 10},
      {0, 1, 2, 11, 12, 13, 14, 7, 8, 9, 10, 3, 4, 5, 6},
      {0, 1, 2, 5, 6, 3, 4, 7, 8, 9, 10, 13, 14, 11, 12},
      {0, 5, 6, 3, 4, 1, 2, 7, 8, 13, 14, 11, 12, 9, 10},
      {0, 2, 1, 3, 4, 6, 5, 7, 8, 10, 9, 11, 12, 14, 13},
      {2, 1, 0, 3, 6, 5, 4, 7, 10, 9, 8, 11, 14, 13, 12},
  };
  const BSGS g(15, gens);
  CHECK(g.order() == 20160);

  // Exhaustive cross-check: the chain accepts exactly the closure.
  std::set<Perm> closure(gens.begin(), gens.end());
  closure.insert(perm_identity(15));
  std::vector<Perm> frontier(closure.begin(), closure.end());
  while (!frontier.empty()) {
    std::vector<Perm> next;
    for (const Perm& x : frontier) {
      for (const Perm& s : gens) {
        Perm y = perm_mul(x, s);
        if (closure.insert(y).second) next.push_back(std::move(y));
      }
    }
    frontier = std::move(next);
  }
  REQUIRE(closure.size() == 20160);
  u32 misses = 0;
  for (const Perm& x : closure) {
    if (!g.contains(x)) ++misses;
  }
  CHECK(misses == 0);
  // Element enumeration agrees with the closure as a set.
  std::set<Perm> enumerated;
  g.for_each_element([&](const Perm& p) { enumerated.insert(p); });
  CHECK(enumerated == closure);
}

TEST_CASE("element enumeration is exact and duplicate-free", "[permrep]") {
  const BSGS s4(4, s4_gens());
  auto elems = all_elements(s4);
  REQUIRE(elems.size() == 24);
  std::set<Perm> distinct(elems.begin(), elems.end());
  CHECK(distinct.size() == 24);
  for (const Perm& e : elems) CHECK(s4.contains(e));

  // Matches a plain closure computation.
  std::set<Perm> closure{perm_identity(4)};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const Perm& e : std::set<Perm>(closure)) {
      for (const Perm& g : s4_gens()) {
        if (closure.insert(perm_mul(e, g)).second) grew = true;
      }
    }
  }
  CHECK(closure == distinct);

  const BSGS trivial(5, {});
  auto te = all_elements(trivial);
  REQUIRE(te.size() == 1);
  CHECK(perm_is_identity(te[0]));
}

TEST_CASE("base image keys identify group elements", "[permrep]") {
  const BSGS s4(4, s4_gens());
  std::set<std::string> keys;
  s4.for_each_element(
      [&](const Perm& p) { keys.insert(s4.base_image_key(p)); });
  CHECK(keys.size() == 24);

  // Degree above 255 uses the two-byte packing.
  Perm swap300 = perm_identity(300);
  for (u32 i = 0; i < 150; ++i) std::swap(swap300[i], swap300[i + 150]);
  const BSGS c2(300, {swap300});
  CHECK(c2.order() == 2);
  CHECK(c2.base_image_key(swap300).size() ==
        2 * c2.nontrivial_base().size());
  CHECK(c2.base_image_key(swap300) != c2.base_image_key(perm_identity(300)));
}

TEST_CASE("canonical coset representatives are true lex minima", "[permrep]") {
  const BSGS s4(4, s4_gens());
  const auto s4_elems = all_elements(s4);

  for (const auto& hgens :
       {v4_gens(), std::vector<Perm>{pc(4, {{0, 1}}), pc(4, {{1, 2}})}}) {
    const BSGS h(4, hgens);
    const auto h_elems = all_elements(h);
    for (const Perm& g : s4_elems) {
      const Perm canon = h.canonical_coset_rep(g);
      // Brute-force lex minimum of {h*g : h in H} under image-tuple order.
      Perm best = perm_mul(h_elems[0], g);
      for (const Perm& he : h_elems) {
        best = std::min(best, perm_mul(he, g));
      }
      CHECK(canon == best);
      // Invariance across the coset.
      for (const Perm& he : h_elems) {
        CHECK(h.canonical_coset_rep(perm_mul(he, g)) == canon);
      }
      // The representative stays in the coset: canon * g^{-1} in H.
      CHECK(h.contains(perm_mul(canon, perm_inv(g))));
    }
  }
}

TEST_CASE("coset actions", "[permrep]") {
  const BSGS v4(4, v4_gens());
  const auto act = coset_action(s4_gens(), v4);
  REQUIRE(act.reps.size() == 6);
  CHECK(bsgs_order(6, act.perms) == 6);  // S4 / V4 = S3

  // Point stabilizer: the action on 4 cosets is the natural one.
  const BSGS s3(4, {pc(4, {{0, 1}}), pc(4, {{1, 2}})});
  const auto nat = coset_action(s4_gens(), s3);
  REQUIRE(nat.reps.size() == 4);
  CHECK(bsgs_order(4, nat.perms) == 24);
  CHECK(is_primitive(nat.perms, 4));

  // C4 is core-free in S4: the action on 6 cosets is faithful.
  const BSGS c4(4, {pc(4, {{0, 1, 2, 3}})});
  const auto six = coset_action(s4_gens(), c4);
  REQUIRE(six.reps.size() == 6);
  CHECK(bsgs_order(6, six.perms) == 24);

  CHECK_THROWS_AS(coset_action(s4_gens(), c4, 3), undecided_error);
}

TEST_CASE("conjugacy classes with witnesses", "[permrep]") {
  const BSGS s4(4, s4_gens());

  const ConjugacyClass transpositions(s4, s4_gens(), pc(4, {{0, 1}}));
  CHECK(transpositions.size() == 6);
  const ConjugacyClass double22(s4, s4_gens(), pc(4, {{0, 1}, {2, 3}}));
  CHECK(double22.size() == 3);
  const ConjugacyClass threes(s4, s4_gens(), pc(4, {{0, 1, 2}}));
  CHECK(threes.size() == 8);
  const ConjugacyClass fours(s4, s4_gens(), pc(4, {{0, 1, 2, 3}}));
  CHECK(fours.size() == 6);
  const ConjugacyClass ident(s4, s4_gens(), perm_identity(4));
  CHECK(ident.size() == 1);
  CHECK(1 + 6 + 3 + 8 + 6 == 24);

  // Witness reconstruction: x0^(witness(i)) is the member at index i.
  for (u32 i = 0; i < transpositions.size(); ++i) {
    const Perm w = transpositions.witness(i);
    CHECK(s4.contains(w));
    const Perm m = perm_conj(transpositions.representative(), w);
    CHECK(m == transpositions.member(i));
    CHECK(transpositions.contains(m));
    REQUIRE(transpositions.index_of(m).has_value());
    CHECK(*transpositions.index_of(m) == i);
  }

  CHECK_FALSE(transpositions.contains(pc(4, {{0, 1, 2}})));
  CHECK_FALSE(transpositions.contains(pc(4, {{0, 1}, {2, 3}})));

  CHECK_THROWS_AS(ConjugacyClass(s4, s4_gens(), pc(4, {{0, 1}}), 3),
                  undecided_error);
  // Representative outside the group is rejected.
  const BSGS a4(4, {pc(4, {{0, 1, 2}}), pc(4, {{1, 2, 3}})});
  CHECK_THROWS_AS(
      ConjugacyClass(a4, {pc(4, {{0, 1, 2}}), pc(4, {{1, 2, 3}})},
                     pc(4, {{0, 1}})),
      invalid_argument_error);
}

TEST_CASE("exhaustive class partition of S6", "[permrep]") {
  const std::vector<Perm> gens = {pc(6, {{0, 1}}),
                                  pc(6, {{0, 1, 2, 3, 4, 5}})};
  const BSGS s6(6, gens);
  REQUIRE(s6.order() == 720);
  auto elems = all_elements(s6);
  REQUIRE(elems.size() == 720);

  std::vector<bool> claimed(elems.size(), false);
  std::vector<u64> sizes;
  for (size_t i = 0; i < elems.size(); ++i) {
    if (claimed[i]) continue;
    const ConjugacyClass cls(s6, gens, elems[i]);
    u64 found = 0;
    for (size_t j = 0; j < elems.size(); ++j) {
      if (cls.contains(elems[j])) {
        CHECK_FALSE(claimed[j]);
        claimed[j] = true;
        ++found;
        CHECK(perm_order(elems[j]) == perm_order(elems[i]));
      }
    }
    CHECK(found == cls.size());  // class is inside the group, exactly
    sizes.push_back(cls.size());
  }
  CHECK(std::count(claimed.begin(), claimed.end(), true) == 720);
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<u64>{1, 15, 15, 40, 40, 45, 90, 90, 120, 120,
                                  144});
}

TEST_CASE("class meets subgroup", "[permrep]") {
  const BSGS s4(4, s4_gens());
  const BSGS v4(4, v4_gens());
  const BSGS c4(4, {pc(4, {{0, 1, 2, 3}})});

  const ConjugacyClass double22(s4, s4_gens(), pc(4, {{0, 1}, {2, 3}}));
  auto hit = class_meets_subgroup(double22, v4);
  REQUIRE(hit.has_value());
  CHECK(v4.contains(*hit));
  CHECK(double22.contains(*hit));
  CHECK(class_subgroup_hits(double22, v4) == 3);

  const ConjugacyClass transpositions(s4, s4_gens(), pc(4, {{0, 1}}));
  CHECK_FALSE(class_meets_subgroup(transpositions, v4).has_value());
  CHECK(class_subgroup_hits(transpositions, v4) == 0);

  const ConjugacyClass fours(s4, s4_gens(), pc(4, {{0, 1, 2, 3}}));
  auto hit4 = class_meets_subgroup(fours, c4);
  REQUIRE(hit4.has_value());
  CHECK(perm_order(*hit4) == 4);
  CHECK(class_subgroup_hits(fours, c4) == 2);  // both 4-cycles in C4
}

TEST_CASE("action on subspaces", "[permrep]") {
  // GL(2,2) on the 3 lines of F2^2 is S3.
  const FieldCtx& F2 = field_cached(2, 1);
  Mat t = mat_identity(F2, 2);
  t.at(0, 1) = 1;
  Mat w = mat_zero(F2, 2, 2);
  w.at(0, 1) = 1;
  w.at(1, 0) = 1;
  Mat seed = mat_zero(F2, 1, 2);
  seed.at(0, 0) = 1;
  const auto lines3 = action_on_subspaces({t, w}, {seed});
  REQUIRE(lines3.points.size() == 3);
  CHECK(bsgs_order(3, lines3.perms) == 6);
  CHECK(is_primitive(lines3.perms, 3));

  // SL(2,4) on the 5 lines of F4^2 is A5 (order 60), 2-transitive.
  const FieldCtx& F4 = field_cached(2, 2);
  const u32 g = F4.gen().code;
  auto transvection = [&](bool upper, u32 lam) {
    Mat m = mat_identity(F4, 2);
    if (upper) {
      m.at(0, 1) = lam;
    } else {
      m.at(1, 0) = lam;
    }
    return m;
  };
  std::vector<Mat> sl24 = {transvection(true, 1), transvection(true, g),
                           transvection(false, 1), transvection(false, g)};
  Mat seed4 = mat_zero(F4, 1, 2);
  seed4.at(0, 0) = 1;
  const auto lines5 = action_on_subspaces(sl24, {seed4});
  REQUIRE(lines5.points.size() == 5);
  CHECK(bsgs_order(5, lines5.perms) == 60);
  CHECK(is_primitive(lines5.perms, 5));

  // Point labels are sorted by their canonical text keys.
  for (size_t i = 0; i + 1 < lines5.points.size(); ++i) {
    CHECK(subspace_key(lines5.points[i]) < subspace_key(lines5.points[i + 1]));
  }
  // Labelling is independent of generator order.
  std::vector<Mat> shuffled = {sl24[2], sl24[0], sl24[3], sl24[1]};
  const auto again = action_on_subspaces(shuffled, {seed4});
  REQUIRE(again.points.size() == 5);
  for (size_t i = 0; i < 5; ++i) CHECK(again.points[i] == lines5.points[i]);

  CHECK_THROWS_AS(action_on_subspaces(sl24, {seed4}, 2), undecided_error);
  CHECK_THROWS_AS(action_on_subspaces(sl24, {mat_zero(F4, 1, 2)}),
                  invalid_argument_error);
}

TEST_CASE("primitivity", "[permrep]") {
  CHECK(is_primitive(s4_gens(), 4));
  CHECK(is_primitive({pc(4, {{0, 1, 2}}), pc(4, {{1, 2, 3}})}, 4));  // A4
  CHECK(is_primitive({pc(5, {{0, 1, 2, 3, 4}})}, 5));  // prime degree cycle
  CHECK(is_primitive({pc(3, {{0, 1}}), pc(3, {{1, 2}})}, 3));

  CHECK_FALSE(is_primitive(v4_gens(), 4));  // every pair is a block
  CHECK_FALSE(is_primitive({pc(4, {{0, 1, 2, 3}})}, 4));  // blocks {0,2},{1,3}
  CHECK_FALSE(
      is_primitive({pc(4, {{0, 1, 2, 3}}), pc(4, {{1, 3}})}, 4));  // D8
  CHECK_FALSE(is_primitive({pc(4, {{0, 1}})}, 4));  // intransitive

  CHECK(minimal_block_size({pc(4, {{0, 1, 2, 3}})}, 4, 0, 2) == 2);
  CHECK(minimal_block_size({pc(4, {{0, 1, 2, 3}})}, 4, 0, 1) == 4);
}

TEST_CASE("generates", "[permrep]") {
  CHECK(generates(4, s4_gens(), 24));
  CHECK_FALSE(generates(4, s4_gens(), 12));
  CHECK(generates(4, {pc(4, {{0, 1, 2}}), pc(4, {{1, 2, 3}})}, 12));
  CHECK_FALSE(generates(4, {pc(4, {{0, 1, 2}})}, 12));
}
