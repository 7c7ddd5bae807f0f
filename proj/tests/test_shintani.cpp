// Exhaustive desk-scale checks of Shintani descent for semilinear cosets
// GL_n(p^f)·phi^j: the twisted norm, the order identity, the class
// bijection, compatibility with powering the endomorphism, the
// subfield-membership correspondence, and the parabolic correspondence.
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "derange/shintani.hpp"

using namespace derange;
using namespace derange::shintani;

namespace {

Mat scalar_mat(const FieldCtx& F, u32 n, u32 code) {
  Mat m = mat_identity(F, n);
  for (u32 i = 0; i < n; ++i) m.at(i, i) = code;
  return m;
}

}  // namespace

TEST_CASE("semilinear composition, identity, inverse, associativity",
          "[shintani]") {
  const FieldCtx& F4 = field_cached(2, 2);
  const std::vector<Mat> gl24 = shintani::detail::all_invertible(F4, 2);
  REQUIRE(gl24.size() == 180);

  // Associativity of (A, j)(B, j') = (A·phi^j(B), j+j' mod f), sampled.
  std::mt19937_64 rng(20240817);
  for (int trial = 0; trial < 200; ++trial) {
    const SemilinearElem a{gl24[rng() % gl24.size()], u32(rng() % 2)};
    const SemilinearElem b{gl24[rng() % gl24.size()], u32(rng() % 2)};
    const SemilinearElem c{gl24[rng() % gl24.size()], u32(rng() % 2)};
    REQUIRE(sl_eq(sl_mul(sl_mul(a, b), c), sl_mul(a, sl_mul(b, c))));
  }

  // Identity and inverses.
  const SemilinearElem id = sl_identity(F4, 2);
  for (int trial = 0; trial < 50; ++trial) {
    const SemilinearElem a{gl24[rng() % gl24.size()], u32(rng() % 2)};
    REQUIRE(sl_eq(sl_mul(a, id), a));
    REQUIRE(sl_eq(sl_mul(id, a), a));
    REQUIRE(sl_is_identity(sl_mul(a, sl_inverse(a))));
    REQUIRE(sl_is_identity(sl_mul(sl_inverse(a), a)));
  }

  // The bare Frobenius coset representative has order 2 = f.
  REQUIRE(sl_order(SemilinearElem{mat_identity(F4, 2), 1}) == 2);

  // Mixed contexts are rejected.
  const FieldCtx& F2 = field_cached(2, 1);
  REQUIRE_THROWS_AS(
      sl_mul(SemilinearElem{mat_identity(F4, 2), 1},
             SemilinearElem{mat_identity(F2, 2), 0}),
      invalid_argument_error);
}

TEST_CASE("twisted power: scalar, identity, and generator pins", "[shintani]") {
  const FieldCtx& F4 = field_cached(2, 2);

  // n = 1: the norm of the multiplicative generator lambda over GF(4) with
  // j = 1, e = 2 is lambda · lambda^2 = lambda^3 = 1.
  const u32 lambda = F4.gen().code;
  REQUIRE(F4.mul(lambda, F4.mul(lambda, lambda)) == 1);
  Mat x1 = mat_zero(F4, 1, 1);
  x1.at(0, 0) = lambda;
  REQUIRE(twisted_power(SemilinearElem{x1, 1}, 2) == mat_identity(F4, 1));

  // Identity matrix, both twists.
  REQUIRE(twisted_power(SemilinearElem{mat_identity(F4, 2), 1}, 2) ==
          mat_identity(F4, 2));
  REQUIRE(twisted_power(SemilinearElem{mat_identity(F4, 2), 2}, 1) ==
          mat_identity(F4, 2));

  // Scalar case diag(lambda, lambda) reduces to n = 1 entrywise.
  REQUIRE(twisted_power(SemilinearElem{scalar_mat(F4, 2, lambda), 1}, 2) ==
          mat_identity(F4, 2));

  // Malformed coset data: twist 0 and a mismatched e are rejected.
  REQUIRE_THROWS_AS(twisted_power(SemilinearElem{mat_identity(F4, 2), 0}, 2),
                    invalid_argument_error);
  REQUIRE_THROWS_AS(twisted_power(SemilinearElem{mat_identity(F4, 2), 1}, 1),
                    invalid_argument_error);
}

TEST_CASE("descent image: pins and the order identity", "[shintani]") {
  const FieldCtx& F4 = field_cached(2, 2);
  const FieldCtx& F2 = field_cached(2, 1);

  // g = (I, 1) in GL_2(4): image I in GL_2(2), |g| = 2 = 2·1.
  {
    const ShintaniImage img = shintani_image({mat_identity(F4, 2), 1});
    REQUIRE(img.order_ratio == 2);
    REQUIRE(&mat_ctx(img.rcf) == &F2);
    REQUIRE(img.rcf == mat_identity(F2, 2));
  }

  // n = 1 generator example: image is the identity of GL_1(2), |g| = 2.
  {
    Mat x1 = mat_zero(F4, 1, 1);
    x1.at(0, 0) = F4.gen().code;
    const SemilinearElem g{x1, 1};
    REQUIRE(sl_order(g) == 2);
    const ShintaniImage img = shintani_image(g);
    REQUIRE(img.rcf == mat_identity(F2, 1));
  }

  // An order-3 matrix with GF(2) entries gives |g| = 6 and an image of
  // order 3 in GL_2(2).
  {
    Mat x = mat_zero(F4, 2, 2);
    x.at(0, 1) = 1;
    x.at(1, 0) = 1;
    x.at(1, 1) = 1;
    REQUIRE(mat_order(x) == 3);
    const SemilinearElem g{x, 1};
    REQUIRE(sl_order(g) == 6);
    const ShintaniImage img = shintani_image(g);
    REQUIRE(mat_order(img.rcf) == 3);
  }

  // Order identity |g| = e·|image| over the full coset, both cosets of
  // GL_2(4) and the scalar coset of GL_1(4).
  REQUIRE(order_identity_check(2, 2, 2, 1));
  REQUIRE(order_identity_check(1, 2, 2, 1));
}

TEST_CASE("class bijection: GL_2(4)phi <-> GL_2(2)", "[shintani]") {
  const ClassBijection cb = class_bijection_check(2, 2, 2, 1);
  REQUIRE(cb.coset_classes == 3);
  REQUIRE(cb.subfield_classes == 3);
  REQUIRE(cb.matched);
  std::vector<u64> sizes = cb.orbit_sizes;
  std::sort(sizes.begin(), sizes.end());
  REQUIRE(sizes == std::vector<u64>{30, 60, 90});
}

TEST_CASE("class bijection: scalar coset GL_1(4)phi <-> GL_1(2)",
          "[shintani]") {
  const ClassBijection cb = class_bijection_check(1, 2, 2, 1);
  REQUIRE(cb.coset_classes == 1);
  REQUIRE(cb.subfield_classes == 1);
  REQUIRE(cb.matched);
  REQUIRE(cb.orbit_sizes == std::vector<u64>{3});
}

TEST_CASE("class bijection: GL_2(9)phi <-> GL_2(3)", "[shintani]") {
  const ClassBijection cb = class_bijection_check(2, 3, 2, 1);
  REQUIRE(cb.coset_classes == 8);
  REQUIRE(cb.subfield_classes == 8);
  REQUIRE(cb.matched);
  u64 total = 0;
  for (u64 s : cb.orbit_sizes) total += s;
  REQUIRE(total == 5760);
}

TEST_CASE("class bijection: degenerate trivial-twist coset", "[shintani]") {
  // twist j = f: the coset is the group itself under plain conjugation and
  // descent is class inversion, a bijection onto the classes of GL_2(4).
  const ClassBijection cb = class_bijection_check(2, 2, 2, 2);
  REQUIRE(cb.coset_classes == 15);
  REQUIRE(cb.subfield_classes == 15);
  REQUIRE(cb.matched);
  u64 total = 0;
  for (u64 s : cb.orbit_sizes) total += s;
  REQUIRE(total == 180);
}

TEST_CASE("power compatibility of descent", "[shintani]") {
  REQUIRE(power_lemma_check(2, 2, 2, 1, 1));  // d = 1 is the base map
  REQUIRE(power_lemma_check(2, 2, 2, 1, 2));  // exhaustive over 180 elements
  REQUIRE(power_lemma_check(2, 2, 2, 1, 3));
  REQUIRE(power_lemma_check(1, 2, 2, 1, 3));
  REQUIRE(power_lemma_check(2, 3, 2, 1, 2));  // exhaustive over 5760 elements
}

TEST_CASE("subfield correspondence: power branch k | f/j", "[shintani]") {
  // (n=2, p=2, f=2, j=1, k=2): left side conjugates (x, phi) into
  // <GL_2(2), phi>, right side squares all six elements of GL_2(2).
  REQUIRE(subfield_correspondence_check(2, 2, 2, 1, 2));
  REQUIRE(subfield_correspondence_check(1, 2, 2, 1, 2));
}

TEST_CASE("subfield correspondence: subfield branch k ∤ f/j", "[shintani]") {
  // (n=2, p=2, f=2, j=2, k=2): e = 1, so the image-side condition is
  // membership in a GL_2(4)-conjugate of GL_2(2).
  REQUIRE(subfield_correspondence_check(2, 2, 2, 2, 2));
}

TEST_CASE("subfield correspondence: malformed parameters", "[shintani]") {
  REQUIRE_THROWS_AS(subfield_correspondence_check(2, 2, 2, 1, 4),
                    invalid_argument_error);  // k not prime
  REQUIRE_THROWS_AS(subfield_correspondence_check(2, 2, 2, 1, 3),
                    invalid_argument_error);  // k does not divide f
  REQUIRE_THROWS_AS(class_bijection_check(2, 2, 2, 0),
                    invalid_argument_error);  // twist 0
}

TEST_CASE("parabolic correspondence: invariant subspaces descend",
          "[shintani]") {
  REQUIRE(parabolic_correspondence_check(2, 2, 2, 1));
  REQUIRE(parabolic_correspondence_check(2, 3, 2, 1));
}
