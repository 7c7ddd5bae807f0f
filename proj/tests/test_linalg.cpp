// Unit tests for exact linear algebra: elimination, characteristic
// polynomials, rational canonical forms, eigenvalue-order profiles, and
// invariant-subspace dimension sets.

#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "derange/linalg.hpp"

using namespace derange;

namespace {

Mat random_mat(const FieldCtx& F, u32 n, std::mt19937& rng) {
  Mat m = mat_zero(F, n, n);
  std::uniform_int_distribution<u32> dist(0, u32(F.q() - 1));
  for (auto& v : m.a) v = dist(rng);
  return m;
}

Mat random_invertible(const FieldCtx& F, u32 n, std::mt19937& rng) {
  while (true) {
    Mat m = random_mat(F, n, rng);
    if (det(m) != 0) return m;
  }
}

}  // namespace

TEST_CASE("matrix arithmetic and inverse", "[linalg]") {
  const FieldCtx& F = field_cached(3, 2);
  std::mt19937 rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const u32 n = 1 + rng() % 5;
    const Mat A = random_invertible(F, n, rng);
    const Mat B = random_mat(F, n, rng);
    CHECK(A * mat_inv(A) == mat_identity(F, n));
    CHECK(mat_inv(A) * A == mat_identity(F, n));
    CHECK(det(A * B) == F.mul(det(A), det(B)));
    CHECK(transpose(transpose(B)) == B);
    CHECK(transpose(A * B) == transpose(B) * transpose(A));
    CHECK((A + B) - B == A);
    // Power agrees with naive iteration.
    Mat acc = mat_identity(F, n);
    for (u64 e = 0; e <= 6; ++e) {
      CHECK(mat_pow(A, e) == acc);
      acc = acc * A;
    }
  }
  const Mat sing = mat_zero(F, 2, 2);
  CHECK_THROWS_AS(mat_inv(sing), invalid_argument_error);
  CHECK(det(sing) == 0);
}

TEST_CASE("rref, rank, and nullspace", "[linalg]") {
  const FieldCtx& F = field_cached(2, 2);
  std::mt19937 rng(202);
  std::uniform_int_distribution<u32> dist(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const u32 r = 1 + rng() % 6, c = 1 + rng() % 6;
    Mat m = mat_zero(F, r, c);
    for (auto& v : m.a) v = dist(rng);
    const Rref red = rref(m);
    CHECK(rref(red.m).m == red.m);                   // idempotent
    CHECK(mat_rank(m) == mat_rank(transpose(m)));    // row rank = col rank
    const Mat ns = nullspace(m);
    CHECK(ns.rows == r - red.rank);
    for (u32 i = 0; i < ns.rows; ++i) {
      std::vector<u32> v(r);
      for (u32 j = 0; j < r; ++j) v[j] = ns.at(i, j);
      const auto img = rowvec_mul(v, m);
      for (u32 x : img) CHECK(x == 0);
    }
    // Every row of m lies in the row space of its RREF.
    for (u32 i = 0; i < r; ++i) {
      std::vector<u32> v(c);
      for (u32 j = 0; j < c; ++j) v[j] = m.at(i, j);
      CHECK(rowspace_contains(red, v));
    }
  }
}

TEST_CASE("characteristic polynomial", "[linalg]") {
  const FieldCtx& F2 = field_cached(2, 1);
  const FieldCtx& F4 = field_cached(2, 2);

  // char_poly(companion(f)) = f for random monic f.
  std::mt19937 rng(303);
  for (int trial = 0; trial < 200; ++trial) {
    const FieldCtx& F = (trial % 2) ? F2 : F4;
    std::vector<u32> cc(2 + rng() % 6);
    for (auto& v : cc) v = u32(rng() % F.q());
    cc.back() = 1;
    const Poly f = poly_from_codes(F, cc);
    CHECK(char_poly(companion(f)) == f);
  }

  // Similarity invariance and Cayley-Hamilton on random matrices.
  for (int trial = 0; trial < 200; ++trial) {
    const FieldCtx& F = (trial % 2) ? F4 : field_cached(3, 1);
    const u32 n = 2 + rng() % 4;
    const Mat A = random_mat(F, n, rng);
    const Mat P = random_invertible(F, n, rng);
    const Poly cp = char_poly(A);
    CHECK(cp.degree() == int(n));
    CHECK(cp.is_monic());
    CHECK(char_poly(P * A * mat_inv(P)) == cp);
    CHECK(mat_poly_eval(cp, A) == mat_zero(F, n, n));  // Cayley-Hamilton
    // Constant term is (-1)^n det(A).
    const u32 expect = (n % 2 == 0) ? det(A) : F.neg(det(A));
    CHECK(cp.coeff(0) == expect);
  }

  // Identity: (t-1)^n.
  Poly tm1 = poly_from_codes(F4, {F4.neg(1), 1});
  CHECK(char_poly(mat_identity(F4, 3)) == tm1 * tm1 * tm1);
}

TEST_CASE("rational canonical form: pinned shapes", "[linalg]") {
  const FieldCtx& F2 = field_cached(2, 1);

  // The 2x2 unipotent Jordan block over GF(2) has rcf = companion((t+1)^2).
  Mat J2 = mat_zero(F2, 2, 2);
  J2.at(0, 0) = J2.at(0, 1) = J2.at(1, 1) = 1;
  const Poly t1 = poly_from_codes(F2, {1, 1});
  CHECK(rcf(J2) == companion(t1 * t1));

  // One companion block per height: two copies of an irreducible quadratic.
  const Poly quad = poly_from_codes(F2, {1, 1, 1});
  const Mat two_blocks = direct_sum(companion(quad), companion(quad));
  CHECK(rcf(two_blocks) == two_blocks);  // already canonical
  const RcfData data = rcf_data(two_blocks);
  REQUIRE(data.primaries.size() == 1);
  CHECK(data.primaries[0].heights == std::vector<int>{1, 1});
  CHECK(data.minpoly == quad);

  // companion(f^2) vs companion(f) + companion(f): different partitions.
  CHECK(rcf(companion(quad * quad)) != rcf(two_blocks));

  // Minimal polynomial annihilates and divides the characteristic.
  std::mt19937 rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    const FieldCtx& F = (trial % 2) ? field_cached(2, 2) : F2;
    const u32 n = 2 + rng() % 4;
    const Mat A = random_mat(F, n, rng);
    const RcfData d = rcf_data(A);
    CHECK(mat_poly_eval(d.minpoly, A) == mat_zero(F, n, n));
    CHECK(poly_divmod(d.charpoly, d.minpoly).second.is_zero());
    CHECK(char_poly(d.form) == d.charpoly);
  }
}

TEST_CASE("rcf is a conjugacy invariant and idempotent", "[linalg]") {
  std::mt19937 rng(505);
  const FieldCtx* fields[] = {&field_cached(2, 1), &field_cached(2, 2),
                              &field_cached(3, 1), &field_cached(2, 4),
                              &field_cached(3, 2)};
  for (int trial = 0; trial < 500; ++trial) {
    const FieldCtx& F = *fields[trial % 5];
    const u32 n = 2 + rng() % 5;  // n <= 6
    const Mat A = random_mat(F, n, rng);
    const Mat P = random_invertible(F, n, rng);
    const Mat R = rcf(A);
    CHECK(rcf(P * A * mat_inv(P)) == R);
    CHECK(rcf(R) == R);
  }
}

TEST_CASE("eigenvalue order profiles", "[linalg]") {
  const FieldCtx& F2 = field_cached(2, 1);
  const FieldCtx& F4 = field_cached(2, 2);

  // Primitive quartic over GF(2): four roots of order 15.
  const Mat singer = companion(poly_from_codes(F2, {1, 1, 0, 0, 1}));
  CHECK(eigen_profile(singer) ==
        EigenProfile{{{15, 4}}});
  CHECK(eigen_profile(singer).flatten() == std::vector<u64>{15, 15, 15, 15});

  // Identity: all eigenvalues 1.
  CHECK(eigen_profile(mat_identity(F4, 4)) == EigenProfile{{{1, 4}}});

  // Unipotent 2x2: (t+1)^2, both roots order 1.
  Mat J2 = mat_zero(F2, 2, 2);
  J2.at(0, 0) = J2.at(0, 1) = J2.at(1, 1) = 1;
  CHECK(eigen_profile(J2) == EigenProfile{{{1, 2}}});

  // diag(g, g^2) over GF(4): two eigenvalues of order 3.
  Mat dg = mat_zero(F4, 2, 2);
  dg.at(0, 0) = F4.gen().code;
  dg.at(1, 1) = pow(F4.gen(), 2).code;
  CHECK(eigen_profile(dg) == EigenProfile{{{3, 2}}});

  // Nilpotent block: eigenvalue 0 marked with order 0.
  Mat nil = mat_zero(F2, 2, 2);
  nil.at(0, 1) = 1;
  CHECK(eigen_profile(nil) == EigenProfile{{{0, 2}}});

  // Mixed: order-15 quadratic over GF(4) plus order-3 scalar block.
  const Poly q15 = poly_from_codes(F4, {2, 1, 1});  // x^2 + x + g
  Mat mix = direct_sum(companion(q15), dg);
  CHECK(eigen_profile(mix) == EigenProfile{{{3, 2}, {15, 2}}});
  CHECK(eigen_profile(mix).flatten() == std::vector<u64>{3, 3, 15, 15});

  // Profile is a conjugacy invariant.
  std::mt19937 rng(606);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat A = random_mat(F4, 4, rng);
    const Mat P = random_invertible(F4, 4, rng);
    CHECK(eigen_profile(P * A * mat_inv(P)) == eigen_profile(A));
  }
}

TEST_CASE("invariant subspace dimensions with witnesses", "[linalg]") {
  const FieldCtx& F2 = field_cached(2, 1);
  const FieldCtx& F4 = field_cached(2, 2);

  // Irreducible action: only 0 and the full space.
  const Mat singer = companion(poly_from_codes(F2, {1, 1, 0, 0, 1}));
  auto inv = invariant_subspace_dims(singer);
  CHECK(inv.dims == std::vector<u32>{0, 4});

  // Identity: every dimension, witness per dimension.
  inv = invariant_subspace_dims(mat_identity(F2, 3));
  CHECK(inv.dims == std::vector<u32>{0, 1, 2, 3});
  for (size_t i = 0; i < inv.dims.size(); ++i) {
    CHECK(inv.witnesses[i].rows == inv.dims[i]);
  }

  // Unipotent Jordan block J2: chain 0 < line < plane.
  Mat J2 = mat_zero(F2, 2, 2);
  J2.at(0, 0) = J2.at(0, 1) = J2.at(1, 1) = 1;
  inv = invariant_subspace_dims(J2);
  CHECK(inv.dims == std::vector<u32>{0, 1, 2});

  // Two copies of an irreducible quadratic: dims step by 2.
  const Poly quad = poly_from_codes(F2, {1, 1, 1});
  inv = invariant_subspace_dims(direct_sum(companion(quad), companion(quad)));
  CHECK(inv.dims == std::vector<u32>{0, 2, 4});

  // Mixed primaries: quadratic (irreducible) + scalar 1: Minkowski sum.
  Mat mixed = direct_sum(companion(quad), mat_identity(F2, 1));
  inv = invariant_subspace_dims(mixed);
  CHECK(inv.dims == std::vector<u32>{0, 1, 2, 3});

  // Every witness is invariant under the matrix (external re-check).
  std::mt19937 rng(707);
  for (int trial = 0; trial < 50; ++trial) {
    const u32 n = 2 + rng() % 4;
    const Mat A = random_mat(F4, n, rng);
    const auto r = invariant_subspace_dims(A);
    REQUIRE(r.dims.size() == r.witnesses.size());
    for (size_t i = 0; i < r.dims.size(); ++i) {
      const Mat& W = r.witnesses[i];
      CHECK(W.rows == r.dims[i]);
      const Rref basis = rref(W);
      for (u32 rr = 0; rr < W.rows; ++rr) {
        std::vector<u32> v(W.cols);
        for (u32 j = 0; j < W.cols; ++j) v[j] = W.at(rr, j);
        CHECK(rowspace_contains(basis, rowvec_mul(v, A)));
      }
    }
    // 0 and n are always present.
    CHECK(r.dims.front() == 0);
    CHECK(r.dims.back() == n);
  }
}

TEST_CASE("matrix text format round-trips", "[linalg]") {
  const FieldCtx& F4 = field_cached(2, 2);
  std::mt19937 rng(808);
  for (int trial = 0; trial < 50; ++trial) {
    const u32 n = 1 + rng() % 4;
    const Mat A = random_mat(F4, n, rng);
    CHECK(parse_mat(F4, format_mat(A)) == A);
  }
  const Mat I2 = mat_identity(F4, 2);
  CHECK(format_mat(I2) == "2;2^2:[1,0],2^2:[0,0],2^2:[0,0],2^2:[1,0]");

  CHECK_THROWS_AS(parse_mat(F4, "no-semicolon"), invalid_argument_error);
  CHECK_THROWS_AS(parse_mat(F4, "2;2^2:[1,0]"), invalid_argument_error);
  CHECK_THROWS_AS(parse_mat(F4, "x;2^2:[1,0]"), invalid_argument_error);
}
