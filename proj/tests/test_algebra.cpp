#include "doctest.h"
#include "hcm/algebra.hpp"
#include "hcm/errors.hpp"
#include "oracles.hpp"

using namespace hcm;

TEST_CASE("star of identity and of a nilpotent unit") {
  const Signature sig({2});
  CHECK(distance(star(AlgebraElement::identity(sig)), AlgebraElement::identity(sig)) == 0.0);
  const auto a = AlgebraElement::matrix_unit(sig, 0, 0, 1);
  CHECK(distance(star(a), AlgebraElement::matrix_unit(sig, 0, 1, 0)) == 0.0);
}

TEST_CASE("star preserves the norm") {
  oracle::Gen g(11);
  for (int t = 0; t < 100; ++t) {
    const Signature sig = g.signature();
    const AlgebraElement a = g.element(sig);
    // Brute force: largest singular value over blocks.
    double want = 0.0;
    for (int i = 0; i < sig.k(); ++i)
      want = std::max(want, Eigen::JacobiSVD<Mat>(a.block(i)).singularValues()(0));
    CHECK(std::abs(star(a).norm() - want) <= 1e-12 * std::max(1.0, want));
  }
}

TEST_CASE("inverse of diagonal blocks") {
  const Signature sig = default_signature();
  CHECK(distance(invert(AlgebraElement::identity(sig)), AlgebraElement::identity(sig)) == 0.0);
  const auto a = AlgebraElement::central(sig, {2.0, 0.5});
  CHECK(distance(invert(a), AlgebraElement::central(sig, {0.5, 2.0})) == 0.0);
  CHECK_THROWS_AS(invert(AlgebraElement::matrix_unit(sig, 0, 0, 0)), Error);
}

TEST_CASE("inverse residual for well-conditioned elements") {
  oracle::Gen g(12);
  for (int t = 0; t < 50; ++t) {
    const Signature sig = g.signature();
    AlgebraElement a = g.element(sig) + AlgebraElement::scalar(sig, 4.0);
    CHECK(distance(a * invert(a), AlgebraElement::identity(sig)) <= 1e-10);
  }
}

TEST_CASE("central basis") {
  const auto c1 = central_basis(Signature({1}));
  REQUIRE(c1.size() == 1);
  CHECK(distance(c1[0], AlgebraElement::identity(Signature({1}))) == 0.0);
  const Signature sig = default_signature();
  const auto c = central_basis(sig);
  REQUIRE(c.size() == 2);
  CHECK(distance(c[0], AlgebraElement::central(sig, {1.0, 0.0})) == 0.0);
  CHECK(distance(c[1], AlgebraElement::central(sig, {0.0, 1.0})) == 0.0);
  oracle::Gen g(13);
  for (int t = 0; t < 20; ++t) {
    const auto a = g.element(sig);
    for (const auto& p : c) CHECK(distance(p * a, a * p) <= 1e-14);
  }
}

TEST_CASE("regular representation against the span oracle") {
  for (const auto& blocks : std::vector<std::vector<int>>{{1}, {2, 1}, {3, 2, 1}}) {
    const Signature sig(blocks);
    const auto want = oracle::span_dims(sig, 1, {ModuleVector::basis(sig, 1, 1)});
    CHECK(regular_representation_dim(sig) == DimensionVector(want));
  }
  CHECK(regular_representation_dim(Signature({3, 2, 1})) == DimensionVector({3, 2, 1}));
}

TEST_CASE("dimension vectors and index values") {
  const DimensionVector a({1, 0}), b({0, 2});
  CHECK_FALSE(a.leq(b));
  CHECK_FALSE(b.leq(a));
  CHECK(a.leq(a));
  CHECK((a - b) == IndexValue({1, -2}));
  CHECK((a + b) == DimensionVector({1, 2}));
  CHECK((-(a - b)) == IndexValue({-1, 2}));
  CHECK(IndexValue({0, 0}).is_zero());
}

TEST_CASE("central elements") {
  const Signature sig = default_signature();
  const auto a = AlgebraElement::central(sig, {cplx(1, 2), 3.0});
  CHECK(a.is_central());
  CHECK(a.central_coeffs()[0] == cplx(1, 2));
  CHECK_FALSE(AlgebraElement::matrix_unit(sig, 0, 0, 1).is_central());
  CHECK(algebra_basis(sig).size() == 5);
}
