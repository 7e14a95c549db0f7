#include "doctest.h"
#include "hcm/constructions.hpp"
#include "hcm/errors.hpp"
#include "hcm/random.hpp"
#include "oracles.hpp"

using namespace hcm;

namespace {
const Signature sig = default_signature();
const AlgebraElement one = AlgebraElement::identity(sig);
const AlgebraElement p = AlgebraElement::matrix_unit(sig, 0, 0, 0);
}  // namespace

TEST_CASE("operators from decompositions") {
  const Submodule full = Submodule::full(sig, 3), zero = Submodule::zero(sig, 3);
  const DenseOperator f = fredholm_from_decomposition(full, zero, full, zero);
  CHECK(kernel(f).is_zero());
  CHECK(cokernel(f).is_zero());
  auto rng = make_rng(41, 0);
  const Submodule n1 = Submodule::coordinates(sig, 3, {3});
  const Submodule m1 = orth_complement(n1);
  std::vector<Mat> core;
  for (int i = 0; i < sig.k(); ++i) {
    const auto d = m1.block_basis(i).cols();
    core.push_back(gaussian_matrix(rng, d, d) + 3.0 * Mat::Identity(d, d));
  }
  const DenseOperator g = fredholm_from_decomposition(m1, n1, m1, n1, core);
  CHECK(submodule_distance(kernel(g), n1) <= 1e-10);
  CHECK(index(g).is_zero());
}

TEST_CASE("invertible-head decompositions") {
  const auto e = paired_invertible_head(ModuleVector::basis(sig, 3, 1));
  CHECK(submodule_distance(e.N1, Submodule::coordinates(sig, 3, {1})) <= 1e-15);
  CHECK(submodule_distance(e.N2, Submodule::coordinates(sig, 3, {1})) <= 1e-15);
  auto rng = make_rng(42, 0);
  for (int t = 0; t < 20; ++t) {
    const ModuleVector x(sig, std::vector<AlgebraElement>{one, random_element(sig, rng), AlgebraElement::zero(sig)});
    const auto pd = paired_invertible_head(x);
    CHECK(pd.valid());
    CHECK(pd.N1.dim_vector() == DimensionVector(oracle::span_dims(sig, 3, {x})));
    CHECK(pd.N1.dim_vector() == regular_representation_dim(sig));
    CHECK(sum_and_intersection(pd.N, pd.N1).second.is_zero());
  }
  CHECK_THROWS_AS(paired_invertible_head(ModuleVector(sig, std::vector<AlgebraElement>{p, one})), Error);
}

TEST_CASE("nested-kernel decompositions") {
  const auto pd = paired_kernel_nested(ModuleVector(sig, std::vector<AlgebraElement>{p, p}));
  const Submodule want = span_submodule(sig, 2, {ModuleVector(sig, std::vector<AlgebraElement>{p, AlgebraElement::zero(sig)})});
  CHECK(pd.N2.dim_vector() == DimensionVector({1, 0}));
  CHECK(submodule_distance(pd.N2, want) <= 1e-12);
  CHECK(pd.valid());
  auto rng = make_rng(43, 0);
  const auto a = random_element(sig, rng);
  const auto head = paired_kernel_nested(ModuleVector(sig, std::vector<AlgebraElement>{one, a}));
  CHECK(head.N1.dim_vector() == regular_representation_dim(sig));
  CHECK_THROWS_AS(paired_kernel_nested(ModuleVector(sig, std::vector<AlgebraElement>{p, one})), Error);
}

TEST_CASE("special classes") {
  const auto pd = paired_invertible_head(ModuleVector::basis(sig, 3, 1));
  const DenseOperator id = DenseOperator::identity(sig, 3);
  const auto t = special_class_operator(pd, SpecialKind::Tilde0, id);
  CHECK(submodule_distance(kernel(t.F), pd.N1) <= 1e-12);
  auto rng = make_rng(44, 0);
  const auto pd2 = paired_invertible_head(ModuleVector(sig, std::vector<AlgebraElement>{one, random_element(sig, rng), random_element(sig, rng)}));
  const DenseOperator u = random_operator(sig, 3, 3, rng) + id * cplx(4.0);
  const auto r = special_class_operator(pd2, SpecialKind::Tilde0, u);
  CHECK(r.kernel_dim == pd2.N1.dim_vector());
  CHECK(r.cokernel_dim == pd2.N1.dim_vector());
  CHECK(r.in_class);
  const auto h = special_class_operator(pd, SpecialKind::HatPlus, id, DenseOperator::zero(sig, 3, 3), DenseOperator::zero(sig, 3, 3));
  CHECK(submodule_distance(kernel(h.F), pd.N1) <= 1e-12);
}

TEST_CASE("nilpotent blocks") {
  for (int q = 1; q <= 3; ++q) {
    const DenseOperator c = nilpotent_block(sig, 4, q);
    DenseOperator pw = DenseOperator::identity(sig, 4);
    for (int m = 0; m < q; ++m) pw = compose(c, pw);
    CHECK(pw.norm() == 0.0);
  }
}

TEST_CASE("power stabilization families") {
  const auto fam = bfredholm_recipe(catalog("S", sig), 3, 3, {8, 16}, 5);
  for (const auto& mem : fam)
    for (size_t m = 2; m < mem.restricted_index.size(); ++m) {
      CHECK(mem.restricted_index[m] == IndexValue({-2, -1}));
      CHECK(mem.kernel_step[m] <= 1e-9);
    }
  const auto one_step = bfredholm_recipe(catalog("L", sig), 1, 1, {8}, 3);
  for (const auto& ix : one_step[0].restricted_index) CHECK(ix == IndexValue({2, 1}));
  CHECK_THROWS_AS(bfredholm_recipe(catalog("ex2", sig), 1, 1, {8}, 2), Error);
}

TEST_CASE("refinement families") {
  CHECK(closed_range_margin(range17_operator(4)) == 0.25);
  const auto m = sum18_member(4);
  CHECK(std::abs(dixmier_angle(m.M, m.N) - std::cos(0.25)) <= 1e-12);
  CHECK(std::abs(dixmier_angle(m.M, m.N) - 0.9689) <= 1e-4);
  CHECK(margins_strictly_decreasing(nonclosed_range_family()));
  CHECK(margins_strictly_decreasing(nonclosed_sum_family()));
  for (const auto& r : nonclosed_range_family()) CHECK(r.margin <= 1.0 / r.d);
  for (const auto& r : nonclosed_sum_family()) CHECK(1.0 - *r.angle <= 1.0 / (r.d * r.d));
}

TEST_CASE("oblique projections") {
  const Submodule a = Submodule::coordinates(sig, 2, {1});
  const ModuleVector v = ModuleVector::basis(sig, 2, 1) + ModuleVector::basis(sig, 2, 2);
  const Submodule b = span_submodule(sig, 2, {v});
  const DenseOperator pr = oblique_projection(a, b);
  CHECK((compose(pr, pr) - pr).norm() <= 1e-12);
  CHECK(kernel(pr).dim_vector() == b.dim_vector());
  CHECK_THROWS_AS(oblique_projection(a, a), Error);
}

TEST_CASE("direct sums") {
  const DenseOperator d = direct_sum(DenseOperator::identity(sig, 2), DenseOperator::zero(sig, 1, 1));
  CHECK(d.domain() == 3);
  CHECK(kernel(d).dim_vector() == DimensionVector({2, 1}));
}
