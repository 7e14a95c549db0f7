#include "doctest.h"
#include "hcm/dense.hpp"
#include "hcm/errors.hpp"
#include "hcm/symbolic.hpp"
#include "oracles.hpp"

using namespace hcm;

namespace {
const Signature sig = default_signature();
const AlgebraElement one = AlgebraElement::identity(sig);

bool single(const SparseVector& v, long target, const AlgebraElement& coeff) {
  return v.size() == 1 && v[0].target == target && distance(v[0].coeff, coeff) <= 1e-15;
}
}  // namespace

TEST_CASE("defining actions") {
  CHECK(single(catalog("ex1", sig).eval_basis(3), 6, one));
  CHECK(single(catalog("ex2", sig).eval_basis(4), 2, one));
  CHECK(catalog("ex2", sig).eval_basis(3).empty());
  const auto two = AlgebraElement::scalar(sig, 2.0);
  for (long k = 1; k <= 10; ++k) CHECK(single(catalog("ex9", sig, {two}).eval_basis(k), k, two));
}

TEST_CASE("actions agree with hand-written maps") {
  for (const std::string name : {"I", "S", "L", "ex1", "ex2", "ex3", "ex15f", "ex15g", "ex8"}) {
    const auto f = catalog(name, sig);
    for (long j = 1; j <= 200; ++j) {
      const long t = oracle::catalog_target(name, j);
      if (t == 0)
        CHECK(f.eval_basis(j).empty());
      else
        CHECK(single(f.eval_basis(j), t, one));
    }
  }
}

TEST_CASE("multiplication example layout") {
  const auto v = catalog("ex4", sig).eval_basis(2);
  REQUIRE(v.size() == 2);
  CHECK(v[0].target == 3);
  CHECK(v[1].target == 4);
  CHECK(distance(v[0].coeff, AlgebraElement::central(sig, {1.0, 0.0})) == 0.0);
  CHECK(distance(v[1].coeff, AlgebraElement::central(sig, {0.0, 1.0})) == 0.0);
}

TEST_CASE("finite-rank correction adds its column") {
  DenseOperator k = DenseOperator::zero(sig, 1, 1);
  k.set_entry(0, 0, one);
  const auto f = catalog("I", sig).plus_correction(k);
  CHECK(single(f.eval_basis(1), 1, one * cplx(2.0)));
  CHECK(single(f.eval_basis(2), 2, one));
}

TEST_CASE("adjoints") {
  CHECK(equivalent(adjoint_symbolic(catalog("ex4", sig)), catalog("ex5", sig)));
  CHECK(equivalent(compose_symbolic(adjoint_symbolic(catalog("ex8", sig)), catalog("ex8", sig)), catalog("I", sig)));
  CHECK(equivalent(adjoint_symbolic(catalog("I", sig)), catalog("I", sig)));
  for (const auto& name : catalog_names())
    CHECK(equivalent(adjoint_symbolic(adjoint_symbolic(catalog(name, sig))), catalog(name, sig)));
}

TEST_CASE("compositions") {
  CHECK(equivalent(compose_symbolic(catalog("ex2", sig), catalog("ex1", sig)), catalog("I", sig)));
  const auto ff = compose_symbolic(catalog("ex1", sig), catalog("ex1", sig));
  for (long k = 1; k <= 50; ++k) CHECK(single(ff.eval_basis(k), 4 * k, one));
  const auto alpha = AlgebraElement::central(sig, {2.0, 3.0});
  const auto uv = compose_symbolic(catalog("ex8", sig), catalog("ex9", sig, {alpha}));
  for (long k = 1; k <= 30; ++k) CHECK(single(uv.eval_basis(k), oracle::catalog_target("ex8", k), alpha));
  CHECK(equivalent(power_symbolic(catalog("S", sig), 3), compose_symbolic(catalog("S", sig), compose_symbolic(catalog("S", sig), catalog("S", sig)))));
}

TEST_CASE("classification of catalog entries") {
  const auto r1 = classify_symbolic(catalog("ex1", sig));
  CHECK(r1.decided);
  CHECK(r1.in_MPhi_plus);
  CHECK_FALSE(r1.in_MPhi);
  CHECK(r1.cokernel.counts[0] == -1);
  const auto l = classify_symbolic(catalog("L", sig));
  CHECK(l.in_MPhi);
  CHECK(l.index == IndexValue({2, 1}));
  CHECK(index(windowed_truncate(catalog("L", sig), 5)) == *l.index);
  CHECK(classify_symbolic(catalog("ex15", sig)).in_MPhi_plus_minus);
  CHECK(classify_symbolic(catalog("ex15g", sig)).in_MPhi_minus_plus);
}

TEST_CASE("index of shift words matches letter bookkeeping") {
  oracle::Gen g(21);
  const std::vector<std::string> letters = {"L", "S", "I", "ex8", "ex9"};
  for (int t = 0; t < 60; ++t) {
    std::vector<std::string> w;
    SymbolicOperator f = catalog("I", sig);
    for (int k = g.integer(1, 4); k > 0; --k) {
      w.push_back(letters[static_cast<size_t>(g.integer(0, 4))]);
      f = compose_symbolic(catalog(w.back(), sig), f);
    }
    const auto r = classify_symbolic(f);
    REQUIRE(r.in_MPhi);
    CHECK(*r.index == IndexValue(oracle::word_index(sig, w)));
  }
}

TEST_CASE("truncations") {
  for (int n : {1, 4, 9}) CHECK((truncate(catalog("I", sig), n) - DenseOperator::identity(sig, n)).norm() == 0.0);
  const DenseOperator s = windowed_truncate(catalog("S", sig), 4);
  CHECK(s.domain() == 4);
  CHECK(s.codomain() == 5);
  CHECK(index(s) == IndexValue({-2, -1}));
  CHECK(submodule_distance(kernel(truncate(catalog("ex1", sig), 4)), Submodule::coordinates(sig, 4, {3, 4})) <= 1e-15);
}

TEST_CASE("window diagnostics") {
  const auto d = window_diagnostic(catalog("L", sig), 5);
  CHECK(d.decoupled);
  CHECK(d.index_faithful);
  CHECK(d.n_out == 4);
  CHECK(faithful_window(catalog("ex8", sig), 1) >= 1);
}

TEST_CASE("kernel fibres") {
  CHECK(kernel_fiber(catalog("L", sig), 1) == std::vector<long>{2, 1});
  CHECK(kernel_fiber(catalog("L", sig), 2) == std::vector<long>{0, 0});
  CHECK(cokernel_fiber(catalog("S", sig), 1) == std::vector<long>{2, 1});
  CHECK(cokernel_fiber(catalog("ex1", sig), 3) == std::vector<long>{2, 1});
}

TEST_CASE("unknown names") {
  CHECK_THROWS_AS(catalog("nope", sig), Error);
  CHECK_THROWS_AS(catalog("ex4", Signature({3})), Error);
}
