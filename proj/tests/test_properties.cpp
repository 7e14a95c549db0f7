// Randomized invariants with hand-rolled generators; a failing case index is reported.
#include "doctest.h"
#include "hcm/dense.hpp"
#include "hcm/io.hpp"
#include "hcm/module.hpp"
#include "hcm/parallel.hpp"
#include "hcm/symbolic.hpp"
#include "oracles.hpp"

using namespace hcm;
using oracle::forall;
using oracle::Gen;

TEST_CASE("star is an anti-multiplicative involution") {
  CHECK(forall(200, 1, [](Gen& g, long) {
          const Signature s = g.signature();
          const auto a = g.element(s), b = g.element(s);
          return distance(star(star(a)), a) == 0.0 && distance(star(a * b), star(b) * star(a)) <= 1e-12;
        }) == -1);
}

TEST_CASE("complement twice is the identity and dimensions add up") {
  CHECK(forall(200, 2, [](Gen& g, long) {
          const Signature s = g.signature();
          const int amb = g.integer(1, 4);
          std::vector<ModuleVector> gens;
          for (int k = g.integer(0, 3); k > 0; --k) gens.push_back(g.vector(s, amb) * g.element(s));
          const Submodule m = span_submodule(s, amb, gens);
          const Submodule c = orth_complement(m);
          return submodule_distance(orth_complement(c), m) <= 1e-9 &&
                 m.dim_vector() + c.dim_vector() == Submodule::full(s, amb).dim_vector() &&
                 m.dim_vector() == DimensionVector(oracle::span_dims(s, amb, gens));
        }) == -1);
}

TEST_CASE("kernel and cokernel against the LU oracle") {
  CHECK(forall(200, 3, [](Gen& g, long) {
          const Signature s = g.signature();
          const DenseOperator f = g.low_rank(s, g.integer(1, 4), g.integer(1, 4));
          return kernel(f).dim_vector() == DimensionVector(oracle::kernel_dims(f)) &&
                 cokernel(f).dim_vector() == DimensionVector(oracle::cokernel_dims(f));
        }) == -1);
}

TEST_CASE("operators are right A-linear") {
  CHECK(forall(100, 4, [](Gen& g, long) {
          const Signature s = g.signature();
          const DenseOperator f = g.low_rank(s, 3, 2);
          const ModuleVector x = g.vector(s, 3);
          const AlgebraElement a = g.element(s);
          return (f.apply(x * a) - f.apply(x) * a).norm() <= 1e-10;
        }) == -1);
}

TEST_CASE("kernel of the adjoint is the orthogonal complement of the image") {
  CHECK(forall(100, 5, [](Gen& g, long) {
          const Signature s = g.signature();
          const DenseOperator f = g.low_rank(s, g.integer(1, 4), g.integer(1, 4));
          return submodule_distance(kernel(adjoint(f)), orth_complement(image(f))) <= 1e-9;
        }) == -1);
}

TEST_CASE("symbolic composition is associative") {
  const std::vector<std::string> pool = {"I", "S", "L", "ex1", "ex2", "ex8", "ex9", "ex15f"};
  CHECK(forall(100, 6, [&](Gen& g, long) {
          const Signature s = default_signature();
          const auto a = catalog(pool[static_cast<size_t>(g.integer(0, 7))], s);
          const auto b = catalog(pool[static_cast<size_t>(g.integer(0, 7))], s);
          const auto c = catalog(pool[static_cast<size_t>(g.integer(0, 7))], s);
          return equivalent(compose_symbolic(c, compose_symbolic(b, a)), compose_symbolic(compose_symbolic(c, b), a));
        }) == -1);
}

TEST_CASE("adjoint swaps upper and lower classes") {
  CHECK(forall(60, 7, [](Gen& g, long) {
          const Signature s = default_signature();
          const auto names = catalog_names();
          const auto f = catalog(names[static_cast<size_t>(g.integer(0, static_cast<int>(names.size()) - 1))], s);
          const auto r = classify_symbolic(f), a = classify_symbolic(adjoint_symbolic(f));
          return r.in_MPhi_plus == a.in_MPhi_minus && r.in_MPhi_minus == a.in_MPhi_plus &&
                 (!r.index || *a.index == -*r.index);
        }) == -1);
}

TEST_CASE("JSON round trip of random operators is byte-identical") {
  CHECK(forall(100, 8, [](Gen& g, long) {
          const Signature s = g.signature();
          const DenseOperator f = g.low_rank(s, g.integer(1, 3), g.integer(1, 3));
          const std::string t = io::dump(io::to_json(f));
          return io::dump(io::to_json(io::dense_from_json(nlohmann::json::parse(t)))) == t;
        }) == -1);
}

TEST_CASE("parallel map is order independent") {
  const auto f = [](long i) { return static_cast<double>(i * i) / 7.0; };
  CHECK(parallel_map<double>(1000, f, Exec::Parallel) == parallel_map<double>(1000, f, Exec::Serial));
}
