#include "doctest.h"
#include "hcm/errors.hpp"
#include "hcm/io.hpp"
#include "hcm/random.hpp"
#include "hcm/spectra.hpp"

using namespace hcm;

TEST_CASE("dense operators round-trip bit-identically") {
  auto rng = make_rng(51, 0);
  for (int t = 0; t < 30; ++t) {
    const Signature sig = random_signature(rng);
    const DenseOperator f = random_operator(sig, 3, 2, rng);
    const std::string text = io::dump(io::to_json(f));
    const DenseOperator g = io::dense_from_json(nlohmann::json::parse(text));
    CHECK((f - g).norm() == 0.0);
    CHECK(io::dump(io::to_json(g)) == text);
  }
}

TEST_CASE("symbolic operators round-trip") {
  const Signature sig = default_signature();
  for (const auto& name : catalog_names()) {
    const SymbolicOperator f = catalog(name, sig);
    const std::string text = io::dump(io::to_json(f));
    const auto back = io::operator_from_json(nlohmann::json::parse(text));
    REQUIRE(std::holds_alternative<SymbolicOperator>(back));
    CHECK(equivalent(std::get<SymbolicOperator>(back), f));
    CHECK(io::dump(io::to_json(std::get<SymbolicOperator>(back))) == text);
  }
  auto rng = make_rng(52, 0);
  const auto k = random_operator(sig, 2, 2, rng);
  const auto f = catalog("S", sig).plus_correction(k);
  const std::string text = io::dump(io::to_json(f));
  CHECK(io::dump(io::to_json(io::symbolic_from_json(nlohmann::json::parse(text)))) == text);
}

TEST_CASE("catalog shorthand") {
  const auto j = nlohmann::json::parse(R"({"catalog": "ex9", "signature": [2, 1], "alpha": {"central": [[3, 0], [0.5, 0]]}})");
  const auto f = io::symbolic_from_json(j);
  const auto v = f.eval_basis(2);
  REQUIRE(v.size() == 1);
  CHECK(v[0].coeff.central_coeffs()[0] == cplx(3.0));
}

TEST_CASE("submodules round-trip") {
  auto rng = make_rng(53, 0);
  for (int t = 0; t < 20; ++t) {
    const Signature sig = random_signature(rng);
    const Submodule s = random_submodule(sig, 3, rng);
    const Submodule back = io::submodule_from_json(nlohmann::json::parse(io::dump(io::to_json(s))));
    CHECK(submodule_distance(s, back) <= 1e-12);
    CHECK(back.dim_vector() == s.dim_vector());
  }
}

TEST_CASE("keys are sorted and complex numbers are pairs") {
  const auto text = io::dump(io::to_json(cplx(1.5, -2.0)));
  CHECK(text.find("1.5") != std::string::npos);
  const auto j = io::to_json(radii_exact(ShiftPolynomial::shift(default_signature())));
  const std::string d = io::dump(j);
  CHECK(d.find("\"mode\"") < d.find("\"s\""));
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(io::operator_from_json(nlohmann::json::parse(R"({"signature": [0]})")), Error);
  CHECK_THROWS_AS(io::dense_from_json(nlohmann::json::parse(R"({"signature": [1], "domain": 1, "codomain": 1, "entries": 3})")), Error);
  CHECK_THROWS_AS(io::read_file("/nonexistent/file.json"), Error);
  CHECK_THROWS_AS(io::symbolic_from_json(nlohmann::json::parse(R"({"catalog": "zz"})")), Error);
}
