#include <set>

#include "doctest.h"
#include "hcm/errors.hpp"
#include "hcm/symbolic.hpp"
#include "hcm/theorem_lab.hpp"

using namespace hcm;

namespace {
SuiteConfig small(Exec exec = Exec::Parallel) {
  SuiteConfig cfg;
  cfg.trials = 8;
  cfg.exec = exec;
  return cfg;
}
}  // namespace

TEST_CASE("every suite passes on a short run") {
  for (const auto& name : suite_names()) {
    if (name == "dixmier") continue;  // sampling-heavy; covered by the CLI and acceptance runs
    const SuiteReport r = run_suite(name, small());
    INFO(name);
    CHECK(r.passed());
    CHECK(r.checks > 0);
    CHECK(r.tolerances.count("rank") == 1);
  }
}

TEST_CASE("reports are deterministic and independent of scheduling") {
  for (const std::string name : {"index_theorem", "compact_perturbation", "module_oracle", "radii"}) {
    const auto a = run_suite(name, small(Exec::Parallel)).to_json();
    const auto b = run_suite(name, small(Exec::Parallel)).to_json();
    const auto c = run_suite(name, small(Exec::Serial)).to_json();
    CHECK(a == b);
    CHECK(a == c);
  }
}

TEST_CASE("unknown suite") { CHECK_THROWS_AS(run_suite("nope", small()), Error); }

TEST_CASE("coverage manifest") {
  const auto names = suite_names();
  const std::set<std::string> known(names.begin(), names.end());
  std::set<std::string> anchors, touched;
  for (const auto& e : coverage_manifest()) {
    CHECK(anchors.insert(e.anchor).second);
    CHECK_FALSE(e.suites.empty());
    for (const auto& s : e.suites) {
      CHECK(known.count(s) == 1);
      touched.insert(s);
    }
  }
  CHECK(touched.size() == known.size());
}

TEST_CASE("catalog expectations cover the catalog") {
  CHECK(catalog_expectations().size() == catalog_names().size());
}

TEST_CASE("margin bound") {
  CHECK(dixmier_margin_bound(1.0, 1.0, 0.0) == 1.0);
  CHECK(dixmier_margin_bound(0.5, 2.0, 1.0) == 0.0);
  CHECK(std::abs(dixmier_margin_bound(1.0, 1.0, 0.6) - 0.8) <= 1e-15);
}

TEST_CASE("sampled angle is deterministic and below the formula") {
  const Signature sig = default_signature();
  const Submodule m = Submodule::coordinates(sig, 2, {1});
  const ModuleVector v = ModuleVector::basis(sig, 2, 1) * cplx(0.6) + ModuleVector::basis(sig, 2, 2) * cplx(0.8);
  const Submodule n = span_submodule(sig, 2, {v});
  const double a = dixmier_sampled(m, n, 5000, 7, Exec::Parallel);
  CHECK(a == dixmier_sampled(m, n, 5000, 7, Exec::Serial));
  CHECK(a <= dixmier_angle(m, n) + 1e-12);
  CHECK(a >= 0.5 * dixmier_angle(m, n));
}
