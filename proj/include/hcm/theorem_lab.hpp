#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "hcm/module.hpp"
#include "hcm/parallel.hpp"
#include "hcm/tolerances.hpp"

namespace hcm {

struct SuiteFailure {
  std::string label;
  nlohmann::json inputs;  // reproducer payload
  std::string expected;
  std::string got;
};

struct SuiteReport {
  std::string suite;
  std::string anchor;  // neutral statement ID, see coverage_manifest()
  std::uint64_t seed = 0;
  int trials = 0;
  long checks = 0;
  long redraws = 0;
  std::vector<SuiteFailure> failures;
  std::map<std::string, double> tolerances;
  std::vector<std::string> notes;

  bool passed() const { return failures.empty(); }
  nlohmann::json to_json() const;
};

struct SuiteConfig {
  std::uint64_t seed = 20240521;
  int trials = 100;  // suites with a fixed workload ignore this
  Exec exec = Exec::Parallel;
  Tolerances tol{};
};

SuiteReport suite_index_theorem(const SuiteConfig& cfg = {});
SuiteReport suite_compact_perturbation(const SuiteConfig& cfg = {});
SuiteReport suite_composition_closure(const SuiteConfig& cfg = {});
SuiteReport suite_power_stabilization(const SuiteConfig& cfg = {});
SuiteReport suite_weyl_gc_perturbation(const SuiteConfig& cfg = {});
SuiteReport suite_atkinson_witness(const SuiteConfig& cfg = {});
SuiteReport suite_dixmier(const SuiteConfig& cfg = {});
SuiteReport suite_catalog(const SuiteConfig& cfg = {});
SuiteReport suite_radii(const SuiteConfig& cfg = {});
SuiteReport suite_spectral(const SuiteConfig& cfg = {});
SuiteReport suite_decomposition(const SuiteConfig& cfg = {});
SuiteReport suite_module_oracle(const SuiteConfig& cfg = {});

std::vector<std::string> suite_names();
/// Throws UnknownSuite.
SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg = {});

/// Expected classification of every catalog entry on the default signature.
struct CatalogExpectation {
  std::string name;
  bool plus, minus, phi, phi0, plus_minus, minus_plus;
};
std::vector<CatalogExpectation> catalog_expectations();

/// Statement IDs and the suites that exercise them.
struct CoverageEntry {
  std::string anchor;
  std::string statement;  // short neutral description
  std::vector<std::string> suites;
};
std::vector<CoverageEntry> coverage_manifest();

/// Quantitative lower bound used for products with a Dixmier angle below one:
/// margin(GF) ≥ margin(G)·margin(F)·sqrt(1 − c0²), with c0 the angle between Im F and ker G.
double dixmier_margin_bound(double margin_g, double margin_f, double c0);

/// Largest ||<x,y>|| over `samples` random pairs x ∈ M, y ∈ N with module norm 1.
double dixmier_sampled(const Submodule& m, const Submodule& n, long samples, std::uint64_t seed, Exec exec);

}  // namespace hcm
