// One line per acceptance criterion; the process fails if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "hcm/constructions.hpp"
#include "hcm/dense.hpp"
#include "hcm/errors.hpp"
#include "hcm/random.hpp"
#include "hcm/spectra.hpp"
#include "hcm/symbolic.hpp"
#include "hcm/theorem_lab.hpp"

using namespace hcm;

namespace {

// Tolerances pinned by the criteria.
constexpr double kExactSeqResidual = 1e-9;
constexpr double kMachine = 1e-15;
constexpr double kGridStep = 0.05;
constexpr double kCommute = 1e-9;
constexpr double kTMargin = 0.5;
constexpr double kAngle = 1e-6;
constexpr double kSampling = 1e-6;
constexpr long kSamples = 100000;
constexpr int kInstances = 20;

struct Verdict {
  bool ok;
  std::string detail;
};

int failures = 0;

void criterion(const char* id, const char* title, const std::function<Verdict()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v{false, ""};
  try {
    v = fn();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%-4s %s  %s: %s [%.1fs]\n", id, v.ok ? "PASS" : "FAIL", title, v.detail.c_str(), secs);
  std::fflush(stdout);
  if (!v.ok) ++failures;
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << x;
  return s.str();
}

Verdict suite_verdict(const std::string& name, int trials) {
  SuiteConfig cfg;
  cfg.trials = trials;
  const SuiteReport r = run_suite(name, cfg);
  std::string detail = name + " " + std::to_string(r.checks) + " checks, " + std::to_string(r.failures.size()) +
                       " failures, " + std::to_string(r.redraws) + " redraws";
  if (!r.failures.empty()) detail += "; first: " + r.failures.front().label;
  return {r.passed(), detail};
}

}  // namespace

int main() {
  const Signature sig = default_signature();

  criterion("C1", "catalog fidelity", [&] {
    struct Row {
      const char* name;
      bool plus, minus, phi, plus_minus, minus_plus;
    };
    // Stated classifications: upper-only entries and their lower-only adjoints.
    const Row rows[] = {
        {"ex1", true, false, false, true, false},   {"ex2", false, true, false, false, true},
        {"ex3", true, false, false, true, false},   {"ex3d", false, true, false, false, true},
        {"ex4", true, false, false, true, false},   {"ex5", false, true, false, false, true},
        {"ex6", true, false, false, true, false},   {"ex6d", false, true, false, false, true},
        {"ex7", true, false, false, true, false},   {"ex7d", false, true, false, false, true},
        {"ex15f", true, false, false, true, false}, {"ex15g", false, true, false, false, true},
    };
    int agree = 0, total = 0;
    std::string bad;
    for (const auto& r : rows) {
      const auto c = classify_symbolic(catalog(r.name, sig));
      const bool got[5] = {c.in_MPhi_plus, c.in_MPhi_minus, c.in_MPhi, c.in_MPhi_plus_minus, c.in_MPhi_minus_plus};
      const bool want[5] = {r.plus, r.minus, r.phi, r.plus_minus, r.minus_plus};
      for (int k = 0; k < 5; ++k) {
        ++total;
        if (c.decided && got[k] == want[k])
          ++agree;
        else
          bad += std::string(" ") + r.name;
      }
    }
    return Verdict{agree == total, std::to_string(agree) + "/" + std::to_string(total) + " flags agree" + bad};
  });

  criterion("C2", "index oracle equivalence", [&] { return suite_verdict("index_theorem", 100); });

  criterion("C3", "compact-perturbation invariance", [&] { return suite_verdict("compact_perturbation", 100); });

  criterion("C4", "exact sequence", [&] {
    double worst = 0.0;
    int done = 0, nonzero = 0, redraws = 0;
    for (std::uint64_t t = 0; done < 100; ++t) {
      auto rng = make_rng(20240521, t);
      const Signature s = random_signature(rng, 3, 3);
      std::uniform_int_distribution<int> len(1, 4);
      const int m = len(rng), n = len(rng), p = len(rng);
      auto ranks = [&](int a, int b) {
        std::vector<int> r;
        for (int bs : s.blocks()) r.push_back(std::uniform_int_distribution<int>(0, std::min(a, b) * bs)(rng));
        return r;
      };
      const DenseOperator f = random_operator_with_ranks(s, m, n, ranks(m, n), rng);
      const DenseOperator g = random_operator_with_ranks(s, n, p, ranks(n, p), rng);
      try {
        const auto r = exact_sequence_check(f, g);
        worst = std::max(worst, r.max_residual());
        if (!r.alternating_sum.is_zero() || !r.exact) ++nonzero;
        ++done;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotRegular && e.kind() != ErrorKind::RankAmbiguous) throw;
        ++redraws;
      }
    }
    return Verdict{nonzero == 0 && worst <= kExactSeqResidual,
                   "100 triples, max residual " + fmt(worst) + " (<= " + fmt(kExactSeqResidual) + "), nonzero sums " +
                       std::to_string(nonzero) + ", redraws " + std::to_string(redraws)};
  });

  criterion("C5", "radii of the shift", [&] {
    const ShiftPolynomial s = ShiftPolynomial::shift(sig);
    const RadiiEstimate e = radii_exact(s);
    double err = 0.0;
    for (double v : {e.s_plus, e.s_minus, e.s_phi, e.s}) err = std::max(err, std::abs(v - 1.0));
    const bool identities = e.s_phi == std::min(e.s_plus, e.s_minus) && e.s == std::max(e.s_plus, e.s_minus);
    const RadiiEstimate g = radii_grid(s, -1.0, kGridStep);
    double gerr = 0.0;
    for (double v : {g.s_plus, g.s_minus, g.s_phi, g.s}) gerr = std::max(gerr, std::abs(v - 1.0));
    return Verdict{err <= kMachine && identities && gerr <= kGridStep,
                   "exact error " + fmt(err) + ", grid error " + fmt(gerr) + " (h = 0.05), identities " +
                       (identities ? "exact" : "broken")};
  });

  criterion("C6", "Riesz analyzer", [&] {
    const auto two = AlgebraElement::scalar(sig, 2.0);
    const DenseOperator f = DenseOperator::diagonal(sig, {two, two, AlgebraElement::zero(sig)});
    const RieszReport r = riesz_analyze(f, {0.0, 0.0}, 1.0);
    const bool ok = r.commute_residual <= kCommute && r.t_margin >= kTMargin && r.range_dim == DimensionVector({2, 1}) && r.all();
    return Verdict{ok, "||FK-KF|| " + fmt(r.commute_residual) + ", T margin " + fmt(r.t_margin) + ", d(N) " +
                           r.range_dim.str() + ", clauses " + (r.all() ? "all true" : "not all true")};
  });

  criterion("C7", "power stabilization", [&] { return suite_verdict("power_stabilization", 100); });

  criterion("C8", "refinement diagnostics", [&] {
    std::vector<int> ds;
    for (int d = 1; d <= 64; ++d) ds.push_back(d);
    int exact = 0;
    for (const auto& r : nonclosed_range_family(ds))
      if (r.margin == 1.0 / r.d) ++exact;
    double worst = 0.0;
    const auto rows = nonclosed_sum_family(ds);
    for (const auto& r : rows) worst = std::max(worst, std::abs(*r.angle - std::cos(1.0 / r.d)));
    const bool dec = margins_strictly_decreasing(rows);
    return Verdict{exact == 64 && worst <= kAngle && dec,
                   "range margins exact " + std::to_string(exact) + "/64, angle error " + fmt(worst) +
                       ", squared margins " + (dec ? "strictly decreasing" : "not decreasing")};
  });

  // 100 trials draw 200 submodules; the suite bounds each subspace distance by 1e-9.
  criterion("C9", "module-core oracle", [&] { return suite_verdict("module_oracle", 100); });

  criterion("C10", "Dixmier sampling bound", [&] {
    double worst = -1.0;
    for (int t = 0; t < kInstances; ++t) {
      auto rng = make_rng(20240521 ^ 0xd1c5ULL, static_cast<std::uint64_t>(t));
      const Signature s = random_signature(rng, 3, 3);
      const int amb = std::uniform_int_distribution<int>(1, 3)(rng);
      const Submodule m = random_submodule(s, amb, rng), n = random_submodule(s, amb, rng);
      const double excess = dixmier_sampled(m, n, kSamples, 20240521 + static_cast<std::uint64_t>(t), Exec::Parallel) - dixmier_angle(m, n);
      worst = std::max(worst, excess);
    }
    return Verdict{worst <= kSampling, std::to_string(kInstances) + " x 1e5 samples, max excess over formula " + fmt(worst)};
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
