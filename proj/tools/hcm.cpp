#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "hcm/constructions.hpp"
#include "hcm/dense.hpp"
#include "hcm/errors.hpp"
#include "hcm/io.hpp"
#include "hcm/spectra.hpp"
#include "hcm/symbolic.hpp"
#include "hcm/theorem_lab.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;
using namespace hcm;

enum Exit { Ok = 0, InputError = 1, Undecided = 2, SuiteFailed = 3 };

struct RunConfig {
  std::vector<int> signature;
  std::uint64_t seed = SuiteConfig{}.seed;
  double tol_rank = Tolerances{}.rank;
  double grid_radius = -1.0;
  double grid_step = -1.0;
  std::string out;

  Tolerances tol() const {
    Tolerances t;
    t.rank = tol_rank;
    return t;
  }
  Signature sig() const { return signature.empty() ? default_signature() : Signature(signature); }
};

void emit(const RunConfig& rc, const std::string& text) {
  if (rc.out.empty() || rc.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(rc.out);
  if (!f) fail(ErrorKind::ParseError, "cannot write " + rc.out);
  f << text;
}

io::AnyOperator load(const RunConfig& rc, const std::string& path) {
  json j = io::read_file(path);
  if (!rc.signature.empty() && j.is_object() && !j.contains("signature")) j["signature"] = rc.signature;
  return io::operator_from_json(j);
}

int exit_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::RankAmbiguous:
    case ErrorKind::Undecidable:
    case ErrorKind::UndecidedInput:
    case ErrorKind::HypothesisUndecided:
      return Undecided;
    default:
      return InputError;
  }
}

std::string csv_number(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

json dense_report(const DenseOperator& f, const Tolerances& tol) {
  const Submodule ker = kernel(f, tol), cok = cokernel(f, tol);
  json r = {{"kind", "dense"}, {"decided", true}, {"index", io::to_json(index(f, tol))},
            {"kernel", io::to_json(ker.dim_vector())}, {"cokernel", io::to_json(cok.dim_vector())},
            {"weyl", io::to_json(weyl_gc_flags(f, tol))}, {"invertible", ker.is_zero() && cok.is_zero()},
            {"closed_range_margin", closed_range_margin(f, tol)}};
  return r;
}

int cmd_classify(const RunConfig& rc, const std::string& path) {
  const auto op = load(rc, path);
  if (const auto* d = std::get_if<DenseOperator>(&op)) {
    emit(rc, io::dump(dense_report(*d, rc.tol())));
    return Ok;
  }
  const ClassificationReport r = classify_symbolic(std::get<SymbolicOperator>(op), rc.tol());
  emit(rc, io::dump(io::to_json(r)));
  return r.decided ? Ok : Undecided;
}

int cmd_index(const RunConfig& rc, const std::string& path, int window) {
  const auto op = load(rc, path);
  if (const auto* d = std::get_if<DenseOperator>(&op)) {
    emit(rc, io::dump({{"index", io::to_json(index(*d, rc.tol()))}}));
    return Ok;
  }
  const SymbolicOperator& f = std::get<SymbolicOperator>(op);
  const ClassificationReport r = classify_symbolic(f, rc.tol());
  json out = {{"decided", r.decided}, {"in_MPhi", r.in_MPhi}, {"index", r.index ? io::to_json(*r.index) : json(nullptr)}};
  if (r.decided && r.in_MPhi) {
    const int n = window > 0 ? window : faithful_window(f, 4, 256, rc.tol());
    out["window"] = n;
    out["windowed_index"] = io::to_json(index(windowed_truncate(f, n), rc.tol()));
  }
  emit(rc, io::dump(out));
  return r.decided ? Ok : Undecided;
}

int cmd_construct(const RunConfig& rc, const std::string& name, int d, int n, int q, int window,
                  const std::vector<double>& alpha) {
  const Signature sig = rc.sig();
  json out;
  if (name == "range17") {
    out = io::to_json(range17_operator(d));
  } else if (name == "sum18") {
    out = io::to_json(sum18_member(d).F);
  } else if (name == "nilpotent") {
    out = io::to_json(nilpotent_block(sig, n, q));
  } else {
    CatalogParams params;
    if (!alpha.empty()) {
      std::vector<cplx> c(alpha.begin(), alpha.end());
      params.alpha = AlgebraElement::central(sig, c);
    }
    const SymbolicOperator f = catalog(name, sig, params);
    out = window > 0 ? io::to_json(windowed_truncate(f, window)) : io::to_json(f);
  }
  emit(rc, io::dump(out));
  return Ok;
}

std::string alpha_columns(const std::vector<cplx>& a) {
  std::string s;
  for (const auto& z : a) s += csv_number(z.real()) + "," + csv_number(z.imag()) + ",";
  return s;
}

std::string alpha_header(int k) {
  std::string s;
  for (int i = 1; i <= k; ++i) s += "re_c" + std::to_string(i) + ",im_c" + std::to_string(i) + ",";
  return s;
}

int cmd_spectrum(const RunConfig& rc, const std::string& path) {
  const auto op = load(rc, path);
  std::ostringstream csv;
  if (const auto* d = std::get_if<DenseOperator>(&op)) {
    const double radius = rc.grid_radius > 0 ? rc.grid_radius : 1.25 * std::max(1.0, d->norm());
    const double step = rc.grid_step > 0 ? rc.grid_step : 0.05 * radius;
    const CentralGrid grid = CentralGrid::make(d->signature(), radius, step);
    csv << alpha_header(d->signature().k()) << "invertible,eigen,gc_weyl,min_sv\n";
    for (const auto& s : spectrum_partition(*d, grid, Exec::Parallel, rc.tol()))
      csv << alpha_columns(s.alpha) << s.invertible << "," << s.is_eigen << "," << s.gc_weyl << "," << csv_number(s.min_sv) << "\n";
    emit(rc, csv.str());
    return Ok;
  }
  const auto p = as_shift_polynomial(std::get<SymbolicOperator>(op));
  if (!p) fail(ErrorKind::NotRepresentable, "spectrum sweeps need a dense operator or a polynomial in one shift");
  const double radius = rc.grid_radius > 0 ? rc.grid_radius : default_grid_radius(*p);
  const double step = rc.grid_step > 0 ? rc.grid_step : 0.05 * radius;
  const CentralGrid grid = CentralGrid::make(p->sig, radius, step);
  csv << alpha_header(p->sig.k()) << "upper,lower,fredholm,index,min_sv\n";
  for (long g = 0; g < grid.size(); ++g) {
    const std::vector<cplx> a = grid.point(g);
    const ShiftPolynomial shifted = p->minus(a);
    const ClassificationReport r = classify_shift_polynomial(shifted, rc.tol());
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < p->sig.k(); ++i) m = std::min(m, min_modulus_on_circle(shifted.block_poly(i)));
    std::string idx = r.index ? r.index->str() : "";
    csv << alpha_columns(a) << r.in_MPhi_plus << "," << r.in_MPhi_minus << "," << r.in_MPhi << ",\"" << idx << "\","
        << csv_number(m) << "\n";
  }
  emit(rc, csv.str());
  return Ok;
}

int cmd_radii(const RunConfig& rc, const std::string& path, const std::string& mode) {
  const auto op = load(rc, path);
  const auto* f = std::get_if<SymbolicOperator>(&op);
  const auto p = f ? as_shift_polynomial(*f) : std::nullopt;
  if (!p) fail(ErrorKind::NotRepresentable, "radii need a polynomial in one shift");
  const RadiiEstimate r = mode == "grid" ? radii_grid(*p, rc.grid_radius, rc.grid_step, Exec::Parallel, rc.tol()) : radii_exact(*p);
  emit(rc, io::dump(io::to_json(r)));
  return Ok;
}

int cmd_verify(const RunConfig& rc, const std::string& suite, int trials, bool serial) {
  SuiteConfig cfg;
  cfg.seed = rc.seed;
  cfg.trials = trials;
  cfg.tol = rc.tol();
  cfg.exec = serial ? Exec::Serial : Exec::Parallel;
  std::vector<std::string> names = suite == "all" ? suite_names() : std::vector<std::string>{suite};
  json reports = json::array();
  bool ok = true;
  for (const auto& n : names) {
    const SuiteReport r = run_suite(n, cfg);
    ok = ok && r.passed();
    std::cerr << (r.passed() ? "PASS " : "FAIL ") << n << " (" << r.checks << " checks, " << r.failures.size() << " failures)\n";
    reports.push_back(r.to_json());
  }
  emit(rc, io::dump(suite == "all" ? json{{"passed", ok}, {"suites", reports}} : reports[0]));
  return ok ? Ok : SuiteFailed;
}

int cmd_refine(const RunConfig& rc, const std::string& family, int dmax) {
  std::vector<int> ds;
  for (int d = 1; d <= dmax; ++d) ds.push_back(d);
  std::vector<RefinementRow> rows;
  if (family == "range17")
    rows = nonclosed_range_family(ds);
  else if (family == "sum18")
    rows = nonclosed_sum_family(ds);
  else
    fail(ErrorKind::UnknownName, "unknown family '" + family + "' (expected range17 or sum18)");
  std::ostringstream csv;
  csv << "d,margin,angle\n";
  for (const auto& r : rows) csv << r.d << "," << csv_number(r.margin) << "," << (r.angle ? csv_number(*r.angle) : "") << "\n";
  emit(rc, csv.str());
  if (!margins_strictly_decreasing(rows)) {
    std::cerr << "margins are not strictly decreasing\n";
    return SuiteFailed;
  }
  return Ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-Fredholm classification and index computations over finite-dimensional C*-algebras"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig rc;
  app.add_option("--signature", rc.signature, "Block sizes of the coefficient algebra, e.g. 2,1")->delimiter(',');
  app.add_option("--seed", rc.seed, "Seed for randomized suites");
  app.add_option("--tol-rank", rc.tol_rank, "Relative singular-value threshold for rank decisions")->check(CLI::PositiveNumber);
  app.add_option("--grid-radius", rc.grid_radius, "Radius of the central grid");
  app.add_option("--grid-step", rc.grid_step, "Step of the central grid");
  app.add_option("--out", rc.out, "Output file (stdout when omitted)");

  std::string file, name, suite = "all", family, mode = "exact";
  int d = 4, n = 3, q = 2, window = 0, trials = SuiteConfig{}.trials, dmax = 16;
  bool serial = false;
  std::vector<double> alpha;

  auto* classify = app.add_subcommand("classify", "Classify an operator file");
  classify->add_option("file", file, "Operator JSON")->required();
  auto* idx = app.add_subcommand("index", "Index of an operator file");
  idx->add_option("file", file, "Operator JSON")->required();
  idx->add_option("--window", window, "Input window for the truncated index (searched when omitted)");
  auto* construct = app.add_subcommand("construct", "Emit a catalog or family operator as JSON");
  construct->add_option("name", name, "Catalog name, range17, sum18 or nilpotent")->required();
  construct->add_option("--d", d, "Family parameter")->check(CLI::PositiveNumber);
  construct->add_option("--n", n, "Nilpotent block length")->check(CLI::PositiveNumber);
  construct->add_option("--q", q, "Nilpotency order")->check(CLI::PositiveNumber);
  construct->add_option("--window", window, "Emit the windowed dense truncation instead");
  construct->add_option("--alpha", alpha, "Central weight for ex9, one real value per block")->delimiter(',');
  auto* spectrum = app.add_subcommand("spectrum", "Sweep central perturbations on a grid (CSV)");
  spectrum->add_option("file", file, "Operator JSON")->required();
  auto* radii_cmd = app.add_subcommand("radii", "Spectral radii of a shift polynomial (JSON)");
  radii_cmd->add_option("file", file, "Operator JSON")->required();
  radii_cmd->add_option("--mode", mode, "exact or grid")->check(CLI::IsMember({"exact", "grid"}));
  auto* verify = app.add_subcommand("verify", "Run property suites");
  verify->add_option("suite", suite, "Suite name or all");
  verify->add_option("--trials", trials, "Random trials per suite")->check(CLI::PositiveNumber);
  verify->add_flag("--serial", serial, "Run trials serially");
  auto* refine = app.add_subcommand("refine", "Refinement study for a non-closed family (CSV)");
  refine->add_option("family", family, "range17 or sum18")->required();
  refine->add_option("--dmax", dmax, "Largest parameter")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Ok : InputError;
  }

  try {
    if (*classify) return cmd_classify(rc, file);
    if (*idx) return cmd_index(rc, file, window);
    if (*construct) return cmd_construct(rc, name, d, n, q, window, alpha);
    if (*spectrum) return cmd_spectrum(rc, file);
    if (*radii_cmd) return cmd_radii(rc, file, mode);
    if (*verify) return cmd_verify(rc, suite, trials, serial);
    if (*refine) return cmd_refine(rc, family, dmax);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_for(e);
  } catch (const json::exception& e) {
    std::cerr << "error: ParseError: " << e.what() << "\n";
    return InputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return InputError;
  }
  return InputError;
}
