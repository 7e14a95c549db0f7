#include "hcm/io.hpp"

#include <fstream>
#include <sstream>

#include "hcm/errors.hpp"

namespace hcm::io {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::ParseError, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

long as_long(const json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
  return j.get<long>();
}

json optional_index(const std::optional<IndexValue>& v) { return v ? to_json(*v) : json(nullptr); }

}  // namespace

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Signature& sig) { return json(sig.blocks()); }

json to_json(const AlgebraElement& a) {
  json out = json::array();
  for (const auto& b : a.blocks()) out.push_back(to_json(b));
  return out;
}

json to_json(const DimensionVector& d) { return json(d.counts()); }
json to_json(const IndexValue& v) { return json(v.delta()); }

json to_json(const ModuleVector& x) {
  json entries = json::array();
  for (int j = 0; j < x.length(); ++j) entries.push_back(to_json(x.entry(j)));
  return {{"signature", to_json(x.signature())}, {"length", x.length()}, {"entries", entries}};
}

json to_json(const Submodule& s) {
  return {{"ambient", s.ambient()},
          {"signature", to_json(s.signature())},
          {"basis", to_json(s.complex_basis())},
          {"dim_vector", to_json(s.dim_vector())}};
}

json to_json(const DenseOperator& f) {
  json rows = json::array();
  for (int r = 0; r < f.codomain(); ++r) {
    json row = json::array();
    for (int c = 0; c < f.domain(); ++c) row.push_back(to_json(f.entry(r, c)));
    rows.push_back(std::move(row));
  }
  return {{"signature", to_json(f.signature())}, {"domain", f.domain()}, {"codomain", f.codomain()}, {"entries", rows}};
}

json to_json(const SparseVector& v) {
  json out = json::array();
  for (const auto& e : v) out.push_back({{"target", e.target}, {"coeff", to_json(e.coeff)}});
  return out;
}

json to_json(const SymbolicOperator& f) {
  json terms = json::array();
  for (const auto& t : f.terms())
    terms.push_back({{"m", t.m}, {"r", t.r}, {"a", t.a}, {"b", t.b}, {"j0", t.j0}, {"coeff", to_json(t.coeff)}});
  json ex = json::array();
  for (const auto& [src, edges] : f.exceptions()) ex.push_back({{"source", src}, {"targets", to_json(edges)}});
  return {{"signature", to_json(f.signature())},
          {"terms", terms},
          {"exceptions", ex},
          {"correction", f.correction() ? to_json(*f.correction()) : json(nullptr)}};
}

json to_json(const KernelDescriptor& k) {
  json gens = json::array();
  for (const auto& g : k.generators) gens.push_back(to_json(g));
  json pattern = json::array();
  for (const auto& p : k.pattern)
    pattern.push_back({{"modulus", p.modulus}, {"residue", p.residue}, {"start", p.start}, {"fiber", p.fiber}});
  const auto dv = k.dim_vector();
  return {{"finitely_generated", k.finitely_generated},
          {"counts", k.counts},
          {"generators", gens},
          {"pattern", pattern},
          {"dim_vector", dv ? to_json(*dv) : json(nullptr)}};
}

json to_json(const ClassificationReport& r) {
  return {{"decided", r.decided},
          {"reason", r.reason},
          {"in_MPhi_plus", r.in_MPhi_plus},
          {"in_MPhi_minus", r.in_MPhi_minus},
          {"in_MPhi", r.in_MPhi},
          {"in_MPhi_0", r.in_MPhi_0},
          {"in_MPhi_plus_minus", r.in_MPhi_plus_minus},
          {"in_MPhi_minus_plus", r.in_MPhi_minus_plus},
          {"adjointable", r.adjointable},
          {"index", optional_index(r.index)},
          {"kernel", to_json(r.kernel)},
          {"cokernel", to_json(r.cokernel)}};
}

json to_json(const WeylFlags& w) {
  return {{"gc_weyl", w.gc_weyl},
          {"upper_semi_weyl", w.upper_semi_weyl},
          {"lower_semi_weyl", w.lower_semi_weyl},
          {"kernel_dim", to_json(w.kernel_dim)},
          {"cokernel_dim", to_json(w.cokernel_dim)}};
}

json to_json(const DecompositionWitness& w) {
  return {{"M1", to_json(w.M1.dim_vector())},
          {"N1", to_json(w.N1.dim_vector())},
          {"M2", to_json(w.M2.dim_vector())},
          {"N2", to_json(w.N2.dim_vector())},
          {"iso_margin", w.iso_margin},
          {"offdiag_residual", w.offdiag_residual}};
}

json to_json(const ExactSequenceReport& r) {
  json terms = json::array();
  for (const auto& t : r.terms) terms.push_back(to_json(t));
  return {{"terms", terms},
          {"residuals", r.residuals},
          {"alternating_sum", to_json(r.alternating_sum)},
          {"exact", r.exact},
          {"max_residual", r.max_residual()}};
}

json to_json(const RadiiEstimate& r) {
  json out = {{"s_plus", r.s_plus},   {"s_minus", r.s_minus},     {"s_phi", r.s_phi}, {"s", r.s},
              {"raw_s_phi", r.raw_s_phi}, {"raw_s", r.raw_s}, {"mode", r.mode}};
  if (r.mode == "grid") {
    json iv = json::array();
    for (const auto& i : r.intervals) iv.push_back(json::array({i.lo, i.hi}));
    out["grid_radius"] = r.grid_radius;
    out["grid_step"] = r.grid_step;
    out["intervals"] = iv;
    out["none_failing"] = r.none_failing;
  }
  return out;
}

json to_json(const RieszReport& r) {
  return {{"commute_residual", r.commute_residual},
          {"projector_residual", r.projector_residual},
          {"split_residual", r.split_residual},
          {"t_margin", r.t_margin},
          {"offdiag_residual", r.offdiag_residual},
          {"iso_margin", r.iso_margin},
          {"range_dim", to_json(r.range_dim)},
          {"kernel_dim", to_json(r.kernel_dim)},
          {"kernel_containment", r.kernel_containment},
          {"clauses", {{"a", r.clause_a}, {"b", r.clause_b}, {"c", r.clause_c}, {"d", r.clause_d}, {"e", r.clause_e}}},
          {"nontrivial", r.nontrivial},
          {"all", r.all()},
          {"P0", to_json(r.P0)},
          {"K", to_json(r.K)},
          {"T", to_json(r.T)}};
}

json to_json(const RefinementRow& r) {
  return {{"d", r.d}, {"margin", r.margin}, {"angle", r.angle ? json(*r.angle) : json(nullptr)}};
}

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) bad("complex numbers are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

Mat matrix_from_json(const json& j) {
  if (!j.is_array()) bad("matrix must be an array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows ? static_cast<Eigen::Index>(j[0].is_array() ? j[0].size() : 0) : 0;
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) bad("ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<size_t>(c)]);
  }
  return m;
}

Signature signature_from_json(const json& j) {
  if (!j.is_array() || j.empty()) bad("signature must be a nonempty array of positive integers");
  std::vector<int> b;
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<long>() < 1) bad("signature entries must be positive integers");
    b.push_back(v.get<int>());
  }
  return Signature(b);
}

AlgebraElement element_from_json(const json& j, const Signature& sig) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "1") return AlgebraElement::identity(sig);
    if (s == "0") return AlgebraElement::zero(sig);
    bad("unknown element shorthand '" + s + "'");
  }
  if (j.is_object() && j.contains("central")) {
    std::vector<cplx> c;
    for (const auto& v : j.at("central")) c.push_back(complex_from_json(v));
    if (static_cast<int>(c.size()) != sig.k()) bad("central element needs one coefficient per block");
    return AlgebraElement::central(sig, c);
  }
  if (!j.is_array() || static_cast<int>(j.size()) != sig.k()) bad("element must list one matrix per block");
  std::vector<Mat> blocks;
  for (int i = 0; i < sig.k(); ++i) {
    Mat m = matrix_from_json(j[static_cast<size_t>(i)]);
    if (m.rows() != sig.n(i) || m.cols() != sig.n(i)) bad("element block " + std::to_string(i) + " has the wrong shape");
    blocks.push_back(std::move(m));
  }
  return AlgebraElement(sig, std::move(blocks));
}

ModuleVector vector_from_json(const json& j) {
  const Signature sig = signature_from_json(field(j, "signature"));
  std::vector<AlgebraElement> entries;
  for (const auto& e : field(j, "entries")) entries.push_back(element_from_json(e, sig));
  if (j.contains("length") && as_long(j.at("length"), "length") != static_cast<long>(entries.size()))
    bad("length does not match the entries");
  return ModuleVector(sig, entries);
}

Submodule submodule_from_json(const json& j) {
  const Signature sig = signature_from_json(field(j, "signature"));
  const long ambient = as_long(field(j, "ambient"), "ambient");
  if (ambient < 0) bad("ambient must be nonnegative");
  Mat basis = matrix_from_json(field(j, "basis"));
  const long rows = complex_offset(sig, static_cast<int>(ambient), sig.k());
  if (basis.size() == 0) basis = Mat::Zero(rows, 0);
  Submodule s;
  try {
    s = Submodule::from_complex_basis(sig, static_cast<int>(ambient), basis);
  } catch (const Error& e) {
    bad(std::string("basis does not span a submodule: ") + e.what());
  }
  if (j.contains("dim_vector")) {
    std::vector<long> d;
    for (const auto& v : j.at("dim_vector")) d.push_back(as_long(v, "dim_vector entry"));
    if (!(DimensionVector(d) == s.dim_vector())) bad("dim_vector does not match the basis");
  }
  return s;
}

DenseOperator dense_from_json(const json& j) {
  const Signature sig = signature_from_json(field(j, "signature"));
  const json& rows = field(j, "entries");
  if (!rows.is_array()) bad("entries must be an array of rows");
  std::vector<std::vector<AlgebraElement>> entries;
  for (const auto& row : rows) {
    if (!row.is_array()) bad("entries must be an array of rows");
    std::vector<AlgebraElement> r;
    for (const auto& e : row) r.push_back(element_from_json(e, sig));
    if (!entries.empty() && r.size() != entries.front().size()) bad("ragged entries");
    entries.push_back(std::move(r));
  }
  const long codomain = j.contains("codomain") ? as_long(j.at("codomain"), "codomain") : static_cast<long>(entries.size());
  const long domain = j.contains("domain") ? as_long(j.at("domain"), "domain")
                                           : (entries.empty() ? 0 : static_cast<long>(entries.front().size()));
  if (codomain != static_cast<long>(entries.size()) || (!entries.empty() && domain != static_cast<long>(entries.front().size())))
    bad("domain/codomain do not match the entries");
  if (entries.empty()) return DenseOperator::zero(sig, static_cast<int>(domain), 0);
  return DenseOperator::from_entries(sig, entries);
}

SymbolicOperator symbolic_from_json(const json& j) {
  const Signature sig = j.contains("signature") ? signature_from_json(j.at("signature")) : default_signature();
  if (j.contains("catalog")) {
    if (!j.at("catalog").is_string()) bad("catalog name must be a string");
    CatalogParams params;
    if (j.contains("alpha")) params.alpha = element_from_json(j.at("alpha"), sig);
    return catalog(j.at("catalog").get<std::string>(), sig, params);
  }
  std::vector<ShiftTerm> terms;
  for (const auto& t : field(j, "terms")) {
    ShiftTerm s;
    s.m = as_long(field(t, "m"), "m");
    s.r = as_long(field(t, "r"), "r");
    s.a = as_long(field(t, "a"), "a");
    s.b = as_long(field(t, "b"), "b");
    s.j0 = as_long(field(t, "j0"), "j0");
    s.coeff = element_from_json(field(t, "coeff"), sig);
    terms.push_back(std::move(s));
  }
  std::map<long, SparseVector> ex;
  if (j.contains("exceptions")) {
    for (const auto& e : j.at("exceptions")) {
      SparseVector v;
      for (const auto& t : field(e, "targets"))
        v.push_back({as_long(field(t, "target"), "target"), element_from_json(field(t, "coeff"), sig)});
      ex[as_long(field(e, "source"), "source")] = std::move(v);
    }
  }
  std::optional<DenseOperator> corr;
  if (j.contains("correction") && !j.at("correction").is_null()) {
    json c = j.at("correction");
    if (!c.contains("signature")) c["signature"] = to_json(sig);
    corr = dense_from_json(c);
  }
  return SymbolicOperator(sig, std::move(terms), std::move(ex), std::move(corr));
}

AnyOperator operator_from_json(const json& j) {
  if (!j.is_object()) bad("operator file must hold a JSON object");
  if (j.contains("terms") || j.contains("catalog")) return symbolic_from_json(j);
  if (j.contains("entries")) return dense_from_json(j);
  bad("not an operator: expected 'terms', 'catalog' or 'entries'");
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    bad(path + ": " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::ParseError, "cannot write " + path);
  out << dump(j);
}

}  // namespace hcm::io
