#include "hcm/symbolic.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>

#include "hcm/errors.hpp"
#include "hcm/linalg.hpp"

namespace hcm {

namespace {

constexpr size_t kMaxTerms = 512;
constexpr long kMaxWindow = 2048;
constexpr size_t kMaxExceptions = 100000;

long pmod(long x, long m) {
  const long r = x % m;
  return r < 0 ? r + m : r;
}

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long ceil_div(long a, long b) { return -floor_div(-a, b); }

// Inverse of a modulo m for coprime a, m.
long mod_inverse(long a, long m) {
  if (m == 1) return 0;
  long t = 0, nt = 1, r = m, nr = pmod(a, m);
  while (nr != 0) {
    const long q = r / nr;
    std::tie(t, nt) = std::make_tuple(nt, t - q * nt);
    std::tie(r, nr) = std::make_tuple(nr, r - q * nr);
  }
  return pmod(t, m);
}

SparseVector merge(const std::vector<Edge>& edges) {
  std::map<long, AlgebraElement> acc;
  for (const auto& e : edges) {
    auto it = acc.find(e.target);
    if (it == acc.end())
      acc.emplace(e.target, e.coeff);
    else
      it->second = it->second + e.coeff;
  }
  SparseVector out;
  for (auto& [t, c] : acc)
    if (!c.is_zero()) out.push_back({t, c});
  return out;
}

std::vector<AlgebraElement> diagonal_units(const Signature& sig) {
  std::vector<AlgebraElement> out;
  for (int i = 0; i < sig.k(); ++i)
    for (int r = 0; r < sig.n(i); ++r) out.push_back(AlgebraElement::matrix_unit(sig, i, r, r));
  return out;
}

ShiftTerm make_term(long m, long r, long a, long b, long j0, const AlgebraElement& c) {
  ShiftTerm t;
  t.m = m;
  t.r = r;
  t.a = a;
  t.b = b;
  t.j0 = j0;
  t.coeff = c;
  return t;
}

}  // namespace

bool ShiftTerm::applies(long j) const { return j >= 1 && j >= j0 && pmod(j - r, m) == 0; }

long ShiftTerm::first_source() const {
  const long start = std::max<long>(j0, 1);
  return start + pmod(r - start, m);
}

std::optional<long> ShiftTerm::source_of(long t) const {
  if (pmod(t - b, a) != 0) return std::nullopt;
  const long s = (t - b) / a;
  const long j = m * s + r;
  if (j < first_source()) return std::nullopt;
  return j;
}

SymbolicOperator::SymbolicOperator(Signature sig, std::vector<ShiftTerm> terms, std::map<long, SparseVector> exceptions,
                                   std::optional<DenseOperator> correction)
    : sig_(std::move(sig)), terms_(std::move(terms)), exceptions_(std::move(exceptions)), correction_(std::move(correction)) {
  validate();
}

void SymbolicOperator::validate() const {
  for (const auto& t : terms_) {
    if (t.m < 1 || t.a < 1 || t.r < 0 || t.r >= t.m) fail(ErrorKind::ShapeMismatch, "shift term needs m ≥ 1, a ≥ 1, 0 ≤ r < m");
    if (!(t.coeff.signature() == sig_)) fail(ErrorKind::SignatureMismatch, "term coefficient signature");
    if (t.first_target() < 1) fail(ErrorKind::ShapeMismatch, "shift term reaches a target below 1");
  }
  for (const auto& [j, edges] : exceptions_) {
    if (j < 1) fail(ErrorKind::ShapeMismatch, "exception source below 1");
    for (const auto& e : edges) {
      if (e.target < 1) fail(ErrorKind::ShapeMismatch, "exception target below 1");
      if (!(e.coeff.signature() == sig_)) fail(ErrorKind::SignatureMismatch, "exception coefficient signature");
    }
  }
  if (correction_) {
    if (!(correction_->signature() == sig_)) fail(ErrorKind::SignatureMismatch, "correction signature");
    if (correction_->domain() != correction_->codomain()) fail(ErrorKind::ShapeMismatch, "correction must be square");
  }
}

long SymbolicOperator::max_exception_source() const { return exceptions_.empty() ? 0 : exceptions_.rbegin()->first; }

SparseVector SymbolicOperator::eval_principal(long j) const {
  if (auto it = exceptions_.find(j); it != exceptions_.end()) return merge(it->second);
  std::vector<Edge> edges;
  for (const auto& t : terms_)
    if (t.applies(j)) edges.push_back({t.target(j), t.coeff});
  return merge(edges);
}

SparseVector SymbolicOperator::eval_basis(long j) const {
  SparseVector edges = eval_principal(j);
  const int w = correction_width();
  if (j <= w) {
    for (int t = 1; t <= w; ++t) {
      AlgebraElement c = correction_->entry(t - 1, static_cast<int>(j - 1));
      if (!c.is_zero()) edges.push_back({t, c});
    }
    edges = merge(edges);
  }
  return edges;
}

std::vector<Edge> SymbolicOperator::edges_into(long t) const {
  std::vector<Edge> out;
  for (const auto& term : terms_) {
    auto j = term.source_of(t);
    if (j && !exceptions_.count(*j)) out.push_back({*j, term.coeff});
  }
  for (const auto& [j, edges] : exceptions_)
    for (const auto& e : edges)
      if (e.target == t) out.push_back({j, e.coeff});
  return merge(out);
}

double SymbolicOperator::coefficient_scale() const {
  double s = 0.0;
  for (const auto& t : terms_) s = std::max(s, t.coeff.norm());
  for (const auto& [j, edges] : exceptions_)
    for (const auto& e : edges) s = std::max(s, e.coeff.norm());
  if (correction_) s = std::max(s, correction_->norm());
  return s;
}

long SymbolicOperator::source_period() const {
  long l = 1;
  for (const auto& t : terms_) l = std::lcm(l, t.m);
  return l;
}

long SymbolicOperator::target_period() const {
  long l = 1;
  for (const auto& t : terms_) l = std::lcm(l, t.a);
  return l;
}

long SymbolicOperator::source_bound() const {
  long b = std::max<long>(max_exception_source(), correction_width());
  for (const auto& t : terms_) b = std::max(b, t.first_source());
  return b + 1;
}

long SymbolicOperator::target_bound() const {
  long b = correction_width();
  for (const auto& t : terms_) b = std::max(b, t.first_target());
  for (const auto& [j, edges] : exceptions_) {
    for (const auto& e : edges) b = std::max(b, e.target);
    for (const auto& t : terms_)
      if (t.applies(j)) b = std::max(b, t.target(j));
  }
  return b + 1;
}

SymbolicOperator SymbolicOperator::plus_correction(const DenseOperator& k) const {
  if (k.domain() != k.codomain()) fail(ErrorKind::ShapeMismatch, "correction must be square");
  const int w = std::max(correction_width(), k.domain());
  DenseOperator sum = DenseOperator::zero(sig_, w, w);
  auto add = [&](const DenseOperator& d) {
    for (int i = 0; i < sig_.k(); ++i) {
      const int n = sig_.n(i);
      sum.block(i).topLeftCorner(d.codomain() * n, d.domain() * n) += d.block(i);
    }
  };
  if (correction_) add(*correction_);
  add(k);
  return SymbolicOperator(sig_, terms_, exceptions_, std::move(sum));
}

bool equivalent(const SymbolicOperator& f, const SymbolicOperator& g, double tol) {
  if (!(f.signature() == g.signature())) return false;
  const long bound = std::max(f.source_bound(), g.source_bound());
  const long period = std::lcm(f.source_period(), g.source_period());
  const double scale = std::max({1.0, f.coefficient_scale(), g.coefficient_scale()});
  for (long j = 1; j <= bound + 3 * period; ++j) {
    const SparseVector a = f.eval_basis(j);
    const SparseVector b = g.eval_basis(j);
    std::map<long, AlgebraElement> diff;
    for (const auto& e : a) diff.emplace(e.target, e.coeff);
    for (const auto& e : b) {
      auto it = diff.find(e.target);
      if (it == diff.end())
        diff.emplace(e.target, -e.coeff);
      else
        it->second = it->second - e.coeff;
    }
    for (const auto& [t, c] : diff)
      if (c.norm() > tol * scale) return false;
  }
  return true;
}

SymbolicOperator adjoint_symbolic(const SymbolicOperator& f) {
  std::vector<ShiftTerm> terms;
  for (const auto& t : f.terms()) {
    const long rr = pmod(t.b, t.a);
    const long sb = (t.b - rr) / t.a;
    terms.push_back(make_term(t.a, rr, t.m, t.r - t.m * sb, t.first_target(), star(t.coeff)));
  }
  std::set<long> explicit_sources;
  for (const auto& [j, edges] : f.exceptions()) {
    for (const auto& e : edges) explicit_sources.insert(e.target);
    for (const auto& t : f.terms())
      if (t.applies(j)) explicit_sources.insert(t.target(j));
  }
  if (explicit_sources.size() > kMaxExceptions) fail(ErrorKind::NotRepresentable, "adjoint exception table too large");
  std::map<long, SparseVector> exceptions;
  for (long t : explicit_sources) {
    SparseVector col;
    for (const auto& e : f.edges_into(t)) col.push_back({e.target, star(e.coeff)});
    exceptions.emplace(t, std::move(col));
  }
  std::optional<DenseOperator> corr;
  if (f.correction()) corr = adjoint(*f.correction());
  return SymbolicOperator(f.signature(), std::move(terms), std::move(exceptions), std::move(corr));
}

DenseOperator dense_window(const SymbolicOperator& f, int rows, int cols, bool with_correction) {
  DenseOperator d = DenseOperator::zero(f.signature(), cols, rows);
  for (int j = 1; j <= cols; ++j) {
    const SparseVector edges = with_correction ? f.eval_basis(j) : f.eval_principal(j);
    for (const auto& e : edges)
      if (e.target <= rows) d.set_entry(static_cast<int>(e.target - 1), j - 1, e.coeff);
  }
  return d;
}

SymbolicOperator compose_symbolic(const SymbolicOperator& g, const SymbolicOperator& f) {
  if (!(g.signature() == f.signature())) fail(ErrorKind::SignatureMismatch, "operators over different algebras");
  // Term part: T2 ∘ T1 restricted to the residue class where T1's image meets T2's domain.
  std::map<std::tuple<long, long, long, long, long>, AlgebraElement> merged;
  for (const auto& t1 : f.terms()) {
    for (const auto& t2 : g.terms()) {
      const long gd = std::gcd(t1.a, t2.m);
      const long diff = t2.r - t1.b;
      if (pmod(diff, gd) != 0) continue;
      const long m2g = t2.m / gd;
      const long q = pmod((diff / gd) * mod_inverse(t1.a / gd, m2g), m2g);
      const long M = t1.m * m2g;
      const long R0 = t1.m * q + t1.r;
      const long c0 = (t1.a * q + t1.b - t2.r) / t2.m;
      const long A = t2.a * t1.a / gd;
      const long B = t2.a * c0 + t2.b;
      const long tau0 = t1.a * q + t1.b;
      const long u = std::max({ceil_div(t1.first_source() - R0, M), ceil_div(t2.first_source() - tau0, t1.a * m2g),
                               ceil_div(1 - R0, M)});
      const long j0 = M * u + R0;
      const auto key = std::make_tuple(M, R0, A, B, j0);
      const AlgebraElement c = t2.coeff * t1.coeff;
      auto it = merged.find(key);
      if (it == merged.end())
        merged.emplace(key, c);
      else
        it->second = it->second + c;
    }
  }
  std::vector<ShiftTerm> terms;
  for (const auto& [key, c] : merged) {
    if (c.is_zero()) continue;
    const auto& [M, R0, A, B, j0] = key;
    terms.push_back(make_term(M, R0, A, B, j0, c));
  }
  if (terms.size() > kMaxTerms) fail(ErrorKind::NotRepresentable, "composition exceeds the term budget");

  // Explicit sources: F exceptions and sources whose image meets a G exception.
  std::set<long> explicit_sources;
  for (const auto& [j, edges] : f.exceptions()) explicit_sources.insert(j);
  for (const auto& [tau, edges] : g.exceptions())
    for (const auto& e : f.edges_into(tau)) explicit_sources.insert(e.target);
  if (explicit_sources.size() > kMaxExceptions) fail(ErrorKind::NotRepresentable, "exception table too large");
  std::map<long, SparseVector> exceptions;
  for (long j : explicit_sources) {
    std::vector<Edge> out;
    for (const auto& e1 : f.eval_principal(j))
      for (const auto& e2 : g.eval_principal(e1.target)) out.push_back({e2.target, e2.coeff * e1.coeff});
    exceptions.emplace(j, merge(out));
  }

  // Correction: (G0 + KG)(F0 + KF) − G0 F0, supported on a finite square window.
  std::optional<DenseOperator> corr;
  const int wf = f.correction_width();
  const int wg = g.correction_width();
  if (wf > 0 || wg > 0) {
    long w = std::max(wf, wg);
    for (long tau = 1; tau <= wf; ++tau)
      for (const auto& e : g.eval_principal(tau)) w = std::max(w, e.target);
    for (long t = 1; t <= wg; ++t)
      for (const auto& e : f.edges_into(t)) w = std::max(w, e.target);
    if (w > kMaxWindow) fail(ErrorKind::NotRepresentable, "correction window too large");
    long mid = w;
    for (long j = 1; j <= w; ++j)
      for (const auto& e : f.eval_basis(j)) mid = std::max(mid, e.target);
    if (mid > 4 * kMaxWindow) fail(ErrorKind::NotRepresentable, "intermediate window too large");
    const int W = static_cast<int>(w), T = static_cast<int>(mid);
    const DenseOperator full = compose(dense_window(g, W, T, true), dense_window(f, T, W, true));
    const DenseOperator principal = compose(dense_window(g, W, T, false), dense_window(f, T, W, false));
    DenseOperator k = full - principal;
    if (k.norm() > 0.0) corr = std::move(k);
  }
  return SymbolicOperator(f.signature(), std::move(terms), std::move(exceptions), std::move(corr));
}

SymbolicOperator power_symbolic(const SymbolicOperator& f, int m) {
  if (m < 0) fail(ErrorKind::ShapeMismatch, "negative power");
  SymbolicOperator out = catalog("I", f.signature());
  for (int i = 0; i < m; ++i) out = compose_symbolic(f, out);
  return out;
}

std::vector<std::string> catalog_names() {
  return {"ex1", "ex2", "ex3", "ex3d", "ex4", "ex5", "ex6", "ex6d", "ex7", "ex7d",
          "ex8", "ex8d", "ex9", "ex15", "ex15f", "ex15g", "L", "S", "I"};
}

SymbolicOperator catalog(const std::string& name, const Signature& sig, const CatalogParams& params) {
  const AlgebraElement one = AlgebraElement::identity(sig);
  using T = std::vector<ShiftTerm>;
  if (name == "I") return SymbolicOperator(sig, T{make_term(1, 0, 1, 0, 1, one)});
  if (name == "S") return SymbolicOperator(sig, T{make_term(1, 0, 1, 1, 1, one)});
  if (name == "L") return SymbolicOperator(sig, T{make_term(1, 0, 1, -1, 2, one)});
  if (name == "ex1") return SymbolicOperator(sig, T{make_term(1, 0, 2, 0, 1, one)});
  if (name == "ex2") return SymbolicOperator(sig, T{make_term(2, 0, 1, 0, 1, one)});
  if (name == "ex3") return SymbolicOperator(sig, T{make_term(1, 0, 3, -1, 1, one)});
  if (name == "ex3d") return adjoint_symbolic(catalog("ex3", sig, params));
  if (name == "ex4") {
    if (sig.k() < 2) fail(ErrorKind::SignatureMismatch, "ex4 needs at least two central summands");
    std::vector<cplx> c1(static_cast<size_t>(sig.k()), 0.0), c2(static_cast<size_t>(sig.k()), 0.0);
    const int half = (sig.k() + 1) / 2;
    for (int i = 0; i < sig.k(); ++i) (i < half ? c1 : c2)[static_cast<size_t>(i)] = 1.0;
    return SymbolicOperator(sig, T{make_term(1, 0, 2, -1, 1, AlgebraElement::central(sig, c1)),
                                   make_term(1, 0, 2, 0, 1, AlgebraElement::central(sig, c2))});
  }
  if (name == "ex5") return adjoint_symbolic(catalog("ex4", sig, params));
  if (name == "ex6") {
    int big = -1;
    for (int i = 0; i < sig.k(); ++i)
      if (sig.n(i) >= 2) big = i;
    if (big < 0) fail(ErrorKind::SignatureMismatch, "ex6 needs a matrix block of size at least 2");
    AlgebraElement p = AlgebraElement::zero(sig);
    for (int i = 0; i < sig.k(); ++i) p.block(i)(0, 0) = 1.0;
    return SymbolicOperator(sig, T{make_term(1, 0, 2, -1, 1, p), make_term(1, 0, 2, 0, 1, one - p)});
  }
  if (name == "ex6d") return adjoint_symbolic(catalog("ex6", sig, params));
  if (name == "ex7") {
    // Source j spreads over K consecutive targets through a partition of unity into
    // minimal projections; even sources use the partition rotated by one.
    const auto units = diagonal_units(sig);
    const long K = static_cast<long>(units.size());
    T terms;
    for (long s = 1; s <= K; ++s) {
      terms.push_back(make_term(2, 1, 2 * K, s, 1, units[static_cast<size_t>(s - 1)]));
      terms.push_back(make_term(2, 0, 2 * K, s - K, 2, units[static_cast<size_t>(s % K)]));
    }
    return SymbolicOperator(sig, std::move(terms));
  }
  if (name == "ex7d") return adjoint_symbolic(catalog("ex7", sig, params));
  if (name == "ex8") {
    // The permutation cycling each triple (3s+1, 3s+2, 3s+3).
    return SymbolicOperator(sig, T{make_term(3, 1, 3, 2, 1, one), make_term(3, 2, 3, 3, 1, one),
                                   make_term(3, 0, 3, -2, 3, one)});
  }
  if (name == "ex8d") return adjoint_symbolic(catalog("ex8", sig, params));
  if (name == "ex9") {
    const AlgebraElement alpha = params.alpha.value_or(AlgebraElement::scalar(sig, 2.0));
    (void)invert(alpha);
    return SymbolicOperator(sig, T{make_term(1, 0, 1, 0, 1, alpha)});
  }
  if (name == "ex15" || name == "ex15f") return SymbolicOperator(sig, T{make_term(1, 0, 2, -1, 1, one)});
  if (name == "ex15g") return SymbolicOperator(sig, T{make_term(2, 1, 1, 1, 1, one)});
  fail(ErrorKind::UnknownName, "no catalog operator named '" + name + "'");
}

// ---------------------------------------------------------------------------
// Classification

namespace {

struct Analysis {
  const SymbolicOperator& f;
  const Tolerances& tol;
  double scale;
  std::string undecided;

  bool orthogonal_rows(const std::vector<Edge>& edges) const {
    for (size_t a = 0; a < edges.size(); ++a)
      for (size_t b = a + 1; b < edges.size(); ++b)
        for (int i = 0; i < f.signature().k(); ++i) {
          const double r = spectral_norm(edges[a].coeff.block(i) * edges[b].coeff.block(i).adjoint());
          if (r > tol.rank * scale * scale) return false;
        }
    return true;
  }

  bool orthogonal_ranges(const std::vector<Edge>& edges) const {
    for (size_t a = 0; a < edges.size(); ++a)
      for (size_t b = a + 1; b < edges.size(); ++b)
        for (int i = 0; i < f.signature().k(); ++i) {
          const double r = spectral_norm(edges[a].coeff.block(i).adjoint() * edges[b].coeff.block(i));
          if (r > tol.rank * scale * scale) return false;
        }
    return true;
  }

  // Null space per block of the map x ↦ (γ_t x)_t (kernel side, stacked rows) or
  // y ↦ (γ_j^* y)_j (cokernel side).
  std::vector<Mat> fiber_null(const std::vector<Edge>& edges, bool cokernel_side) const {
    std::vector<Mat> out;
    for (int i = 0; i < f.signature().k(); ++i) {
      const int n = f.signature().n(i);
      Mat stacked(static_cast<Eigen::Index>(edges.size()) * n, n);
      for (size_t e = 0; e < edges.size(); ++e)
        stacked.middleRows(static_cast<Eigen::Index>(e) * n, n) =
            cokernel_side ? Mat(edges[e].coeff.block(i).adjoint()) : edges[e].coeff.block(i);
      out.push_back(edges.empty() ? Mat(Mat::Identity(n, n)) : null_basis(stacked, tol, scale));
    }
    return out;
  }
};

SparseVector unit_generator(const Signature& sig, int block, const std::vector<std::pair<long, Vec>>& parts) {
  SparseVector g;
  for (const auto& [idx, v] : parts) {
    AlgebraElement c = AlgebraElement::zero(sig);
    c.block(block).col(0) = v;
    if (!c.is_zero()) g.push_back({idx, c});
  }
  return g;
}

// Shared kernel/cokernel computation. On the cokernel side sources and targets
// swap roles and coefficients are adjoints.
KernelDescriptor analyse_side(Analysis& an, bool cok) {
  const SymbolicOperator& f = an.f;
  const Signature& sig = f.signature();
  const int k = sig.k();
  const int w = f.correction_width();

  auto out_edges = [&](long x) -> std::vector<Edge> {
    return cok ? f.edges_into(x) : std::vector<Edge>(f.eval_principal(x));
  };
  auto in_edges = [&](long y) -> std::vector<Edge> {
    return cok ? std::vector<Edge>(f.eval_principal(y)) : f.edges_into(y);
  };

  // Indices coupled to the correction window.
  std::set<long> coupled;
  for (long x = 1; x <= w; ++x) coupled.insert(x);
  for (long y = 1; y <= w; ++y)
    for (const auto& e : in_edges(y)) coupled.insert(e.target);

  long bound = cok ? f.target_bound() : f.source_bound();
  if (!coupled.empty()) bound = std::max(bound, *coupled.rbegin() + 1);
  const long period = cok ? f.target_period() : f.source_period();

  KernelDescriptor d;
  d.counts.assign(static_cast<size_t>(k), 0);

  auto check = [&](long x, const std::vector<Edge>& edges) {
    const bool ok = cok ? an.orthogonal_ranges(edges) : an.orthogonal_rows(edges);
    if (!ok && an.undecided.empty())
      an.undecided = std::string(cok ? "target " : "source ") + std::to_string(x) +
                     ": coefficients are not mutually orthogonal";
    return ok;
  };

  for (long x = 1; x < bound; ++x) {
    if (coupled.count(x)) continue;
    const auto edges = out_edges(x);
    check(x, edges);
    const auto nulls = an.fiber_null(edges, cok);
    for (int i = 0; i < k; ++i)
      for (Eigen::Index c = 0; c < nulls[i].cols(); ++c) {
        d.counts[i] += 1;
        d.generators.push_back(unit_generator(sig, i, {{x, nulls[i].col(c)}}));
      }
  }
  for (long rho = 0; rho < period; ++rho) {
    const long x = bound + pmod(rho - bound, period);
    const auto edges = out_edges(x);
    check(x, edges);
    const auto nulls = an.fiber_null(edges, cok);
    FiberPattern p{period, pmod(x, period), x, std::vector<long>(static_cast<size_t>(k), 0)};
    bool any = false;
    for (int i = 0; i < k; ++i) {
      p.fiber[i] = nulls[i].cols();
      if (p.fiber[i] > 0) {
        any = true;
        d.counts[i] = -1;
      }
    }
    if (any) d.pattern.push_back(std::move(p));
  }
  // Orthogonality on the other side is what makes far edges decouple; check it on
  // the indices the coupled block touches.
  for (long x : coupled) {
    check(x, out_edges(x));
    for (const auto& e : out_edges(x)) {
      const auto back = in_edges(e.target);
      const bool ok = cok ? an.orthogonal_rows(back) : an.orthogonal_ranges(back);
      if (!ok && an.undecided.empty()) an.undecided = "coefficients meeting the correction window are not orthogonal";
    }
  }

  if (!coupled.empty()) {
    // Finite system on the coupled indices: full equations inside the window,
    // per-edge equations outside it.
    std::vector<long> idx(coupled.begin(), coupled.end());
    std::map<long, Eigen::Index> pos;
    for (size_t p = 0; p < idx.size(); ++p) pos[idx[p]] = static_cast<Eigen::Index>(p);
    const double sys_scale = std::max(an.scale, f.correction() ? f.correction()->norm() : 0.0);
    for (int i = 0; i < k; ++i) {
      const int n = sig.n(i);
      std::vector<Mat> rows;
      // Window equations, one block row per y ≤ w.
      for (long y = 1; y <= w; ++y) {
        Mat row = Mat::Zero(n, static_cast<Eigen::Index>(idx.size()) * n);
        if (!cok) {
          for (long x : idx)
            for (const auto& e : f.eval_basis(x))
              if (e.target == y) row.middleCols(pos[x] * n, n) += e.coeff.block(i);
        } else {
          for (const auto& e : f.eval_basis(y))
            if (pos.count(e.target)) row.middleCols(pos[e.target] * n, n) += e.coeff.block(i).adjoint();
        }
        rows.push_back(std::move(row));
      }
      for (long x : idx)
        for (const auto& e : out_edges(x)) {
          if (e.target <= w) continue;
          Mat row = Mat::Zero(n, static_cast<Eigen::Index>(idx.size()) * n);
          row.middleCols(pos[x] * n, n) = cok ? Mat(e.coeff.block(i).adjoint()) : e.coeff.block(i);
          rows.push_back(std::move(row));
        }
      Eigen::Index total = 0;
      for (const auto& r : rows) total += r.rows();
      Mat sys(total, static_cast<Eigen::Index>(idx.size()) * n);
      Eigen::Index at = 0;
      for (const auto& r : rows) {
        sys.middleRows(at, r.rows()) = r;
        at += r.rows();
      }
      const Mat nul = total ? null_basis(sys, an.tol, sys_scale) : Mat(Mat::Identity(sys.cols(), sys.cols()));
      for (Eigen::Index c = 0; c < nul.cols(); ++c) {
        if (d.counts[i] >= 0) d.counts[i] += 1;
        std::vector<std::pair<long, Vec>> parts;
        for (long x : idx) parts.push_back({x, nul.col(c).segment(pos[x] * n, n)});
        d.generators.push_back(unit_generator(sig, i, parts));
      }
    }
  }

  d.finitely_generated = std::all_of(d.counts.begin(), d.counts.end(), [](long c) { return c >= 0; });
  if (!d.finitely_generated) d.generators.clear();
  return d;
}

}  // namespace

std::optional<DimensionVector> KernelDescriptor::dim_vector() const {
  if (!finitely_generated) return std::nullopt;
  return DimensionVector(counts);
}

bool ClassificationReport::same_flags(const ClassificationReport& o) const {
  return decided == o.decided && in_MPhi_plus == o.in_MPhi_plus && in_MPhi_minus == o.in_MPhi_minus &&
         in_MPhi == o.in_MPhi && in_MPhi_0 == o.in_MPhi_0 && in_MPhi_plus_minus == o.in_MPhi_plus_minus &&
         in_MPhi_minus_plus == o.in_MPhi_minus_plus && index == o.index;
}

ClassificationReport classify_symbolic(const SymbolicOperator& f, const Tolerances& tol) {
  ClassificationReport rep;
  Analysis an{f, tol, f.coefficient_scale(), {}};
  try {
    rep.kernel = analyse_side(an, false);
    rep.cokernel = analyse_side(an, true);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::RankAmbiguous) throw;
    rep.reason = e.what();
    return rep;
  }
  if (!an.undecided.empty()) {
    rep.reason = an.undecided;
    rep.kernel = {};
    rep.cokernel = {};
    return rep;
  }
  rep.decided = true;
  rep.adjointable = true;
  rep.in_MPhi_plus = rep.kernel.finitely_generated;
  rep.in_MPhi_minus = rep.cokernel.finitely_generated;
  rep.in_MPhi = rep.in_MPhi_plus && rep.in_MPhi_minus;
  if (rep.in_MPhi) {
    rep.index = *rep.kernel.dim_vector() - *rep.cokernel.dim_vector();
    rep.in_MPhi_0 = rep.index->is_zero();
  }
  const int k = f.signature().k();
  bool ker_le_cok = true, cok_le_ker = true;
  for (int i = 0; i < k; ++i) {
    const long kc = rep.kernel.counts[i], cc = rep.cokernel.counts[i];
    if (kc < 0 || (cc >= 0 && kc > cc)) ker_le_cok = false;
    if (cc < 0 || (kc >= 0 && cc > kc)) cok_le_ker = false;
  }
  rep.in_MPhi_plus_minus = rep.in_MPhi_plus && ker_le_cok;
  rep.in_MPhi_minus_plus = rep.in_MPhi_minus && cok_le_ker;
  return rep;
}

std::vector<long> kernel_fiber(const SymbolicOperator& f, long j, const Tolerances& tol) {
  Analysis an{f, tol, f.coefficient_scale(), {}};
  std::vector<long> out;
  for (const auto& m : an.fiber_null(f.eval_principal(j), false)) out.push_back(m.cols());
  return out;
}

std::vector<long> cokernel_fiber(const SymbolicOperator& f, long t, const Tolerances& tol) {
  Analysis an{f, tol, f.coefficient_scale(), {}};
  std::vector<long> out;
  for (const auto& m : an.fiber_null(f.edges_into(t), true)) out.push_back(m.cols());
  return out;
}

// ---------------------------------------------------------------------------
// Truncation

namespace {

void require_window(const SymbolicOperator& f, long n) {
  const long need = std::max<long>(f.max_exception_source(), f.correction_width());
  if (n < need || n < 1)
    fail(ErrorKind::WindowTooSmall, "window " + std::to_string(n) + " is below " + std::to_string(std::max(need, 1L)));
}

int output_length(const SymbolicOperator& f, int n_in) {
  long n_out = std::max(1, f.correction_width());
  for (long j = 1; j <= n_in; ++j)
    for (const auto& e : f.eval_basis(j)) n_out = std::max(n_out, e.target);
  return static_cast<int>(n_out);
}

}  // namespace

DenseOperator truncate(const SymbolicOperator& f, int n) {
  require_window(f, n);
  return dense_window(f, n, n, true);
}

DenseOperator windowed_truncate(const SymbolicOperator& f, int n_in) {
  require_window(f, n_in);
  return dense_window(f, output_length(f, n_in), n_in, true);
}

WindowDiagnostic window_diagnostic(const SymbolicOperator& f, int n_in, const Tolerances& tol) {
  require_window(f, n_in);
  WindowDiagnostic d;
  d.n_in = n_in;
  d.n_out = output_length(f, n_in);
  d.decoupled = true;
  for (long t = 1; t <= d.n_out && d.decoupled; ++t)
    for (const auto& e : f.edges_into(t))
      if (e.target > n_in) d.decoupled = false;
  if (!d.decoupled) return d;
  const ClassificationReport rep = classify_symbolic(f, tol);
  if (!rep.decided || !rep.in_MPhi) return d;
  auto inside = [](const std::vector<SparseVector>& gens, long limit) {
    for (const auto& g : gens)
      for (const auto& e : g)
        if (e.target > limit) return false;
    return true;
  };
  d.index_faithful = inside(rep.kernel.generators, n_in) && inside(rep.cokernel.generators, d.n_out);
  return d;
}

int faithful_window(const SymbolicOperator& f, int start, int limit, const Tolerances& tol) {
  const int first = std::max<int>({start, 1, static_cast<int>(f.max_exception_source()), f.correction_width()});
  for (int n = first; n <= limit; ++n)
    if (window_diagnostic(f, n, tol).index_faithful) return n;
  fail(ErrorKind::WindowTooSmall, "no index-faithful window up to " + std::to_string(limit));
}

}  // namespace hcm
