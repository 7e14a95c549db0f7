#include "hcm/constructions.hpp"

#include <cmath>

#include "hcm/errors.hpp"
#include "hcm/linalg.hpp"

namespace hcm {

namespace {

void require_same_space(const Submodule& a, const Submodule& b) {
  if (!(a.signature() == b.signature()) || a.ambient() != b.ambient())
    fail(ErrorKind::ShapeMismatch, "submodules live in different modules");
}

// [V_a V_b] per block, checked to be square and invertible.
Mat stacked_frame(const Submodule& a, const Submodule& b, int i, const Tolerances& tol) {
  const Mat& va = a.block_basis(i);
  const Mat& vb = b.block_basis(i);
  const Eigen::Index rows = va.rows();
  if (va.cols() + vb.cols() != rows) fail(ErrorKind::NotDirect, "dimensions do not add up to the ambient module");
  Mat frame(rows, rows);
  frame << va, vb;
  if (rows == 0) return frame;
  Eigen::BDCSVD<Mat> svd(frame);
  if (svd.singularValues()(rows - 1) <= tol.band_hi()) fail(ErrorKind::NotDirect, "submodules intersect");
  return frame;
}

DimensionVector as_dims(const IndexValue& v) {
  std::vector<long> c(v.delta());
  for (long x : c)
    if (x < 0) fail(ErrorKind::RankAmbiguous, "dimension difference became negative");
  return DimensionVector(std::move(c));
}

}  // namespace

bool PairedDecomposition::valid(const Tolerances& tol) const {
  return N1.dim_vector() == N2.dim_vector() && is_direct_complement(N, N1, tol) && is_direct_complement(N, N2, tol);
}

DenseOperator direct_sum(const DenseOperator& a, const DenseOperator& b) {
  if (!(a.signature() == b.signature())) fail(ErrorKind::SignatureMismatch, "direct sum of operators over different algebras");
  const Signature& sig = a.signature();
  std::vector<Mat> blocks;
  for (int i = 0; i < sig.k(); ++i) {
    const Mat& x = a.block(i);
    const Mat& y = b.block(i);
    Mat z = Mat::Zero(x.rows() + y.rows(), x.cols() + y.cols());
    z.topLeftCorner(x.rows(), x.cols()) = x;
    z.bottomRightCorner(y.rows(), y.cols()) = y;
    blocks.push_back(std::move(z));
  }
  return DenseOperator(sig, a.domain() + b.domain(), a.codomain() + b.codomain(), std::move(blocks));
}

DenseOperator oblique_projection(const Submodule& onto, const Submodule& along, const Tolerances& tol) {
  require_same_space(onto, along);
  const Signature& sig = onto.signature();
  std::vector<Mat> blocks;
  for (int i = 0; i < sig.k(); ++i) {
    const Mat frame = stacked_frame(onto, along, i, tol);
    const Eigen::Index d = onto.block_basis(i).cols();
    const Mat inv = frame.inverse();
    blocks.push_back(onto.block_basis(i) * inv.topRows(d));
  }
  return DenseOperator(sig, onto.ambient(), onto.ambient(), std::move(blocks));
}

DenseOperator fredholm_from_decomposition(const Submodule& M1, const Submodule& N1, const Submodule& M2,
                                          const Submodule& N2, const std::optional<std::vector<Mat>>& core,
                                          const Tolerances& tol) {
  require_same_space(M1, N1);
  require_same_space(M2, N2);
  if (!(M1.signature() == M2.signature())) fail(ErrorKind::SignatureMismatch, "domain and codomain algebras differ");
  if (!(M1.dim_vector() == M2.dim_vector())) fail(ErrorKind::NotDirect, "M1 and M2 are not isomorphic");
  const Signature& sig = M1.signature();
  if (core && static_cast<int>(core->size()) != sig.k()) fail(ErrorKind::ShapeMismatch, "one core matrix per block");
  std::vector<Mat> blocks;
  for (int i = 0; i < sig.k(); ++i) {
    stacked_frame(M2, N2, i, tol);
    const Mat frame = stacked_frame(M1, N1, i, tol);
    const Eigen::Index d = M1.block_basis(i).cols();
    Mat c = Mat::Identity(d, d);
    if (core) {
      c = (*core)[static_cast<size_t>(i)];
      if (c.rows() != d || c.cols() != d) fail(ErrorKind::ShapeMismatch, "core matrix has the wrong size");
      if (d > 0) {
        Eigen::BDCSVD<Mat> svd(c);
        if (svd.singularValues()(d - 1) <= tol.inv * svd.singularValues()(0)) fail(ErrorKind::Singular, "core is not invertible");
      }
    }
    const Mat coords = frame.inverse().topRows(d);
    blocks.push_back(M2.block_basis(i) * c * coords);
  }
  return DenseOperator(sig, M1.ambient(), M2.ambient(), std::move(blocks));
}

PairedDecomposition paired_invertible_head(const ModuleVector& x, const Tolerances& tol) {
  const Signature& sig = x.signature();
  const int n = x.length();
  if (n < 1) fail(ErrorKind::ShapeMismatch, "empty vector");
  try {
    invert(x.entry(0), tol);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Singular) throw;
    fail(ErrorKind::HeadNotInvertible, "first coordinate is not invertible");
  }
  std::vector<int> rest;
  for (int j = 2; j <= n; ++j) rest.push_back(j);
  return {Submodule::coordinates(sig, n, rest), span_submodule(sig, n, {x}, tol), Submodule::coordinates(sig, n, {1})};
}

PairedDecomposition paired_kernel_nested(const ModuleVector& x, const Tolerances& tol) {
  const Signature& sig = x.signature();
  const int n = x.length();
  if (n < 1) fail(ErrorKind::ShapeMismatch, "empty vector");
  double scale = 0.0;
  for (int j = 0; j < n; ++j) scale = std::max(scale, x.entry(j).norm());
  const AlgebraElement head = x.entry(0);
  std::vector<Mat> proj;
  for (int i = 0; i < sig.k(); ++i) {
    const Mat& t1 = head.block(i);
    const int r1 = ranked_svd(t1, tol, scale).rank;
    for (int j = 1; j < n; ++j) {
      Mat stack(2 * t1.rows(), t1.cols());
      stack << t1, x.entry(j).block(i);
      if (ranked_svd(stack, tol, scale).rank != r1)
        fail(ErrorKind::KernelNotNested, "kernel of the first coordinate is not contained in coordinate " + std::to_string(j + 1));
    }
    const Mat q = range_basis(t1, tol, scale);
    proj.push_back(q * q.adjoint());
  }
  const AlgebraElement p(sig, proj);
  const AlgebraElement one = AlgebraElement::identity(sig);
  std::vector<ModuleVector> gens;
  for (int j = 2; j <= n; ++j) gens.push_back(ModuleVector::basis(sig, n, j));
  gens.push_back(ModuleVector::basis(sig, n, 1) * (one - p));
  const Submodule N = span_submodule(sig, n, gens, tol);
  const Submodule N2 = span_submodule(sig, n, {ModuleVector::basis(sig, n, 1) * p}, tol);
  return {N, span_submodule(sig, n, {x}, tol), N2};
}

double head_projection_margin(const PairedDecomposition& pd, const Tolerances&) {
  const Signature& sig = pd.N1.signature();
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < sig.k(); ++i) {
    const Mat& v = pd.N1.block_basis(i);
    if (v.cols() == 0) continue;
    const Mat head = v.topRows(sig.n(i));
    if (head.rows() < head.cols()) return 0.0;
    Eigen::BDCSVD<Mat> svd(head);
    m = std::min(m, svd.singularValues()(v.cols() - 1));
  }
  return std::isfinite(m) ? m : 1.0;
}

SpecialClassResult special_class_operator(const PairedDecomposition& pd, SpecialKind kind, const DenseOperator& U,
                                          const std::optional<DenseOperator>& phi,
                                          const std::optional<DenseOperator>& psi, const Tolerances& tol) {
  const int n = pd.N.ambient();
  if (U.domain() != n || U.codomain() != n) fail(ErrorKind::ShapeMismatch, "U must act on the ambient module");
  for (const auto& b : U.blocks()) {
    Eigen::BDCSVD<Mat> svd(b);
    if (b.size() && svd.singularValues()(b.rows() - 1) <= tol.inv * svd.singularValues()(0))
      fail(ErrorKind::Singular, "U is not invertible");
  }
  const DenseOperator pi1 = oblique_projection(pd.N, pd.N1, tol);
  DenseOperator f = compose(U, pi1);
  if (kind == SpecialKind::HatPlus && phi && psi)
    f = f + compose(*phi, compose(*psi, DenseOperator::identity(pd.N.signature(), n) - pi1));
  SpecialClassResult r{f, kernel(f, tol).dim_vector(), cokernel(f, tol).dim_vector(), false};
  r.in_class = kind == SpecialKind::Tilde0 ? r.kernel_dim == r.cokernel_dim : r.kernel_dim.leq(r.cokernel_dim);
  return r;
}

DenseOperator nilpotent_block(const Signature& sig, int n, int q) {
  if (q < 1 || q > n) fail(ErrorKind::ShapeMismatch, "nilpotent degree must lie in [1, n]");
  DenseOperator c = DenseOperator::zero(sig, n, n);
  for (int k = 2; k <= q; ++k) c.set_entry(k - 2, k - 1, AlgebraElement::identity(sig));
  return c;
}

std::vector<BFredholmMember> bfredholm_recipe(const SymbolicOperator& fplus, int q, int n_head,
                                              const std::vector<int>& windows, int m_max, const Tolerances& tol) {
  if (m_max < 1) fail(ErrorKind::ShapeMismatch, "need at least one power");
  const Signature& sig = fplus.signature();
  std::vector<SymbolicOperator> heads;
  for (int m = 1; m <= m_max + 1; ++m) {
    heads.push_back(power_symbolic(fplus, m));
    const ClassificationReport rep = classify_symbolic(heads.back(), tol);
    if (!rep.decided || !rep.in_MPhi_plus)
      fail(ErrorKind::UndecidedInput, "power " + std::to_string(m) + " of the head is not a decided upper semi-Fredholm operator");
  }
  const DenseOperator c = nilpotent_block(sig, n_head, q);
  std::vector<BFredholmMember> out;
  for (int w : windows) {
    BFredholmMember mem;
    mem.window = w;
    mem.q = q;
    mem.n_head = n_head;
    DenseOperator cm = DenseOperator::identity(sig, n_head);
    std::vector<Submodule> kers;
    for (int m = 1; m <= m_max + 1; ++m) {
      cm = compose(c, cm);
      mem.powers.push_back(direct_sum(windowed_truncate(heads[static_cast<size_t>(m - 1)], w), cm));
      kers.push_back(kernel(mem.powers.back(), tol));
      mem.ker_dims.push_back(kers.back().dim_vector());
      mem.cok_dims.push_back(cokernel(mem.powers.back(), tol).dim_vector());
    }
    for (int m = 0; m < m_max; ++m) {
      const size_t a = static_cast<size_t>(m), b = a + 1;
      mem.restricted_ker.push_back(as_dims(mem.ker_dims[b] - mem.ker_dims[a]));
      mem.restricted_cok.push_back(as_dims(mem.cok_dims[b] - mem.cok_dims[a]));
      mem.restricted_index.push_back(mem.restricted_ker.back() - mem.restricted_cok.back());
      mem.kernel_step.push_back(submodule_distance(kers[a], kers[b]));
    }
    out.push_back(std::move(mem));
  }
  return out;
}

DenseOperator range17_operator(int d) {
  if (d < 1) fail(ErrorKind::ShapeMismatch, "d must be positive");
  const Signature sig(std::vector<int>(static_cast<size_t>(d), 1));
  std::vector<cplx> c;
  for (int j = 1; j <= d; ++j) c.emplace_back(static_cast<double>(j) / d);
  return DenseOperator::from_entries(sig, {{AlgebraElement::central(sig, c)}});
}

Sum18Member sum18_member(int d) {
  if (d < 1) fail(ErrorKind::ShapeMismatch, "d must be positive");
  const Signature sig({2});
  const double th = 1.0 / d;
  Vec u = Vec::Zero(4), v = Vec::Zero(4), vp = Vec::Zero(4);
  u(0) = 1.0;
  v(0) = std::cos(th);
  v(1) = std::sin(th);
  vp(0) = -std::sin(th);
  vp(1) = std::cos(th);
  Mat f = u * vp.adjoint();
  f(2, 2) = 1.0;
  f(3, 3) = 1.0;
  return {Submodule(sig, 2, {Mat(u)}), Submodule(sig, 2, {Mat(v)}), DenseOperator(sig, 2, 2, {f})};
}

std::vector<int> default_refinement_params() { return {4, 8, 16, 32, 64}; }

std::vector<RefinementRow> nonclosed_range_family(const std::vector<int>& ds) {
  std::vector<RefinementRow> rows;
  for (int d : ds) rows.push_back({d, closed_range_margin(range17_operator(d)), std::nullopt});
  return rows;
}

std::vector<RefinementRow> nonclosed_sum_family(const std::vector<int>& ds) {
  std::vector<RefinementRow> rows;
  for (int d : ds) {
    const Sum18Member m = sum18_member(d);
    rows.push_back({d, closed_range_margin(compose(m.F, m.F)), dixmier_angle(m.M, m.N)});
  }
  return rows;
}

bool margins_strictly_decreasing(const std::vector<RefinementRow>& rows) {
  for (size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i].margin < rows[i - 1].margin)) return false;
  return true;
}

}  // namespace hcm
