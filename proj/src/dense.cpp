#include "hcm/dense.hpp"

#include <algorithm>

#include "hcm/errors.hpp"
#include "hcm/linalg.hpp"

namespace hcm {

namespace {

void require_same_shape(const DenseOperator& a, const DenseOperator& b) {
  if (!(a.signature() == b.signature()) || a.domain() != b.domain() || a.codomain() != b.codomain())
    fail(ErrorKind::ShapeMismatch, "operators have different shapes");
}

// Per-block SVDs of an operator, ranks decided against the global norm.
std::vector<RankedSvd> block_svds(const DenseOperator& f, const Tolerances& tol, bool full_u = false) {
  const double scale = f.norm();
  std::vector<RankedSvd> out;
  for (const auto& b : f.blocks()) out.push_back(ranked_svd(b, tol, scale, full_u));
  return out;
}

}  // namespace

DenseOperator::DenseOperator(Signature sig, int domain, int codomain, std::vector<Mat> blocks)
    : sig_(std::move(sig)), domain_(domain), codomain_(codomain), blocks_(std::move(blocks)) {
  if (static_cast<int>(blocks_.size()) != sig_.k()) fail(ErrorKind::ShapeMismatch, "one block per simple summand");
  for (int i = 0; i < sig_.k(); ++i)
    if (blocks_[i].rows() != codomain_ * sig_.n(i) || blocks_[i].cols() != domain_ * sig_.n(i))
      fail(ErrorKind::ShapeMismatch, "operator block shape mismatch");
}

DenseOperator DenseOperator::zero(const Signature& sig, int domain, int codomain) {
  std::vector<Mat> b;
  for (int n : sig.blocks()) b.push_back(Mat::Zero(codomain * n, domain * n));
  return DenseOperator(sig, domain, codomain, std::move(b));
}

DenseOperator DenseOperator::identity(const Signature& sig, int n) {
  std::vector<Mat> b;
  for (int ni : sig.blocks()) b.push_back(Mat::Identity(n * ni, n * ni));
  return DenseOperator(sig, n, n, std::move(b));
}

DenseOperator DenseOperator::from_entries(const Signature& sig, const std::vector<std::vector<AlgebraElement>>& entries) {
  const int rows = static_cast<int>(entries.size());
  const int cols = rows ? static_cast<int>(entries[0].size()) : 0;
  DenseOperator f = zero(sig, cols, rows);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(entries[r].size()) != cols) fail(ErrorKind::ShapeMismatch, "ragged entry grid");
    for (int c = 0; c < cols; ++c) f.set_entry(r, c, entries[r][c]);
  }
  return f;
}

DenseOperator DenseOperator::diagonal(const Signature& sig, const std::vector<AlgebraElement>& diag) {
  const int n = static_cast<int>(diag.size());
  DenseOperator f = zero(sig, n, n);
  for (int j = 0; j < n; ++j) f.set_entry(j, j, diag[j]);
  return f;
}

DenseOperator DenseOperator::projection(const Submodule& s) {
  std::vector<Mat> b;
  for (int i = 0; i < s.signature().k(); ++i) b.push_back(s.projector(i));
  return DenseOperator(s.signature(), s.ambient(), s.ambient(), std::move(b));
}

AlgebraElement DenseOperator::entry(int r, int c) const {
  std::vector<Mat> b;
  for (int i = 0; i < sig_.k(); ++i) {
    const int n = sig_.n(i);
    b.push_back(blocks_[i].block(r * n, c * n, n, n));
  }
  return AlgebraElement(sig_, std::move(b));
}

void DenseOperator::set_entry(int r, int c, const AlgebraElement& a) {
  if (!(a.signature() == sig_)) fail(ErrorKind::SignatureMismatch, "entry signature mismatch");
  for (int i = 0; i < sig_.k(); ++i) {
    const int n = sig_.n(i);
    blocks_[i].block(r * n, c * n, n, n) = a.block(i);
  }
}

double DenseOperator::norm() const {
  double m = 0.0;
  for (const auto& b : blocks_) m = std::max(m, spectral_norm(b));
  return m;
}

ModuleVector DenseOperator::apply(const ModuleVector& x) const {
  if (!(x.signature() == sig_) || x.length() != domain_) fail(ErrorKind::ShapeMismatch, "vector does not fit domain");
  std::vector<Mat> b;
  for (int i = 0; i < sig_.k(); ++i) b.push_back(blocks_[i] * x.block(i));
  return ModuleVector(sig_, std::move(b));
}

DenseOperator DenseOperator::operator+(const DenseOperator& o) const {
  require_same_shape(*this, o);
  std::vector<Mat> b(blocks_);
  for (size_t i = 0; i < b.size(); ++i) b[i] += o.blocks_[i];
  return DenseOperator(sig_, domain_, codomain_, std::move(b));
}

DenseOperator DenseOperator::operator-(const DenseOperator& o) const {
  require_same_shape(*this, o);
  std::vector<Mat> b(blocks_);
  for (size_t i = 0; i < b.size(); ++i) b[i] -= o.blocks_[i];
  return DenseOperator(sig_, domain_, codomain_, std::move(b));
}

DenseOperator DenseOperator::operator*(cplx s) const {
  std::vector<Mat> b(blocks_);
  for (auto& m : b) m *= s;
  return DenseOperator(sig_, domain_, codomain_, std::move(b));
}

DenseOperator compose(const DenseOperator& g, const DenseOperator& f) {
  if (!(g.signature() == f.signature())) fail(ErrorKind::SignatureMismatch, "operators over different algebras");
  if (g.domain() != f.codomain()) fail(ErrorKind::ShapeMismatch, "domain of G differs from codomain of F");
  std::vector<Mat> b;
  for (int i = 0; i < f.signature().k(); ++i) b.push_back(g.block(i) * f.block(i));
  return DenseOperator(f.signature(), f.domain(), g.codomain(), std::move(b));
}

DenseOperator adjoint(const DenseOperator& f) {
  std::vector<Mat> b;
  for (const auto& m : f.blocks()) b.push_back(m.adjoint());
  return DenseOperator(f.signature(), f.codomain(), f.domain(), std::move(b));
}

Submodule image_of(const DenseOperator& f, const Submodule& s, const Tolerances& tol) {
  if (s.ambient() != f.domain()) fail(ErrorKind::ShapeMismatch, "submodule not in the domain");
  const double scale = f.norm();
  std::vector<Mat> b;
  for (int i = 0; i < f.signature().k(); ++i) b.push_back(range_basis(f.block(i) * s.block_basis(i), tol, scale));
  return Submodule(f.signature(), f.codomain(), std::move(b));
}

Submodule kernel(const DenseOperator& f, const Tolerances& tol) {
  std::vector<Mat> b;
  for (const auto& svd : block_svds(f, tol)) b.push_back(svd.null_space());
  return Submodule(f.signature(), f.domain(), std::move(b));
}

Submodule image(const DenseOperator& f, const Tolerances& tol) {
  std::vector<Mat> b;
  for (const auto& svd : block_svds(f, tol)) b.push_back(svd.range());
  return Submodule(f.signature(), f.codomain(), std::move(b));
}

Submodule cokernel(const DenseOperator& f, const Tolerances& tol) { return orth_complement(image(f, tol)); }

double closed_range_margin(const DenseOperator& f, const Tolerances& tol) {
  double margin = -1.0;
  for (const auto& svd : block_svds(f, tol))
    if (svd.rank > 0) margin = margin < 0 ? svd.smallest_nonzero() : std::min(margin, svd.smallest_nonzero());
  if (margin < 0) fail(ErrorKind::ZeroOperator, "operator has rank zero");
  return margin;
}

DecompositionWitness mphi_decomposition(const DenseOperator& f, const Tolerances& tol) {
  const auto svds = block_svds(f, tol);
  std::vector<Mat> m1, n1, m2, n2;
  double margin = 0.0;
  bool any = false;
  for (const auto& svd : svds) {
    n1.push_back(svd.null_space());
    m1.push_back(svd.V.leftCols(svd.rank));
    const Mat range = svd.range();
    m2.push_back(range);
    n2.push_back(complement_basis(range, svd.U.rows()));
    if (svd.rank > 0) {
      margin = any ? std::min(margin, svd.smallest_nonzero()) : svd.smallest_nonzero();
      any = true;
    }
  }
  DecompositionWitness w{Submodule(f.signature(), f.domain(), std::move(m1)),
                         Submodule(f.signature(), f.domain(), std::move(n1)),
                         Submodule(f.signature(), f.codomain(), std::move(m2)),
                         Submodule(f.signature(), f.codomain(), std::move(n2)), margin, 0.0};
  // Off-diagonal corners: F restricted to N1, and the N2-component of F.
  for (int i = 0; i < f.signature().k(); ++i) {
    const Mat& fi = f.block(i);
    if (w.N1.block_basis(i).cols()) w.offdiag_residual = std::max(w.offdiag_residual, spectral_norm(fi * w.N1.block_basis(i)));
    if (w.N2.block_basis(i).cols())
      w.offdiag_residual = std::max(w.offdiag_residual, spectral_norm(w.N2.block_basis(i).adjoint() * fi));
  }
  return w;
}

IndexValue index(const DenseOperator& f, const Tolerances& tol) {
  const auto w = mphi_decomposition(f, tol);
  return w.N1.dim_vector() - w.N2.dim_vector();
}

RegularityWitness pseudo_inverse(const DenseOperator& f, const Tolerances& tol) {
  std::vector<Mat> b;
  for (const auto& svd : block_svds(f, tol)) {
    const int r = svd.rank;
    Eigen::VectorXd inv = svd.sigma.head(r).cwiseInverse();
    b.push_back(svd.V.leftCols(r) * inv.asDiagonal() * svd.U.leftCols(r).adjoint());
  }
  RegularityWitness w{DenseOperator(f.signature(), f.codomain(), f.domain(), std::move(b)), 0.0, 0.0};
  const DenseOperator& g = w.pseudo_inverse;
  w.residual_fgf = (compose(f, compose(g, f)) - f).norm();
  w.residual_gfg = (compose(g, compose(f, g)) - g).norm();
  return w;
}

WeylFlags weyl_gc_flags(const DenseOperator& f, const Tolerances& tol) {
  WeylFlags w;
  w.kernel_dim = kernel(f, tol).dim_vector();
  w.cokernel_dim = cokernel(f, tol).dim_vector();
  w.gc_weyl = w.kernel_dim == w.cokernel_dim;
  w.upper_semi_weyl = w.kernel_dim.leq(w.cokernel_dim);
  w.lower_semi_weyl = w.cokernel_dim.leq(w.kernel_dim);
  return w;
}

double ExactSequenceReport::max_residual() const {
  double m = 0.0;
  for (double r : residuals) m = std::max(m, r);
  return m;
}

ExactSequenceReport exact_sequence_check(const DenseOperator& f, const DenseOperator& g, const Tolerances& tol) {
  const DenseOperator gf = compose(g, f);
  const Signature& sig = f.signature();
  const double scale = std::max({1.0, f.norm(), g.norm(), gf.norm()});
  std::vector<std::vector<Mat>> spaces(6);  // ker F, ker GF, ker G, cok F, cok GF, cok G
  std::vector<double> residuals(6, 0.0);
  try {
    for (int i = 0; i < sig.k(); ++i) {
      const Mat& Fi = f.block(i);
      const Mat& Gi = g.block(i);
      const Mat GFi = gf.block(i);
      const RankedSvd sf = ranked_svd(Fi, tol, f.norm(), true);
      const RankedSvd sg = ranked_svd(Gi, tol, g.norm(), true);
      const RankedSvd sgf = ranked_svd(GFi, tol, gf.norm(), true);
      const Mat K1 = sf.null_space(), K2 = sgf.null_space(), K3 = sg.null_space();
      const Mat C1 = sf.U.rightCols(sf.U.cols() - sf.rank);
      const Mat C2 = sgf.U.rightCols(sgf.U.cols() - sgf.rank);
      const Mat C3 = sg.U.rightCols(sg.U.cols() - sg.rank);
      spaces[0].push_back(K1);
      spaces[1].push_back(K2);
      spaces[2].push_back(K3);
      spaces[3].push_back(C1);
      spaces[4].push_back(C2);
      spaces[5].push_back(C3);

      auto ker_of = [&](const Mat& coords, const Mat& basis) -> Mat {
        return basis * null_basis(coords, tol, scale);
      };
      auto im_in = [&](const Mat& coords, const Mat& basis) -> Mat {
        return basis * range_basis(coords, tol, scale);
      };
      const Mat empty_dom = Mat::Zero(Fi.cols(), 0);
      // Node 1: ker F, incoming 0.
      residuals[0] = std::max(residuals[0], subspace_distance(ker_of(K2.adjoint() * K1, K1), empty_dom));
      // Node 2: ker GF, incoming inclusion of ker F.
      residuals[1] = std::max(residuals[1], subspace_distance(ker_of(K3.adjoint() * Fi * K2, K2), K1));
      // Node 3: ker G, incoming F restricted to ker GF.
      residuals[2] = std::max(residuals[2], subspace_distance(ker_of(C1.adjoint() * K3, K3), range_basis(Fi * K2, tol, scale)));
      // Node 4: cok F, incoming quotient of ker G.
      residuals[3] = std::max(residuals[3], subspace_distance(ker_of(C2.adjoint() * Gi * C1, C1), im_in(C1.adjoint() * K3, C1)));
      // Node 5: cok GF, incoming map induced by G.
      residuals[4] = std::max(residuals[4], subspace_distance(ker_of(C3.adjoint() * C2, C2), im_in(C2.adjoint() * Gi * C1, C2)));
      // Node 6: cok G, outgoing 0.
      residuals[5] = std::max(residuals[5], subspace_distance(C3, im_in(C3.adjoint() * C2, C3)));
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::RankAmbiguous) fail(ErrorKind::NotRegular, e.what());
    throw;
  }
  ExactSequenceReport rep;
  for (auto& s : spaces) {
    std::vector<long> c;
    for (const auto& m : s) c.push_back(m.cols());
    rep.terms.emplace_back(std::move(c));
  }
  rep.residuals = residuals;
  rep.alternating_sum = (rep.terms[0] - rep.terms[1]) + (rep.terms[2] - rep.terms[3]) + (rep.terms[4] - rep.terms[5]);
  rep.exact = rep.max_residual() <= tol.sub;
  return rep;
}

}  // namespace hcm
