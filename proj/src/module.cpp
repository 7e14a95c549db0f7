#include "hcm/module.hpp"

#include <algorithm>

#include "hcm/errors.hpp"
#include "hcm/linalg.hpp"

namespace hcm {

namespace {

void require_compatible(const Submodule& a, const Submodule& b) {
  if (!(a.signature() == b.signature())) fail(ErrorKind::SignatureMismatch, "submodules over different algebras");
  if (a.ambient() != b.ambient()) fail(ErrorKind::ShapeMismatch, "submodules in different ambients");
}

}  // namespace

ModuleVector::ModuleVector(Signature sig, std::vector<Mat> blocks) : sig_(std::move(sig)), blocks_(std::move(blocks)) {
  if (static_cast<int>(blocks_.size()) != sig_.k()) fail(ErrorKind::ShapeMismatch, "block count mismatch");
  length_ = static_cast<int>(blocks_[0].rows() / sig_.n(0));
  for (int i = 0; i < sig_.k(); ++i)
    if (blocks_[i].rows() != length_ * sig_.n(i) || blocks_[i].cols() != sig_.n(i))
      fail(ErrorKind::ShapeMismatch, "module vector block shape mismatch");
}

ModuleVector::ModuleVector(const Signature& sig, const std::vector<AlgebraElement>& entries)
    : sig_(sig), length_(static_cast<int>(entries.size())) {
  for (int i = 0; i < sig.k(); ++i) {
    const int n = sig.n(i);
    Mat b(length_ * n, n);
    for (int j = 0; j < length_; ++j) {
      if (!(entries[j].signature() == sig)) fail(ErrorKind::SignatureMismatch, "entry signature mismatch");
      b.middleRows(j * n, n) = entries[j].block(i);
    }
    blocks_.push_back(std::move(b));
  }
}

ModuleVector ModuleVector::zero(const Signature& sig, int length) {
  std::vector<Mat> b;
  for (int n : sig.blocks()) b.push_back(Mat::Zero(length * n, n));
  return ModuleVector(sig, std::move(b));
}

ModuleVector ModuleVector::basis(const Signature& sig, int length, int j) {
  if (j < 1 || j > length) fail(ErrorKind::ShapeMismatch, "basis index out of range");
  ModuleVector x = zero(sig, length);
  for (int i = 0; i < sig.k(); ++i) {
    const int n = sig.n(i);
    x.blocks_[i].middleRows((j - 1) * n, n) = Mat::Identity(n, n);
  }
  return x;
}

AlgebraElement ModuleVector::entry(int j) const {
  std::vector<Mat> b;
  for (int i = 0; i < sig_.k(); ++i) b.push_back(blocks_[i].middleRows(j * sig_.n(i), sig_.n(i)));
  return AlgebraElement(sig_, std::move(b));
}

void ModuleVector::set_entry(int j, const AlgebraElement& a) {
  for (int i = 0; i < sig_.k(); ++i) blocks_[i].middleRows(j * sig_.n(i), sig_.n(i)) = a.block(i);
}

ModuleVector ModuleVector::operator+(const ModuleVector& o) const {
  std::vector<Mat> b(blocks_);
  for (size_t i = 0; i < b.size(); ++i) b[i] += o.blocks_.at(i);
  return ModuleVector(sig_, std::move(b));
}

ModuleVector ModuleVector::operator-(const ModuleVector& o) const {
  std::vector<Mat> b(blocks_);
  for (size_t i = 0; i < b.size(); ++i) b[i] -= o.blocks_.at(i);
  return ModuleVector(sig_, std::move(b));
}

ModuleVector ModuleVector::operator*(const AlgebraElement& a) const {
  std::vector<Mat> b;
  for (int i = 0; i < sig_.k(); ++i) b.push_back(blocks_[i] * a.block(i));
  return ModuleVector(sig_, std::move(b));
}

ModuleVector ModuleVector::operator*(cplx s) const {
  std::vector<Mat> b(blocks_);
  for (auto& m : b) m *= s;
  return ModuleVector(sig_, std::move(b));
}

double ModuleVector::norm() const { return std::sqrt(inner(*this, *this).norm()); }

AlgebraElement inner(const ModuleVector& x, const ModuleVector& y) {
  if (!(x.signature() == y.signature()) || x.length() != y.length())
    fail(ErrorKind::ShapeMismatch, "inner product of incompatible vectors");
  std::vector<Mat> b;
  for (int i = 0; i < x.signature().k(); ++i) b.push_back(x.block(i).adjoint() * y.block(i));
  return AlgebraElement(x.signature(), std::move(b));
}

Submodule::Submodule(Signature sig, int ambient, std::vector<Mat> bases)
    : sig_(std::move(sig)), ambient_(ambient), bases_(std::move(bases)) {
  if (static_cast<int>(bases_.size()) != sig_.k()) fail(ErrorKind::ShapeMismatch, "one basis per block expected");
  for (int i = 0; i < sig_.k(); ++i)
    if (bases_[i].rows() != ambient_ * sig_.n(i)) fail(ErrorKind::ShapeMismatch, "basis row count mismatch");
}

Submodule Submodule::zero(const Signature& sig, int ambient) {
  std::vector<Mat> b;
  for (int n : sig.blocks()) b.push_back(Mat::Zero(ambient * n, 0));
  return Submodule(sig, ambient, std::move(b));
}

Submodule Submodule::full(const Signature& sig, int ambient) {
  std::vector<Mat> b;
  for (int n : sig.blocks()) b.push_back(Mat::Identity(ambient * n, ambient * n));
  return Submodule(sig, ambient, std::move(b));
}

Submodule Submodule::coordinates(const Signature& sig, int ambient, const std::vector<int>& js) {
  std::vector<int> sorted(js);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<Mat> b;
  for (int n : sig.blocks()) {
    Mat m = Mat::Zero(ambient * n, static_cast<Eigen::Index>(sorted.size()) * n);
    for (size_t c = 0; c < sorted.size(); ++c) {
      const int j = sorted[c];
      if (j < 1 || j > ambient) fail(ErrorKind::ShapeMismatch, "coordinate index out of range");
      m.block((j - 1) * n, static_cast<Eigen::Index>(c) * n, n, n) = Mat::Identity(n, n);
    }
    b.push_back(std::move(m));
  }
  return Submodule(sig, ambient, std::move(b));
}

Submodule Submodule::from_block_spans(const Signature& sig, int ambient, const std::vector<Mat>& spans,
                                      const Tolerances& tol) {
  if (static_cast<int>(spans.size()) != sig.k()) fail(ErrorKind::ShapeMismatch, "one span per block expected");
  std::vector<Mat> b;
  for (int i = 0; i < sig.k(); ++i) {
    if (spans[i].rows() != ambient * sig.n(i)) fail(ErrorKind::ShapeMismatch, "span row count mismatch");
    b.push_back(range_basis(spans[i], tol));
  }
  return Submodule(sig, ambient, std::move(b));
}

long complex_offset(const Signature& sig, int ambient, int block) {
  long off = 0;
  for (int i = 0; i < block; ++i) off += static_cast<long>(ambient) * sig.n(i) * sig.n(i);
  return off;
}

Submodule Submodule::from_complex_basis(const Signature& sig, int ambient, const Mat& basis, const Tolerances& tol) {
  const long total = complex_offset(sig, ambient, sig.k());
  if (basis.rows() != total) fail(ErrorKind::ShapeMismatch, "complex basis has the wrong number of rows");
  const Mat q = basis.cols() ? range_basis(basis, tol) : Mat::Zero(total, 0);
  std::vector<Mat> spans;
  for (int i = 0; i < sig.k(); ++i) {
    const int n = sig.n(i);
    const long rows = static_cast<long>(ambient) * n;
    const Mat part = q.middleRows(complex_offset(sig, ambient, i), rows * n);
    const int r = part.cols() ? ranked_svd(part, tol, 1.0).rank : 0;
    if (r % n != 0)
      fail(ErrorKind::NonIntegralBlock, "block " + std::to_string(i) + " has complex dimension " + std::to_string(r) +
                                            " not divisible by " + std::to_string(n));
    Mat w(rows, part.cols() * n);
    for (Eigen::Index c = 0; c < part.cols(); ++c)
      for (int col = 0; col < n; ++col) w.col(c * n + col) = part.col(c).segment(col * rows, rows);
    // q is orthonormal, so rank is judged on an absolute scale; a block that is numerically zero stays zero.
    spans.push_back(w.cols() ? range_basis(w, tol, 1.0) : w);
  }
  Submodule s = from_block_spans(sig, ambient, spans, tol);
  const Mat rebuilt = s.complex_basis();
  if (rebuilt.cols() != q.cols() || subspace_distance(rebuilt, q) > tol.sub)
    fail(ErrorKind::ShapeMismatch, "complex subspace is not invariant under the right action");
  return s;
}

Mat Submodule::projector(int i) const {
  const Mat& v = bases_[static_cast<size_t>(i)];
  if (v.cols() == 0) return Mat::Zero(v.rows(), v.rows());
  return v * v.adjoint();
}

DimensionVector Submodule::dim_vector() const {
  std::vector<long> c;
  for (const auto& b : bases_) c.push_back(b.cols());
  return DimensionVector(std::move(c));
}

long Submodule::complex_dim() const {
  long d = 0;
  for (int i = 0; i < sig_.k(); ++i) d += sig_.n(i) * bases_[i].cols();
  return d;
}

bool Submodule::is_zero() const { return complex_dim() == 0; }

Mat Submodule::complex_basis() const {
  const long total = complex_offset(sig_, ambient_, sig_.k());
  Mat out = Mat::Zero(total, complex_dim());
  Eigen::Index col = 0;
  for (int i = 0; i < sig_.k(); ++i) {
    const int n = sig_.n(i);
    const long rows = static_cast<long>(ambient_) * n;
    const long off = complex_offset(sig_, ambient_, i);
    const Mat& v = bases_[i];
    for (int c = 0; c < n; ++c)
      for (Eigen::Index b = 0; b < v.cols(); ++b) out.col(col++).segment(off + c * rows, rows) = v.col(b);
  }
  return out;
}

bool Submodule::contains(const ModuleVector& x, double tol) const {
  for (int i = 0; i < sig_.k(); ++i) {
    const Mat r = x.block(i) - projector(i) * x.block(i);
    if (r.size() && r.cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

ModuleVector Submodule::project(const ModuleVector& x) const {
  std::vector<Mat> b;
  for (int i = 0; i < sig_.k(); ++i) b.push_back(projector(i) * x.block(i));
  return ModuleVector(sig_, std::move(b));
}

Submodule span_submodule(const Signature& sig, int ambient, const std::vector<ModuleVector>& generators,
                         const Tolerances& tol) {
  std::vector<Mat> spans;
  for (int i = 0; i < sig.k(); ++i) {
    const int n = sig.n(i);
    Mat w(static_cast<Eigen::Index>(ambient) * n, static_cast<Eigen::Index>(generators.size()) * n);
    for (size_t g = 0; g < generators.size(); ++g) {
      const auto& x = generators[g];
      if (!(x.signature() == sig) || x.length() != ambient) fail(ErrorKind::ShapeMismatch, "generator mismatch");
      w.middleCols(static_cast<Eigen::Index>(g) * n, n) = x.block(i);
    }
    spans.push_back(std::move(w));
  }
  return Submodule::from_block_spans(sig, ambient, spans, tol);
}

DimensionVector dimension_vector(const Submodule& s) { return s.dim_vector(); }

Submodule orth_complement(const Submodule& s) {
  std::vector<Mat> b;
  for (int i = 0; i < s.signature().k(); ++i)
    b.push_back(complement_basis(s.block_basis(i), static_cast<Eigen::Index>(s.ambient()) * s.signature().n(i)));
  return Submodule(s.signature(), s.ambient(), std::move(b));
}

bool is_embeddable(const Submodule& s, const Submodule& t) {
  if (!(s.signature() == t.signature())) fail(ErrorKind::SignatureMismatch, "submodules over different algebras");
  return s.dim_vector().leq(t.dim_vector());
}

double dixmier_angle(const Submodule& m, const Submodule& n) {
  require_compatible(m, n);
  double c = 0.0;
  for (int i = 0; i < m.signature().k(); ++i) {
    if (m.block_basis(i).cols() == 0 || n.block_basis(i).cols() == 0) continue;
    c = std::max(c, spectral_norm(m.block_basis(i).adjoint() * n.block_basis(i)));
  }
  return c;
}

std::pair<Submodule, Submodule> sum_and_intersection(const Submodule& m, const Submodule& n, const Tolerances& tol) {
  require_compatible(m, n);
  std::vector<Mat> sums, inters;
  for (int i = 0; i < m.signature().k(); ++i) {
    const Mat& a = m.block_basis(i);
    const Mat& b = n.block_basis(i);
    Mat stacked(a.rows(), a.cols() + b.cols());
    stacked << a, b;
    // Singular values are sqrt(1 ± cos θ) over principal angles, so the scale is 1.
    const RankedSvd svd = ranked_svd(stacked, tol, stacked.cols() ? 1.0 : 0.0);
    sums.push_back(svd.range());
    const Mat nul = svd.null_space();
    const Mat inter = a * nul.topRows(a.cols());
    inters.push_back(inter.cols() ? range_basis(inter, tol, 1.0) : Mat::Zero(a.rows(), 0));
  }
  return {Submodule(m.signature(), m.ambient(), std::move(sums)),
          Submodule(m.signature(), m.ambient(), std::move(inters))};
}

double submodule_distance(const Submodule& s, const Submodule& t) {
  require_compatible(s, t);
  double d = 0.0;
  for (int i = 0; i < s.signature().k(); ++i) d = std::max(d, subspace_distance(s.block_basis(i), t.block_basis(i)));
  return d;
}

bool is_direct_complement(const Submodule& s, const Submodule& t, const Tolerances& tol) {
  require_compatible(s, t);
  const auto [sum, inter] = sum_and_intersection(s, t, tol);
  return inter.is_zero() && s.dim_vector() + t.dim_vector() == Submodule::full(s.signature(), s.ambient()).dim_vector();
}

}  // namespace hcm
