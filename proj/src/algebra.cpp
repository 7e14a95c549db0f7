#include "hcm/algebra.hpp"

#include <algorithm>
#include <sstream>

#include "hcm/errors.hpp"
#include "hcm/linalg.hpp"

namespace hcm {

namespace {

std::string join(const std::vector<long>& v) {
  std::ostringstream os;
  os << '(';
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

void require_same(const Signature& a, const Signature& b) {
  if (!(a == b)) fail(ErrorKind::SignatureMismatch, a.str() + " vs " + b.str());
}

}  // namespace

Signature::Signature(std::vector<int> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) fail(ErrorKind::SignatureMismatch, "signature needs at least one block");
  for (int n : blocks_)
    if (n < 1) fail(ErrorKind::SignatureMismatch, "block sizes must be positive");
}

int Signature::complex_dim() const {
  int d = 0;
  for (int n : blocks_) d += n * n;
  return d;
}

bool Signature::all_ones() const {
  return std::all_of(blocks_.begin(), blocks_.end(), [](int n) { return n == 1; });
}

std::string Signature::str() const {
  std::vector<long> v(blocks_.begin(), blocks_.end());
  return join(v);
}

DimensionVector::DimensionVector(std::vector<long> counts) : counts_(std::move(counts)) {
  for (long c : counts_)
    if (c < 0) fail(ErrorKind::ShapeMismatch, "dimension vectors are nonnegative");
}

bool DimensionVector::is_zero() const {
  return std::all_of(counts_.begin(), counts_.end(), [](long c) { return c == 0; });
}

bool DimensionVector::leq(const DimensionVector& other) const {
  if (k() != other.k()) fail(ErrorKind::ShapeMismatch, "dimension vector lengths differ");
  for (int i = 0; i < k(); ++i)
    if ((*this)[i] > other[i]) return false;
  return true;
}

std::string DimensionVector::str() const { return join(counts_); }

DimensionVector DimensionVector::operator+(const DimensionVector& o) const {
  if (k() != o.k()) fail(ErrorKind::ShapeMismatch, "dimension vector lengths differ");
  std::vector<long> r(counts_);
  for (size_t i = 0; i < r.size(); ++i) r[i] += o.counts_[i];
  return DimensionVector(std::move(r));
}

IndexValue DimensionVector::operator-(const DimensionVector& o) const {
  if (k() != o.k()) fail(ErrorKind::ShapeMismatch, "dimension vector lengths differ");
  std::vector<long> r(counts_);
  for (size_t i = 0; i < r.size(); ++i) r[i] -= o.counts_[i];
  return IndexValue(std::move(r));
}

DimensionVector DimensionVector::scaled(long s) const {
  std::vector<long> r(counts_);
  for (auto& c : r) c *= s;
  return DimensionVector(std::move(r));
}

bool IndexValue::is_zero() const {
  return std::all_of(delta_.begin(), delta_.end(), [](long c) { return c == 0; });
}
bool IndexValue::nonpositive() const {
  return std::all_of(delta_.begin(), delta_.end(), [](long c) { return c <= 0; });
}
bool IndexValue::nonnegative() const {
  return std::all_of(delta_.begin(), delta_.end(), [](long c) { return c >= 0; });
}

std::string IndexValue::str() const {
  std::ostringstream os;
  os << '(';
  for (size_t i = 0; i < delta_.size(); ++i) os << (i ? "," : "") << (delta_[i] > 0 ? "+" : "") << delta_[i];
  os << ')';
  return os.str();
}

IndexValue IndexValue::operator+(const IndexValue& o) const {
  if (k() != o.k()) fail(ErrorKind::ShapeMismatch, "index lengths differ");
  std::vector<long> r(delta_);
  for (size_t i = 0; i < r.size(); ++i) r[i] += o.delta_[i];
  return IndexValue(std::move(r));
}

IndexValue IndexValue::operator-() const {
  std::vector<long> r(delta_);
  for (auto& c : r) c = -c;
  return IndexValue(std::move(r));
}

AlgebraElement::AlgebraElement(Signature sig, std::vector<Mat> blocks)
    : sig_(std::move(sig)), blocks_(std::move(blocks)) {
  if (static_cast<int>(blocks_.size()) != sig_.k()) fail(ErrorKind::ShapeMismatch, "block count does not match signature");
  for (int i = 0; i < sig_.k(); ++i)
    if (blocks_[i].rows() != sig_.n(i) || blocks_[i].cols() != sig_.n(i))
      fail(ErrorKind::ShapeMismatch, "block shape does not match signature");
}

AlgebraElement AlgebraElement::zero(const Signature& sig) {
  std::vector<Mat> b;
  for (int n : sig.blocks()) b.push_back(Mat::Zero(n, n));
  return AlgebraElement(sig, std::move(b));
}

AlgebraElement AlgebraElement::identity(const Signature& sig) { return scalar(sig, 1.0); }

AlgebraElement AlgebraElement::scalar(const Signature& sig, cplx c) {
  std::vector<Mat> b;
  for (int n : sig.blocks()) b.push_back(c * Mat::Identity(n, n));
  return AlgebraElement(sig, std::move(b));
}

AlgebraElement AlgebraElement::central(const Signature& sig, const std::vector<cplx>& coeffs) {
  if (static_cast<int>(coeffs.size()) != sig.k()) fail(ErrorKind::ShapeMismatch, "one coefficient per block expected");
  std::vector<Mat> b;
  for (int i = 0; i < sig.k(); ++i) b.push_back(coeffs[i] * Mat::Identity(sig.n(i), sig.n(i)));
  return AlgebraElement(sig, std::move(b));
}

AlgebraElement AlgebraElement::matrix_unit(const Signature& sig, int block, int r, int s) {
  AlgebraElement e = zero(sig);
  e.block(block)(r, s) = 1.0;
  return e;
}

double AlgebraElement::norm() const {
  double m = 0.0;
  for (const auto& b : blocks_) m = std::max(m, spectral_norm(b));
  return m;
}

bool AlgebraElement::is_zero(double tol) const {
  for (const auto& b : blocks_)
    if (b.size() && b.cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

bool AlgebraElement::is_central(double tol) const {
  for (int i = 0; i < sig_.k(); ++i) {
    const Mat& b = blocks_[i];
    cplx c = b(0, 0);
    if ((b - c * Mat::Identity(b.rows(), b.cols())).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

std::vector<cplx> AlgebraElement::central_coeffs() const {
  std::vector<cplx> c;
  for (const auto& b : blocks_) c.push_back(b.trace() / static_cast<double>(b.rows()));
  return c;
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
  require_same(sig_, o.sig_);
  std::vector<Mat> b(blocks_);
  for (size_t i = 0; i < b.size(); ++i) b[i] += o.blocks_[i];
  return AlgebraElement(sig_, std::move(b));
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
  require_same(sig_, o.sig_);
  std::vector<Mat> b(blocks_);
  for (size_t i = 0; i < b.size(); ++i) b[i] -= o.blocks_[i];
  return AlgebraElement(sig_, std::move(b));
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
  require_same(sig_, o.sig_);
  std::vector<Mat> b;
  for (size_t i = 0; i < blocks_.size(); ++i) b.push_back(blocks_[i] * o.blocks_[i]);
  return AlgebraElement(sig_, std::move(b));
}

AlgebraElement AlgebraElement::operator*(cplx s) const {
  std::vector<Mat> b(blocks_);
  for (auto& m : b) m *= s;
  return AlgebraElement(sig_, std::move(b));
}

AlgebraElement AlgebraElement::operator-() const { return (*this) * cplx(-1.0); }

AlgebraElement star(const AlgebraElement& a) {
  std::vector<Mat> b;
  for (const auto& m : a.blocks()) b.push_back(m.adjoint());
  return AlgebraElement(a.signature(), std::move(b));
}

AlgebraElement invert(const AlgebraElement& a, const Tolerances& tol) {
  const double scale = a.norm();
  std::vector<Mat> b;
  for (int i = 0; i < a.signature().k(); ++i) {
    Eigen::JacobiSVD<Mat> svd(a.block(i), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (scale == 0.0 || s(s.size() - 1) <= tol.inv * scale)
      fail(ErrorKind::Singular, "block " + std::to_string(i) + " is not invertible");
    b.push_back(svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().adjoint());
  }
  return AlgebraElement(a.signature(), std::move(b));
}

std::vector<AlgebraElement> central_basis(const Signature& sig) {
  std::vector<AlgebraElement> out;
  for (int i = 0; i < sig.k(); ++i) {
    std::vector<cplx> c(static_cast<size_t>(sig.k()), 0.0);
    c[static_cast<size_t>(i)] = 1.0;
    out.push_back(AlgebraElement::central(sig, c));
  }
  return out;
}

DimensionVector regular_representation_dim(const Signature& sig) {
  std::vector<long> c(sig.blocks().begin(), sig.blocks().end());
  return DimensionVector(std::move(c));
}

std::vector<AlgebraElement> algebra_basis(const Signature& sig) {
  std::vector<AlgebraElement> out;
  for (int i = 0; i < sig.k(); ++i)
    for (int r = 0; r < sig.n(i); ++r)
      for (int s = 0; s < sig.n(i); ++s) out.push_back(AlgebraElement::matrix_unit(sig, i, r, s));
  return out;
}

double distance(const AlgebraElement& a, const AlgebraElement& b) { return (a - b).norm(); }

}  // namespace hcm
