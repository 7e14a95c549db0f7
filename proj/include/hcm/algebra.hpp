#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hcm/tolerances.hpp"

namespace hcm {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Block sizes (n_1,...,n_k) of A = M_{n_1}(C) + ... + M_{n_k}(C).
class Signature {
 public:
  Signature() : blocks_{2, 1} {}
  explicit Signature(std::vector<int> blocks);

  int k() const { return static_cast<int>(blocks_.size()); }
  int n(int i) const { return blocks_[static_cast<size_t>(i)]; }
  const std::vector<int>& blocks() const { return blocks_; }
  /// Complex dimension of A, i.e. sum of n_i^2.
  int complex_dim() const;
  bool all_ones() const;
  std::string str() const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<int> blocks_;
};

/// Default desk algebra M_2(C) + C.
inline Signature default_signature() { return Signature({2, 1}); }

class DimensionVector;
class IndexValue;

/// Element of ℤ^k with nonnegative entries: multiplicities of the simple right modules.
class DimensionVector {
 public:
  DimensionVector() = default;
  explicit DimensionVector(std::vector<long> counts);
  static DimensionVector zero(int k) { return DimensionVector(std::vector<long>(static_cast<size_t>(k), 0)); }

  const std::vector<long>& counts() const { return counts_; }
  long operator[](int i) const { return counts_[static_cast<size_t>(i)]; }
  int k() const { return static_cast<int>(counts_.size()); }
  bool is_zero() const;
  /// Componentwise order; this is the embeddability relation for f.g. modules.
  bool leq(const DimensionVector& other) const;
  std::string str() const;

  DimensionVector operator+(const DimensionVector& o) const;
  IndexValue operator-(const DimensionVector& o) const;
  DimensionVector scaled(long s) const;
  friend bool operator==(const DimensionVector&, const DimensionVector&) = default;

 private:
  std::vector<long> counts_;
};

/// Difference of two dimension vectors; an element of K_0(A) ≅ ℤ^k.
class IndexValue {
 public:
  IndexValue() = default;
  explicit IndexValue(std::vector<long> delta) : delta_(std::move(delta)) {}
  static IndexValue zero(int k) { return IndexValue(std::vector<long>(static_cast<size_t>(k), 0)); }

  const std::vector<long>& delta() const { return delta_; }
  long operator[](int i) const { return delta_[static_cast<size_t>(i)]; }
  int k() const { return static_cast<int>(delta_.size()); }
  bool is_zero() const;
  bool nonpositive() const;
  bool nonnegative() const;
  std::string str() const;

  IndexValue operator+(const IndexValue& o) const;
  IndexValue operator-() const;
  friend bool operator==(const IndexValue&, const IndexValue&) = default;

 private:
  std::vector<long> delta_;
};

/// Element of A stored block by block.
class AlgebraElement {
 public:
  AlgebraElement() = default;
  AlgebraElement(Signature sig, std::vector<Mat> blocks);

  static AlgebraElement zero(const Signature& sig);
  static AlgebraElement identity(const Signature& sig);
  static AlgebraElement scalar(const Signature& sig, cplx c);
  /// Central element sum_i c_i p_i.
  static AlgebraElement central(const Signature& sig, const std::vector<cplx>& coeffs);
  /// Matrix unit e_{rs} inside block i.
  static AlgebraElement matrix_unit(const Signature& sig, int block, int r, int s);

  const Signature& signature() const { return sig_; }
  const Mat& block(int i) const { return blocks_[static_cast<size_t>(i)]; }
  Mat& block(int i) { return blocks_[static_cast<size_t>(i)]; }
  const std::vector<Mat>& blocks() const { return blocks_; }

  double norm() const;
  bool is_zero(double tol = 0.0) const;
  bool is_central(double tol = 1e-12) const;
  /// Coefficients c_i when the element is central (block i equals c_i * I).
  std::vector<cplx> central_coeffs() const;

  AlgebraElement operator+(const AlgebraElement& o) const;
  AlgebraElement operator-(const AlgebraElement& o) const;
  AlgebraElement operator*(const AlgebraElement& o) const;
  AlgebraElement operator*(cplx s) const;
  AlgebraElement operator-() const;

 private:
  Signature sig_;
  std::vector<Mat> blocks_;
};

AlgebraElement star(const AlgebraElement& a);
/// Throws Singular when some block has smallest singular value <= tol.inv * ||a||.
AlgebraElement invert(const AlgebraElement& a, const Tolerances& tol = {});
/// The central projections p_i; their complex span is Z(A).
std::vector<AlgebraElement> central_basis(const Signature& sig);
/// Multiplicities of the simple modules in A_A, namely (n_1,...,n_k).
DimensionVector regular_representation_dim(const Signature& sig);
/// All matrix units; a complex basis of A.
std::vector<AlgebraElement> algebra_basis(const Signature& sig);
double distance(const AlgebraElement& a, const AlgebraElement& b);

}  // namespace hcm
