#pragma once

#include <utility>
#include <vector>

#include "hcm/algebra.hpp"
#include "hcm/tolerances.hpp"

namespace hcm {

/// Element of L_N(A) = A^N.
///
/// Stored block-reduced: block i is the (N*n_i) x n_i matrix whose rows
/// j*n_i .. (j+1)*n_i - 1 hold block i of the j-th entry.
class ModuleVector {
 public:
  ModuleVector() = default;
  ModuleVector(Signature sig, std::vector<Mat> blocks);
  ModuleVector(const Signature& sig, const std::vector<AlgebraElement>& entries);

  static ModuleVector zero(const Signature& sig, int length);
  /// Standard basis vector e_j (1-based), entry j equal to the identity.
  static ModuleVector basis(const Signature& sig, int length, int j);

  const Signature& signature() const { return sig_; }
  int length() const { return length_; }
  AlgebraElement entry(int j) const;  // 0-based
  void set_entry(int j, const AlgebraElement& a);
  const Mat& block(int i) const { return blocks_[static_cast<size_t>(i)]; }
  const std::vector<Mat>& blocks() const { return blocks_; }

  ModuleVector operator+(const ModuleVector& o) const;
  ModuleVector operator-(const ModuleVector& o) const;
  /// Right action x·a.
  ModuleVector operator*(const AlgebraElement& a) const;
  ModuleVector operator*(cplx s) const;

  double norm() const;

 private:
  Signature sig_;
  int length_ = 0;
  std::vector<Mat> blocks_;
};

/// A-valued inner product <x,y> = sum_j x_j^* y_j.
AlgebraElement inner(const ModuleVector& x, const ModuleVector& y);

/// Finitely generated (closed) submodule of L_N(A).
///
/// A right submodule is determined blockwise by a column space V_i of C^{N n_i};
/// its block-i part is {X : col(X) in V_i}. Only orthonormal bases of the V_i are kept.
class Submodule {
 public:
  Submodule() = default;
  Submodule(Signature sig, int ambient, std::vector<Mat> bases);

  static Submodule zero(const Signature& sig, int ambient);
  static Submodule full(const Signature& sig, int ambient);
  /// Span of e_j for the listed 1-based indices.
  static Submodule coordinates(const Signature& sig, int ambient, const std::vector<int>& js);
  /// Orthonormalize arbitrary column spanning sets per block.
  static Submodule from_block_spans(const Signature& sig, int ambient, const std::vector<Mat>& spans,
                                    const Tolerances& tol = {});
  /// Rebuild from an orthonormal basis of the underlying complex space (see complex_basis).
  /// Throws NonIntegralBlock or ShapeMismatch when the space is not a right submodule.
  static Submodule from_complex_basis(const Signature& sig, int ambient, const Mat& basis,
                                      const Tolerances& tol = {});

  const Signature& signature() const { return sig_; }
  int ambient() const { return ambient_; }
  const Mat& block_basis(int i) const { return bases_[static_cast<size_t>(i)]; }
  const std::vector<Mat>& block_bases() const { return bases_; }
  Mat projector(int i) const;

  DimensionVector dim_vector() const;
  /// Complex dimension of the underlying space, sum_i n_i * dim V_i.
  long complex_dim() const;
  bool is_zero() const;

  /// Orthonormal basis of the underlying complex space inside C^{N * sum n_i^2}.
  /// Coordinates are ordered block by block, each block as the column-major vec of X_i.
  Mat complex_basis() const;

  bool contains(const ModuleVector& x, double tol = 1e-9) const;
  ModuleVector project(const ModuleVector& x) const;

 private:
  Signature sig_;
  int ambient_ = 0;
  std::vector<Mat> bases_;
};

/// Position of block i inside the complex coordinates used by complex_basis.
long complex_offset(const Signature& sig, int ambient, int block);

Submodule span_submodule(const Signature& sig, int ambient, const std::vector<ModuleVector>& generators,
                         const Tolerances& tol = {});
DimensionVector dimension_vector(const Submodule& s);
Submodule orth_complement(const Submodule& s);
bool is_embeddable(const Submodule& s, const Submodule& t);
/// c0(M,N) = max_i || V_{M,i}^* V_{N,i} ||.
double dixmier_angle(const Submodule& m, const Submodule& n);
/// (M+N, M∩N). Throws RankAmbiguous near-degenerate configurations.
std::pair<Submodule, Submodule> sum_and_intersection(const Submodule& m, const Submodule& n,
                                                     const Tolerances& tol = {});
/// max_i || P_{S,i} - P_{T,i} ||.
double submodule_distance(const Submodule& s, const Submodule& t);
/// Direct sum check: dim vectors add up to the ambient and the intersection is zero.
bool is_direct_complement(const Submodule& s, const Submodule& t, const Tolerances& tol = {});

}  // namespace hcm
