#pragma once

#include <vector>

#include "hcm/algebra.hpp"
#include "hcm/module.hpp"
#include "hcm/tolerances.hpp"

namespace hcm {

/// A-linear map L_M(A) -> L_N(A), an N x M matrix over A.
///
/// Stored per block: F_i is the (N n_i) x (M n_i) complex matrix whose (r,c)
/// n_i x n_i tile is block i of entry (r,c). The map acts by X_i -> F_i X_i,
/// which commutes with the right action X_i -> X_i a_i by construction.
class DenseOperator {
 public:
  DenseOperator() = default;
  DenseOperator(Signature sig, int domain, int codomain, std::vector<Mat> blocks);

  static DenseOperator zero(const Signature& sig, int domain, int codomain);
  static DenseOperator identity(const Signature& sig, int n);
  /// From an N x M grid of algebra elements (row-major: entries[r][c]).
  static DenseOperator from_entries(const Signature& sig, const std::vector<std::vector<AlgebraElement>>& entries);
  /// Diagonal operator with the given diagonal entries.
  static DenseOperator diagonal(const Signature& sig, const std::vector<AlgebraElement>& diag);
  /// Orthogonal projection onto a submodule.
  static DenseOperator projection(const Submodule& s);

  const Signature& signature() const { return sig_; }
  int domain() const { return domain_; }
  int codomain() const { return codomain_; }
  const Mat& block(int i) const { return blocks_[static_cast<size_t>(i)]; }
  Mat& block(int i) { return blocks_[static_cast<size_t>(i)]; }
  const std::vector<Mat>& blocks() const { return blocks_; }
  AlgebraElement entry(int r, int c) const;  // 0-based
  void set_entry(int r, int c, const AlgebraElement& a);

  double norm() const;
  ModuleVector apply(const ModuleVector& x) const;

  DenseOperator operator+(const DenseOperator& o) const;
  DenseOperator operator-(const DenseOperator& o) const;
  DenseOperator operator*(cplx s) const;

 private:
  Signature sig_;
  int domain_ = 0;
  int codomain_ = 0;
  std::vector<Mat> blocks_;
};

DenseOperator compose(const DenseOperator& g, const DenseOperator& f);
DenseOperator adjoint(const DenseOperator& f);
/// Map a submodule of the domain forward: F(S).
Submodule image_of(const DenseOperator& f, const Submodule& s, const Tolerances& tol = {});

Submodule kernel(const DenseOperator& f, const Tolerances& tol = {});
Submodule image(const DenseOperator& f, const Tolerances& tol = {});
/// Im(F)^⊥ inside the codomain.
Submodule cokernel(const DenseOperator& f, const Tolerances& tol = {});
/// Smallest singular value counted as nonzero. Throws ZeroOperator.
double closed_range_margin(const DenseOperator& f, const Tolerances& tol = {});

struct DecompositionWitness {
  Submodule M1, N1, M2, N2;
  double iso_margin = 0.0;
  double offdiag_residual = 0.0;
};

/// Canonical form ker^⊥ ⊕ ker -> Im ⊕ Im^⊥.
DecompositionWitness mphi_decomposition(const DenseOperator& f, const Tolerances& tol = {});
IndexValue index(const DenseOperator& f, const Tolerances& tol = {});

struct RegularityWitness {
  DenseOperator pseudo_inverse;
  double residual_fgf = 0.0;  // ||FGF - F||
  double residual_gfg = 0.0;  // ||GFG - G||
};

RegularityWitness pseudo_inverse(const DenseOperator& f, const Tolerances& tol = {});

struct WeylFlags {
  bool gc_weyl = false;
  bool upper_semi_weyl = false;
  bool lower_semi_weyl = false;
  DimensionVector kernel_dim;
  DimensionVector cokernel_dim;
};

WeylFlags weyl_gc_flags(const DenseOperator& f, const Tolerances& tol = {});

struct ExactSequenceReport {
  /// Dimension vectors of ker F, ker GF, ker G, cok F, cok GF, cok G.
  std::vector<DimensionVector> terms;
  /// Subspace distance between ker(outgoing) and Im(incoming) at each of the six nodes.
  std::vector<double> residuals;
  IndexValue alternating_sum;
  bool exact = false;
  double max_residual() const;
};

/// Exactness of 0 -> ker F -> ker GF -> ker G -> cok F -> cok GF -> cok G -> 0.
/// Throws NotRegular when F, G or GF has an undecidable range.
ExactSequenceReport exact_sequence_check(const DenseOperator& f, const DenseOperator& g, const Tolerances& tol = {});

}  // namespace hcm
