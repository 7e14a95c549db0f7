#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hcm/algebra.hpp"
#include "hcm/dense.hpp"
#include "hcm/tolerances.hpp"

namespace hcm {

/// One summand e_target · coeff of a formal finite sum in H_A.
struct Edge {
  long target = 0;
  AlgebraElement coeff;
};
using SparseVector = std::vector<Edge>;

/// Residue-class affine shift: for sources j ≡ r (mod m) with j ≥ j0,
/// e_j ↦ e_{t(j)} · coeff where t(j) = a·((j − r)/m) + b.
struct ShiftTerm {
  long m = 1;
  long r = 0;
  long a = 1;
  long b = 0;
  long j0 = 1;
  AlgebraElement coeff;

  bool applies(long j) const;
  long target(long j) const { return a * ((j - r) / m) + b; }
  long first_source() const;
  long first_target() const { return target(first_source()); }
  /// Source mapped onto t, if any.
  std::optional<long> source_of(long t) const;
};

/// Shift-type operator on H_A: terms, explicit exceptions that override the
/// terms on their source, and a finite correction supported on L_W x L_W.
class SymbolicOperator {
 public:
  SymbolicOperator() = default;
  explicit SymbolicOperator(Signature sig) : sig_(std::move(sig)) {}
  SymbolicOperator(Signature sig, std::vector<ShiftTerm> terms, std::map<long, SparseVector> exceptions = {},
                   std::optional<DenseOperator> correction = std::nullopt);

  const Signature& signature() const { return sig_; }
  const std::vector<ShiftTerm>& terms() const { return terms_; }
  const std::map<long, SparseVector>& exceptions() const { return exceptions_; }
  const std::optional<DenseOperator>& correction() const { return correction_; }
  int correction_width() const { return correction_ ? correction_->domain() : 0; }
  long max_exception_source() const;

  /// F(e_j) including the correction column.
  SparseVector eval_basis(long j) const;
  /// F(e_j) from terms and exceptions only.
  SparseVector eval_principal(long j) const;
  /// Edges (source, coeff) of the principal part landing on target t.
  std::vector<Edge> edges_into(long t) const;

  /// Largest coefficient norm over all parts.
  double coefficient_scale() const;
  /// lcm of the term moduli (1 without terms).
  long source_period() const;
  /// lcm of the term strides (1 without terms).
  long target_period() const;
  /// Sources from here on follow the periodic term pattern.
  long source_bound() const;
  /// Targets from here on follow the periodic term pattern.
  long target_bound() const;

  /// Returns a copy whose correction is increased by k (W x W, zero-padded to the larger width).
  SymbolicOperator plus_correction(const DenseOperator& k) const;

 private:
  void validate() const;

  Signature sig_;
  std::vector<ShiftTerm> terms_;
  std::map<long, SparseVector> exceptions_;
  std::optional<DenseOperator> correction_;
};

/// Semantic equality: identical action on every basis vector.
bool equivalent(const SymbolicOperator& f, const SymbolicOperator& g, double tol = 1e-12);

SymbolicOperator adjoint_symbolic(const SymbolicOperator& f);
/// G ∘ F. Throws NotRepresentable when the result would exceed the size caps.
SymbolicOperator compose_symbolic(const SymbolicOperator& g, const SymbolicOperator& f);
SymbolicOperator power_symbolic(const SymbolicOperator& f, int m);

struct CatalogParams {
  std::optional<AlgebraElement> alpha;  // ex9 weight
};

/// Catalog: ex1..ex9 (with adjoint companions ex3d, ex6d, ex7d, ex8d), ex15, ex15f, ex15g, L, S, I.
SymbolicOperator catalog(const std::string& name, const Signature& sig = default_signature(),
                         const CatalogParams& params = {});
std::vector<std::string> catalog_names();

struct FiberPattern {
  long modulus = 1;
  long residue = 0;
  long start = 1;
  std::vector<long> fiber;  // per block
};

struct KernelDescriptor {
  bool finitely_generated = false;
  /// Per block: -1 when infinitely generated, else the multiplicity.
  std::vector<long> counts;
  std::vector<SparseVector> generators;  // only when finitely generated
  std::vector<FiberPattern> pattern;     // infinite residue classes
  std::optional<DimensionVector> dim_vector() const;
};

struct ClassificationReport {
  bool decided = false;
  std::string reason;  // why undecided
  bool in_MPhi_plus = false;
  bool in_MPhi_minus = false;
  bool in_MPhi = false;
  bool in_MPhi_0 = false;
  bool in_MPhi_plus_minus = false;  // MΦ₊ with ker ⪯ Im^⊥
  bool in_MPhi_minus_plus = false;  // MΦ₋ with Im^⊥ ⪯ ker
  bool adjointable = false;         // hat classes coincide with the above when set
  std::optional<IndexValue> index;
  KernelDescriptor kernel;
  KernelDescriptor cokernel;

  bool same_flags(const ClassificationReport& o) const;
};

ClassificationReport classify_symbolic(const SymbolicOperator& f, const Tolerances& tol = {});

/// Kernel multiplicity per block at source j (principal part only).
std::vector<long> kernel_fiber(const SymbolicOperator& f, long j, const Tolerances& tol = {});
/// Cokernel multiplicity per block at target t (principal part only).
std::vector<long> cokernel_fiber(const SymbolicOperator& f, long t, const Tolerances& tol = {});

/// Square compression to L_N: rows with targets > N are dropped.
DenseOperator truncate(const SymbolicOperator& f, int n);
/// Rectangular window L_{N_in} -> L_{N_out} with N_out the largest target hit, so nothing is clipped.
DenseOperator windowed_truncate(const SymbolicOperator& f, int n_in);
/// Rows 1..rows and columns 1..cols of the infinite matrix.
DenseOperator dense_window(const SymbolicOperator& f, int rows, int cols, bool with_correction = true);

struct WindowDiagnostic {
  int n_in = 0;
  int n_out = 0;
  bool decoupled = false;       // no source beyond the window reaches a target inside it
  bool index_faithful = false;  // decoupled and the window contains every kernel source and cokernel target
};

WindowDiagnostic window_diagnostic(const SymbolicOperator& f, int n_in, const Tolerances& tol = {});
/// Smallest n_in ≥ start whose window is index-faithful. Throws WindowTooSmall past `limit`.
int faithful_window(const SymbolicOperator& f, int start, int limit = 256, const Tolerances& tol = {});

}  // namespace hcm
