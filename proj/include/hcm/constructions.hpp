#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hcm/dense.hpp"
#include "hcm/module.hpp"
#include "hcm/symbolic.hpp"
#include "hcm/tolerances.hpp"

namespace hcm {

/// Two complements of a common N with N1 ≅ N2 but possibly N1 ≠ N2.
struct PairedDecomposition {
  Submodule N;
  Submodule N1;
  Submodule N2;
  /// Both direct-sum identities hold and d(N1) = d(N2).
  bool valid(const Tolerances& tol = {}) const;
};

/// Block-diagonal a ⊕ b.
DenseOperator direct_sum(const DenseOperator& a, const DenseOperator& b);

/// Projection onto `onto` along `along`, which must be direct complements. Throws NotDirect.
DenseOperator oblique_projection(const Submodule& onto, const Submodule& along, const Tolerances& tol = {});

/// F with kernel N1 and image M2, acting as an isomorphism M1 → M2.
/// `core` holds one invertible d_i x d_i matrix per block (d = d(M1) = d(M2)) expressed in the
/// orthonormal bases of M1 and M2; identity when omitted. Throws NotDirect.
DenseOperator fredholm_from_decomposition(const Submodule& M1, const Submodule& N1, const Submodule& M2,
                                          const Submodule& N2, const std::optional<std::vector<Mat>>& core = std::nullopt,
                                          const Tolerances& tol = {});

/// N1 = Span{x}, N2 = L_1, N = L_1^⊥. Throws HeadNotInvertible unless x_1 is invertible.
PairedDecomposition paired_invertible_head(const ModuleVector& x, const Tolerances& tol = {});

/// N1 = Span{x}, N2 = Span{(P,0,...)} with P the range projection of x_1, N = L_1^⊥ + Span{(1−P,0,...)}.
/// Throws KernelNotNested unless ker x_1 ⊆ ker x_j for all j.
PairedDecomposition paired_kernel_nested(const ModuleVector& x, const Tolerances& tol = {});
/// ||(p_1 restricted to N1)^{-1}||^{-1}: smallest singular value of the first-coordinate map N1 → N2.
double head_projection_margin(const PairedDecomposition& pd, const Tolerances& tol = {});

enum class SpecialKind { Tilde0, HatPlus };

struct SpecialClassResult {
  DenseOperator F;
  DimensionVector kernel_dim;
  DimensionVector cokernel_dim;
  bool in_class = false;  // Tilde0: kernel ≅ cokernel; HatPlus: kernel ⪯ cokernel
};

/// F = U Π₁ (+ φ ψ (I − Π₁) for HatPlus) with Π₁ the projection onto N along N1.
/// U must be invertible; φ, ψ default to zero.
SpecialClassResult special_class_operator(const PairedDecomposition& pd, SpecialKind kind, const DenseOperator& U,
                                          const std::optional<DenseOperator>& phi = std::nullopt,
                                          const std::optional<DenseOperator>& psi = std::nullopt,
                                          const Tolerances& tol = {});

/// Nilpotent shift of degree q on L_n (e_k ↦ e_{k−1} for 2 ≤ k ≤ q, all else ↦ 0).
DenseOperator nilpotent_block(const Signature& sig, int n, int q);

struct BFredholmMember {
  int window = 0;  // head truncation size N
  int q = 1;
  int n_head = 1;
  /// T^m for m = 1..m_max+1, T = (windowed head) ⊕ C.
  std::vector<DenseOperator> powers;
  std::vector<DimensionVector> ker_dims;  // d(ker T^m)
  std::vector<DimensionVector> cok_dims;  // d(Im(T^m)^⊥)
  /// T restricted to Im T^m, m = 1..m_max: d(ker T ∩ Im T^m), d(Im T^m ⊖ Im T^{m+1}) and the index.
  std::vector<DimensionVector> restricted_ker;
  std::vector<DimensionVector> restricted_cok;
  std::vector<IndexValue> restricted_index;
  /// ||P_{ker T^m} − P_{ker T^{m+1}}||, m = 1..m_max.
  std::vector<double> kernel_step;
};

/// Builds T = F_head ⊕ C on growing windows and the data needed for power stabilization.
/// Throws UndecidedInput unless every power F^m (m ≤ m_max+1) classifies as upper semi-Fredholm.
std::vector<BFredholmMember> bfredholm_recipe(const SymbolicOperator& fplus, int q, int n_head,
                                              const std::vector<int>& windows, int m_max,
                                              const Tolerances& tol = {});

/// Multiplication by diag(1/d, 2/d, ..., 1) on A = C^d.
DenseOperator range17_operator(int d);

struct Sum18Member {
  Submodule M;  // line span(u) inside the first coordinate
  Submodule N;  // line span(v), angle 1/d to u
  DenseOperator F;  // ker F = N, Im F = M ⊕ second coordinate
};
Sum18Member sum18_member(int d);

struct RefinementRow {
  int d = 0;
  double margin = 0.0;  // closed-range margin (F for range17, F² for sum18)
  std::optional<double> angle;
};

std::vector<int> default_refinement_params();
std::vector<RefinementRow> nonclosed_range_family(const std::vector<int>& ds = default_refinement_params());
std::vector<RefinementRow> nonclosed_sum_family(const std::vector<int>& ds = default_refinement_params());
/// Margins strictly decreasing along the rows.
bool margins_strictly_decreasing(const std::vector<RefinementRow>& rows);

}  // namespace hcm
