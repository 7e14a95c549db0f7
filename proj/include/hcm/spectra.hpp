#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hcm/algebra.hpp"
#include "hcm/dense.hpp"
#include "hcm/parallel.hpp"
#include "hcm/symbolic.hpp"
#include "hcm/tolerances.hpp"

namespace hcm {

/// p(S) = sum_j c_j S^j with central coefficients; coeffs[j][i] is c_j on block i.
/// With `in_adjoint` set the polynomial is taken in L = S^* instead.
struct ShiftPolynomial {
  Signature sig;
  std::vector<std::vector<cplx>> coeffs;
  bool in_adjoint = false;

  static ShiftPolynomial shift(const Signature& sig);
  static ShiftPolynomial constant(const Signature& sig, cplx c);
  /// Scalar polynomial (same coefficients on every block).
  static ShiftPolynomial scalar(const Signature& sig, const std::vector<cplx>& c, bool in_adjoint = false);

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  std::vector<cplx> block_poly(int i) const;
  bool is_zero() const;
  /// p − α for central α.
  ShiftPolynomial minus(const std::vector<cplx>& alpha) const;
  /// Adjoint operator as a polynomial in the other shift.
  ShiftPolynomial adjoint() const;
  SymbolicOperator to_symbolic() const;
};

/// Recognizes operators whose terms are all central pure powers of S (or all of L).
std::optional<ShiftPolynomial> as_shift_polynomial(const SymbolicOperator& f);

/// Roots of sum_j c_j z^j (trailing zero coefficients trimmed).
std::vector<cplx> polynomial_roots(const std::vector<cplx>& c);
/// min over |z|=1 of |sum_j c_j z^j|.
double min_modulus_on_circle(const std::vector<cplx>& c);

/// Blockwise Toeplitz classification. Throws DegenerateSymbol if some block polynomial vanishes.
ClassificationReport classify_shift_polynomial(const ShiftPolynomial& p, const Tolerances& tol = {});

struct RadiusInterval {
  double lo = 0.0;
  double hi = 0.0;
};

struct RadiiEstimate {
  double s_plus = 0.0, s_minus = 0.0, s_phi = 0.0, s = 0.0;
  /// Independent estimates of s_phi and s before the identities are enforced.
  double raw_s_phi = 0.0, raw_s = 0.0;
  std::string mode;  // "exact" or "grid"
  double grid_radius = 0.0;
  double grid_step = 0.0;
  /// Grid mode brackets [best − h, best] per radius (plus, minus, phi, s).
  std::vector<RadiusInterval> intervals;
  bool none_failing = false;  // grid mode: no failing point within the radius
};

RadiiEstimate radii_exact(const ShiftPolynomial& p);
/// Grid mode over central α with per-axis values i·h, |i| ≤ R/h. R ≤ 0 selects the default radius.
RadiiEstimate radii_grid(const ShiftPolynomial& p, double radius = -1.0, double step = -1.0, Exec exec = Exec::Parallel,
                         const Tolerances& tol = {});
/// Exact mode when the operator is a shift polynomial; Undecidable otherwise.
RadiiEstimate radii(const SymbolicOperator& f);
double default_grid_radius(const ShiftPolynomial& p);

/// Central grid: per-block complex values; the grid is their product.
struct CentralGrid {
  Signature sig;
  double radius = 1.0;
  double step = 0.1;
  std::vector<std::vector<cplx>> values;  // per block

  static CentralGrid make(const Signature& sig, double radius, double step);
  long size() const;
  std::vector<cplx> point(long index) const;
};

struct SpectralSample {
  std::vector<cplx> alpha;  // central coefficients
  double min_sv = 0.0;
  bool invertible = false;
  bool is_eigen = false;
  bool gc_weyl = true;
};

/// Samples F − αI over the grid; point count capped at `max_points` (ShapeMismatch beyond).
std::vector<SpectralSample> spectrum_partition(const DenseOperator& f, const CentralGrid& grid, Exec exec = Exec::Parallel,
                                               const Tolerances& tol = {}, long max_points = 5'000'000);

struct HomotopyStep {
  std::vector<cplx> alpha;
  ClassificationReport report;
};

struct HomotopyReport {
  std::vector<HomotopyStep> steps;
  bool constant = false;
};

/// Linear path α₀ → α₁ in Z(A). Throws PathHitsBoundary at the first step leaving MΦ± or changing the index.
HomotopyReport homotopy_sweep(const ShiftPolynomial& p, const std::vector<cplx>& alpha0, const std::vector<cplx>& alpha1,
                              int steps, const Tolerances& tol = {});

struct RieszReport {
  DenseOperator P0;  // spectral projection for the cluster at α
  DenseOperator K;
  DenseOperator T;
  double commute_residual = 0.0;    // ||FK − KF||
  double projector_residual = 0.0;  // ||P0² − P0|| + ||F P0 − P0 F||
  double split_residual = 0.0;      // ||(F − α) − (T + K)||
  double t_margin = 0.0;            // smallest singular value of T
  double offdiag_residual = 0.0;    // block-diagonal form w.r.t. N(P0) ⊕ R(P0)
  double iso_margin = 0.0;          // (F − α) restricted to N(P0)
  DimensionVector range_dim;        // d(R(P0))
  DimensionVector kernel_dim;       // d(ker(F − α))
  double kernel_containment = 0.0;  // ||(I − P0) restricted to ker(F − α)||
  bool clause_a = false, clause_b = false, clause_c = false, clause_d = false, clause_e = false;
  bool nontrivial = false;
  bool all() const { return clause_a && clause_b && clause_c && clause_d && clause_e && nontrivial; }
};

/// Throws NotIsolated when α has no eigenvalue or another eigenvalue lies within ρ.
RieszReport riesz_analyze(const DenseOperator& f, const std::vector<cplx>& alpha, double rho, const Tolerances& tol = {});

}  // namespace hcm
