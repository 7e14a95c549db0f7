#include "hcm/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "hcm/errors.hpp"
#include "hcm/linalg.hpp"

namespace hcm {

namespace {

constexpr double kCircleTol = 1e-10;

std::vector<cplx> trimmed(std::vector<cplx> c) {
  while (!c.empty() && c.back() == cplx(0.0)) c.pop_back();
  return c;
}

cplx horner(const std::vector<cplx>& c, cplx z) {
  cplx v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
  return v;
}

struct BlockSymbol {
  bool degenerate = false;
  bool on_circle = false;
  long inside = 0;
};

BlockSymbol block_symbol(const std::vector<cplx>& poly) {
  BlockSymbol s;
  const auto c = trimmed(poly);
  if (c.empty()) {
    s.degenerate = true;
    return s;
  }
  for (const cplx& z : polynomial_roots(c)) {
    const double r = std::abs(z);
    if (std::abs(r - 1.0) <= kCircleTol)
      s.on_circle = true;
    else if (r < 1.0)
      ++s.inside;
  }
  return s;
}

void finish_flags(ClassificationReport& rep, int k) {
  rep.decided = true;
  rep.adjointable = true;
  rep.kernel.finitely_generated = std::all_of(rep.kernel.counts.begin(), rep.kernel.counts.end(), [](long c) { return c >= 0; });
  rep.cokernel.finitely_generated =
      std::all_of(rep.cokernel.counts.begin(), rep.cokernel.counts.end(), [](long c) { return c >= 0; });
  rep.in_MPhi_plus = rep.kernel.finitely_generated;
  rep.in_MPhi_minus = rep.cokernel.finitely_generated;
  rep.in_MPhi = rep.in_MPhi_plus && rep.in_MPhi_minus;
  if (rep.in_MPhi) {
    rep.index = *rep.kernel.dim_vector() - *rep.cokernel.dim_vector();
    rep.in_MPhi_0 = rep.index->is_zero();
  }
  bool kc_le = true, ck_le = true;
  for (int i = 0; i < k; ++i) {
    const long kc = rep.kernel.counts[i], cc = rep.cokernel.counts[i];
    if (kc < 0 || (cc >= 0 && kc > cc)) kc_le = false;
    if (cc < 0 || (kc >= 0 && cc > kc)) ck_le = false;
  }
  rep.in_MPhi_plus_minus = rep.in_MPhi_plus && kc_le;
  rep.in_MPhi_minus_plus = rep.in_MPhi_minus && ck_le;
}

}  // namespace

ShiftPolynomial ShiftPolynomial::shift(const Signature& sig) {
  return scalar(sig, {0.0, 1.0});
}

ShiftPolynomial ShiftPolynomial::constant(const Signature& sig, cplx c) { return scalar(sig, {c}); }

ShiftPolynomial ShiftPolynomial::scalar(const Signature& sig, const std::vector<cplx>& c, bool in_adjoint) {
  ShiftPolynomial p{sig, {}, in_adjoint};
  for (cplx v : c) p.coeffs.emplace_back(static_cast<size_t>(sig.k()), v);
  return p;
}

std::vector<cplx> ShiftPolynomial::block_poly(int i) const {
  std::vector<cplx> out;
  for (const auto& c : coeffs) out.push_back(c[static_cast<size_t>(i)]);
  return out;
}

bool ShiftPolynomial::is_zero() const {
  for (const auto& c : coeffs)
    for (cplx v : c)
      if (v != cplx(0.0)) return false;
  return true;
}

ShiftPolynomial ShiftPolynomial::minus(const std::vector<cplx>& alpha) const {
  if (static_cast<int>(alpha.size()) != sig.k()) fail(ErrorKind::ShapeMismatch, "one central coefficient per block");
  ShiftPolynomial p = *this;
  if (p.coeffs.empty()) p.coeffs.emplace_back(static_cast<size_t>(sig.k()), 0.0);
  for (int i = 0; i < sig.k(); ++i) p.coeffs[0][static_cast<size_t>(i)] -= alpha[static_cast<size_t>(i)];
  return p;
}

ShiftPolynomial ShiftPolynomial::adjoint() const {
  ShiftPolynomial p = *this;
  p.in_adjoint = !in_adjoint;
  for (auto& c : p.coeffs)
    for (auto& v : c) v = std::conj(v);
  return p;
}

SymbolicOperator ShiftPolynomial::to_symbolic() const {
  std::vector<ShiftTerm> terms;
  for (size_t j = 0; j < coeffs.size(); ++j) {
    const AlgebraElement c = AlgebraElement::central(sig, coeffs[j]);
    if (c.is_zero()) continue;
    ShiftTerm t;
    t.coeff = c;
    const long jj = static_cast<long>(j);
    t.b = in_adjoint ? -jj : jj;
    t.j0 = in_adjoint ? jj + 1 : 1;
    terms.push_back(t);
  }
  return SymbolicOperator(sig, std::move(terms));
}

std::optional<ShiftPolynomial> as_shift_polynomial(const SymbolicOperator& f) {
  if (!f.exceptions().empty() || f.correction()) return std::nullopt;
  const Signature& sig = f.signature();
  bool has_s = false, has_l = false;
  std::vector<std::vector<cplx>> coeffs;
  for (const auto& t : f.terms()) {
    if (t.m != 1 || t.a != 1 || !t.coeff.is_central()) return std::nullopt;
    long power;
    if (t.b >= 0 && t.first_source() == 1) {
      power = t.b;
      if (t.b > 0) has_s = true;
    } else if (t.b < 0 && t.first_source() == 1 - t.b) {
      power = -t.b;
      has_l = true;
    } else {
      return std::nullopt;
    }
    if (static_cast<long>(coeffs.size()) <= power) coeffs.resize(static_cast<size_t>(power + 1), std::vector<cplx>(static_cast<size_t>(sig.k()), 0.0));
    const auto c = t.coeff.central_coeffs();
    for (int i = 0; i < sig.k(); ++i) coeffs[static_cast<size_t>(power)][static_cast<size_t>(i)] += c[static_cast<size_t>(i)];
  }
  if (has_s && has_l) return std::nullopt;
  if (coeffs.empty()) coeffs.emplace_back(static_cast<size_t>(sig.k()), 0.0);
  return ShiftPolynomial{sig, std::move(coeffs), has_l};
}

std::vector<cplx> polynomial_roots(const std::vector<cplx>& poly) {
  const auto c = trimmed(poly);
  const int deg = static_cast<int>(c.size()) - 1;
  if (deg <= 0) return {};
  if (deg == 1) return {-c[0] / c[1]};
  Mat comp = Mat::Zero(deg, deg);
  for (int r = 1; r < deg; ++r) comp(r, r - 1) = 1.0;
  for (int r = 0; r < deg; ++r) comp(r, deg - 1) = -c[static_cast<size_t>(r)] / c[static_cast<size_t>(deg)];
  Eigen::ComplexEigenSolver<Mat> es(comp, false);
  std::vector<cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + deg);
  return out;
}

double min_modulus_on_circle(const std::vector<cplx>& poly) {
  const auto c = trimmed(poly);
  if (c.empty()) return 0.0;
  const int m = static_cast<int>(c.size()) - 1;
  if (m == 0) return std::abs(c[0]);
  if (m == 1) return std::abs(std::abs(c[0]) - std::abs(c[1]));
  // |p(z)|² = sum_k r_k z^k on the circle; critical points solve z^m sum_k k r_k z^k = 0.
  std::vector<cplx> r(static_cast<size_t>(m + 1), 0.0);
  for (int k = 0; k <= m; ++k)
    for (int j = 0; j + k <= m; ++j) r[static_cast<size_t>(k)] += c[static_cast<size_t>(j + k)] * std::conj(c[static_cast<size_t>(j)]);
  double rmax = 0.0;
  for (int k = 1; k <= m; ++k) rmax = std::max(rmax, std::abs(r[static_cast<size_t>(k)]));
  if (rmax <= 1e-15 * std::abs(r[0])) return std::abs(horner(c, 1.0));
  std::vector<cplx> q(static_cast<size_t>(2 * m + 1), 0.0);
  for (int k = 1; k <= m; ++k) {
    q[static_cast<size_t>(m + k)] += static_cast<double>(k) * r[static_cast<size_t>(k)];
    q[static_cast<size_t>(m - k)] -= static_cast<double>(k) * std::conj(r[static_cast<size_t>(k)]);
  }
  double best = std::numeric_limits<double>::infinity();
  for (const cplx& z : polynomial_roots(q)) {
    const double a = std::abs(z);
    if (a > 0 && std::abs(a - 1.0) < 1e-4) best = std::min(best, std::abs(horner(c, z / a)));
  }
  for (int s = 0; s < 512; ++s) {
    const double th = 2.0 * std::numbers::pi * s / 512.0;
    best = std::min(best, std::abs(horner(c, std::polar(1.0, th))));
  }
  return best;
}

ClassificationReport classify_shift_polynomial(const ShiftPolynomial& p, const Tolerances&) {
  const int k = p.sig.k();
  ClassificationReport rep;
  rep.kernel.counts.assign(static_cast<size_t>(k), 0);
  rep.cokernel.counts.assign(static_cast<size_t>(k), 0);
  bool boundary = false;
  for (int i = 0; i < k; ++i) {
    const BlockSymbol s = block_symbol(p.block_poly(i));
    if (s.degenerate) fail(ErrorKind::DegenerateSymbol, "symbol vanishes identically on block " + std::to_string(i));
    if (s.on_circle) {
      boundary = true;
      continue;
    }
    const long deficit = s.inside * p.sig.n(i);
    (p.in_adjoint ? rep.kernel : rep.cokernel).counts[static_cast<size_t>(i)] = deficit;
  }
  if (boundary) {
    // Range not closed: neither semi-Fredholm class.
    rep.decided = true;
    rep.adjointable = true;
    rep.reason = "symbol vanishes on the unit circle";
    rep.kernel.counts.assign(static_cast<size_t>(k), -1);
    rep.cokernel.counts.assign(static_cast<size_t>(k), -1);
    return rep;
  }
  finish_flags(rep, k);
  return rep;
}

double default_grid_radius(const ShiftPolynomial& p) {
  double s = 0.0;
  for (const auto& c : p.coeffs) {
    double m = 0.0;
    for (cplx v : c) m = std::max(m, std::abs(v));
    s += m;
  }
  return s > 0 ? 1.25 * s : 1.0;
}

RadiiEstimate radii_exact(const ShiftPolynomial& p) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < p.sig.k(); ++i) best = std::min(best, min_modulus_on_circle(p.block_poly(i)));
  RadiiEstimate r;
  r.mode = "exact";
  r.s_plus = r.s_minus = best;
  r.raw_s_phi = r.raw_s = best;
  r.s_phi = std::min(r.s_plus, r.s_minus);
  r.s = std::max(r.s_plus, r.s_minus);
  return r;
}

RadiiEstimate radii_grid(const ShiftPolynomial& p, double radius, double step, Exec exec, const Tolerances&) {
  const double R = radius > 0 ? radius : default_grid_radius(p);
  const double h = step > 0 ? step : 0.05 * R;
  const long K = static_cast<long>(std::floor(R / h + 1e-9));
  const long side = 2 * K + 1;
  const int k = p.sig.k();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < k; ++i) {
    const auto poly = p.block_poly(i);
    auto value = [&](long idx) { return cplx(static_cast<double>(idx % side - K) * h, static_cast<double>(idx / side - K) * h); };
    const auto table = parallel_map<BlockSymbol>(
        side * side,
        [&](long idx) {
          auto q = poly;
          if (q.empty()) q.push_back(0.0);
          q[0] -= value(idx);
          return block_symbol(q);
        },
        exec);
    auto failing = [](const BlockSymbol& s) { return s.degenerate || s.on_circle; };
    for (long idx = 0; idx < side * side; ++idx) {
      const double norm_here = std::abs(value(idx));
      if (failing(table[static_cast<size_t>(idx)])) {
        best = std::min(best, norm_here);
        continue;
      }
      const long x = idx % side, y = idx / side;
      const long nbrs[2] = {x + 1 < side ? idx + 1 : -1, y + 1 < side ? idx + side : -1};
      for (long nb : nbrs) {
        if (nb < 0 || failing(table[static_cast<size_t>(nb)])) continue;
        if (table[static_cast<size_t>(nb)].inside != table[static_cast<size_t>(idx)].inside)
          best = std::min(best, std::max(norm_here, std::abs(value(nb))));
      }
    }
  }
  RadiiEstimate r;
  r.mode = "grid";
  r.grid_radius = R;
  r.grid_step = h;
  if (!std::isfinite(best)) {
    r.none_failing = true;
    best = R;
  }
  r.s_plus = r.s_minus = best;
  r.raw_s_phi = r.raw_s = best;
  r.s_phi = std::min(r.s_plus, r.s_minus);
  r.s = std::max(r.s_plus, r.s_minus);
  r.intervals.assign(4, RadiusInterval{std::max(0.0, best - h), best});
  return r;
}

RadiiEstimate radii(const SymbolicOperator& f) {
  const auto p = as_shift_polynomial(f);
  if (!p) fail(ErrorKind::Undecidable, "radii are only available for shift polynomials with central coefficients");
  return radii_exact(*p);
}

CentralGrid CentralGrid::make(const Signature& sig, double radius, double step) {
  if (radius <= 0 || step <= 0) fail(ErrorKind::ShapeMismatch, "grid radius and step must be positive");
  CentralGrid g{sig, radius, step, {}};
  const long K = static_cast<long>(std::floor(radius / step + 1e-9));
  std::vector<cplx> vals;
  for (long y = -K; y <= K; ++y)
    for (long x = -K; x <= K; ++x) vals.emplace_back(static_cast<double>(x) * step, static_cast<double>(y) * step);
  g.values.assign(static_cast<size_t>(sig.k()), vals);
  return g;
}

long CentralGrid::size() const {
  long s = 1;
  for (const auto& v : values) s *= static_cast<long>(v.size());
  return s;
}

std::vector<cplx> CentralGrid::point(long index) const {
  std::vector<cplx> out(values.size());
  for (size_t i = values.size(); i-- > 0;) {
    const long n = static_cast<long>(values[i].size());
    out[i] = values[i][static_cast<size_t>(index % n)];
    index /= n;
  }
  return out;
}

std::vector<SpectralSample> spectrum_partition(const DenseOperator& f, const CentralGrid& grid, Exec exec,
                                               const Tolerances& tol, long max_points) {
  if (f.domain() != f.codomain()) fail(ErrorKind::ShapeMismatch, "spectrum needs a square operator");
  if (!(grid.sig == f.signature())) fail(ErrorKind::SignatureMismatch, "grid signature differs from the operator");
  const long total = grid.size();
  if (total > max_points) fail(ErrorKind::ShapeMismatch, "grid has " + std::to_string(total) + " points, above the cap");
  const int k = f.signature().k();
  // Smallest singular value of F_i − c I per block value, then combine over the product.
  std::vector<std::vector<double>> table(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    const Mat& fi = f.block(i);
    const auto& vals = grid.values[static_cast<size_t>(i)];
    table[static_cast<size_t>(i)] = parallel_map<double>(
        static_cast<long>(vals.size()),
        [&](long v) {
          const Mat g = fi - vals[static_cast<size_t>(v)] * Mat::Identity(fi.rows(), fi.cols());
          if (g.size() == 0) return std::numeric_limits<double>::infinity();
          Eigen::BDCSVD<Mat> svd(g);
          return svd.singularValues()(svd.singularValues().size() - 1);
        },
        exec);
  }
  const double thresh = tol.rank * std::max(1.0, f.norm());
  return parallel_map<SpectralSample>(
      total,
      [&](long idx) {
        SpectralSample s;
        long rem = idx;
        s.alpha.resize(static_cast<size_t>(k));
        s.min_sv = std::numeric_limits<double>::infinity();
        for (int i = k; i-- > 0;) {
          const long n = static_cast<long>(grid.values[static_cast<size_t>(i)].size());
          const long v = rem % n;
          rem /= n;
          s.alpha[static_cast<size_t>(i)] = grid.values[static_cast<size_t>(i)][static_cast<size_t>(v)];
          s.min_sv = std::min(s.min_sv, table[static_cast<size_t>(i)][static_cast<size_t>(v)]);
        }
        s.is_eigen = s.min_sv <= thresh;
        s.invertible = !s.is_eigen;
        s.gc_weyl = true;  // square blocks: kernel and cokernel have equal dimension vectors
        return s;
      },
      exec);
}

HomotopyReport homotopy_sweep(const ShiftPolynomial& p, const std::vector<cplx>& alpha0, const std::vector<cplx>& alpha1,
                              int steps, const Tolerances& tol) {
  if (steps < 1) steps = 1;
  HomotopyReport rep;
  for (int s = 0; s <= steps; ++s) {
    const double t = static_cast<double>(s) / steps;
    std::vector<cplx> a(alpha0.size());
    for (size_t i = 0; i < a.size(); ++i) a[i] = (1.0 - t) * alpha0[i] + t * alpha1[i];
    ClassificationReport r = classify_shift_polynomial(p.minus(a), tol);
    if (!r.in_MPhi_plus && !r.in_MPhi_minus)
      fail(ErrorKind::PathHitsBoundary, "step " + std::to_string(s) + " leaves the semi-Fredholm set");
    if (!rep.steps.empty() && !(r.index == rep.steps.front().report.index))
      fail(ErrorKind::PathHitsBoundary, "index changes between steps " + std::to_string(s - 1) + " and " + std::to_string(s));
    rep.steps.push_back({std::move(a), std::move(r)});
  }
  rep.constant = true;
  return rep;
}

// ---------------------------------------------------------------------------
// Riesz points

namespace {

// Reorder a complex Schur form so that eigenvalues satisfying `select` come first.
template <class Pred>
int reorder_schur(Mat& T, Mat& Q, Pred select) {
  const Eigen::Index n = T.rows();
  int placed = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!select(T(i, i))) continue;
    for (Eigen::Index j = i; j > placed; --j) {
      Eigen::JacobiRotation<cplx> rot;
      rot.makeGivens(T(j - 1, j), T(j, j) - T(j - 1, j - 1));
      T.applyOnTheLeft(j - 1, j, rot.adjoint());
      T.applyOnTheRight(j - 1, j, rot);
      Q.applyOnTheRight(j - 1, j, rot);
      T(j, j - 1) = 0.0;
    }
    ++placed;
  }
  return placed;
}

// Spectral projector onto the invariant subspace of the leading p x p block of
// an upper triangular T, along the trailing one.
Mat schur_projector(const Mat& T, int p) {
  const Eigen::Index n = T.rows();
  const Eigen::Index q = n - p;
  Mat P = Mat::Zero(n, n);
  P.topLeftCorner(p, p).setIdentity();
  if (p == 0 || q == 0) return P;
  const Mat T11 = T.topLeftCorner(p, p);
  const Mat T22 = T.bottomRightCorner(q, q);
  const Mat T12 = T.topRightCorner(p, q);
  // Solve T11 X − X T22 = T12 column by column (T22 upper triangular).
  Mat X = Mat::Zero(p, q);
  for (Eigen::Index j = 0; j < q; ++j) {
    Vec rhs = T12.col(j);
    for (Eigen::Index l = 0; l < j; ++l) rhs += X.col(l) * T22(l, j);
    const Mat lhs = T11 - T22(j, j) * Mat::Identity(p, p);
    X.col(j) = lhs.triangularView<Eigen::Upper>().solve(rhs);
  }
  P.topRightCorner(p, q) = X;
  return P;
}

}  // namespace

RieszReport riesz_analyze(const DenseOperator& f, const std::vector<cplx>& alpha, double rho, const Tolerances& tol) {
  if (f.domain() != f.codomain()) fail(ErrorKind::ShapeMismatch, "Riesz analysis needs a square operator");
  const Signature& sig = f.signature();
  if (static_cast<int>(alpha.size()) != sig.k()) fail(ErrorKind::ShapeMismatch, "one central coefficient per block");
  const int n = f.domain();
  const DenseOperator shifted = f - DenseOperator::diagonal(sig, std::vector<AlgebraElement>(static_cast<size_t>(n), AlgebraElement::central(sig, alpha)));
  const double scale = std::max(1.0, f.norm());
  const double at_alpha = 1e-6 * scale;

  std::vector<Mat> p0;
  bool found = false;
  for (int i = 0; i < sig.k(); ++i) {
    const Mat& g = shifted.block(i);
    Eigen::ComplexSchur<Mat> schur(g);
    Mat T = schur.matrixT();
    Mat Q = schur.matrixU();
    for (Eigen::Index d = 0; d < T.rows(); ++d) {
      const double mag = std::abs(T(d, d));
      if (mag > at_alpha && mag < rho)
        fail(ErrorKind::NotIsolated, "another spectral point lies within the isolation radius");
      if (mag <= at_alpha) found = true;
    }
    const int p = reorder_schur(T, Q, [&](cplx z) { return std::abs(z) <= 0.5 * rho; });
    p0.push_back(Q * schur_projector(T, p) * Q.adjoint());
  }
  if (!found) fail(ErrorKind::NotIsolated, "α is not an eigenvalue");

  RieszReport rep;
  rep.P0 = DenseOperator(sig, n, n, std::move(p0));
  const DenseOperator I = DenseOperator::identity(sig, n);
  const DenseOperator& P = rep.P0;
  rep.K = compose(shifted, P) - P;
  rep.T = compose(shifted, I - P) + P;
  rep.commute_residual = (compose(f, rep.K) - compose(rep.K, f)).norm();
  rep.projector_residual = (compose(P, P) - P).norm() + (compose(f, P) - compose(P, f)).norm();
  rep.split_residual = (shifted - rep.T - rep.K).norm();
  double tmin = std::numeric_limits<double>::infinity();
  for (const auto& b : rep.T.blocks()) {
    Eigen::BDCSVD<Mat> svd(b);
    tmin = std::min(tmin, svd.singularValues()(svd.singularValues().size() - 1));
  }
  rep.t_margin = tmin;

  // Range and null space of P0 as submodules (P0 has eigenvalues 0 and 1 only).
  const Submodule range = image(P, tol);
  const Submodule null = kernel(P, tol);
  rep.range_dim = range.dim_vector();
  const Submodule ker = kernel(shifted, tol);
  rep.kernel_dim = ker.dim_vector();
  rep.offdiag_residual = (compose(I - P, compose(shifted, P))).norm() + (compose(P, compose(shifted, I - P))).norm();
  double iso = std::numeric_limits<double>::infinity();
  for (int i = 0; i < sig.k(); ++i) {
    const Mat& v = null.block_basis(i);
    if (v.cols() == 0) continue;
    Eigen::BDCSVD<Mat> svd(shifted.block(i) * v);
    iso = std::min(iso, svd.singularValues()(svd.singularValues().size() - 1));
  }
  rep.iso_margin = std::isfinite(iso) ? iso : 1.0;
  double contain = 0.0;
  for (int i = 0; i < sig.k(); ++i) {
    const Mat& v = ker.block_basis(i);
    if (v.cols()) contain = std::max(contain, spectral_norm((I - P).block(i) * v));
  }
  rep.kernel_containment = contain;

  const WeylFlags wf = weyl_gc_flags(shifted, tol);
  const bool direct = is_direct_complement(range, null, tol);
  rep.clause_a = rep.split_residual <= 1e-9 * scale && rep.commute_residual <= 1e-9 * scale && rep.t_margin > tol.band_hi() * scale;
  rep.clause_b = wf.upper_semi_weyl;
  rep.clause_c = true;  // closed range is certified by the decided rank above
  rep.clause_d = wf.gc_weyl && index(shifted, tol).is_zero();
  rep.clause_e = direct && rep.offdiag_residual <= 1e-9 * scale && rep.iso_margin > tol.band_hi() * scale;
  rep.nontrivial = rep.kernel_dim.is_zero() ? true : (rep.kernel_containment <= 1e-9 && rep.kernel_dim.leq(rep.range_dim));
  return rep;
}

}  // namespace hcm
