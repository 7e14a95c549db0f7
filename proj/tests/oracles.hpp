#pragma once

// Reference computations that avoid the library's own code paths: they go through
// full complex matrices, LU rank decisions, winding numbers and eigen-solvers.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "hcm/algebra.hpp"
#include "hcm/dense.hpp"
#include "hcm/module.hpp"

namespace oracle {

using hcm::cplx;
using hcm::Mat;

inline long lu_rank(const Mat& m, double rel = 1e-9) {
  if (m.size() == 0) return 0;
  Eigen::FullPivLU<Mat> lu(m);
  lu.setThreshold(rel);
  return lu.rank();
}

// Block i of F rebuilt from its algebra-valued entries, then lifted to the action on the
// complex coordinates of L_M(A): X ↦ F_i X is kron(I_{n_i}, F_i) on vec(X).
inline Mat lifted_block(const hcm::DenseOperator& f, int i) {
  const int n = f.signature().n(i);
  Mat fi(f.codomain() * n, f.domain() * n);
  for (int r = 0; r < f.codomain(); ++r)
    for (int c = 0; c < f.domain(); ++c) fi.block(r * n, c * n, n, n) = f.entry(r, c).block(i);
  Mat out = Mat::Zero(fi.rows() * n, fi.cols() * n);
  for (int k = 0; k < n; ++k) out.block(k * fi.rows(), k * fi.cols(), fi.rows(), fi.cols()) = fi;
  return out;
}

// Dimension vectors of kernel and cokernel: the lifted nullity of block i is n_i times
// the multiplicity of the simple module of that block.
inline std::vector<long> kernel_dims(const hcm::DenseOperator& f) {
  std::vector<long> out;
  for (int i = 0; i < f.signature().k(); ++i) {
    const int n = f.signature().n(i);
    const Mat m = lifted_block(f, i);
    out.push_back((m.cols() - lu_rank(m)) / n);
  }
  return out;
}

inline std::vector<long> cokernel_dims(const hcm::DenseOperator& f) {
  std::vector<long> out;
  for (int i = 0; i < f.signature().k(); ++i) {
    const int n = f.signature().n(i);
    const Mat m = lifted_block(f, i);
    out.push_back((m.rows() - lu_rank(m)) / n);
  }
  return out;
}

// Complex coordinates of x: block by block, each entry's block vectorized column-major.
inline Eigen::VectorXcd coords(const hcm::ModuleVector& x) {
  const auto& sig = x.signature();
  long total = 0;
  for (int n : sig.blocks()) total += static_cast<long>(x.length()) * n * n;
  Eigen::VectorXcd v(total);
  long pos = 0;
  for (int i = 0; i < sig.k(); ++i) {
    const int n = sig.n(i);
    // Column-major over the stacked (N n) x n matrix.
    for (int c = 0; c < n; ++c)
      for (int j = 0; j < x.length(); ++j)
        for (int r = 0; r < n; ++r) v(pos++) = x.entry(j).block(i)(r, c);
  }
  return v;
}

// Multiplicities of the A-span of the generators: complex span of g·E_ab, per-block rank / n_i.
inline std::vector<long> span_dims(const hcm::Signature& sig, int ambient, const std::vector<hcm::ModuleVector>& gens) {
  std::vector<long> out;
  long offset = 0;
  for (int i = 0; i < sig.k(); ++i) {
    const int n = sig.n(i);
    const long rows = static_cast<long>(ambient) * n * n;
    std::vector<Eigen::VectorXcd> cols;
    for (const auto& g : gens)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) cols.push_back(coords(g * hcm::AlgebraElement::matrix_unit(sig, i, a, b)).segment(offset, rows));
    Mat m(rows, static_cast<Eigen::Index>(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c) m.col(static_cast<Eigen::Index>(c)) = cols[c];
    out.push_back(lu_rank(m) / n);
    offset += rows;
  }
  return out;
}

// Winding number of z ↦ p(z) around 0 on the unit circle, by summing argument increments.
inline long winding_number(const std::vector<cplx>& p, int samples = 1 << 14) {
  auto eval = [&](cplx z) {
    cplx v = 0.0;
    for (size_t j = p.size(); j-- > 0;) v = v * z + p[j];
    return v;
  };
  double total = 0.0;
  cplx prev = eval(1.0);
  for (int t = 1; t <= samples; ++t) {
    const cplx cur = eval(std::polar(1.0, 2.0 * M_PI * t / samples));
    total += std::arg(cur / prev);
    prev = cur;
  }
  return std::lround(total / (2.0 * M_PI));
}

inline double sampled_min_modulus(const std::vector<cplx>& p, int samples = 1 << 16) {
  double best = std::numeric_limits<double>::infinity();
  for (int t = 0; t < samples; ++t) {
    const cplx z = std::polar(1.0, 2.0 * M_PI * t / samples);
    cplx v = 0.0;
    for (size_t j = p.size(); j-- > 0;) v = v * z + p[j];
    best = std::min(best, std::abs(v));
  }
  return best;
}

// Algebraic multiplicity of alpha_i in block i, counted as simple modules (i.e. in C^{N n_i}).
inline std::vector<long> eigen_multiplicities(const hcm::DenseOperator& f, const std::vector<cplx>& alpha, double tol) {
  std::vector<long> out;
  for (int i = 0; i < f.signature().k(); ++i) {
    Eigen::ComplexEigenSolver<Mat> es(f.block(i));
    long c = 0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
      if (std::abs(es.eigenvalues()(k) - alpha[static_cast<size_t>(i)]) <= tol) ++c;
    out.push_back(c);
  }
  return out;
}

// Largest |<x,y>| over the underlying complex spaces via explicit projector products.
inline double projector_angle(const hcm::Submodule& m, const hcm::Submodule& n) {
  const Mat a = m.complex_basis(), b = n.complex_basis();
  if (a.cols() == 0 || b.cols() == 0) return 0.0;
  const Mat pa = a * a.adjoint(), pb = b * b.adjoint();
  Eigen::JacobiSVD<Mat> svd(pa * pb);
  return svd.singularValues()(0);
}

// Hand-written actions of a few catalog operators on e_j (target, or 0 for zero).
inline long catalog_target(const std::string& name, long j) {
  if (name == "I") return j;
  if (name == "S") return j + 1;
  if (name == "L") return j >= 2 ? j - 1 : 0;
  if (name == "ex1") return 2 * j;
  if (name == "ex2") return j % 2 == 0 ? j / 2 : 0;
  if (name == "ex3") return 3 * j - 1;
  if (name == "ex15f") return 2 * j - 1;
  if (name == "ex15g") return j % 2 == 1 ? (j + 1) / 2 : 0;
  if (name == "ex8") {
    const long s = (j - 1) / 3, r = (j - 1) % 3;
    return 3 * s + 1 + (r + 1) % 3;
  }
  return -1;
}

// Index of a shift word by letter bookkeeping: L contributes +[A], S contributes −[A].
inline std::vector<long> word_index(const hcm::Signature& sig, const std::vector<std::string>& word) {
  std::vector<long> out(static_cast<size_t>(sig.k()), 0);
  for (const auto& w : word) {
    const long s = w == "L" ? 1 : w == "S" ? -1 : 0;
    for (int i = 0; i < sig.k(); ++i) out[static_cast<size_t>(i)] += s * sig.n(i);
  }
  return out;
}

// Small deterministic generator for property tests.
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  cplx complex() { return {real(-1, 1), real(-1, 1)}; }
  Mat matrix(Eigen::Index r, Eigen::Index c) {
    Mat m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) m(i, j) = complex();
    return m;
  }
  hcm::Signature signature(int max_k = 3, int max_n = 3) {
    std::vector<int> b(static_cast<size_t>(integer(1, max_k)));
    for (auto& n : b) n = integer(1, max_n);
    return hcm::Signature(b);
  }
  hcm::AlgebraElement element(const hcm::Signature& sig) {
    std::vector<Mat> b;
    for (int n : sig.blocks()) b.push_back(matrix(n, n));
    return hcm::AlgebraElement(sig, b);
  }
  hcm::ModuleVector vector(const hcm::Signature& sig, int len) {
    std::vector<hcm::AlgebraElement> e;
    for (int j = 0; j < len; ++j) e.push_back(element(sig));
    return hcm::ModuleVector(sig, e);
  }
  // Operator with block i of rank r_i, built as a product of thin factors.
  hcm::DenseOperator low_rank(const hcm::Signature& sig, int dom, int cod) {
    std::vector<Mat> blocks;
    for (int n : sig.blocks()) {
      const int r = integer(0, std::min(dom, cod) * n);
      blocks.push_back(matrix(cod * n, r) * matrix(r, dom * n));
    }
    return hcm::DenseOperator(sig, dom, cod, blocks);
  }
};

// Runs prop(gen, case) for `cases` seeds; returns the first failing case or -1.
inline long forall(long cases, std::uint64_t seed, const std::function<bool(Gen&, long)>& prop) {
  for (long c = 0; c < cases; ++c) {
    Gen g(seed * 1000003ULL + static_cast<std::uint64_t>(c));
    if (!prop(g, c)) return c;
  }
  return -1;
}

}  // namespace oracle
