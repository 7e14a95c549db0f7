#include "doctest.h"
#include "hcm/errors.hpp"
#include "hcm/random.hpp"
#include "hcm/spectra.hpp"
#include "oracles.hpp"

using namespace hcm;

namespace {
const Signature sig = default_signature();
}

TEST_CASE("shift polynomial classification") {
  const auto s = ShiftPolynomial::shift(sig);
  const auto r = classify_shift_polynomial(s);
  CHECK(r.in_MPhi);
  CHECK(r.index == IndexValue({-2, -1}));
  CHECK(index(windowed_truncate(s.to_symbolic(), 5)) == *r.index);
  const auto r2 = classify_shift_polynomial(s.minus({2.0, 2.0}));
  CHECK(r2.in_MPhi_0);
  CHECK(r2.index->is_zero());
  const auto r1 = classify_shift_polynomial(s.minus({1.0, 1.0}));
  CHECK(r1.decided);
  CHECK_FALSE(r1.in_MPhi_plus);
  CHECK_FALSE(r1.in_MPhi_minus);
}

TEST_CASE("index follows the winding number") {
  oracle::Gen g(31);
  for (int t = 0; t < 60; ++t) {
    ShiftPolynomial p{sig, {}, g.integer(0, 1) == 1};
    for (int j = 0, deg = g.integer(1, 3); j <= deg; ++j) p.coeffs.push_back({g.complex(), g.complex()});
    const auto r = classify_shift_polynomial(p);
    bool on_circle = false;
    for (int i = 0; i < sig.k(); ++i) on_circle = on_circle || oracle::sampled_min_modulus(p.block_poly(i), 4096) < 1e-3;
    if (on_circle) continue;
    REQUIRE(r.in_MPhi);
    for (int i = 0; i < sig.k(); ++i) {
      const long w = oracle::winding_number(p.block_poly(i));
      CHECK((*r.index)[i] == (p.in_adjoint ? w : -w) * sig.n(i));
    }
  }
}

TEST_CASE("radii") {
  const auto e = radii_exact(ShiftPolynomial::shift(sig));
  CHECK(std::abs(e.s_plus - 1.0) <= 1e-15);
  CHECK(std::abs(e.s_minus - 1.0) <= 1e-15);
  CHECK(std::abs(e.s_phi - 1.0) <= 1e-15);
  CHECK(std::abs(e.s - 1.0) <= 1e-15);
  const auto g = radii_grid(ShiftPolynomial::shift(sig), -1.0, 0.05);
  CHECK(std::abs(g.s - 1.0) <= 0.05);
  CHECK(std::abs(radii_exact(ShiftPolynomial::constant(sig, 2.0)).s - 2.0) <= 1e-15);
  const auto z = radii_exact(ShiftPolynomial::constant(sig, 0.0));
  CHECK(z.s_plus == 0.0);
  CHECK(z.s == 0.0);
}

TEST_CASE("exact radii against sampling") {
  oracle::Gen g(32);
  for (int t = 0; t < 40; ++t) {
    ShiftPolynomial p{sig, {}, false};
    for (int j = 0, deg = g.integer(0, 3); j <= deg; ++j) p.coeffs.push_back({g.complex(), g.complex()});
    double sampled = std::numeric_limits<double>::infinity();
    for (int i = 0; i < sig.k(); ++i) sampled = std::min(sampled, oracle::sampled_min_modulus(p.block_poly(i)));
    const auto e = radii_exact(p);
    CHECK(e.s <= sampled + 1e-12);
    CHECK(sampled - e.s <= 1e-3);
    const auto a = radii_exact(p.adjoint());
    CHECK(a.s_plus == e.s_minus);
    CHECK(a.s_minus == e.s_plus);
  }
}

TEST_CASE("polynomial roots") {
  const auto r = polynomial_roots({cplx(-2.0), 0.0, 1.0});
  REQUIRE(r.size() == 2);
  for (const auto& z : r) CHECK(std::abs(std::abs(z) - std::sqrt(2.0)) <= 1e-12);
  CHECK(std::abs(min_modulus_on_circle({cplx(-0.5), 1.0}) - 0.5) <= 1e-12);
}

TEST_CASE("spectrum partition of a diagonal pattern") {
  const auto two = AlgebraElement::scalar(sig, 2.0);
  const DenseOperator f = DenseOperator::diagonal(sig, {two, two, AlgebraElement::zero(sig)});
  const auto grid = CentralGrid::make(sig, 2.5, 0.5);
  const auto samples = spectrum_partition(f, grid, Exec::Parallel);
  CHECK(static_cast<long>(samples.size()) == grid.size());
  for (const auto& s : samples) {
    const bool at = s.alpha[0] == cplx(0.0) || s.alpha[0] == cplx(2.0) || s.alpha[1] == cplx(0.0) || s.alpha[1] == cplx(2.0);
    CHECK(s.invertible == !at);
    if (!s.invertible) CHECK(s.is_eigen);
  }
  const auto serial = spectrum_partition(f, grid, Exec::Serial);
  for (size_t i = 0; i < samples.size(); ++i) CHECK(samples[i].min_sv == serial[i].min_sv);
  for (const auto& s : spectrum_partition(DenseOperator::identity(sig, 2), CentralGrid::make(sig, 0.9, 0.3))) CHECK(s.invertible);
}

TEST_CASE("homotopy") {
  const auto s = ShiftPolynomial::shift(sig);
  const auto h = homotopy_sweep(s, {0.0, 0.0}, {0.5, 0.5}, 10);
  CHECK(h.constant);
  for (const auto& st : h.steps) CHECK(st.report.index == IndexValue({-2, -1}));
  CHECK_THROWS_AS(homotopy_sweep(s, {0.0, 0.0}, {2.0, 2.0}, 20), Error);
  CHECK(homotopy_sweep(s, {0.2, 0.2}, {0.2, 0.2}, 3).constant);
}

TEST_CASE("Riesz decomposition") {
  const auto two = AlgebraElement::scalar(sig, 2.0);
  const DenseOperator f = DenseOperator::diagonal(sig, {two, two, AlgebraElement::zero(sig)});
  const RieszReport r = riesz_analyze(f, {0.0, 0.0}, 1.0);
  CHECK(r.all());
  CHECK(r.range_dim == DimensionVector({2, 1}));
  CHECK(DimensionVector(oracle::eigen_multiplicities(f, {0.0, 0.0}, 1e-9)) == r.range_dim);
  CHECK((r.K + r.P0).norm() <= 1e-12);
  CHECK(r.commute_residual <= 1e-9);
  CHECK(r.t_margin >= 0.5);
  CHECK_THROWS_AS(riesz_analyze(DenseOperator::identity(sig, 2), {0.0, 0.0}, 0.5), Error);
}

TEST_CASE("Riesz projection ranks against eigenvalue multiplicities") {
  oracle::Gen g(33);
  for (int t = 0; t < 20; ++t) {
    const int n = g.integer(2, 3);
    std::vector<Mat> blocks;
    std::vector<cplx> alpha = {g.complex(), g.complex()};
    for (int i = 0; i < sig.k(); ++i) {
      const Eigen::Index d = n * sig.n(i);
      Mat diag = Mat::Zero(d, d);
      for (Eigen::Index k = 0; k < d; ++k) diag(k, k) = k < 2 ? alpha[static_cast<size_t>(i)] : alpha[static_cast<size_t>(i)] + 2.0 + g.real(0, 1);
      const Mat q = g.matrix(d, d) + 3.0 * Mat::Identity(d, d);
      blocks.push_back(q * diag * q.inverse());
    }
    const DenseOperator f(sig, n, n, blocks);
    const auto r = riesz_analyze(f, alpha, 1.0);
    CHECK(r.range_dim == DimensionVector(oracle::eigen_multiplicities(f, alpha, 1e-6)));
    CHECK(r.kernel_dim.leq(r.range_dim));
    CHECK(r.all());
  }
}
