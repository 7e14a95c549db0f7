#include "hcm/random.hpp"

#include <algorithm>

#include "hcm/linalg.hpp"

namespace hcm {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32), 0x5eedu};
  return std::mt19937_64(seq);
}

Mat gaussian_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double re = nd(rng);
      const double im = nd(rng);
      m(r, c) = cplx(re, im);
    }
  return m;
}

AlgebraElement random_element(const Signature& sig, std::mt19937_64& rng) {
  std::vector<Mat> b;
  for (int n : sig.blocks()) b.push_back(gaussian_matrix(rng, n, n));
  return AlgebraElement(sig, std::move(b));
}

ModuleVector random_vector(const Signature& sig, int length, std::mt19937_64& rng) {
  std::vector<Mat> b;
  for (int n : sig.blocks()) b.push_back(gaussian_matrix(rng, static_cast<Eigen::Index>(length) * n, n));
  return ModuleVector(sig, std::move(b));
}

DenseOperator random_operator(const Signature& sig, int domain, int codomain, std::mt19937_64& rng) {
  std::vector<Mat> b;
  for (int n : sig.blocks()) b.push_back(gaussian_matrix(rng, static_cast<Eigen::Index>(codomain) * n, static_cast<Eigen::Index>(domain) * n));
  return DenseOperator(sig, domain, codomain, std::move(b));
}

DenseOperator random_operator_with_ranks(const Signature& sig, int domain, int codomain, const std::vector<int>& ranks,
                                         std::mt19937_64& rng) {
  std::vector<Mat> b;
  for (int i = 0; i < sig.k(); ++i) {
    const Eigen::Index rows = static_cast<Eigen::Index>(codomain) * sig.n(i);
    const Eigen::Index cols = static_cast<Eigen::Index>(domain) * sig.n(i);
    const Eigen::Index r = std::clamp<Eigen::Index>(ranks[static_cast<size_t>(i)], 0, std::min(rows, cols));
    b.push_back(gaussian_matrix(rng, rows, r) * gaussian_matrix(rng, r, cols));
  }
  return DenseOperator(sig, domain, codomain, std::move(b));
}

Submodule random_submodule_with_dims(const Signature& sig, int ambient, const std::vector<long>& dims,
                                     std::mt19937_64& rng) {
  std::vector<Mat> spans;
  for (int i = 0; i < sig.k(); ++i)
    spans.push_back(gaussian_matrix(rng, static_cast<Eigen::Index>(ambient) * sig.n(i), dims[static_cast<size_t>(i)]));
  return Submodule::from_block_spans(sig, ambient, spans);
}

Submodule random_submodule(const Signature& sig, int ambient, std::mt19937_64& rng) {
  std::vector<long> dims;
  for (int n : sig.blocks()) {
    std::uniform_int_distribution<long> ud(0, static_cast<long>(ambient) * n);
    dims.push_back(ud(rng));
  }
  return random_submodule_with_dims(sig, ambient, dims, rng);
}

Signature random_signature(std::mt19937_64& rng, int max_k, int max_n) {
  std::uniform_int_distribution<int> kd(1, max_k), nd(1, max_n);
  std::vector<int> b(static_cast<size_t>(kd(rng)));
  for (auto& n : b) n = nd(rng);
  return Signature(b);
}

}  // namespace hcm
