#pragma once

#include <cstdint>
#include <random>

#include "hcm/algebra.hpp"
#include "hcm/dense.hpp"
#include "hcm/module.hpp"

namespace hcm {

/// Independent stream for (seed, trial); identical regardless of evaluation order.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t trial);

Mat gaussian_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols);
AlgebraElement random_element(const Signature& sig, std::mt19937_64& rng);
ModuleVector random_vector(const Signature& sig, int length, std::mt19937_64& rng);
DenseOperator random_operator(const Signature& sig, int domain, int codomain, std::mt19937_64& rng);
/// Random operator whose block i has the requested rank (clamped to the block size).
DenseOperator random_operator_with_ranks(const Signature& sig, int domain, int codomain, const std::vector<int>& ranks,
                                         std::mt19937_64& rng);
/// Random submodule with block dimensions drawn uniformly in [0, N n_i].
Submodule random_submodule(const Signature& sig, int ambient, std::mt19937_64& rng);
Submodule random_submodule_with_dims(const Signature& sig, int ambient, const std::vector<long>& dims,
                                     std::mt19937_64& rng);
/// Random signature with k ≤ max_k blocks of size ≤ max_n.
Signature random_signature(std::mt19937_64& rng, int max_k = 3, int max_n = 3);

}  // namespace hcm
