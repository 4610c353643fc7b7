#pragma once

#include <span>
#include <vector>

#include "longconv/types.hpp"

// Diagonal state space models and convolution kernels are interchangeable:
// materializing an SSM unrolls K_i = sum_j b_j a_j^i, and the reverse
// direction solves a (transposed) Vandermonde system in the chosen nodes,
// then partitions the (node, weight) pairs into smaller SSMs.

namespace longconv {

// Diagonal state matrix entries a plus input weights b (the output map is
// folded into b; the skip/feedthrough term lives in KernelBank, not here).
struct DiagonalSsm {
  ComplexSeq a;
  ComplexSeq b;

  std::size_t state_dim() const { return a.size(); }
};

// Matrix V with V_{i,j} = nodes[j]^i (row i = power, column j = node).
// Invertible exactly when the nodes are pairwise distinct.
struct VandermondeSystem {
  ComplexSeq nodes;

  static VandermondeSystem build(ComplexSeq nodes);  // checks distinctness
  std::size_t size() const { return nodes.size(); }
  ComplexSeq multiply(std::span<const Complex> b) const;  // V * b
};

// The n-th roots of unity exp(-2*pi*i*j/n): a perfectly conditioned node set
// (V is then the DFT matrix). Arbitrary node sets are supported but dense
// real nodes are catastrophically ill-conditioned beyond roughly n = 16.
ComplexSeq unit_root_nodes(std::size_t n);

// K_i = sum_j b_j * a_j^i for i in [0, n).
ComplexSeq ssm_to_kernel(const DiagonalSsm& ssm, std::size_t n);

// Solves V * b = rhs by dense LU with partial pivoting; throws
// ConditioningError when the residual exceeds threshold.
ComplexSeq vandermonde_solve(const VandermondeSystem& sys, std::span<const Complex> rhs);

// Decomposes a length-N kernel into N/M diagonal SSMs of state size M using
// the given nodes (roots of unity when empty). The summed materialization of
// the result reproduces the kernel.
std::vector<DiagonalSsm> kernel_to_ssm(std::span<const Complex> kernel, std::size_t M,
                                       ComplexSeq nodes = {});

// Sum of the per-SSM kernels (the superposition of the parts).
ComplexSeq materialize_ssm_sum(std::span<const DiagonalSsm> ssms, std::size_t n);

}  // namespace longconv
