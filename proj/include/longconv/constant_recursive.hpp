#pragma once

#include <span>
#include <vector>

#include "longconv/ssm_bridge.hpp"
#include "longconv/types.hpp"

// Kernels defined by a delayed linear recurrence: the first p entries per
// component are free seeds, later entries recurse on the block p steps back.
// Convolving such a kernel with a signal yields an output obeying the same
// recurrence, so it can be evaluated recurrently without materializing K.
//
// The recurrences below follow 1-based indexing internally; sequences cross
// the module boundary 0-based like everywhere else (out[i] = K_{i+1}).

namespace longconv {

struct ConstantRecursiveKernel {
  std::size_t power = 1;  // p
  std::size_t dim = 1;    // d components summed into the kernel
  std::size_t len = 1;    // N
  // seeds[r][i] = k_{i+1, r+1}, coeffs[r][j] = a_{j+1, r+1}; p entries each.
  std::vector<ComplexSeq> seeds;
  std::vector<ComplexSeq> coeffs;

  void validate() const;
};

// K_{i,r} = k_{i,r} for i <= p, else sum_{j=1..min(p, i-p)} a_{j,r} K_{i-p-j+1, r};
// the kernel is sum_r K_{i,r}.
ComplexSeq materialize(const ConstantRecursiveKernel& crk);

// Recurrent evaluation of y = conv_causal(u, materialize(crk)) in O(N*p)
// without forming K. Requires dim == 1 (components of larger kernels are
// independent passes summed by the caller).
ComplexSeq conv_recurrent(const ConstantRecursiveKernel& crk, std::span<const Complex> u);

// Kernel of the order-p recurrence in state-space form: C^T A^{i-1} B with
// B = seeds, C = e_1 and A the inverted companion matrix (superdiagonal of
// ones, coefficients in the last row).
ComplexSeq companion_kernel(std::span<const Complex> coeffs,
                            std::span<const Complex> seeds, std::size_t n);

// Same sequence evaluated through dense matrix powers (test oracle).
ComplexSeq companion_kernel_matrix_power(std::span<const Complex> coeffs,
                                         std::span<const Complex> seeds, std::size_t n);

// p = 1 collapses to a diagonal SSM with poles a_{1,r} and weights k_{1,r}.
DiagonalSsm s4d_case(const ConstantRecursiveKernel& crk);

}  // namespace longconv
