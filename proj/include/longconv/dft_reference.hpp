#pragma once

#include <span>
#include <vector>

#include "longconv/types.hpp"

// Naive, obviously-correct transforms and convolutions by direct summation.
// Every fast path in this project is accepted only by agreement with these.
// Intentionally O(N^2); meant for N <= 4096 in tests.

namespace longconv {

// Dense DFT matrix, entry (j, k) = exp(-2*pi*i*j*k / n).
struct DenseDftMatrix {
  std::size_t n = 0;
  std::vector<Complex> entries;  // row-major n x n

  static DenseDftMatrix build(std::size_t n);
  ComplexSeq multiply(std::span<const Complex> x) const;
};

// y_j = sum_k x_k * exp(-2*pi*i*j*k/N)
ComplexSeq dft_naive(std::span<const Complex> x);

// y_j = (1/N) sum_k x_k * exp(+2*pi*i*j*k/N)
ComplexSeq idft_naive(std::span<const Complex> x);

// y_i = sum_j u_j * k_{(i-j) mod N}
ComplexSeq conv_circular_naive(std::span<const Complex> u, std::span<const Complex> k);

// y_i = sum_{j=0..i} k_j * u_{i-j}
ComplexSeq conv_causal_naive(std::span<const Complex> u, std::span<const Complex> k);

// All-real variants, used as oracles for the packed real pipeline.
std::vector<double> conv_circular_naive_real(std::span<const double> u,
                                             std::span<const double> k);
std::vector<double> conv_causal_naive_real(std::span<const double> u,
                                           std::span<const double> k);

}  // namespace longconv
