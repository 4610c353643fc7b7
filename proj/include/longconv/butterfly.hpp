#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "longconv/types.hpp"

// Mixed-radix decomposition of the DFT into permutation / block-diagonal /
// twiddle stages with configurable block size r, FFT convolution on top of
// it, and a learned variant that swaps the fixed DFT blocks for trainable
// matrices while keeping the permutation and twiddle scaffolding.

namespace longconv {

// Index bijection realizing "reshape to n1 x n2 (row-major) and transpose".
// Applied as out[i] = in[map[i]], with map[j2*n1 + j1] = j1*n2 + j2.
struct StridePermutation {
  std::size_t n = 0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::vector<std::uint32_t> map;

  static StridePermutation transpose(std::size_t n1, std::size_t n2);
  StridePermutation inverse() const;

  void apply(std::span<const Complex> in, std::span<Complex> out) const;
};

// Diagonal of twiddle factors: entry at flattened position (j, k), i.e. at
// index j*n2 + k, equals exp(-2*pi*i*j*k / n).
struct TwiddleDiagonal {
  std::size_t n = 0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::vector<Complex> diagonal;

  static TwiddleDiagonal build(std::size_t n1, std::size_t n2);
};

// One decomposition depth. The vector is partitioned into n/segment
// contiguous segments; within each segment: gather strided elements into
// contiguous blocks of size `factor`, apply the dense factor x factor DFT
// block to each, scatter back, multiply by twiddles. All stage operators are
// segment-local, so `gather`, `scatter` and `twiddle` have length `segment`.
struct PlanStage {
  std::size_t factor = 0;
  std::size_t segment = 0;
  StridePermutation gather;
  StridePermutation scatter;
  std::vector<Complex> dft_block;  // factor x factor, row-major
  TwiddleDiagonal twiddle;
};

struct ButterflyPlan {
  std::size_t n = 0;
  std::size_t r = 0;
  std::vector<PlanStage> stages;
  // Composed output permutation (the recursion's trailing transposes), as
  // out[i] = work[output_map[i]].
  std::vector<std::uint32_t> output_map;

  std::size_t stage_count() const { return stages.size(); }
  std::string describe_json() const;  // {"n":..,"r":..,"stage_factors":[..]}
};

enum class Direction { kForward, kInverse };
enum class ConvMode { kCircular, kCausal };

// Factors n greedily as the largest divisor <= r at each level. n == 1 yields
// a trivial identity plan; a prime remainder above r throws PlanError telling
// the caller to pad.
ButterflyPlan build_plan(std::size_t n, std::size_t r);

// Forward equals dft_naive, inverse equals idft_naive (to tolerance).
ComplexSeq apply_plan(const ButterflyPlan& plan, std::span<const Complex> x,
                      Direction dir);

// FFT convolution through the plan. Circular mode needs plan.n == u.size();
// causal mode zero-pads to 2N and needs plan.n == 2*u.size().
ComplexSeq conv_butterfly(std::span<const Complex> u, std::span<const Complex> k,
                          const ButterflyPlan& plan, ConvMode mode);

// Same scaffolding as a ButterflyPlan, but the per-stage dense blocks are free
// parameters (one factor x factor matrix per stage, shared across the blocks
// of that stage). Initialized from a plan it reproduces the plan exactly.
struct LearnedButterfly {
  ButterflyPlan plan;
  std::vector<std::vector<Complex>> blocks;  // [stage][factor*factor]

  static LearnedButterfly from_plan(const ButterflyPlan& plan);
  std::size_t parameter_count() const;  // complex parameters across stages
};

ComplexSeq learned_forward(const LearnedButterfly& lb, std::span<const Complex> x);

struct LearnedGradients {
  std::vector<std::vector<Complex>> block_grads;  // same shapes as lb.blocks
  ComplexSeq input_grad;
};

// Exact adjoints of the linear map x -> learned_forward(lb, x) for the scalar
// J = Re<upstream, y>: input_grad is the conjugate-transposed operator applied
// to upstream, block gradients are per-stage outer-product accumulations.
LearnedGradients learned_gradients(const LearnedButterfly& lb,
                                   std::span<const Complex> x,
                                   std::span<const Complex> upstream);

// Dense n x n materialization of the learned operator (test oracle).
std::vector<Complex> learned_dense_matrix(const LearnedButterfly& lb);

}  // namespace longconv
