#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "longconv/butterfly.hpp"
#include "longconv/types.hpp"

// Three-pass convolution for N = l*m: a block-butterfly mix-down, m
// independent length-l FFT convolutions, and a block-butterfly mix-up. The
// outer multiplies stream the length-N buffer once each; the middle pass works
// block-local, so the whole convolution touches the global buffer three times
// regardless of N.

namespace longconv {

// Default working-set cap (elements) modeling on-chip memory.
inline constexpr std::size_t kDefaultWorkingSet = 8192;

// Counts traffic on the full-length global buffer, per phase. A "pass" is a
// phase in which every element of the buffer was read or written at least
// once; block-local scratch under the working-set cap is free.
class PassCounter {
 public:
  struct Phase {
    std::uint64_t reads = 0;
    std::uint64_t writes = 0;
    std::uint64_t distinct_touched = 0;
    std::size_t working_set_peak = 0;
  };

  explicit PassCounter(std::size_t n = 0, std::size_t working_set_cap = kDefaultWorkingSet)
      : n_(n), cap_(working_set_cap) {}

  void reset(std::size_t n);
  void begin_phase(int phase);  // 1..3
  void record_read(std::size_t index);
  void record_write(std::size_t index);
  void record_working_set(std::size_t elements);
  void merge_counts(std::uint64_t reads, std::uint64_t writes);

  std::size_t buffer_len() const { return n_; }
  std::size_t working_set_cap() const { return cap_; }
  const std::array<Phase, 3>& phases() const { return phases_; }
  int sweeps() const;  // phases whose distinct coverage reached n
  std::string report_json() const;

 private:
  std::size_t n_ = 0;
  std::size_t cap_ = 0;
  int current_ = -1;
  std::array<Phase, 3> phases_{};
  std::vector<std::uint32_t> touch_stamp_;  // per element, stamped by phase
};

// N x N block matrix with m^2 diagonal blocks of size l x l; the base matrix
// has block (j, k) entries D_{j,k}[tau] = exp(-2*pi*i * k * (j*l + tau) / n).
// Entries come from a shared root table (or a materialized array after
// numeric inversion); `conjugated` / `transposed` / `scale` let the analytic
// inverse and the transposed factor share the same representation.
struct BlockDiagonalButterfly {
  std::size_t n = 0;
  std::size_t l = 0;
  std::size_t m = 0;
  std::shared_ptr<const ComplexSeq> roots;  // exp(-2*pi*i*t/n), t in [0, n)
  // Materialized entries, layout [tau][j][k] (tau-major m x m systems).
  // Empty => closed-form evaluation from the root table.
  std::vector<Complex> entries;
  bool conjugated = false;
  bool transposed = false;
  double scale = 1.0;

  Complex entry(std::size_t j, std::size_t k, std::size_t tau) const;
  BlockDiagonalButterfly transpose() const;

  // y = B x. Streams the input once: for each within-block offset tau the m
  // gathered elements feed all m outputs at that offset.
  ComplexSeq apply(std::span<const Complex> x, PassCounter* counter = nullptr) const;
};

BlockDiagonalButterfly build_block_butterfly(std::size_t n, std::size_t l, std::size_t m);

// Analytic inverse: the blocks are scaled DFT columns, so B * B^H = m*I and
// B^{-1} = conj(B)/m. Returned in closed form.
BlockDiagonalButterfly invert_block_butterfly_analytic(const BlockDiagonalButterfly& b);

// Numeric inverse through the per-tau m x m dense systems (the block matrix is
// permutation-similar to l independent m x m matrices). Materializes entries;
// throws ConditioningError if a sub-system is singular beyond threshold.
BlockDiagonalButterfly invert_block_butterfly(const BlockDiagonalButterfly& b);

// Dense n x n materialization (test oracle, small n only).
std::vector<Complex> block_butterfly_dense(const BlockDiagonalButterfly& b);

struct ThreePassPlan {
  std::size_t n = 0;
  std::size_t l = 0;
  std::size_t m = 0;
  BlockDiagonalButterfly mixer;      // B-bar
  BlockDiagonalButterfly mixer_inv;  // B-bar^{-1}
  ButterflyPlan inner;               // length-l plan for the middle pass
  // Diagonalized kernel spectrum: d_k[a*l + tau] = l * K_hat[tau*m + a],
  // i.e. l * (stride-permuted FFT of the kernel), m blocks of length l.
  ComplexSeq d_k;
};

// Precomputes K_hat = F_n k, permutes/scales it into d_k, and builds the block
// butterfly and its inverse. Requires n == l*m and a buildable length-l plan.
ThreePassPlan build_three_pass(std::span<const Complex> kernel, std::size_t l,
                               std::size_t m, std::size_t inner_r = 16);

// Circular convolution of u with the plan's kernel. Phase 2 runs the m
// length-l convolutions independently; `threads` > 1 executes them
// concurrently with bit-identical results.
ComplexSeq conv_three_pass(const ThreePassPlan& plan, std::span<const Complex> u,
                           PassCounter* counter = nullptr, int threads = 1);

// Same, with an explicit phase-2 task order (must be a permutation of [0, m)).
// The output is bit-identical for every order.
ComplexSeq conv_three_pass_ordered(const ThreePassPlan& plan,
                                   std::span<const Complex> u,
                                   std::span<const std::size_t> block_order,
                                   PassCounter* counter = nullptr);

// Real convolution of even length 2L through the half-length complex pipeline:
// adjacent sample pairs are packed into complex values, the length-L pipeline
// runs, and the spectrum is unpacked. Throws on odd lengths.
std::vector<double> conv_real_packed(std::span<const double> u,
                                     std::span<const double> k, ConvMode mode);

}  // namespace longconv
