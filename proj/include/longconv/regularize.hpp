#pragma once

#include <span>
#include <vector>

#include "longconv/butterfly.hpp"
#include "longconv/rng.hpp"
#include "longconv/types.hpp"

// Kernel regularization operators, the two initializations, and the
// end-to-end regularized long-convolution layer
// (dropout -> smooth -> squash -> convolve + skip).

namespace longconv {

enum class SmoothDomain { kTime, kFrequency };
enum class Engine { kNaive, kButterfly, kThreePass };

struct RegularizationConfig {
  double lambda = 0.0;          // soft-threshold level, >= 0
  std::size_t smooth_width = 0; // p; window is 2p+1
  double dropout_rate = 0.0;    // in [0, 1)
  SmoothDomain smooth_domain = SmoothDomain::kTime;
  std::uint64_t seed = 0;       // dropout stream
};

enum class InitKind { kRandom, kGeometric };

struct InitConfig {
  InitKind kind = InitKind::kRandom;
  std::size_t heads = 1;
  std::size_t len = 1;
  std::uint64_t seed = 0;
};

// Entrywise soft threshold sign(k) * max(|k| - lambda, 0).
std::vector<double> squash(std::span<const double> k, double lambda);

// Width-(2p+1) moving average centered at each position; out-of-range
// neighbors contribute zero and the divisor stays 2p+1.
std::vector<double> smooth(std::span<const double> k, std::size_t p);

// Smooth applied to the spectrum: forward DFT, circular window average over
// the spectrum (keeps conjugate symmetry for real inputs), inverse DFT, real
// part.
std::vector<double> smooth_frequency(std::span<const double> k, std::size_t p);

// Training: zero each entry with probability rate and scale survivors by
// 1/(1-rate). Evaluation: identity.
std::vector<double> kernel_dropout(std::span<const double> k, double rate,
                                   SeededRng& rng, bool training);

// Random: K ~ N(0,1). Geometric: K^(h)_i = x * exp(-(i/N) * (H/2)^(h/H)) with
// x ~ N(0,1), h and i zero-based. Skip gains are standard normal either way.
KernelBank init_kernels(const InitConfig& cfg);

// Geometric decay envelope value (exposed for tests).
double geometric_envelope(std::size_t position, std::size_t len, std::size_t head,
                          std::size_t heads);

// Applies dropout -> smooth -> squash to each head's kernel.
KernelBank regularize_bank(const KernelBank& bank, const RegularizationConfig& cfg,
                           bool training);

// y[b,h] = conv(u[b,h], regularized K[h]) + skip_gain[h] * u[b,h].
// The engine changes the execution path, never the result (to tolerance).
SignalBatch regularized_long_conv(const SignalBatch& u, const KernelBank& bank,
                                  const RegularizationConfig& cfg, Engine engine,
                                  ConvMode mode, bool training = false,
                                  int threads = 1);

}  // namespace longconv
