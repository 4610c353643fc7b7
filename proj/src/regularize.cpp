#include "longconv/regularize.hpp"

#include <algorithm>
#include <cmath>

#include "longconv/dft_reference.hpp"
#include "longconv/parallel.hpp"
#include "longconv/three_pass.hpp"

namespace longconv {

std::vector<double> squash(std::span<const double> k, double lambda) {
  if (lambda < 0.0) throw DimensionError("squash: lambda must be >= 0");
  std::vector<double> out(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double mag = std::abs(k[i]) - lambda;
    out[i] = mag > 0.0 ? std::copysign(mag, k[i]) : 0.0;
  }
  return out;
}

std::vector<double> smooth(std::span<const double> k, std::size_t p) {
  const std::size_t n = k.size();
  std::vector<double> out(n, 0.0);
  const double inv_w = 1.0 / static_cast<double>(2 * p + 1);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    const std::size_t lo = (i >= p) ? i - p : 0;
    const std::size_t hi = std::min(n - 1, i + p);
    for (std::size_t j = lo; j <= hi; ++j) acc += k[j];
    out[i] = acc * inv_w;
  }
  return out;
}

std::vector<double> smooth_frequency(std::span<const double> k, std::size_t p) {
  const std::size_t n = k.size();
  if (n == 0) return {};
  const ComplexSeq spectrum = dft_naive(to_complex(k));
  ComplexSeq smoothed(n);
  const double inv_w = 1.0 / static_cast<double>(2 * p + 1);
  for (std::size_t i = 0; i < n; ++i) {
    Complex acc(0.0, 0.0);
    for (std::size_t off = 0; off <= 2 * p; ++off) {
      std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i + off) - static_cast<std::ptrdiff_t>(p);
      j %= static_cast<std::ptrdiff_t>(n);
      if (j < 0) j += static_cast<std::ptrdiff_t>(n);
      acc += spectrum[static_cast<std::size_t>(j)];
    }
    smoothed[i] = acc * inv_w;
  }
  return real_part(idft_naive(smoothed));
}

std::vector<double> kernel_dropout(std::span<const double> k, double rate,
                                   SeededRng& rng, bool training) {
  if (rate < 0.0 || rate >= 1.0)
    throw DimensionError("kernel_dropout: rate must be in [0, 1)");
  std::vector<double> out(k.begin(), k.end());
  if (!training || rate == 0.0) return out;
  const double keep_scale = 1.0 / (1.0 - rate);
  for (auto& v : out) v = (rng.uniform01() < rate) ? 0.0 : v * keep_scale;
  return out;
}

double geometric_envelope(std::size_t position, std::size_t len, std::size_t head,
                          std::size_t heads) {
  const double decay = std::pow(static_cast<double>(heads) / 2.0,
                                static_cast<double>(head) / static_cast<double>(heads));
  return std::exp(-(static_cast<double>(position) / static_cast<double>(len)) * decay);
}

KernelBank init_kernels(const InitConfig& cfg) {
  if (cfg.heads == 0 || cfg.len == 0)
    throw DimensionError("init_kernels: heads and len must be >= 1");
  KernelBank bank(cfg.heads, cfg.len);
  const SeededRng base(cfg.seed);
  for (std::size_t h = 0; h < cfg.heads; ++h) {
    SeededRng stream = base.child(h);
    double* kernel = bank.kernel(h);
    for (std::size_t i = 0; i < cfg.len; ++i) {
      double v = stream.normal();
      if (cfg.kind == InitKind::kGeometric)
        v *= geometric_envelope(i, cfg.len, h, cfg.heads);
      kernel[i] = v;
    }
  }
  SeededRng skip_stream = base.child(cfg.heads);
  for (std::size_t h = 0; h < cfg.heads; ++h) bank.skip_gain[h] = skip_stream.normal();
  return bank;
}

KernelBank regularize_bank(const KernelBank& bank, const RegularizationConfig& cfg,
                           bool training) {
  KernelBank out = bank;
  const SeededRng base(cfg.seed);
  for (std::size_t h = 0; h < bank.heads; ++h) {
    SeededRng stream = base.child(h);
    std::vector<double> k = kernel_dropout(bank.kernel_span(h), cfg.dropout_rate,
                                           stream, training);
    k = (cfg.smooth_domain == SmoothDomain::kTime) ? smooth(k, cfg.smooth_width)
                                                   : smooth_frequency(k, cfg.smooth_width);
    k = squash(k, cfg.lambda);
    std::copy(k.begin(), k.end(), out.kernel(h));
  }
  return out;
}

namespace {

// One (head) kernel against one channel, on the chosen execution path.
std::vector<double> conv_channel(std::span<const double> u, std::span<const double> k,
                                 Engine engine, ConvMode mode,
                                 const ButterflyPlan* plan,
                                 const ThreePassPlan* three_plan) {
  const std::size_t n = u.size();
  switch (engine) {
    case Engine::kNaive:
      return mode == ConvMode::kCircular ? conv_circular_naive_real(u, k)
                                         : conv_causal_naive_real(u, k);
    case Engine::kButterfly: {
      const ComplexSeq y = conv_butterfly(to_complex(u), to_complex(k), *plan, mode);
      return real_part(y);
    }
    case Engine::kThreePass: {
      if (mode == ConvMode::kCircular) {
        const ComplexSeq y = conv_three_pass(*three_plan, to_complex(u));
        return real_part(y);
      }
      ComplexSeq padded(2 * n, Complex(0.0, 0.0));
      for (std::size_t i = 0; i < n; ++i) padded[i] = Complex(u[i], 0.0);
      ComplexSeq y = conv_three_pass(*three_plan, padded);
      y.resize(n);
      return real_part(y);
    }
  }
  throw DimensionError("conv_channel: unknown engine");
}

// Largest block length <= cap dividing n (three-pass split heuristic).
std::size_t pick_inner_len(std::size_t n, std::size_t cap) {
  for (std::size_t l = std::min(n, cap); l >= 1; --l)
    if (n % l == 0) return l;
  return 1;
}

}  // namespace

SignalBatch regularized_long_conv(const SignalBatch& u, const KernelBank& bank,
                                  const RegularizationConfig& cfg, Engine engine,
                                  ConvMode mode, bool training, int threads) {
  if (bank.heads != u.heads || bank.len != u.len)
    throw DimensionError("regularized_long_conv: bank dimensions must match the batch");
  if (u.data.size() != u.size())
    throw DimensionError("regularized_long_conv: malformed batch");

  const KernelBank reg = regularize_bank(bank, cfg, training);
  const std::size_t n = u.len;
  const std::size_t conv_len = (mode == ConvMode::kCausal) ? 2 * n : n;

  ButterflyPlan plan;
  if (engine == Engine::kButterfly) plan = build_plan(conv_len, 16);

  std::vector<ThreePassPlan> head_plans;
  if (engine == Engine::kThreePass) {
    head_plans.resize(bank.heads);
    const std::size_t l = pick_inner_len(conv_len, kDefaultWorkingSet);
    const std::size_t m = conv_len / l;
    for (std::size_t h = 0; h < bank.heads; ++h) {
      ComplexSeq k(conv_len, Complex(0.0, 0.0));
      for (std::size_t i = 0; i < n; ++i) k[i] = Complex(reg.kernel(h)[i], 0.0);
      head_plans[h] = build_three_pass(k, l, m);
    }
  }

  SignalBatch y(u.batch, u.heads, n);
  parallel_for(u.batch * u.heads, threads, [&](std::size_t task) {
    const std::size_t b = task / u.heads;
    const std::size_t h = task % u.heads;
    std::span<const double> channel = u.channel_span(b, h);
    const ThreePassPlan* tp = head_plans.empty() ? nullptr : &head_plans[h];
    std::vector<double> out =
        conv_channel(channel, reg.kernel_span(h), engine, mode,
                     engine == Engine::kButterfly ? &plan : nullptr, tp);
    const double gain = reg.skip_gain[h];
    double* dst = y.channel(b, h);
    for (std::size_t i = 0; i < n; ++i) dst[i] = out[i] + gain * channel[i];
  });
  return y;
}

}  // namespace longconv
