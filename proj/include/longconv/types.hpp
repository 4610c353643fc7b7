#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "longconv/errors.hpp"

namespace longconv {

using Complex = std::complex<double>;
using ComplexSeq = std::vector<Complex>;

// Explicit complex multiply. The library-provided operator* carries NaN
// recovery branches that cost real time in the transform inner loops.
inline Complex cmul(Complex a, Complex b) {
  const double x = a.real(), y = a.imag(), u = b.real(), v = b.imag();
  return Complex(x * u - y * v, x * v + y * u);
}

bool all_finite(std::span<const double> v);
bool all_finite(std::span<const Complex> v);

// max_i |a_i - b_i| (complex modulus). Lengths must match.
double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

double max_abs(std::span<const Complex> v);
double max_abs(std::span<const double> v);

ComplexSeq to_complex(std::span<const double> v);
std::vector<double> real_part(std::span<const Complex> v);

// B x H x N real signal container, row-major with the length dimension
// innermost.
struct SignalBatch {
  std::size_t batch = 0;
  std::size_t heads = 0;
  std::size_t len = 0;
  std::vector<double> data;

  SignalBatch() = default;
  SignalBatch(std::size_t b, std::size_t h, std::size_t n)
      : batch(b), heads(h), len(n), data(b * h * n, 0.0) {}

  std::size_t size() const { return batch * heads * len; }
  double* channel(std::size_t b, std::size_t h) {
    return data.data() + (b * heads + h) * len;
  }
  const double* channel(std::size_t b, std::size_t h) const {
    return data.data() + (b * heads + h) * len;
  }
  std::span<const double> channel_span(std::size_t b, std::size_t h) const {
    return {channel(b, h), len};
  }
};

// H convolution kernels of length N plus one skip gain per head.
struct KernelBank {
  std::size_t heads = 0;
  std::size_t len = 0;
  std::vector<double> kernels;     // [h][n]
  std::vector<double> skip_gain;   // [h]

  KernelBank() = default;
  KernelBank(std::size_t h, std::size_t n)
      : heads(h), len(n), kernels(h * n, 0.0), skip_gain(h, 0.0) {}

  double* kernel(std::size_t h) { return kernels.data() + h * len; }
  const double* kernel(std::size_t h) const { return kernels.data() + h * len; }
  std::span<const double> kernel_span(std::size_t h) const {
    return {kernel(h), len};
  }
};

}  // namespace longconv
