#include "longconv/dft_reference.hpp"

#include <cmath>
#include <numbers>

namespace longconv {

namespace {

// Table of exp(-2*pi*i*t/n) for t in [0, n).
ComplexSeq unit_roots(std::size_t n) {
  ComplexSeq roots(n);
  const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t t = 0; t < n; ++t)
    roots[t] = std::polar(1.0, step * static_cast<double>(t));
  return roots;
}

}  // namespace

DenseDftMatrix DenseDftMatrix::build(std::size_t n) {
  DenseDftMatrix m;
  m.n = n;
  m.entries.resize(n * n);
  const ComplexSeq roots = unit_roots(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      m.entries[j * n + k] = roots[(j * k) % n];
  return m;
}

ComplexSeq DenseDftMatrix::multiply(std::span<const Complex> x) const {
  if (x.size() != n) throw DimensionError("DenseDftMatrix: input length mismatch");
  ComplexSeq y(n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex acc(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) acc += cmul(entries[j * n + k], x[k]);
    y[j] = acc;
  }
  return y;
}

ComplexSeq dft_naive(std::span<const Complex> x) {
  const std::size_t n = x.size();
  ComplexSeq y(n);
  const ComplexSeq roots = unit_roots(n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex acc(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) acc += cmul(x[k], roots[(j * k) % n]);
    y[j] = acc;
  }
  return y;
}

ComplexSeq idft_naive(std::span<const Complex> x) {
  const std::size_t n = x.size();
  ComplexSeq y(n);
  const ComplexSeq roots = unit_roots(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex acc(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k)
      acc += cmul(x[k], std::conj(roots[(j * k) % n]));
    y[j] = acc * inv_n;
  }
  return y;
}

ComplexSeq conv_circular_naive(std::span<const Complex> u, std::span<const Complex> k) {
  const std::size_t n = u.size();
  if (k.size() != n) throw DimensionError("conv_circular_naive: length mismatch");
  ComplexSeq y(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) acc += cmul(u[j], k[(i + n - j) % n]);
    y[i] = acc;
  }
  return y;
}

ComplexSeq conv_causal_naive(std::span<const Complex> u, std::span<const Complex> k) {
  const std::size_t n = u.size();
  if (k.size() != n) throw DimensionError("conv_causal_naive: length mismatch");
  ComplexSeq y(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j <= i; ++j) acc += cmul(k[j], u[i - j]);
    y[i] = acc;
  }
  return y;
}

std::vector<double> conv_circular_naive_real(std::span<const double> u,
                                             std::span<const double> k) {
  const std::size_t n = u.size();
  if (k.size() != n) throw DimensionError("conv_circular_naive_real: length mismatch");
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += u[j] * k[(i + n - j) % n];
    y[i] = acc;
  }
  return y;
}

std::vector<double> conv_causal_naive_real(std::span<const double> u,
                                           std::span<const double> k) {
  const std::size_t n = u.size();
  if (k.size() != n) throw DimensionError("conv_causal_naive_real: length mismatch");
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= i; ++j) acc += k[j] * u[i - j];
    y[i] = acc;
  }
  return y;
}

}  // namespace longconv
