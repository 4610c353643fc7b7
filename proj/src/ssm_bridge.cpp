#include "longconv/ssm_bridge.hpp"

#include <cmath>
#include <numbers>

#include "longconv/detail/lu.hpp"

namespace longconv {

namespace {
constexpr double kMinNodeSeparation = 1e-9;
}

VandermondeSystem VandermondeSystem::build(ComplexSeq nodes) {
  const std::size_t n = nodes.size();
  if (n == 0) throw DimensionError("VandermondeSystem: empty node set");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(nodes[i] - nodes[j]) <= kMinNodeSeparation)
        throw ConditioningError("VandermondeSystem: nodes " + std::to_string(i) + " and " +
                                std::to_string(j) + " are not distinct");
  VandermondeSystem sys;
  sys.nodes = std::move(nodes);
  return sys;
}

ComplexSeq VandermondeSystem::multiply(std::span<const Complex> b) const {
  const std::size_t n = nodes.size();
  if (b.size() != n) throw DimensionError("VandermondeSystem: length mismatch");
  ComplexSeq out(n, Complex(0.0, 0.0));
  ComplexSeq power(n, Complex(1.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) acc += cmul(power[j], b[j]);
    out[i] = acc;
    if (i + 1 < n)
      for (std::size_t j = 0; j < n; ++j) power[j] = cmul(power[j], nodes[j]);
  }
  return out;
}

ComplexSeq unit_root_nodes(std::size_t n) {
  ComplexSeq nodes(n);
  const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j)
    nodes[j] = std::polar(1.0, step * static_cast<double>(j));
  return nodes;
}

ComplexSeq ssm_to_kernel(const DiagonalSsm& ssm, std::size_t n) {
  if (n == 0) throw DimensionError("ssm_to_kernel: n must be >= 1");
  if (ssm.a.size() != ssm.b.size())
    throw DimensionError("ssm_to_kernel: a and b must have equal length");
  ComplexSeq kernel(n, Complex(0.0, 0.0));
  ComplexSeq power(ssm.a.size(), Complex(1.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < ssm.a.size(); ++j) acc += cmul(power[j], ssm.b[j]);
    kernel[i] = acc;
    if (i + 1 < n)
      for (std::size_t j = 0; j < ssm.a.size(); ++j) power[j] = cmul(power[j], ssm.a[j]);
  }
  return kernel;
}

ComplexSeq vandermonde_solve(const VandermondeSystem& sys, std::span<const Complex> rhs) {
  const std::size_t n = sys.size();
  if (rhs.size() != n) throw DimensionError("vandermonde_solve: rhs length mismatch");

  std::vector<Complex> matrix(n * n);
  ComplexSeq power(n, Complex(1.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) matrix[i * n + j] = power[j];
    if (i + 1 < n)
      for (std::size_t j = 0; j < n; ++j) power[j] = cmul(power[j], sys.nodes[j]);
  }

  std::vector<Complex> b;
  if (!detail::lu_solve(matrix, n, ComplexSeq(rhs.begin(), rhs.end()), &b))
    throw ConditioningError("vandermonde_solve: singular system (coincident nodes?)");

  const ComplexSeq check = sys.multiply(b);
  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) residual = std::max(residual, std::abs(check[i] - rhs[i]));
  const double limit = 1e-7 * (1.0 + max_abs(rhs));
  if (residual > limit)
    throw ConditioningError("vandermonde_solve: residual " + std::to_string(residual) +
                            " exceeds threshold; node set too ill-conditioned");
  return b;
}

std::vector<DiagonalSsm> kernel_to_ssm(std::span<const Complex> kernel, std::size_t M,
                                       ComplexSeq nodes) {
  const std::size_t n = kernel.size();
  if (M == 0 || n == 0 || n % M != 0)
    throw DimensionError("kernel_to_ssm: M must divide the kernel length");
  if (nodes.empty()) nodes = unit_root_nodes(n);
  const VandermondeSystem sys = VandermondeSystem::build(std::move(nodes));
  if (sys.size() != n) throw DimensionError("kernel_to_ssm: node count must equal N");

  const ComplexSeq weights = vandermonde_solve(sys, kernel);

  // Contiguous partition of the (node, weight) pairs into N/M groups.
  std::vector<DiagonalSsm> parts(n / M);
  for (std::size_t g = 0; g < parts.size(); ++g) {
    parts[g].a.assign(sys.nodes.begin() + g * M, sys.nodes.begin() + (g + 1) * M);
    parts[g].b.assign(weights.begin() + g * M, weights.begin() + (g + 1) * M);
  }
  return parts;
}

ComplexSeq materialize_ssm_sum(std::span<const DiagonalSsm> ssms, std::size_t n) {
  ComplexSeq total(n, Complex(0.0, 0.0));
  for (const DiagonalSsm& ssm : ssms) {
    const ComplexSeq part = ssm_to_kernel(ssm, n);
    for (std::size_t i = 0; i < n; ++i) total[i] += part[i];
  }
  return total;
}

}  // namespace longconv
