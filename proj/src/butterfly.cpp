#include "longconv/butterfly.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace longconv {

namespace {

ComplexSeq dense_dft_block(std::size_t f) {
  ComplexSeq block(f * f);
  const double step = -2.0 * std::numbers::pi / static_cast<double>(f);
  for (std::size_t p = 0; p < f; ++p)
    for (std::size_t q = 0; q < f; ++q)
      block[p * f + q] = std::polar(1.0, step * static_cast<double>((p * q) % f));
  return block;
}

// Largest divisor of L in [2, r], or 0 if none.
std::size_t greedy_factor(std::size_t L, std::size_t r) {
  for (std::size_t d = std::min(L, r); d >= 2; --d)
    if (L % d == 0) return d;
  return 0;
}

}  // namespace

StridePermutation StridePermutation::transpose(std::size_t n1, std::size_t n2) {
  StridePermutation p;
  p.n1 = n1;
  p.n2 = n2;
  p.n = n1 * n2;
  p.map.resize(p.n);
  for (std::size_t j1 = 0; j1 < n1; ++j1)
    for (std::size_t j2 = 0; j2 < n2; ++j2)
      p.map[j2 * n1 + j1] = static_cast<std::uint32_t>(j1 * n2 + j2);
  return p;
}

StridePermutation StridePermutation::inverse() const {
  StridePermutation p;
  p.n1 = n2;
  p.n2 = n1;
  p.n = n;
  p.map.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.map[map[i]] = static_cast<std::uint32_t>(i);
  return p;
}

void StridePermutation::apply(std::span<const Complex> in, std::span<Complex> out) const {
  if (in.size() != n || out.size() != n)
    throw DimensionError("StridePermutation: length mismatch");
  for (std::size_t i = 0; i < n; ++i) out[i] = in[map[i]];
}

TwiddleDiagonal TwiddleDiagonal::build(std::size_t n1, std::size_t n2) {
  TwiddleDiagonal t;
  t.n1 = n1;
  t.n2 = n2;
  t.n = n1 * n2;
  t.diagonal.resize(t.n);
  const double step = -2.0 * std::numbers::pi / static_cast<double>(t.n);
  for (std::size_t j = 0; j < n1; ++j)
    for (std::size_t k = 0; k < n2; ++k)
      t.diagonal[j * n2 + k] = std::polar(1.0, step * static_cast<double>(j * k));
  return t;
}

ButterflyPlan build_plan(std::size_t n, std::size_t r) {
  if (n == 0) throw PlanError("build_plan: n must be >= 1");
  if (r < 2) throw PlanError("build_plan: block size r must be >= 2");
  if (n > std::numeric_limits<std::uint32_t>::max())
    throw PlanError("build_plan: n too large");

  ButterflyPlan plan;
  plan.n = n;
  plan.r = r;

  // Greedy factor chain: n = f_1 * f_2 * ... * f_s with each f_i <= r.
  std::size_t segment = n;
  while (segment > 1) {
    const std::size_t f = (segment <= r) ? segment : greedy_factor(segment, r);
    if (f == 0)
      throw PlanError("build_plan: remainder " + std::to_string(segment) +
                      " has no factor <= " + std::to_string(r) +
                      "; pad the input to a power of two");
    const std::size_t rest = segment / f;
    PlanStage stage;
    stage.factor = f;
    stage.segment = segment;
    stage.gather = StridePermutation::transpose(f, rest);
    stage.scatter = stage.gather.inverse();
    stage.dft_block = dense_dft_block(f);
    stage.twiddle = TwiddleDiagonal::build(f, rest);
    plan.stages.push_back(std::move(stage));
    segment = rest;
  }

  // Trailing output transposes of the recursion, composed into one map.
  plan.output_map.resize(n);
  for (std::size_t i = 0; i < n; ++i) plan.output_map[i] = static_cast<std::uint32_t>(i);
  for (std::size_t d = 0; d + 1 < plan.stages.size(); ++d) {
    const PlanStage& st = plan.stages[d];
    const std::size_t L = st.segment;
    const std::size_t f = st.factor;
    const std::size_t rest = L / f;
    const StridePermutation post = StridePermutation::transpose(f, rest);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t off = (plan.output_map[i] / L) * L;
      const std::size_t local = plan.output_map[i] % L;
      plan.output_map[i] = static_cast<std::uint32_t>(off + post.map[local]);
    }
  }
  return plan;
}

namespace {

// Shared stage walk for the fixed and the learned operator. blocks[i] must be
// a stages[i].factor^2 dense matrix.
ComplexSeq apply_stages(const ButterflyPlan& plan,
                        std::span<const std::vector<Complex>* const> blocks,
                        std::span<const Complex> x,
                        std::vector<ComplexSeq>* saved_block_inputs) {
  const std::size_t n = plan.n;
  if (x.size() != n) throw DimensionError("apply_plan: input length != plan.n");

  ComplexSeq cur(x.begin(), x.end());
  ComplexSeq tmp(n);

  for (std::size_t si = 0; si < plan.stages.size(); ++si) {
    const PlanStage& st = plan.stages[si];
    const std::vector<Complex>& block = *blocks[si];
    const std::size_t L = st.segment;
    const std::size_t f = st.factor;

    // gather
    for (std::size_t off = 0; off < n; off += L)
      for (std::size_t i = 0; i < L; ++i) tmp[off + i] = cur[off + st.gather.map[i]];
    if (saved_block_inputs) (*saved_block_inputs)[si] = tmp;

    // dense blocks
    for (std::size_t base = 0; base < n; base += f) {
      for (std::size_t p = 0; p < f; ++p) {
        Complex acc(0.0, 0.0);
        for (std::size_t q = 0; q < f; ++q) acc += cmul(block[p * f + q], tmp[base + q]);
        cur[base + p] = acc;
      }
    }

    // scatter, then twiddle
    for (std::size_t off = 0; off < n; off += L)
      for (std::size_t i = 0; i < L; ++i)
        tmp[off + i] = cmul(cur[off + st.scatter.map[i]], st.twiddle.diagonal[i]);
    std::swap(cur, tmp);
  }

  for (std::size_t i = 0; i < n; ++i) tmp[i] = cur[plan.output_map[i]];
  return tmp;
}

std::vector<const std::vector<Complex>*> plan_block_view(const ButterflyPlan& plan) {
  std::vector<const std::vector<Complex>*> v(plan.stages.size());
  for (std::size_t i = 0; i < plan.stages.size(); ++i) v[i] = &plan.stages[i].dft_block;
  return v;
}

}  // namespace

ComplexSeq apply_plan(const ButterflyPlan& plan, std::span<const Complex> x,
                      Direction dir) {
  const auto blocks = plan_block_view(plan);
  if (dir == Direction::kForward) return apply_stages(plan, blocks, x, nullptr);

  // F^-1 x = conj(F conj(x)) / n
  ComplexSeq conj_x(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) conj_x[i] = std::conj(x[i]);
  ComplexSeq y = apply_stages(plan, blocks, conj_x, nullptr);
  const double inv_n = 1.0 / static_cast<double>(plan.n);
  for (auto& z : y) z = std::conj(z) * inv_n;
  return y;
}

ComplexSeq conv_butterfly(std::span<const Complex> u, std::span<const Complex> k,
                          const ButterflyPlan& plan, ConvMode mode) {
  const std::size_t n = u.size();
  if (k.size() != n) throw DimensionError("conv_butterfly: u and k length mismatch");

  if (mode == ConvMode::kCircular) {
    if (plan.n != n) throw DimensionError("conv_butterfly: circular mode needs plan.n == N");
    ComplexSeq spec_u = apply_plan(plan, u, Direction::kForward);
    const ComplexSeq spec_k = apply_plan(plan, k, Direction::kForward);
    for (std::size_t i = 0; i < n; ++i) spec_u[i] = cmul(spec_u[i], spec_k[i]);
    return apply_plan(plan, spec_u, Direction::kInverse);
  }

  if (plan.n != 2 * n) throw DimensionError("conv_butterfly: causal mode needs plan.n == 2N");
  ComplexSeq pu(2 * n, Complex(0.0, 0.0)), pk(2 * n, Complex(0.0, 0.0));
  std::copy(u.begin(), u.end(), pu.begin());
  std::copy(k.begin(), k.end(), pk.begin());
  ComplexSeq spec_u = apply_plan(plan, pu, Direction::kForward);
  const ComplexSeq spec_k = apply_plan(plan, pk, Direction::kForward);
  for (std::size_t i = 0; i < 2 * n; ++i) spec_u[i] = cmul(spec_u[i], spec_k[i]);
  ComplexSeq full = apply_plan(plan, spec_u, Direction::kInverse);
  full.resize(n);
  return full;
}

std::string ButterflyPlan::describe_json() const {
  std::ostringstream os;
  os << "{\"n\":" << n << ",\"r\":" << r << ",\"stage_factors\":[";
  for (std::size_t i = 0; i < stages.size(); ++i)
    os << (i ? "," : "") << stages[i].factor;
  os << "]}";
  return os.str();
}

LearnedButterfly LearnedButterfly::from_plan(const ButterflyPlan& p) {
  LearnedButterfly lb;
  lb.plan = p;
  lb.blocks.reserve(p.stages.size());
  for (const auto& st : p.stages) lb.blocks.push_back(st.dft_block);
  return lb;
}

std::size_t LearnedButterfly::parameter_count() const {
  std::size_t count = 0;
  for (const auto& b : blocks) count += b.size();
  return count;
}

ComplexSeq learned_forward(const LearnedButterfly& lb, std::span<const Complex> x) {
  if (lb.blocks.size() != lb.plan.stages.size())
    throw DimensionError("learned_forward: block count != stage count");
  std::vector<const std::vector<Complex>*> blocks(lb.blocks.size());
  for (std::size_t i = 0; i < lb.blocks.size(); ++i) {
    if (lb.blocks[i].size() != lb.plan.stages[i].factor * lb.plan.stages[i].factor)
      throw DimensionError("learned_forward: block shape mismatch at stage " +
                           std::to_string(i));
    blocks[i] = &lb.blocks[i];
  }
  return apply_stages(lb.plan, blocks, x, nullptr);
}

LearnedGradients learned_gradients(const LearnedButterfly& lb,
                                   std::span<const Complex> x,
                                   std::span<const Complex> upstream) {
  const ButterflyPlan& plan = lb.plan;
  const std::size_t n = plan.n;
  if (x.size() != n || upstream.size() != n)
    throw DimensionError("learned_gradients: shape mismatch");

  // Forward, keeping each stage's block-input vector.
  std::vector<ComplexSeq> block_inputs(plan.stages.size());
  std::vector<const std::vector<Complex>*> blocks(lb.blocks.size());
  for (std::size_t i = 0; i < lb.blocks.size(); ++i) blocks[i] = &lb.blocks[i];
  (void)apply_stages(plan, blocks, x, &block_inputs);

  LearnedGradients grads;
  grads.block_grads.resize(plan.stages.size());
  for (std::size_t i = 0; i < plan.stages.size(); ++i)
    grads.block_grads[i].assign(lb.blocks[i].size(), Complex(0.0, 0.0));

  // Adjoint of out[i] = work[output_map[i]] is a scatter.
  ComplexSeq g(n), tmp(n);
  for (std::size_t i = 0; i < n; ++i) g[plan.output_map[i]] = upstream[i];

  for (std::size_t si = plan.stages.size(); si-- > 0;) {
    const PlanStage& st = plan.stages[si];
    const std::size_t L = st.segment;
    const std::size_t f = st.factor;
    const std::vector<Complex>& block = lb.blocks[si];
    const ComplexSeq& v = block_inputs[si];

    // twiddle adjoint, then scatter adjoint (scatter was out[i] = in[map[i]]).
    for (std::size_t off = 0; off < n; off += L)
      for (std::size_t i = 0; i < L; ++i)
        tmp[off + st.scatter.map[i]] = cmul(g[off + i], std::conj(st.twiddle.diagonal[i]));

    // Block gradient: G += w v^H per block; then w <- W^H w.
    std::vector<Complex>& G = grads.block_grads[si];
    for (std::size_t base = 0; base < n; base += f) {
      for (std::size_t p = 0; p < f; ++p) {
        const Complex w_p = tmp[base + p];
        for (std::size_t q = 0; q < f; ++q)
          G[p * f + q] += cmul(w_p, std::conj(v[base + q]));
      }
      for (std::size_t q = 0; q < f; ++q) {
        Complex acc(0.0, 0.0);
        for (std::size_t p = 0; p < f; ++p)
          acc += cmul(std::conj(block[p * f + q]), tmp[base + p]);
        g[base + q] = acc;
      }
    }

    // gather adjoint
    for (std::size_t off = 0; off < n; off += L)
      for (std::size_t i = 0; i < L; ++i) tmp[off + st.gather.map[i]] = g[off + i];
    std::swap(g, tmp);
  }

  grads.input_grad = std::move(g);
  return grads;
}

std::vector<Complex> learned_dense_matrix(const LearnedButterfly& lb) {
  const std::size_t n = lb.plan.n;
  std::vector<Complex> dense(n * n);
  ComplexSeq basis(n, Complex(0.0, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    basis[j] = Complex(1.0, 0.0);
    const ComplexSeq col = learned_forward(lb, basis);
    for (std::size_t i = 0; i < n; ++i) dense[i * n + j] = col[i];
    basis[j] = Complex(0.0, 0.0);
  }
  return dense;
}

}  // namespace longconv
