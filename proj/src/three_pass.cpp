#include "longconv/three_pass.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "longconv/detail/lu.hpp"
#include "longconv/parallel.hpp"

namespace longconv {

// ---------------------------------------------------------------------------
// PassCounter
// ---------------------------------------------------------------------------

void PassCounter::reset(std::size_t n) {
  n_ = n;
  current_ = -1;
  phases_ = {};
  touch_stamp_.assign(n, 0);
}

void PassCounter::begin_phase(int phase) {
  if (phase < 1 || phase > 3) throw DimensionError("PassCounter: phase must be 1..3");
  current_ = phase - 1;
  if (touch_stamp_.size() != n_) touch_stamp_.assign(n_, 0);
}

void PassCounter::record_read(std::size_t index) {
  Phase& p = phases_[current_];
  ++p.reads;
  if (touch_stamp_[index] != static_cast<std::uint32_t>(current_ + 1)) {
    touch_stamp_[index] = static_cast<std::uint32_t>(current_ + 1);
    ++p.distinct_touched;
  }
}

void PassCounter::record_write(std::size_t index) {
  Phase& p = phases_[current_];
  ++p.writes;
  if (touch_stamp_[index] != static_cast<std::uint32_t>(current_ + 1)) {
    touch_stamp_[index] = static_cast<std::uint32_t>(current_ + 1);
    ++p.distinct_touched;
  }
}

void PassCounter::record_working_set(std::size_t elements) {
  Phase& p = phases_[current_];
  p.working_set_peak = std::max(p.working_set_peak, elements);
}

void PassCounter::merge_counts(std::uint64_t reads, std::uint64_t writes) {
  phases_[current_].reads += reads;
  phases_[current_].writes += writes;
}

int PassCounter::sweeps() const {
  int count = 0;
  for (const Phase& p : phases_)
    if (n_ > 0 && p.distinct_touched >= n_) ++count;
  return count;
}

std::string PassCounter::report_json() const {
  std::ostringstream os;
  os << "{\"buffer_len\":" << n_ << ",\"phases\":[";
  for (std::size_t i = 0; i < phases_.size(); ++i) {
    const Phase& p = phases_[i];
    os << (i ? "," : "") << "{\"phase\":" << (i + 1) << ",\"reads\":" << p.reads
       << ",\"writes\":" << p.writes << ",\"distinct_touched\":" << p.distinct_touched
       << ",\"working_set_peak\":" << p.working_set_peak << "}";
  }
  os << "],\"sweeps\":" << sweeps() << ",\"working_set_cap\":" << cap_ << "}";
  return os.str();
}

// ---------------------------------------------------------------------------
// BlockDiagonalButterfly
// ---------------------------------------------------------------------------

Complex BlockDiagonalButterfly::entry(std::size_t j, std::size_t k, std::size_t tau) const {
  const std::size_t jj = transposed ? k : j;
  const std::size_t kk = transposed ? j : k;
  Complex v;
  if (!entries.empty()) {
    v = entries[(tau * m + jj) * m + kk];
  } else {
    v = (*roots)[(kk * (jj * l + tau)) % n];
  }
  if (conjugated) v = std::conj(v);
  return scale == 1.0 ? v : v * scale;
}

BlockDiagonalButterfly BlockDiagonalButterfly::transpose() const {
  BlockDiagonalButterfly t = *this;
  t.transposed = !transposed;
  return t;
}

ComplexSeq BlockDiagonalButterfly::apply(std::span<const Complex> x,
                                         PassCounter* counter) const {
  if (x.size() != n) throw DimensionError("BlockDiagonalButterfly: length mismatch");
  ComplexSeq y(n);
  ComplexSeq gathered(m);
  for (std::size_t tau = 0; tau < l; ++tau) {
    // One strided gather per offset; every input element is read exactly once
    // across the whole multiply.
    for (std::size_t k = 0; k < m; ++k) {
      gathered[k] = x[k * l + tau];
      if (counter) counter->record_read(k * l + tau);
    }
    if (counter) counter->record_working_set(2 * m);
    for (std::size_t j = 0; j < m; ++j) {
      Complex acc(0.0, 0.0);
      for (std::size_t k = 0; k < m; ++k) acc += cmul(entry(j, k, tau), gathered[k]);
      y[j * l + tau] = acc;
      if (counter) counter->record_write(j * l + tau);
    }
  }
  return y;
}

BlockDiagonalButterfly build_block_butterfly(std::size_t n, std::size_t l, std::size_t m) {
  if (n == 0 || l * m != n) throw DimensionError("build_block_butterfly: need n == l*m");
  BlockDiagonalButterfly b;
  b.n = n;
  b.l = l;
  b.m = m;
  auto roots = std::make_shared<ComplexSeq>(n);
  const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t t = 0; t < n; ++t)
    (*roots)[t] = std::polar(1.0, step * static_cast<double>(t));
  b.roots = std::move(roots);
  return b;
}

BlockDiagonalButterfly invert_block_butterfly_analytic(const BlockDiagonalButterfly& b) {
  if (!b.entries.empty())
    throw DimensionError("invert_block_butterfly_analytic: closed-form input required");
  // The per-tau systems are scaled DFT matrices, so B * B^H = m * I.
  BlockDiagonalButterfly inv = b;
  inv.conjugated = !b.conjugated;
  inv.transposed = !b.transposed;
  inv.scale = 1.0 / (static_cast<double>(b.m) * b.scale);
  return inv;
}

BlockDiagonalButterfly invert_block_butterfly(const BlockDiagonalButterfly& b) {
  const std::size_t m = b.m;
  BlockDiagonalButterfly inv;
  inv.n = b.n;
  inv.l = b.l;
  inv.m = m;
  inv.roots = b.roots;
  inv.entries.resize(b.n * m);
  std::vector<Complex> system(m * m);
  for (std::size_t tau = 0; tau < b.l; ++tau) {
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k) system[j * m + k] = b.entry(j, k, tau);
    std::vector<Complex> inverse;
    if (!detail::lu_invert(system, m, &inverse))
      throw ConditioningError("invert_block_butterfly: singular m x m sub-system at offset " +
                              std::to_string(tau) + "; invalid (l, m) factorization");
    std::copy(inverse.begin(), inverse.end(), inv.entries.begin() + tau * m * m);
  }
  return inv;
}

std::vector<Complex> block_butterfly_dense(const BlockDiagonalButterfly& b) {
  std::vector<Complex> dense(b.n * b.n, Complex(0.0, 0.0));
  for (std::size_t j = 0; j < b.m; ++j)
    for (std::size_t k = 0; k < b.m; ++k)
      for (std::size_t tau = 0; tau < b.l; ++tau)
        dense[(j * b.l + tau) * b.n + (k * b.l + tau)] = b.entry(j, k, tau);
  return dense;
}

// ---------------------------------------------------------------------------
// Three-pass plan
// ---------------------------------------------------------------------------

ThreePassPlan build_three_pass(std::span<const Complex> kernel, std::size_t l,
                               std::size_t m, std::size_t inner_r) {
  const std::size_t n = kernel.size();
  if (l == 0 || m == 0 || l * m != n)
    throw DimensionError("build_three_pass: need kernel length n == l*m");

  ThreePassPlan plan;
  plan.n = n;
  plan.l = l;
  plan.m = m;
  plan.inner = build_plan(l, inner_r);
  plan.mixer = build_block_butterfly(n, l, m);
  plan.mixer_inv = invert_block_butterfly_analytic(plan.mixer);

  const ButterflyPlan full = build_plan(n, inner_r);
  const ComplexSeq k_hat = apply_plan(full, kernel, Direction::kForward);
  plan.d_k.resize(n);
  const double dl = static_cast<double>(l);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t tau = 0; tau < l; ++tau)
      plan.d_k[a * l + tau] = k_hat[tau * m + a] * dl;
  return plan;
}

namespace {

// Middle pass for one block: an FFT convolution of length l against the
// block's slice of the diagonalized kernel spectrum.
void middle_block(const ThreePassPlan& plan, std::size_t a, ComplexSeq& buf) {
  const std::size_t l = plan.l;
  const double inv_l = 1.0 / static_cast<double>(l);
  std::span<Complex> block(buf.data() + a * l, l);
  ComplexSeq z = apply_plan(plan.inner, block, Direction::kForward);
  // d_k carries the extra factor l; fold its removal into the multiply.
  for (std::size_t tau = 0; tau < l; ++tau)
    z[tau] = cmul(z[tau], plan.d_k[a * l + tau]) * inv_l;
  const ComplexSeq back = apply_plan(plan.inner, z, Direction::kInverse);
  std::copy(back.begin(), back.end(), block.begin());
}

}  // namespace

ComplexSeq conv_three_pass_ordered(const ThreePassPlan& plan,
                                   std::span<const Complex> u,
                                   std::span<const std::size_t> block_order,
                                   PassCounter* counter) {
  const std::size_t n = plan.n;
  if (u.size() != n) throw DimensionError("conv_three_pass: input length != plan.n");
  if (block_order.size() != plan.m)
    throw DimensionError("conv_three_pass: block order must list all m blocks");

  if (counter) {
    counter->reset(n);
    counter->begin_phase(1);
  }
  ComplexSeq buf = plan.mixer.transpose().apply(u, counter);

  if (counter) counter->begin_phase(2);
  for (std::size_t a : block_order) {
    if (a >= plan.m) throw DimensionError("conv_three_pass: block index out of range");
    if (counter) {
      for (std::size_t i = a * plan.l; i < (a + 1) * plan.l; ++i) counter->record_read(i);
      counter->record_working_set(4 * plan.l);
    }
    middle_block(plan, a, buf);
    if (counter)
      for (std::size_t i = a * plan.l; i < (a + 1) * plan.l; ++i) counter->record_write(i);
  }

  if (counter) counter->begin_phase(3);
  return plan.mixer_inv.transpose().apply(buf, counter);
}

ComplexSeq conv_three_pass(const ThreePassPlan& plan, std::span<const Complex> u,
                           PassCounter* counter, int threads) {
  if (threads <= 1 || plan.m <= 1) {
    std::vector<std::size_t> order(plan.m);
    for (std::size_t a = 0; a < plan.m; ++a) order[a] = a;
    return conv_three_pass_ordered(plan, u, order, counter);
  }

  const std::size_t n = plan.n;
  if (u.size() != n) throw DimensionError("conv_three_pass: input length != plan.n");

  if (counter) {
    counter->reset(n);
    counter->begin_phase(1);
  }
  ComplexSeq buf = plan.mixer.transpose().apply(u, counter);

  if (counter) counter->begin_phase(2);
  parallel_for(plan.m, threads, [&](std::size_t a) { middle_block(plan, a, buf); });
  if (counter) {
    // Accounting mirrors the per-block access pattern; blocks are disjoint.
    for (std::size_t a = 0; a < plan.m; ++a) {
      for (std::size_t i = a * plan.l; i < (a + 1) * plan.l; ++i) {
        counter->record_read(i);
        counter->record_write(i);
      }
      counter->record_working_set(4 * plan.l);
    }
  }

  if (counter) counter->begin_phase(3);
  return plan.mixer_inv.transpose().apply(buf, counter);
}

// ---------------------------------------------------------------------------
// Real packing
// ---------------------------------------------------------------------------

namespace {

std::vector<double> conv_real_packed_circular(std::span<const double> u,
                                              std::span<const double> k) {
  const std::size_t n = u.size();
  const std::size_t half = n / 2;
  const ButterflyPlan plan = build_plan(half, 16);

  // Pack adjacent sample pairs into complex points.
  ComplexSeq zu(half), zk(half);
  for (std::size_t t = 0; t < half; ++t) {
    zu[t] = Complex(u[2 * t], u[2 * t + 1]);
    zk[t] = Complex(k[2 * t], k[2 * t + 1]);
  }
  const ComplexSeq su = apply_plan(plan, zu, Direction::kForward);
  const ComplexSeq sk = apply_plan(plan, zk, Direction::kForward);

  // Half spectra [0..half] of the full real transforms.
  const auto unpack_half = [&](const ComplexSeq& z, ComplexSeq& spec) {
    spec.resize(half + 1);
    for (std::size_t j = 0; j < half; ++j) {
      const Complex zc = std::conj(z[(half - j) % half]);
      const Complex even = 0.5 * (z[j] + zc);
      const Complex odd = Complex(0.0, -0.5) * (z[j] - zc);
      const Complex w = std::polar(1.0, -2.0 * std::numbers::pi *
                                            static_cast<double>(j) /
                                            static_cast<double>(n));
      spec[j] = even + cmul(w, odd);
      if (j == 0) spec[half] = even - odd;
    }
  };
  ComplexSeq spec_u, spec_k;
  unpack_half(su, spec_u);
  unpack_half(sk, spec_k);

  // Pointwise product keeps conjugate symmetry, so the half spectrum is enough.
  ComplexSeq prod(half + 1);
  for (std::size_t j = 0; j <= half; ++j) prod[j] = cmul(spec_u[j], spec_k[j]);

  // Re-pack the product spectrum for the half-length inverse transform.
  ComplexSeq packed(half);
  for (std::size_t j = 0; j < half; ++j) {
    const Complex yc = std::conj(prod[half - j]);
    const Complex even = 0.5 * (prod[j] + yc);
    const Complex w_conj = std::polar(1.0, 2.0 * std::numbers::pi *
                                               static_cast<double>(j) /
                                               static_cast<double>(n));
    const Complex odd = cmul(0.5 * (prod[j] - yc), w_conj);
    packed[j] = even + cmul(Complex(0.0, 1.0), odd);
  }
  const ComplexSeq back = apply_plan(plan, packed, Direction::kInverse);

  std::vector<double> y(n);
  for (std::size_t t = 0; t < half; ++t) {
    y[2 * t] = back[t].real();
    y[2 * t + 1] = back[t].imag();
  }
  return y;
}

}  // namespace

std::vector<double> conv_real_packed(std::span<const double> u,
                                     std::span<const double> k, ConvMode mode) {
  const std::size_t n = u.size();
  if (k.size() != n) throw DimensionError("conv_real_packed: length mismatch");
  if (n == 0 || n % 2 != 0)
    throw DimensionError("conv_real_packed: length must be even and positive");

  if (mode == ConvMode::kCircular) return conv_real_packed_circular(u, k);

  std::vector<double> pu(2 * n, 0.0), pk(2 * n, 0.0);
  std::copy(u.begin(), u.end(), pu.begin());
  std::copy(k.begin(), k.end(), pk.begin());
  std::vector<double> full = conv_real_packed_circular(pu, pk);
  full.resize(n);
  return full;
}

}  // namespace longconv
