#include "oblivdsp/kernels/kernels.hpp"

#include <cmath>
#include <numbers>

#include "oblivdsp/error.hpp"

namespace oblivdsp::kernels {

SlotVector framePower(Machine& m, const SlotVector& re, const SlotVector& im) {
  return m.rescale(m.add(m.mulCt(re, re), m.mulCt(im, im)));
}

SlotVector energy(Machine& m, std::span<const SlotVector> re, std::span<const SlotVector> im) {
  if (re.size() != im.size() || re.empty()) throw LayoutError("energy needs matching, nonempty frame streams");
  // Accumulate pending products and rescale once.
  SlotVector acc;
  for (std::size_t t = 0; t < re.size(); ++t) {
    SlotVector p = m.add(m.mulCt(re[t], re[t]), m.mulCt(im[t], im[t]));
    acc = acc.valid() ? m.add(acc, p) : p;
  }
  return m.rescale(acc);
}

SlotVector energyFromPowers(Machine& m, std::span<const SlotVector> powers) {
  if (powers.empty()) throw LayoutError("energy of zero frames");
  return m.sum(powers);
}

SoftAttention softAttention(Machine& m, const SlotVector& e, std::size_t R, int gamma) {
  if (R == 0 || R > e.slotCount) throw LayoutError("range bins exceed the slot count");
  SoftAttention out;
  out.weights = m.powerOfTwo(e, exponentLog2(gamma, "gamma"));
  std::vector<double> ramp(e.slotCount, 0.0);
  for (std::size_t r = 0; r < R; ++r) ramp[r] = static_cast<double>(r);
  out.denominator = m.rotateSum(out.weights, R);
  out.numerator = m.rotateSum(m.multiplyPlain(out.weights, ramp), R);
  return out;
}

DopplerSoftPower dopplerSoftPower(Machine& m, const SlotVector& power, const DopplerLayout& layout, int gamma) {
  const std::size_t n = power.slotCount;
  if (layout.active() > n || n % layout.D != 0) throw LayoutError("Doppler layout does not fit the slot count");
  DopplerSoftPower out;
  // Stride-D doubling over all n/D blocks leaves each Doppler bin's total in every block.
  const SlotVector sums = m.rotateSum(power, n / layout.D, static_cast<int>(layout.D));
  out.weights = m.powerOfTwo(sums, exponentLog2(gamma, "Doppler gamma"));
  out.features = m.multiply(power, out.weights);
  return out;
}

std::vector<double> DopplerDft::window(std::size_t d) {
  if (d == 1) return {1.0};
  std::vector<double> w(d);
  for (std::size_t i = 0; i < d; ++i) {
    w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(d - 1)));
  }
  return w;
}

DopplerDft::DopplerDft(std::size_t slots, const DopplerLayout& layout, double gain)
    : cos_(slots), sin_(slots), negSin_(slots) {
  if (layout.active() > slots) throw LayoutError("Doppler layout exceeds the slot count");
  const std::size_t d = layout.D;
  const auto w = window(d);
  std::vector<double> c(d * d), s(d * d), ns(d * d);
  for (std::size_t k = 0; k < d; ++k) {
    const std::size_t row = shifted(k, d);
    for (std::size_t i = 0; i < d; ++i) {
      const double ang = 2.0 * std::numbers::pi * static_cast<double>((k * i) % d) / static_cast<double>(d);
      c[row * d + i] = gain * w[i] * std::cos(ang);
      s[row * d + i] = gain * w[i] * std::sin(ang);
      ns[row * d + i] = -s[row * d + i];
    }
  }
  for (std::size_t blk = 0; blk < layout.A * layout.R; ++blk) {
    cos_.addBlock(d, d, c, blk * d, blk * d);
    sin_.addBlock(d, d, s, blk * d, blk * d);
    negSin_.addBlock(d, d, ns, blk * d, blk * d);
  }
  baby_ = cos_.defaultBabyStep();
}

ComplexPair DopplerDft::apply(Machine& m, const SlotVector& re, const SlotVector& im) const {
  // X = sum w z e^{-i theta}: Re = C re + S im, Im = C im - S re.
  RotationCache reCache(m, re), imCache(m, im);
  const TransformTerm reTerms[] = {{&cos_, &reCache}, {&sin_, &imCache}};
  const TransformTerm imTerms[] = {{&cos_, &imCache}, {&negSin_, &reCache}};
  ComplexPair out;
  out.re = applyTransforms(m, reTerms, baby_);
  out.im = applyTransforms(m, imTerms, baby_);
  return out;
}

std::size_t frameScalarOffset(std::size_t R) { return R == 0 ? 0 : R - 1; }

FrameScalars softIQ(Machine& m, std::span<const SlotVector> powers, std::span<const SlotVector> re,
                    std::span<const SlotVector> im, std::size_t R, int pPhi, std::size_t span) {
  if (powers.size() != re.size() || re.size() != im.size()) throw LayoutError("frame stream lengths differ");
  if (re.empty()) throw LayoutError("no frames");
  const std::size_t n = re[0].slotCount;
  // Right-rotation doubling over `width` slots; slots [R-1, width) see the full sum.
  const std::size_t width = nextPowerOfTwo(span + R - 1);
  if (width > n) throw LayoutError("replicated frame scalars do not fit the slot count");
  const int k = exponentLog2(pPhi, "P_phi");
  FrameScalars out;
  out.offset = frameScalarOffset(R);
  for (std::size_t t = 0; t < re.size(); ++t) {
    const SlotVector mask = m.powerOfTwo(powers[t], k);
    out.inPhase.push_back(m.rotateSum(m.multiply(mask, re[t]), width, -1));
    out.quadrature.push_back(m.rotateSum(m.multiply(mask, im[t]), width, -1));
  }
  return out;
}

FrameScalars softIQ(Machine& m, std::span<const SlotVector> re, std::span<const SlotVector> im, std::size_t R,
                    int pPhi, std::size_t span) {
  if (re.size() != im.size()) throw LayoutError("frame stream lengths differ");
  std::vector<SlotVector> powers;
  for (std::size_t t = 0; t < re.size(); ++t) powers.push_back(framePower(m, re[t], im[t]));
  return softIQ(m, powers, re, im, R, pPhi, span);
}

Fir::Fir(std::vector<double> taps, std::size_t frames)
    : Fir(std::move(taps), frames, 0) {
  delay_ = taps_.empty() ? 0 : (taps_.size() - 1) / 2;
}

Fir::Fir(std::vector<double> taps, std::size_t frames, std::size_t delay)
    : taps_(std::move(taps)), frames_(frames), delay_(delay) {
  if (taps_.empty()) throw ConfigError("FIR needs at least one tap");
  if (taps_.size() > frames_) throw ConfigError("FIR tap count exceeds the frame count");
  if (delay_ >= taps_.size()) throw ConfigError("FIR delay must index a tap");
}

std::vector<double> Fir::toeplitz(double gain) const {
  std::vector<double> t(frames_ * frames_, 0.0);
  for (std::size_t i = 0; i < frames_; ++i) {
    for (std::size_t k = 0; k < taps_.size(); ++k) {
      const long long j = static_cast<long long>(i) - static_cast<long long>(k) + static_cast<long long>(delay_);
      if (j >= 0 && j < static_cast<long long>(frames_)) t[i * frames_ + static_cast<std::size_t>(j)] += gain * taps_[k];
    }
  }
  return t;
}

SlotVector Fir::applyToeplitz(Machine& m, const SlotVector& x) const {
  if (frames_ > x.slotCount) throw LayoutError("frames exceed the slot count");
  LinearTransform t(x.slotCount);
  t.addBlock(frames_, frames_, toeplitz(), 0, 0);
  return applyTransform(m, t, x);
}

SlotVector Fir::applyRotations(Machine& m, const SlotVector& x) const {
  if (frames_ > x.slotCount) throw LayoutError("frames exceed the slot count");
  SlotVector acc;
  for (std::size_t k = 0; k < taps_.size(); ++k) {
    // The output mask is folded into each tap so nothing outside [0, F) leaks in.
    std::vector<double> coeff(x.slotCount, 0.0);
    for (std::size_t i = 0; i < frames_; ++i) coeff[i] = taps_[k];
    const int shift = static_cast<int>(delay_) - static_cast<int>(k);
    SlotVector p = m.mulPt(m.rotate(x, shift), coeff);
    acc = acc.valid() ? m.add(acc, p) : p;
  }
  return m.rescale(acc);
}

SlotVector Fir::applyColumns(Machine& m, std::span<const SlotVector> replicated, std::size_t offset,
                             double gain) const {
  if (replicated.size() != frames_) throw LayoutError("column FIR needs one replicated scalar per frame");
  const std::size_t n = replicated[0].slotCount;
  if (offset + frames_ > n) throw LayoutError("FIR output exceeds the slot count");
  const auto t = toeplitz(gain);
  SlotVector acc;
  for (std::size_t j = 0; j < frames_; ++j) {
    std::vector<double> column(n, 0.0);
    for (std::size_t i = 0; i < frames_; ++i) column[offset + i] = t[i * frames_ + j];
    SlotVector p = m.mulPt(replicated[j], column);
    acc = acc.valid() ? m.add(acc, p) : p;
  }
  return m.rescale(acc);
}

std::vector<double> notchMask(std::size_t slots, const DopplerLayout& layout, int width) {
  if (layout.active() > slots) throw LayoutError("Doppler layout exceeds the slot count");
  std::vector<double> mask(slots, 0.0);
  const long long center = static_cast<long long>(layout.D / 2);
  for (std::size_t blk = 0; blk < layout.A * layout.R; ++blk) {
    for (std::size_t c = 0; c < layout.D; ++c) {
      const bool zeroed = std::llabs(static_cast<long long>(c) - center) < width;
      mask[blk * layout.D + c] = zeroed ? 0.0 : 1.0;
    }
  }
  return mask;
}

SlotVector notch(Machine& m, const SlotVector& spectrum, const DopplerLayout& layout, int width) {
  return m.multiplyPlain(spectrum, notchMask(spectrum.slotCount, layout, width));
}

double taylorConstant(TaylorForm form) { return form == TaylorForm::arcsin ? 1.0 / 6.0 : -1.0 / 3.0; }

SlotVector taylorPhase(Machine& m, const FilteredIQ& in, int order, TaylorForm form) {
  if (order != 1 && order != 3) throw ConfigError("Taylor order must be 1 or 3");
  const SlotVector i1 = m.rotate(in.i, 1);
  const SlotVector q1 = m.rotate(in.q, 1);
  // w[t+1] conj(w[t]) = x + iy
  const SlotVector y = m.rescale(m.sub(m.mulCt(q1, in.i), m.mulCt(i1, in.q)));
  if (order == 1) return y;
  const SlotVector x = m.rescale(m.add(m.mulCt(i1, in.i), m.mulCt(q1, in.q)));
  const SlotVector yc = m.rescale(m.sub(m.mulCt(q1, in.iScaled), m.mulCt(i1, in.qScaled)));
  SlotVector inner = m.add(m.square(x), m.multiply(y, yc));
  if (form == TaylorForm::arcsin) inner = m.add(inner, m.square(y));
  return m.multiply(y, inner);
}

FcNetwork::FcNetwork(std::size_t slots, std::vector<FcLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw ConfigError("FC network without layers");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& L = layers_[l];
    if (L.weights.size() != L.rows * L.cols) throw LayoutError("FC weight matrix size mismatch");
    if (L.bias.size() != L.rows) throw LayoutError("FC bias length mismatch");
    if (l > 0 && L.cols != layers_[l - 1].rows) throw LayoutError("FC layer dimensions do not chain");
    matvecs_.emplace_back(slots, L.rows, L.cols, L.weights);
    std::vector<double> b(slots, 0.0);
    const std::size_t period = matvecs_.back().period();
    for (std::size_t s = 0; s < slots; ++s) {
      if (s % period < L.rows) b[s] = L.bias[s % period];
    }
    biases_.push_back(std::move(b));
  }
}

std::vector<SlotVector> FcNetwork::forwardStages(Machine& m, const SlotVector& input) const {
  std::vector<SlotVector> stages;
  SlotVector h = input;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    h = m.addPlain(matvecs_[l].apply(m, h), biases_[l]);
    if (l + 1 < layers_.size()) h = m.square(h);
    stages.push_back(h);
  }
  return stages;
}

SlotVector FcNetwork::forward(Machine& m, const SlotVector& input) const { return forwardStages(m, input).back(); }

SlotVector fcForward(Machine& m, const SlotVector& input, const std::vector<FcLayer>& layers) {
  return FcNetwork(input.slotCount, layers).forward(m, input);
}

}  // namespace oblivdsp::kernels
