#include "oblivdsp/pipelines/vitals.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "oblivdsp/error.hpp"
#include "oblivdsp/kernels/design.hpp"
#include "oblivdsp/kernels/operand.hpp"

namespace oblivdsp::pipelines {

using kernels::LinearTransform;
using vm::Machine;
using vm::SlotVector;

namespace {

std::vector<double> bandTaps(const PipelineConfig& cfg, bool respiration) {
  const auto& explicitTaps = respiration ? cfg.kernel.respirationTaps : cfg.kernel.heartTaps;
  if (!explicitTaps.empty()) return explicitTaps;
  switch (cfg.firDesign) {
    case FirDesign::lowpass:
      return kernels::designLowpass(cfg.firTaps, cfg.firCutoff);
    case FirDesign::bandpass:
      return respiration ? kernels::designBandpass(cfg.firTaps, cfg.respLow / cfg.frameRate, cfg.respHigh / cfg.frameRate)
                         : kernels::designBandpass(cfg.firTaps, cfg.heartLow / cfg.frameRate, cfg.heartHigh / cfg.frameRate);
    case FirDesign::file: {
      const auto& path = respiration ? cfg.respTapsFile : cfg.heartTapsFile;
      const auto ops = kernels::loadOperands(path);
      if (ops.empty()) throw ConfigError("no taps in " + path);
      return ops[0].values;
    }
  }
  throw ConfigError("unknown FIR design");
}

}  // namespace

VitalsPlan::VitalsPlan(const PipelineConfig& cfg, std::size_t slots) : cfg_(cfg), slots_(slots) {
  cfg_.validateVitals();
  const std::size_t R = cfg_.kernel.R, F = cfg_.kernel.F;
  offset_ = kernels::frameScalarOffset(R);
  if (kernels::nextPowerOfTwo(F + R - 1) > slots || offset_ + F + 1 > slots) {
    throw ConfigError("F and R do not fit the slot count");
  }

  const double fs = cfg_.frameRate;
  bands_ = {Band{"respiration", cfg_.respLow, cfg_.respHigh, {}, 0, cfg_.respGain},
            Band{"heart", cfg_.heartLow, cfg_.heartHigh, {}, 0, cfg_.heartGain}};
  std::size_t widest = 1;
  for (auto& b : bands_) {
    for (std::size_t k = 1; k <= F / 2; ++k) {
      const double f = static_cast<double>(k) * fs / static_cast<double>(F);
      if (f >= b.low - 1e-9 && f <= b.high + 1e-9) b.bins.push_back(k);
    }
    if (b.bins.empty()) throw ConfigError("the " + b.name + " band holds no DFT bin at this frame count");
    widest = std::max(widest, b.bins.size());
  }
  block_ = kernels::nextPowerOfTwo(widest);
  if (block_ * bands_.size() > slots) throw ConfigError("band spectra do not fit the slot count");
  for (std::size_t i = 0; i < bands_.size(); ++i) bands_[i].offset = i * block_;

  const std::size_t M = F - 1;
  window_.assign(M, 1.0);
  if (M > 1) {
    for (std::size_t n = 0; n < M; ++n) window_[n] = 0.5 - 0.5 * std::cos(2 * std::numbers::pi * n / double(M - 1));
  }
  double wsum = 0;
  for (double v : window_) wsum += v;
  for (double& v : window_) v /= wsum;

  ramp_.assign(slots, 0.0);
  mask_.assign(slots, 0.0);
  for (const auto& b : bands_) {
    for (std::size_t j = 0; j < b.bins.size(); ++j) {
      ramp_[b.offset + j] = static_cast<double>(b.bins[j]) * fs / static_cast<double>(F);
      mask_[b.offset + j] = 1.0;
    }
  }

  for (std::size_t i = 0; i < bands_.size(); ++i) {
    auto taps = bandTaps(cfg_, i == 0);
    if (taps.size() > F) throw ConfigError("FIR longer than the frame window");
    std::size_t found = chains_.size();
    for (std::size_t c = 0; c < chains_.size(); ++c) {
      if (chains_[c].fir.taps() == taps) found = c;
    }
    if (found == chains_.size()) {
      chains_.push_back(Chain{kernels::Fir(std::move(taps), F), {}, LinearTransform(slots), LinearTransform(slots)});
    }
    chains_[found].bands.push_back(i);
    chainOf_.push_back(found);
  }

  std::set<int> offsets;
  for (auto& chain : chains_) {
    for (std::size_t bi : chain.bands) {
      const auto& b = bands_[bi];
      for (std::size_t j = 0; j < b.bins.size(); ++j) {
        for (std::size_t n = 0; n < M; ++n) {
          const double ang = 2 * std::numbers::pi * static_cast<double>((b.bins[j] * n) % F) / static_cast<double>(F);
          chain.dftRe.addEntry(b.offset + j, offset_ + n, b.gain * window_[n] * std::cos(ang));
          chain.dftIm.addEntry(b.offset + j, offset_ + n, -b.gain * window_[n] * std::sin(ang));
        }
      }
    }
    for (int d : chain.dftRe.offsets()) offsets.insert(d);
    for (int d : chain.dftIm.offsets()) offsets.insert(d);
  }
  baby_ = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(offsets.size())) - 1e-12));
}

double VitalsPlan::rangeThreshold() const {
  return 1e-6 * static_cast<double>(cfg_.kernel.R) * std::pow(static_cast<double>(cfg_.kernel.F), cfg_.kernel.gamma);
}

double VitalsPlan::bandThreshold(std::size_t band) const {
  // Unit-sum window keeps |X| <= gain * max |dphi|; the sharpened spectrum is |X|^4.
  const auto& b = bands_.at(band);
  return 1e-6 * static_cast<double>(b.bins.size()) * std::pow(b.gain, 4);
}

VitalsCloudOutput evaluateVitals(Machine& m, const VitalsPlan& plan, std::span<const SlotVector> re,
                                 std::span<const SlotVector> im) {
  const auto& cfg = plan.config();
  const std::size_t R = cfg.kernel.R, F = cfg.kernel.F, o = plan.phaseOffset();
  if (re.size() != F || im.size() != F) throw LayoutError("vitals pipeline expects F packed frames");
  auto range = [](std::size_t from, std::size_t count) {
    std::vector<std::size_t> s(count);
    for (std::size_t i = 0; i < count; ++i) s[i] = from + i;
    return s;
  };

  VitalsCloudOutput out;
  std::vector<SlotVector> powers;
  for (std::size_t t = 0; t < F; ++t) powers.push_back(kernels::framePower(m, re[t], im[t]));
  const SlotVector energy = kernels::energyFromPowers(m, powers);
  out.stages.push_back({"Energy integ.", {{energy, range(0, R)}}});

  const auto att = kernels::softAttention(m, energy, R, cfg.kernel.gamma);
  out.numerator = att.numerator;
  out.denominator = att.denominator;
  out.stages.push_back({"Soft attention", {{att.weights, range(0, R)}}});

  const auto iq = kernels::softIQ(m, powers, re, im, R, cfg.kernel.pPhi, F);
  StageProbe phase{"Phase extr.", {}};
  for (std::size_t t = 0; t < F; ++t) {
    phase.items.push_back({iq.inPhase[t], {o}});
    phase.items.push_back({iq.quadrature[t], {o}});
  }
  out.stages.push_back(std::move(phase));

  const int order = cfg.kernel.taylorOrder;
  const auto form = cfg.kernel.taylorForm;
  const double c = kernels::taylorConstant(form);
  StageProbe fir{"FIR filter", {}}, taylor{"Taylor arctan", {}};
  std::vector<SlotVector> dphi;
  for (const auto& chain : plan.chains()) {
    kernels::FilteredIQ f;
    f.i = chain.fir.applyColumns(m, iq.inPhase, o, cfg.phaseScale);
    f.q = chain.fir.applyColumns(m, iq.quadrature, o, cfg.phaseScale);
    if (order == 3) {
      f.iScaled = chain.fir.applyColumns(m, iq.inPhase, o, cfg.phaseScale * c);
      f.qScaled = chain.fir.applyColumns(m, iq.quadrature, o, cfg.phaseScale * c);
    }
    fir.items.push_back({f.i, range(o, F)});
    fir.items.push_back({f.q, range(o, F)});
    dphi.push_back(kernels::taylorPhase(m, f, order, form));
    taylor.items.push_back({dphi.back(), range(o, F - 1)});
  }
  out.stages.push_back(std::move(fir));
  out.stages.push_back(std::move(taylor));

  std::vector<kernels::RotationCache> caches;
  caches.reserve(dphi.size());
  for (const auto& d : dphi) caches.emplace_back(m, d);
  std::vector<kernels::TransformTerm> reTerms, imTerms;
  for (std::size_t i = 0; i < plan.chains().size(); ++i) {
    reTerms.push_back({&plan.chains()[i].dftRe, &caches[i]});
    imTerms.push_back({&plan.chains()[i].dftIm, &caches[i]});
  }
  const SlotVector xr = kernels::applyTransforms(m, reTerms, plan.dftBabyStep());
  const SlotVector xi = kernels::applyTransforms(m, imTerms, plan.dftBabyStep());
  std::vector<std::size_t> bandSlots;
  for (const auto& b : plan.bands()) {
    for (std::size_t j = 0; j < b.bins.size(); ++j) bandSlots.push_back(b.offset + j);
  }
  out.stages.push_back({"Window + DFT", {{xr, bandSlots}, {xi, bandSlots}}});

  const SlotVector power = kernels::framePower(m, xr, xi);
  out.stages.push_back({"|X|^2", {{power, bandSlots}}});
  // Bands occupy disjoint slots, so the merge is already done.
  const SlotVector sharp = m.square(power);
  out.stages.push_back({"Merge + sharp^2", {{sharp, bandSlots}}});

  out.freqNumerator = m.rotateSum(m.multiplyPlain(sharp, plan.frequencyRamp()), plan.bandBlock());
  out.freqDenominator = m.rotateSum(m.multiplyPlain(sharp, plan.bandMask()), plan.bandBlock());
  std::vector<std::size_t> heads;
  for (const auto& b : plan.bands()) heads.push_back(b.offset);
  out.stages.push_back({"Wt. freq. avg.", {{out.freqNumerator, heads}, {out.freqDenominator, heads}}});
  return out;
}

VitalResult recoverVitals(vm::ClientSession& client, const VitalsPlan& plan, const VitalsCloudOutput& out) {
  VitalResult r;
  r.numerator = client.decrypt(out.numerator)[0];
  r.denominator = client.decrypt(out.denominator)[0];
  r.targetBin = safeDivide(r.numerator, r.denominator, plan.rangeThreshold());
  const auto nf = client.decrypt(out.freqNumerator);
  const auto df = client.decrypt(out.freqDenominator);
  const auto& bands = plan.bands();
  r.rrNumerator = nf[bands[0].offset];
  r.rrDenominator = df[bands[0].offset];
  r.hrNumerator = nf[bands[1].offset];
  r.hrDenominator = df[bands[1].offset];
  // The ramp is in Hz.
  if (auto f = safeDivide(r.rrNumerator, r.rrDenominator, plan.bandThreshold(0))) r.rrBpm = 60.0 * *f;
  if (auto f = safeDivide(r.hrNumerator, r.hrDenominator, plan.bandThreshold(1))) r.hrBpm = 60.0 * *f;
  r.lowConfidence = !r.targetBin || !r.rrBpm || !r.hrBpm;
  return r;
}

VitalsRun runVitalsFrames(const Frames& frames, const VitalsPlan& plan, Deployment& deployment) {
  const auto& cfg = plan.config();
  if (frames.size() != cfg.kernel.F) throw LayoutError("frame count does not match F");
  std::vector<SlotVector> re, im;
  for (const auto& f : frames) {
    if (f.size() != cfg.kernel.R) throw LayoutError("frame width does not match R");
    const auto packed = packVital(f, plan.slots());
    re.push_back(deployment.client->encrypt(packed.re));
    im.push_back(deployment.client->encrypt(packed.im));
  }
  Machine m(deployment.backend, cfg.digest());
  VitalsRun run;
  try {
    run.cloud = evaluateVitals(m, plan, re, im);
  } catch (const DepthExhausted&) {
    checkDepthBudget(vitalsDepthLedger(cfg), m.maxLevel());
    throw;
  }
  run.ledger = depthLedger(run.cloud.stages, m.maxLevel());
  run.trace = m.takeTrace();
  run.result = recoverVitals(*deployment.client, plan, run.cloud);
  return run;
}

VitalsRun runVitalsPipeline(const RadarCube& cube, const PipelineConfig& cfg, Deployment& deployment) {
  if (cube.R != cfg.kernel.R || cube.F != cfg.kernel.F) throw ConfigError("cube shape does not match the config (R, F)");
  const VitalsPlan plan(cfg, deployment.backend->slotCount());
  return runVitalsFrames(preprocessVital(cube), plan, deployment);
}

DepthLedger vitalsDepthLedger(const PipelineConfig& cfg) {
  auto d = makeExactSim(ckks::CkksParams::desk(kAuditDepth));
  const VitalsPlan plan(cfg, d.backend->slotCount());
  const Frames zero(cfg.kernel.F, std::vector<cplx>(cfg.kernel.R));
  return runVitalsFrames(zero, plan, d).ledger;
}

std::set<int> vitalsRotations(const PipelineConfig& cfg, const ckks::CkksParams& params) {
  auto d = makeExactSim(params);
  const VitalsPlan plan(cfg, d.backend->slotCount());
  const Frames zero(cfg.kernel.F, std::vector<cplx>(cfg.kernel.R));
  return runVitalsFrames(zero, plan, d).trace.rotationAmounts();
}

}  // namespace oblivdsp::pipelines
