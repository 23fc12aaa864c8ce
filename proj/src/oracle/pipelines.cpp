#include "oblivdsp/oracle/pipelines.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "oblivdsp/error.hpp"
#include "oblivdsp/oracle/kernels.hpp"
#include "oblivdsp/pipelines/client.hpp"
#include "oblivdsp/pipelines/gesture.hpp"
#include "oblivdsp/pipelines/vitals.hpp"

namespace oblivdsp::oracle {

using pipelines::PipelineConfig;
using pipelines::RadarCube;
using pipelines::VitalsPlan;

namespace {

// Public operands (bands, taps, window, thresholds) come from the same plan the circuit uses.
VitalsPlan plainPlan(const PipelineConfig& cfg) {
  const std::size_t need = 2 * (cfg.kernel.F + cfg.kernel.R);
  return VitalsPlan(cfg, std::max<std::size_t>(kernels::nextPowerOfTwo(need), 64));
}

std::vector<cplx> bandSpectrum(const VitalsPlan& plan, std::size_t band, const std::vector<double>& signal) {
  const auto& b = plan.bands()[band];
  const auto& w = plan.window();
  const double F = static_cast<double>(plan.config().kernel.F);
  std::vector<cplx> X;
  for (std::size_t k : b.bins) {
    cplx acc = 0;
    for (std::size_t n = 0; n < signal.size(); ++n) {
      acc += w[n] * signal[n] * std::polar(1.0, -2 * std::numbers::pi * static_cast<double>(k * n) / F);
    }
    X.push_back(b.gain * acc);
  }
  return X;
}

double binHz(const VitalsPlan& plan, std::size_t k) {
  return static_cast<double>(k) * plan.config().frameRate / static_cast<double>(plan.config().kernel.F);
}

std::optional<double> peakPick(const VitalsPlan& plan, std::size_t band, const std::vector<cplx>& X) {
  const auto& b = plan.bands()[band];
  std::vector<double> mag(X.size());
  double total = 0;
  for (std::size_t j = 0; j < X.size(); ++j) total += (mag[j] = std::norm(X[j]));
  if (!(total > 1e-12 * static_cast<double>(X.size()) * b.gain * b.gain)) return std::nullopt;
  return 60.0 * binHz(plan, b.bins[argmax(mag)]);
}

std::optional<double> sharpenedAverage(const VitalsPlan& plan, std::size_t band, const std::vector<cplx>& X) {
  const auto& b = plan.bands()[band];
  double num = 0, den = 0;
  for (std::size_t j = 0; j < X.size(); ++j) {
    const double s = std::norm(X[j]) * std::norm(X[j]);
    num += binHz(plan, b.bins[j]) * s;
    den += s;
  }
  const auto f = pipelines::safeDivide(num, den, plan.bandThreshold(band));
  if (!f) return std::nullopt;
  return 60.0 * *f;
}

std::vector<double> bandFir(const VitalsPlan& plan, std::size_t band, const std::vector<double>& x, double gain) {
  const auto& taps = plan.taps(band);
  auto y = fir(x, taps, (taps.size() - 1) / 2);
  for (double& v : y) v *= gain;
  return y;
}

}  // namespace

std::vector<double> unwrap(const std::vector<double>& phase) {
  std::vector<double> out(phase.size());
  double offset = 0;
  for (std::size_t t = 0; t < phase.size(); ++t) {
    if (t > 0) {
      const double jump = phase[t] - phase[t - 1];
      if (jump > std::numbers::pi) offset -= 2 * std::numbers::pi;
      else if (jump < -std::numbers::pi) offset += 2 * std::numbers::pi;
    }
    out[t] = phase[t] + offset;
  }
  return out;
}

VitalsTrace standardVitals(const RadarCube& cube, const PipelineConfig& cfg) {
  const VitalsPlan plan = plainPlan(cfg);
  const auto frames = pipelines::preprocessVital(cube);
  VitalsTrace out;
  out.energy = energy(frames);
  double peak = 0;
  for (double e : out.energy) peak = std::max(peak, e);
  if (!(peak > plan.rangeThreshold())) {
    out.lowConfidence = true;
    for (const auto& b : plan.bands()) out.bands.push_back(BandTrace{b.name, {}, std::nullopt, std::nullopt});
    return out;
  }
  const std::size_t bin = argmax(out.energy);
  out.targetBin = static_cast<double>(bin);
  std::vector<double> wrapped;
  for (const auto& f : frames) wrapped.push_back(std::arg(f[bin]));
  out.phase = unwrap(wrapped);
  std::vector<double> diff;
  for (std::size_t t = 0; t + 1 < out.phase.size(); ++t) diff.push_back(out.phase[t + 1] - out.phase[t]);
  for (std::size_t i = 0; i < plan.bands().size(); ++i) {
    BandTrace b{plan.bands()[i].name, bandFir(plan, i, diff, 1.0), std::nullopt, std::nullopt};
    b.peakBpm = peakPick(plan, i, bandSpectrum(plan, i, b.signal));
    b.rateBpm = b.peakBpm;
    out.lowConfidence = out.lowConfidence || !b.rateBpm;
    out.bands.push_back(std::move(b));
  }
  return out;
}

VitalsTrace fheFriendlyVitals(const RadarCube& cube, const PipelineConfig& cfg) {
  const VitalsPlan plan = plainPlan(cfg);
  const auto frames = pipelines::preprocessVital(cube);
  VitalsTrace out;
  out.energy = energy(frames);
  const auto att = softAttention(out.energy, cfg.kernel.gamma);
  out.targetBin = pipelines::safeDivide(att.numerator, att.denominator, plan.rangeThreshold());
  const auto iq = softIQ(frames, cfg.kernel.pPhi);
  for (std::size_t i = 0; i < plan.bands().size(); ++i) {
    const auto fi = bandFir(plan, i, iq.i, cfg.phaseScale);
    const auto fq = bandFir(plan, i, iq.q, cfg.phaseScale);
    BandTrace b{plan.bands()[i].name, taylorPhase(fi, fq, cfg.kernel.taylorOrder, cfg.kernel.taylorForm), std::nullopt,
                std::nullopt};
    const auto X = bandSpectrum(plan, i, b.signal);
    b.rateBpm = sharpenedAverage(plan, i, X);
    b.peakBpm = peakPick(plan, i, X);
    out.bands.push_back(std::move(b));
  }
  out.lowConfidence = !out.targetBin || !out.bands[0].rateBpm || !out.bands[1].rateBpm;
  return out;
}

ApproxGapReport approxGapReport(const VitalsTrace& fheFriendly, const VitalsTrace& standard) {
  if (fheFriendly.bands.size() != standard.bands.size()) throw LayoutError("traces carry different bands");
  ApproxGapReport report;
  for (std::size_t i = 0; i < standard.bands.size(); ++i) {
    const auto& a = fheFriendly.bands[i];
    const auto& b = standard.bands[i];
    ApproxGapRow row{b.name, 0, 0};
    if (!a.signal.empty() && !b.signal.empty()) {
      if (a.signal.size() != b.signal.size()) throw LayoutError("phase signals differ in length");
      for (std::size_t t = 0; t < a.signal.size(); ++t) row.phaseMse += (a.signal[t] - b.signal[t]) * (a.signal[t] - b.signal[t]);
      row.phaseMse /= static_cast<double>(a.signal.size());
    }
    if (a.peakBpm && b.peakBpm) {
      row.rateDeltaBpm = *a.peakBpm - *b.peakBpm;
    } else if (a.peakBpm || b.peakBpm) {
      row.rateDeltaBpm = std::numeric_limits<double>::infinity();
    }
    report.push_back(row);
  }
  return report;
}

std::string formatApproxGap(const ApproxGapReport& report) {
  std::string out = "band          phase MSE     rate delta (bpm)\n";
  char buf[128];
  for (const auto& r : report) {
    std::snprintf(buf, sizeof buf, "%-12s %10.3e  %12.3e\n", r.band.c_str(), r.phaseMse, r.rateDeltaBpm);
    out += buf;
  }
  return out;
}

std::vector<double> gestureFeatures(const RadarCube& cube, const PipelineConfig& cfg) {
  const auto& k = cfg.kernel;
  if (cube.A != k.A || cube.R != k.R || cube.D != k.D || cube.F != k.F) throw ConfigError("cube shape does not match the config");
  const double scale = cfg.spectralScale > 0 ? cfg.spectralScale : pipelines::defaultSpectralScale(k.layout());
  const double gain = 1.0 / std::sqrt(scale);
  std::vector<double> acc(k.A * k.R * k.D, 0.0);
  for (const auto& frame : pipelines::preprocessGesture(cube)) {
    Cube3 power(k.A, std::vector<std::vector<double>>(k.R));
    for (std::size_t a = 0; a < k.A; ++a) {
      for (std::size_t r = 0; r < k.R; ++r) {
        const auto first = frame.begin() + static_cast<long>((a * k.R + r) * k.D);
        const auto z = shiftedDft(std::vector<cplx>(first, first + static_cast<long>(k.D)), gain);
        for (const auto& v : z) power[a][r].push_back(std::norm(v));
      }
    }
    Cube3 notched;
    notch(power, k.notchWidth, &notched);
    const auto soft = dopplerSoftPower(notched, k.gammaDoppler);
    for (std::size_t a = 0; a < k.A; ++a)
      for (std::size_t r = 0; r < k.R; ++r)
        for (std::size_t c = 0; c < k.D; ++c) acc[(a * k.R + r) * k.D + c] += soft.features[a][r][c];
  }
  for (double& v : acc) v /= static_cast<double>(k.F);
  return acc;
}

GestureReference gesturePipeline(const RadarCube& cube, const PipelineConfig& cfg,
                                 const std::vector<kernels::FcLayer>& layers) {
  GestureReference out;
  out.features = gestureFeatures(cube, cfg);
  out.logits = fcForward(layers, out.features);
  out.predicted = argmax(out.logits);
  return out;
}

}  // namespace oblivdsp::oracle
