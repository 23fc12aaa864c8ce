#include "oblivdsp/kernels/design.hpp"

#include <cmath>
#include <numbers>

#include "oblivdsp/error.hpp"

namespace oblivdsp::kernels {

namespace {

std::vector<double> windowedSinc(std::size_t taps, double cutoff) {
  std::vector<double> h(taps);
  const double mid = (static_cast<double>(taps) - 1.0) / 2.0;
  for (std::size_t n = 0; n < taps; ++n) {
    const double x = static_cast<double>(n) - mid;
    const double sinc = x == 0.0 ? 2 * cutoff : std::sin(2 * std::numbers::pi * cutoff * x) / (std::numbers::pi * x);
    const double w = taps == 1 ? 1.0 : 0.54 - 0.46 * std::cos(2 * std::numbers::pi * n / (static_cast<double>(taps) - 1.0));
    h[n] = sinc * w;
  }
  return h;
}

void check(std::size_t taps, double f) {
  if (taps == 0) throw ConfigError("filter needs at least one tap");
  if (!(f > 0.0 && f < 0.5)) throw ConfigError("cutoff must lie in (0, 0.5) of the sample rate");
}

}  // namespace

std::vector<double> designLowpass(std::size_t taps, double cutoff) {
  check(taps, cutoff);
  auto h = windowedSinc(taps, cutoff);
  double sum = 0;
  for (double v : h) sum += v;
  for (double& v : h) v /= sum;
  return h;
}

std::vector<double> designBandpass(std::size_t taps, double low, double high) {
  check(taps, low);
  check(taps, high);
  if (low >= high) throw ConfigError("band-pass edges must be increasing");
  const auto hi = windowedSinc(taps, high);
  const auto lo = windowedSinc(taps, low);
  std::vector<double> h(taps);
  for (std::size_t n = 0; n < taps; ++n) h[n] = hi[n] - lo[n];
  return h;
}

}  // namespace oblivdsp::kernels
