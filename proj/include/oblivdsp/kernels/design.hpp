#pragma once

#include <cstddef>
#include <vector>

namespace oblivdsp::kernels {

// Hamming-windowed sinc designs. Cutoffs are fractions of the sample rate
// (0 < f < 0.5). Low-pass taps are normalized to unit DC gain.
std::vector<double> designLowpass(std::size_t taps, double cutoff);
std::vector<double> designBandpass(std::size_t taps, double low, double high);

}  // namespace oblivdsp::kernels
