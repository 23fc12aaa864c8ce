#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "oblivdsp/kernels/config.hpp"
#include "oblivdsp/kernels/kernels.hpp"

// Direct-formula plaintext references for every kernel. Written against the
// mathematical definitions, not the slot layouts.
namespace oblivdsp::oracle {

using cplx = std::complex<double>;
using kernels::DopplerLayout;
using kernels::FcLayer;
using kernels::TaylorForm;

// frames[t][r]
std::vector<double> energy(const std::vector<std::vector<cplx>>& frames);

struct SoftAttention {
  double numerator = 0, denominator = 0;
  std::vector<double> weights;
};
SoftAttention softAttention(const std::vector<double>& energy, int gamma);

// power[a][r][c]
struct DopplerSoftPower {
  std::vector<double> columnSums;                            // per Doppler bin
  std::vector<std::vector<std::vector<double>>> features;    // [a][r][c]
};
using Cube3 = std::vector<std::vector<std::vector<double>>>;
DopplerSoftPower dopplerSoftPower(const Cube3& power, int gamma);

// Windowed DFT of one chirp vector, output reordered by fftshift, times gain.
std::vector<cplx> shiftedDft(const std::vector<cplx>& chirps, double gain = 1.0);

struct IQ {
  std::vector<double> i, q;
};
// frames[t][r]
IQ softIQ(const std::vector<std::vector<cplx>>& frames, int pPhi);

// y[i] = sum_k h[k] x[i - k + delay], zero padded.
std::vector<double> fir(const std::vector<double>& x, const std::vector<double>& taps, std::size_t delay);

std::vector<double> notch(const Cube3& spectrum, int width, Cube3* out = nullptr);

// Polynomial phase increments between consecutive samples (length F-1).
std::vector<double> taylorPhase(const std::vector<double>& i, const std::vector<double>& q, int order,
                                TaylorForm form);
// Exact wrapped phase increments via atan2.
std::vector<double> atan2PhaseDiff(const std::vector<double>& i, const std::vector<double>& q);

std::vector<double> fcForward(const std::vector<FcLayer>& layers, const std::vector<double>& input);

// Index of the largest entry, lowest index on ties.
std::size_t argmax(const std::vector<double>& v);

}  // namespace oblivdsp::oracle
