#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "oblivdsp/kernels/config.hpp"
#include "oblivdsp/kernels/matvec.hpp"

namespace oblivdsp::kernels {

struct ComplexPair {
  SlotVector re, im;
};

// |z|^2 slot-wise. Depth 1.
SlotVector framePower(Machine& m, const SlotVector& re, const SlotVector& im);

// K1: slot r <- sum_t Re^2 + Im^2. Depth 1.
SlotVector energy(Machine& m, std::span<const SlotVector> re, std::span<const SlotVector> im);
// Same, from per-frame powers already computed.
SlotVector energyFromPowers(Machine& m, std::span<const SlotVector> powers);

// K2 over range bins: w = E^gamma, Dn = sum w, N = sum r*w (results in slot 0).
struct SoftAttention {
  SlotVector numerator, denominator, weights;
};
SoftAttention softAttention(Machine& m, const SlotVector& energy, std::size_t R, int gamma);

// K2 over Doppler bins: per-Doppler sums S_c replicated into every block,
// features = Z * S^gamma.
struct DopplerSoftPower {
  SlotVector weights, features;
};
DopplerSoftPower dopplerSoftPower(Machine& m, const SlotVector& power, const DopplerLayout& layout, int gamma);

// K3: windowed DFT along each D-block with fftshift, as block-diagonal
// plaintext matrices evaluated with shared baby and giant steps.
class DopplerDft {
 public:
  DopplerDft(std::size_t slots, const DopplerLayout& layout, double gain = 1.0);

  ComplexPair apply(Machine& m, const SlotVector& re, const SlotVector& im) const;
  int babyStep() const noexcept { return baby_; }
  const LinearTransform& cosine() const noexcept { return cos_; }
  const LinearTransform& sine() const noexcept { return sin_; }

  // Symmetric Hann window of length d.
  static std::vector<double> window(std::size_t d);
  // Output position of DFT bin k after fftshift.
  static std::size_t shifted(std::size_t k, std::size_t d) { return (k + d / 2) % d; }

 private:
  LinearTransform cos_, sin_, negSin_;
  int baby_;
};

// K4: per-frame mask m = |z|^(2 P_phi), I_t = sum_r m Re, Q_t = sum_r m Im.
// Each result is replicated over `span` consecutive slots starting at
// offset(R) so it can feed the column-form FIR directly.
struct FrameScalars {
  std::vector<SlotVector> inPhase, quadrature;
  std::size_t offset = 0;
};
std::size_t frameScalarOffset(std::size_t R);
FrameScalars softIQ(Machine& m, std::span<const SlotVector> powers, std::span<const SlotVector> re,
                    std::span<const SlotVector> im, std::size_t R, int pPhi, std::size_t span);
FrameScalars softIQ(Machine& m, std::span<const SlotVector> re, std::span<const SlotVector> im, std::size_t R,
                    int pPhi, std::size_t span);

// K5: y[i] = sum_k h[k] x[i - k + delay] over i in [0, F), zero padded.
class Fir {
 public:
  Fir(std::vector<double> taps, std::size_t frames);
  Fir(std::vector<double> taps, std::size_t frames, std::size_t delay);

  const std::vector<double>& taps() const noexcept { return taps_; }
  std::size_t frames() const noexcept { return frames_; }
  std::size_t delay() const noexcept { return delay_; }
  // F x F Toeplitz matrix, row-major.
  std::vector<double> toeplitz(double gain = 1.0) const;

  // x in slots [0, F), zero elsewhere.
  SlotVector applyToeplitz(Machine& m, const SlotVector& x) const;
  SlotVector applyRotations(Machine& m, const SlotVector& x) const;
  // x[t] supplied as replicated vectors; output lands in [offset, offset+F).
  SlotVector applyColumns(Machine& m, std::span<const SlotVector> replicated, std::size_t offset,
                          double gain = 1.0) const;

 private:
  std::vector<double> taps_;
  std::size_t frames_, delay_;
};

// K6: zero Doppler bins c with |c - D/2| < width in every block.
std::vector<double> notchMask(std::size_t slots, const DopplerLayout& layout, int width);
SlotVector notch(Machine& m, const SlotVector& spectrum, const DopplerLayout& layout, int width);

// K7 input: filtered I/Q and the same streams pre-scaled by taylorConstant(form).
struct FilteredIQ {
  SlotVector i, q, iScaled, qScaled;
};
double taylorConstant(TaylorForm form);
// Slot t <- phase increment from sample t to t+1. Order 1: depth 1, order 3: depth 3.
SlotVector taylorPhase(Machine& m, const FilteredIQ& in, int order, TaylorForm form);

// Fully connected network with square activations between layers.
struct FcLayer {
  std::size_t rows = 0, cols = 0;
  std::vector<double> weights;  // rows x cols, row-major
  std::vector<double> bias;     // rows
};

class FcNetwork {
 public:
  FcNetwork(std::size_t slots, std::vector<FcLayer> layers);

  const std::vector<FcLayer>& layers() const noexcept { return layers_; }
  std::size_t outputs() const { return layers_.back().rows; }
  // Depth 2L-1. Logits replicated with the last layer's period.
  SlotVector forward(Machine& m, const SlotVector& input) const;
  // Per-layer outputs (after activation) for depth accounting.
  std::vector<SlotVector> forwardStages(Machine& m, const SlotVector& input) const;

 private:
  std::vector<FcLayer> layers_;
  std::vector<ReplicatedMatvec> matvecs_;
  std::vector<std::vector<double>> biases_;
};

SlotVector fcForward(Machine& m, const SlotVector& input, const std::vector<FcLayer>& layers);

}  // namespace oblivdsp::kernels
