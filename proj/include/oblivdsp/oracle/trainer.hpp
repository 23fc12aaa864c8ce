#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "oblivdsp/kernels/kernels.hpp"

// Test fixtures only: turn random weights into networks with nontrivial outputs.
namespace oblivdsp::oracle {

using Samples = std::vector<std::vector<double>>;

// Rescale every row so its pre-activation has zero mean and unit variance over the samples
// (batch normalization folded into the weights, layer by layer).
std::vector<kernels::FcLayer> standardizeNetwork(std::vector<kernels::FcLayer> layers, const Samples& inputs);

struct TrainOptions {
  std::size_t epochs = 200;
  double rate = 0.05;
  double clip = 1.0;  // gradients are rescaled to at most this global norm
};

// Full-batch gradient descent on the squared error between logits and one-hot labels,
// with global-norm gradient clipping (square activations diverge easily).
std::vector<kernels::FcLayer> trainNetwork(std::vector<kernels::FcLayer> layers, const Samples& inputs,
                                           const std::vector<std::size_t>& labels, const TrainOptions& options = {});

double accuracy(const std::vector<kernels::FcLayer>& layers, const Samples& inputs,
                const std::vector<std::size_t>& labels);

}  // namespace oblivdsp::oracle
