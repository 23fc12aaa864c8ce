#include "oblivdsp/oracle/trainer.hpp"

#include <cmath>

#include "oblivdsp/error.hpp"
#include "oblivdsp/oracle/kernels.hpp"

namespace oblivdsp::oracle {

using kernels::FcLayer;

namespace {

std::vector<double> preActivation(const FcLayer& L, const std::vector<double>& h) {
  std::vector<double> z(L.rows);
  for (std::size_t r = 0; r < L.rows; ++r) {
    double acc = L.bias[r];
    for (std::size_t c = 0; c < L.cols; ++c) acc += L.weights[r * L.cols + c] * h[c];
    z[r] = acc;
  }
  return z;
}

void checkInputs(const std::vector<FcLayer>& layers, const Samples& inputs) {
  if (layers.empty() || inputs.empty()) throw Error("network and samples must be nonempty");
  for (const auto& x : inputs) {
    if (x.size() != layers[0].cols) throw LayoutError("sample width does not match the first layer");
  }
}

}  // namespace

std::vector<FcLayer> standardizeNetwork(std::vector<FcLayer> layers, const Samples& inputs) {
  checkInputs(layers, inputs);
  Samples h = inputs;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    auto& L = layers[l];
    Samples z;
    for (const auto& x : h) z.push_back(preActivation(L, x));
    for (std::size_t r = 0; r < L.rows; ++r) {
      double mean = 0, var = 0;
      for (const auto& s : z) mean += s[r];
      mean /= static_cast<double>(z.size());
      for (const auto& s : z) var += (s[r] - mean) * (s[r] - mean);
      var /= static_cast<double>(z.size());
      const double sd = var > 0 ? std::sqrt(var) : 1.0;
      for (std::size_t c = 0; c < L.cols; ++c) L.weights[r * L.cols + c] /= sd;
      L.bias[r] = (L.bias[r] - mean) / sd;
      for (auto& s : z) s[r] = (s[r] - mean) / sd;
    }
    if (l + 1 < layers.size()) {
      for (auto& s : z)
        for (double& v : s) v *= v;
    }
    h = std::move(z);
  }
  return layers;
}

std::vector<FcLayer> trainNetwork(std::vector<FcLayer> layers, const Samples& inputs,
                                  const std::vector<std::size_t>& labels, const TrainOptions& options) {
  checkInputs(layers, inputs);
  if (labels.size() != inputs.size()) throw LayoutError("one label per sample");
  const std::size_t classes = layers.back().rows;
  const double n = static_cast<double>(inputs.size());
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    std::vector<std::vector<double>> gw(layers.size()), gb(layers.size());
    for (std::size_t l = 0; l < layers.size(); ++l) {
      gw[l].assign(layers[l].weights.size(), 0.0);
      gb[l].assign(layers[l].rows, 0.0);
    }
    for (std::size_t s = 0; s < inputs.size(); ++s) {
      // Forward, keeping each layer's input and pre-activation.
      std::vector<std::vector<double>> in{inputs[s]}, pre;
      for (std::size_t l = 0; l < layers.size(); ++l) {
        pre.push_back(preActivation(layers[l], in.back()));
        if (l + 1 < layers.size()) {
          std::vector<double> a = pre.back();
          for (double& v : a) v *= v;
          in.push_back(std::move(a));
        }
      }
      std::vector<double> delta = pre.back();
      if (labels[s] >= classes) throw LayoutError("label out of range");
      delta[labels[s]] -= 1.0;
      for (double& v : delta) v *= 2.0 / n;
      for (std::size_t l = layers.size(); l-- > 0;) {
        const auto& L = layers[l];
        for (std::size_t r = 0; r < L.rows; ++r) {
          gb[l][r] += delta[r];
          for (std::size_t c = 0; c < L.cols; ++c) gw[l][r * L.cols + c] += delta[r] * in[l][c];
        }
        if (l == 0) break;
        std::vector<double> back(L.cols, 0.0);
        for (std::size_t r = 0; r < L.rows; ++r)
          for (std::size_t c = 0; c < L.cols; ++c) back[c] += L.weights[r * L.cols + c] * delta[r];
        for (std::size_t c = 0; c < L.cols; ++c) back[c] *= 2.0 * pre[l - 1][c];
        delta = std::move(back);
      }
    }
    double norm = 0;
    for (std::size_t l = 0; l < layers.size(); ++l) {
      for (double g : gw[l]) norm += g * g;
      for (double g : gb[l]) norm += g * g;
    }
    norm = std::sqrt(norm);
    const double step = norm > options.clip ? options.rate * options.clip / norm : options.rate;
    for (std::size_t l = 0; l < layers.size(); ++l) {
      for (std::size_t i = 0; i < gw[l].size(); ++i) layers[l].weights[i] -= step * gw[l][i];
      for (std::size_t i = 0; i < gb[l].size(); ++i) layers[l].bias[i] -= step * gb[l][i];
    }
  }
  return layers;
}

double accuracy(const std::vector<FcLayer>& layers, const Samples& inputs, const std::vector<std::size_t>& labels) {
  if (inputs.empty()) return 0;
  std::size_t hits = 0;
  for (std::size_t s = 0; s < inputs.size(); ++s) hits += argmax(fcForward(layers, inputs[s])) == labels.at(s);
  return static_cast<double>(hits) / static_cast<double>(inputs.size());
}

}  // namespace oblivdsp::oracle
