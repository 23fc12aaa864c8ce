#include "oblivdsp/oracle/kernels.hpp"

#include <cmath>
#include <numbers>

#include "oblivdsp/error.hpp"

namespace oblivdsp::oracle {

namespace {

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

std::vector<double> energy(const std::vector<std::vector<cplx>>& frames) {
  if (frames.empty()) return {};
  std::vector<double> e(frames[0].size(), 0.0);
  for (const auto& f : frames) {
    if (f.size() != e.size()) throw LayoutError("frame length mismatch");
    for (std::size_t r = 0; r < f.size(); ++r) e[r] += std::norm(f[r]);
  }
  return e;
}

SoftAttention softAttention(const std::vector<double>& energy, int gamma) {
  SoftAttention out;
  for (std::size_t r = 0; r < energy.size(); ++r) {
    const double w = ipow(energy[r], gamma);
    out.weights.push_back(w);
    out.denominator += w;
    out.numerator += static_cast<double>(r) * w;
  }
  return out;
}

DopplerSoftPower dopplerSoftPower(const Cube3& power, int gamma) {
  DopplerSoftPower out;
  if (power.empty() || power[0].empty()) return out;
  const std::size_t D = power[0][0].size();
  out.columnSums.assign(D, 0.0);
  for (const auto& a : power)
    for (const auto& r : a)
      for (std::size_t c = 0; c < D; ++c) out.columnSums[c] += r[c];
  out.features = power;
  for (auto& a : out.features)
    for (auto& r : a)
      for (std::size_t c = 0; c < D; ++c) r[c] *= ipow(out.columnSums[c], gamma);
  return out;
}

std::vector<cplx> shiftedDft(const std::vector<cplx>& chirps, double gain) {
  const std::size_t d = chirps.size();
  std::vector<double> w(d, 1.0);
  if (d > 1) {
    for (std::size_t n = 0; n < d; ++n) w[n] = 0.5 - 0.5 * std::cos(2 * std::numbers::pi * n / double(d - 1));
  }
  std::vector<cplx> out(d);
  for (std::size_t k = 0; k < d; ++k) {
    cplx acc = 0;
    for (std::size_t n = 0; n < d; ++n) acc += w[n] * chirps[n] * std::polar(1.0, -2 * std::numbers::pi * double(k * n) / double(d));
    out[(k + d / 2) % d] = gain * acc;
  }
  return out;
}

IQ softIQ(const std::vector<std::vector<cplx>>& frames, int pPhi) {
  IQ out;
  for (const auto& f : frames) {
    double i = 0, q = 0;
    for (const auto& z : f) {
      const double m = ipow(std::norm(z), pPhi);
      i += m * z.real();
      q += m * z.imag();
    }
    out.i.push_back(i);
    out.q.push_back(q);
  }
  return out;
}

std::vector<double> fir(const std::vector<double>& x, const std::vector<double>& taps, std::size_t delay) {
  const long long F = static_cast<long long>(x.size());
  std::vector<double> y(x.size(), 0.0);
  for (long long i = 0; i < F; ++i) {
    for (std::size_t k = 0; k < taps.size(); ++k) {
      const long long j = i - static_cast<long long>(k) + static_cast<long long>(delay);
      if (j >= 0 && j < F) y[static_cast<std::size_t>(i)] += taps[k] * x[static_cast<std::size_t>(j)];
    }
  }
  return y;
}

std::vector<double> notch(const Cube3& spectrum, int width, Cube3* out) {
  Cube3 r = spectrum;
  std::vector<double> flat;
  for (auto& a : r) {
    for (auto& row : a) {
      const long long center = static_cast<long long>(row.size() / 2);
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (std::llabs(static_cast<long long>(c) - center) < width) row[c] = 0.0;
        flat.push_back(row[c]);
      }
    }
  }
  if (out) *out = std::move(r);
  return flat;
}

std::vector<double> taylorPhase(const std::vector<double>& i, const std::vector<double>& q, int order,
                                TaylorForm form) {
  std::vector<double> out;
  for (std::size_t t = 0; t + 1 < i.size(); ++t) {
    const double x = i[t + 1] * i[t] + q[t + 1] * q[t];
    const double y = q[t + 1] * i[t] - i[t + 1] * q[t];
    if (order == 1) {
      out.push_back(y);
    } else if (form == TaylorForm::arcsin) {
      out.push_back(y * (x * x + y * y) + y * y * y / 6.0);
    } else {
      out.push_back(y * x * x - y * y * y / 3.0);
    }
  }
  return out;
}

std::vector<double> atan2PhaseDiff(const std::vector<double>& i, const std::vector<double>& q) {
  std::vector<double> out;
  for (std::size_t t = 0; t + 1 < i.size(); ++t) {
    const cplx a(i[t], q[t]), b(i[t + 1], q[t + 1]);
    out.push_back(std::arg(b * std::conj(a)));
  }
  return out;
}

std::vector<double> fcForward(const std::vector<FcLayer>& layers, const std::vector<double>& input) {
  std::vector<double> h = input;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& L = layers[l];
    if (h.size() < L.cols) h.resize(L.cols, 0.0);
    std::vector<double> y(L.rows);
    for (std::size_t r = 0; r < L.rows; ++r) {
      double acc = L.bias[r];
      for (std::size_t c = 0; c < L.cols; ++c) acc += L.weights[r * L.cols + c] * h[c];
      y[r] = l + 1 < layers.size() ? acc * acc : acc;
    }
    h = std::move(y);
  }
  return h;
}

std::size_t argmax(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace oblivdsp::oracle
