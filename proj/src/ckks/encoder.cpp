#include "oblivdsp/ckks/encoder.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "oblivdsp/error.hpp"

namespace oblivdsp::ckks {

using ring::u128;
using ring::u64;

CkksEncoder::CkksEncoder(std::shared_ptr<const CkksContext> ctx) : ctx_(std::move(ctx)) {
  n_ = ctx_->ringDim();
  slots_ = n_ / 2;
  m_ = 2 * n_;
  rotGroup_.resize(slots_);
  std::size_t five = 1;
  for (std::size_t i = 0; i < slots_; ++i) {
    rotGroup_[i] = five;
    five = five * 5 % m_;
  }
  ksiPows_.resize(m_ + 1);
  for (std::size_t j = 0; j <= m_; ++j) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m_);
    ksiPows_[j] = {std::cos(angle), std::sin(angle)};
  }
}

namespace {

void bitReverse(std::vector<std::complex<double>>& v) {
  const std::size_t n = v.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j >= bit; bit >>= 1) j -= bit;
    j += bit;
    if (i < j) std::swap(v[i], v[j]);
  }
}

}  // namespace

void CkksEncoder::fftSpecial(std::vector<std::complex<double>>& vals) const {
  const std::size_t size = vals.size();
  bitReverse(vals);
  for (std::size_t len = 2; len <= size; len <<= 1) {
    const std::size_t lenh = len >> 1;
    const std::size_t lenq = len << 2;
    for (std::size_t i = 0; i < size; i += len) {
      for (std::size_t j = 0; j < lenh; ++j) {
        const std::size_t idx = (rotGroup_[j] % lenq) * m_ / lenq;
        const auto u = vals[i + j];
        const auto v = vals[i + j + lenh] * ksiPows_[idx];
        vals[i + j] = u + v;
        vals[i + j + lenh] = u - v;
      }
    }
  }
}

void CkksEncoder::fftSpecialInv(std::vector<std::complex<double>>& vals) const {
  const std::size_t size = vals.size();
  for (std::size_t len = size; len >= 2; len >>= 1) {
    const std::size_t lenh = len >> 1;
    const std::size_t lenq = len << 2;
    for (std::size_t i = 0; i < size; i += len) {
      for (std::size_t j = 0; j < lenh; ++j) {
        const std::size_t idx = (lenq - (rotGroup_[j] % lenq)) * m_ / lenq;
        const auto u = vals[i + j] + vals[i + j + lenh];
        const auto v = (vals[i + j] - vals[i + j + lenh]) * ksiPows_[idx];
        vals[i + j] = u;
        vals[i + j + lenh] = v;
      }
    }
  }
  bitReverse(vals);
  const double inv = 1.0 / static_cast<double>(size);
  for (auto& v : vals) v *= inv;
}

std::vector<double> CkksEncoder::slotsToCoefficients(std::span<const std::complex<double>> slots) const {
  if (slots.size() > slots_) throw LayoutError("more values than slots");
  std::vector<std::complex<double>> u(slots_, {0.0, 0.0});
  std::copy(slots.begin(), slots.end(), u.begin());
  fftSpecialInv(u);
  std::vector<double> coeffs(n_);
  for (std::size_t i = 0; i < slots_; ++i) {
    coeffs[i] = u[i].real();
    coeffs[i + slots_] = u[i].imag();
  }
  return coeffs;
}

std::vector<std::complex<double>> CkksEncoder::coefficientsToSlots(std::span<const double> coeffs) const {
  if (coeffs.size() != n_) throw Error("coefficient vector has wrong length");
  std::vector<std::complex<double>> u(slots_);
  for (std::size_t i = 0; i < slots_; ++i) u[i] = {coeffs[i], coeffs[i + slots_]};
  fftSpecial(u);
  return u;
}

Plaintext CkksEncoder::encode(std::span<const double> values, int level, double scale) const {
  if (values.size() > slots_) throw LayoutError("more values than slots");
  if (!(scale > 0)) throw Error("scale must be positive");
  std::vector<std::complex<double>> slots(values.begin(), values.end());
  const auto coeffs = slotsToCoefficients(slots);

  // Largest admissible coefficient: below 2^62 and below half the modulus.
  long double bound = std::ldexp(1.0L, 62);
  long double q = 1.0L;
  for (int i = 0; i <= level; ++i) q *= static_cast<long double>(ctx_->chain().primes[static_cast<std::size_t>(i)]);
  bound = std::min(bound, q / 2);

  Plaintext pt;
  pt.level = level;
  pt.scale = scale;
  pt.poly = ring::RnsPolynomial(ctx_->ring(), ctx_->basisAt(level));
  std::vector<std::int64_t> ints(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const long double c = std::round(static_cast<long double>(coeffs[i]) * scale);
    if (!std::isfinite(static_cast<double>(c)) || std::fabs(c) >= bound) {
      throw Error("encoded value overflows the modulus at this level");
    }
    ints[i] = static_cast<std::int64_t>(c);
  }
  pt.poly.setSigned(ints);
  ring::toEvaluation(pt.poly);
  return pt;
}

std::vector<double> CkksEncoder::decodeCoefficients(std::span<const long double> coeffs, double scale) const {
  std::vector<double> scaled(n_);
  for (std::size_t i = 0; i < n_; ++i) scaled[i] = static_cast<double>(coeffs[i] / scale);
  const auto slots = coefficientsToSlots(scaled);
  std::vector<double> out(slots_);
  for (std::size_t i = 0; i < slots_; ++i) out[i] = slots[i].real();
  return out;
}

std::vector<double> CkksEncoder::decode(const Plaintext& pt) const {
  ring::RnsPolynomial p = pt.poly;
  ring::toCoefficient(p);
  return decodeCoefficients(centeredCoefficients(p), pt.scale);
}

std::size_t CkksEncoder::galoisElement(int rotation) const {
  const long long s = static_cast<long long>(slots_);
  const std::size_t k = static_cast<std::size_t>(((rotation % s) + s) % s);
  return rotGroup_[k];
}

std::vector<long double> centeredCoefficients(const ring::RnsPolynomial& p) {
  if (p.form() != ring::PolyForm::coefficient) throw Error("expected coefficient form");
  const std::size_t n = p.degree();
  std::vector<long double> out(n);
  const auto& q0 = p.modulus(0);
  if (p.primeCount() == 1) {
    auto r = p.residues(0);
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<long double>(q0.centered(r[i]));
    return out;
  }
  const auto& q1 = p.modulus(1);
  const u64 inv = q1.inverse(q1.reduce(q0.value()));
  const u128 big = static_cast<u128>(q0.value()) * q1.value();
  const u128 half = big >> 1;
  auto r0 = p.residues(0);
  auto r1 = p.residues(1);
  for (std::size_t i = 0; i < n; ++i) {
    const u64 t = q1.mul(q1.sub(r1[i], q1.reduce(r0[i])), inv);
    const u128 x = static_cast<u128>(r0[i]) + static_cast<u128>(t) * q0.value();
    if (x > half) {
      out[i] = -static_cast<long double>(big - x);
    } else {
      out[i] = static_cast<long double>(x);
    }
  }
  return out;
}

}  // namespace oblivdsp::ckks
