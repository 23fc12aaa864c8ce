#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oblivdsp/error.hpp"
#include "oblivdsp/kernels/kernels.hpp"
#include "oblivdsp/oracle/kernels.hpp"
#include "sim.hpp"

using namespace oblivdsp;
using namespace oblivdsp::kernels;
using namespace testing_support;
using oblivdsp::vm::SlotVector;

namespace {

struct Frames {
  std::vector<std::vector<cplx>> z;
  std::vector<SlotVector> re, im;
};

Frames encryptFrames(Sim& s, std::vector<std::vector<cplx>> z) {
  Frames f;
  for (const auto& frame : z) {
    f.re.push_back(s.enc(realParts(frame, s.n())));
    f.im.push_back(s.enc(imagParts(frame, s.n())));
  }
  f.z = std::move(z);
  return f;
}

double drawPower(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0, 1)(rng); }
cplx drawComplex(std::mt19937_64& rng) { return unitDisk(1, rng)[0]; }

}  // namespace

TEST(Energy, Examples) {
  Sim s;
  auto zero = encryptFrames(s, std::vector<std::vector<cplx>>(3, std::vector<cplx>(4)));
  auto e0 = s.dec(energy(s.machine, zero.re, zero.im));
  for (double v : e0) EXPECT_EQ(v, 0.0);

  std::vector<std::vector<cplx>> one(2, std::vector<cplx>(4));
  one[0][0] = {3, 4};
  auto f1 = encryptFrames(s, one);
  auto e1 = s.dec(energy(s.machine, f1.re, f1.im));
  EXPECT_DOUBLE_EQ(e1[0], 25.0);
  EXPECT_EQ(e1[1], 0.0);

  std::mt19937_64 rng(1);
  std::vector<std::vector<cplx>> z;
  for (int t = 0; t < 8; ++t) z.push_back(unitDisk(4, rng));
  auto f = encryptFrames(s, z);
  const int before = f.re[0].level;
  auto e = energy(s.machine, f.re, f.im);
  EXPECT_EQ(before - e.level, 1);
  EXPECT_LT(maxAbsDiff(s.dec(e), oracle::energy(z), 4), 1e-12);
  EXPECT_THROW(energy(s.machine, std::span(f.re).first(2), f.im), LayoutError);
}

TEST(SoftAttention, Examples) {
  Sim s;
  const std::size_t R = 16;
  std::vector<double> onehot(R, 0.0);
  onehot[11] = 0.7;
  for (int gamma : {1, 2, 4, 8}) {
    auto a = softAttention(s.machine, s.enc(padded(onehot, s.n())), R, gamma);
    EXPECT_NEAR(s.dec(a.numerator)[0] / s.dec(a.denominator)[0], 11.0, 1e-12);
  }
  auto u = softAttention(s.machine, s.enc(padded(std::vector<double>(R, 0.5), s.n())), R, 2);
  EXPECT_NEAR(s.dec(u.numerator)[0] / s.dec(u.denominator)[0], (R - 1) / 2.0, 1e-12);

  auto p = softAttention(s.machine, s.enc(padded({1, 2, 4, 8}, s.n())), 4, 2);
  const auto w = s.dec(p.weights);
  EXPECT_EQ(w[0], 1);
  EXPECT_EQ(w[1], 4);
  EXPECT_EQ(w[2], 16);
  EXPECT_EQ(w[3], 64);
  const auto w4 = s.dec(softAttention(s.machine, s.enc(padded({1, 2, 4, 8}, s.n())), 4, 4).weights);
  EXPECT_EQ(w4[1], 16);
  EXPECT_EQ(w4[2], 256);
  EXPECT_EQ(w4[3], 4096);
  const auto ref = oracle::softAttention({1, 2, 4, 8}, 2);
  EXPECT_NEAR(s.dec(p.numerator)[0], ref.numerator, 1e-9);
  EXPECT_NEAR(s.dec(p.denominator)[0], ref.denominator, 1e-9);
  EXPECT_EQ(s.machine.maxLevel() - p.numerator.level, 2);
  EXPECT_THROW(softAttention(s.machine, s.enc({1}), 4, 3), ConfigError);
}

TEST(SoftAttention, SharpeningMonotone) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    auto e = uniform(16, rng, 0.0, 1.0);
    const auto top = oracle::argmax(e);
    double runner = 0;
    for (std::size_t r = 0; r < e.size(); ++r) {
      if (r != top) runner = std::max(runner, e[r]);
    }
    e[top] = std::max(e[top], 2.0 * runner);
    // Off-peak weight mass shrinks strictly and bounds the distance to the argmax.
    double prev = INFINITY;
    for (int gamma : {2, 4, 8}) {
      const auto a = oracle::softAttention(e, gamma);
      const double off = 1.0 - a.weights[top] / a.denominator;
      const double dist = std::fabs(a.numerator / a.denominator - static_cast<double>(top));
      EXPECT_LT(off, prev);
      EXPECT_LE(dist, 15.0 * off + 1e-12);
      prev = off;
    }
  }
}

TEST(DopplerSoftPower, Examples) {
  Sim s;
  const DopplerLayout l{2, 4, 8};
  auto zero = dopplerSoftPower(s.machine, s.enc(std::vector<double>(s.n(), 0.0)), l, 4);
  for (double v : s.dec(zero.features)) EXPECT_EQ(v, 0.0);

  oracle::Cube3 single(2, std::vector<std::vector<double>>(4, std::vector<double>(8, 0.0)));
  single[1][2][5] = 0.3;
  single[0][3][5] = 0.2;
  auto one = dopplerSoftPower(s.machine, s.enc(interleave(single, s.n())), l, 4);
  const auto w = s.dec(one.weights);
  for (std::size_t c = 0; c < 8; ++c) EXPECT_EQ(w[l.slot(0, 1, c)] > 0, c == 5);

  std::mt19937_64 rng(3);
  const auto cube = randomCube<double>(l, rng, drawPower);
  auto out = dopplerSoftPower(s.machine, s.enc(interleave(cube, s.n())), l, 4);
  const auto ref = oracle::dopplerSoftPower(cube, 4);
  EXPECT_LT(maxAbsDiff(s.dec(out.features), interleave(ref.features, s.n()), s.n()), 1e-9);
  EXPECT_EQ(s.machine.maxLevel() - out.features.level, 3);
}

TEST(DopplerDft, MatchesShiftedFftOracle) {
  Sim s;
  const DopplerLayout l{2, 16, 8};
  DopplerDft dft(s.n(), l, 0.5);
  std::mt19937_64 rng(4);
  const auto cube = randomCube<cplx>(l, rng, drawComplex);
  const auto flat = interleave(cube, s.n());
  auto out = dft.apply(s.machine, s.enc(realParts(flat, s.n())), s.enc(imagParts(flat, s.n())));
  EXPECT_EQ(s.machine.maxLevel() - out.re.level, 1);
  const auto re = s.dec(out.re), im = s.dec(out.im);
  double err = 0;
  for (std::size_t a = 0; a < l.A; ++a) {
    for (std::size_t r = 0; r < l.R; ++r) {
      const auto ref = oracle::shiftedDft(cube[a][r], 0.5);
      for (std::size_t c = 0; c < l.D; ++c) {
        err = std::max(err, std::abs(cplx(re[l.slot(a, r, c)], im[l.slot(a, r, c)]) - ref[c]));
      }
    }
  }
  EXPECT_LT(err, 1e-12);
  for (std::size_t i = l.active(); i < s.n(); ++i) ASSERT_EQ(re[i], 0.0);
}

TEST(DopplerDft, ToneLandsOnShiftedBin) {
  Sim s;
  const std::size_t D = 8, k = 2;
  const DopplerLayout l{1, 1, D};
  DopplerDft dft(s.n(), l);
  const auto w = DopplerDft::window(D);
  std::vector<cplx> z(D);
  for (std::size_t n = 0; n < D; ++n) {
    z[n] = w[n] > 0 ? std::polar(1.0 / w[n], 2 * std::numbers::pi * double(k * n) / D) : 0.0;
  }
  auto out = dft.apply(s.machine, s.enc(realParts(z, s.n())), s.enc(imagParts(z, s.n())));
  const auto re = s.dec(out.re), im = s.dec(out.im);
  std::vector<double> mag(D);
  for (std::size_t c = 0; c < D; ++c) mag[c] = std::hypot(re[c], im[c]);
  EXPECT_EQ(oracle::argmax(mag), DopplerDft::shifted(k, D));
  const auto ref = oracle::shiftedDft(z);
  for (std::size_t c = 0; c < D; ++c) EXPECT_NEAR(mag[c], std::abs(ref[c]), 1e-9);

  auto zero = dft.apply(s.machine, s.enc(std::vector<double>(s.n())), s.enc(std::vector<double>(s.n())));
  for (double v : s.dec(zero.re)) EXPECT_EQ(v, 0.0);
}

TEST(DopplerDft, RotationsPerMatvec) {
  for (std::size_t D : {8u, 16u, 32u}) {
    Sim s;
    const DopplerLayout l{3, 16, D};
    DopplerDft dft(s.n(), l);
    std::vector<double> zero(s.n(), 0.0);
    dft.apply(s.machine, s.enc(zero), s.enc(zero));
    const auto rotations = s.machine.trace().count(vm::OpKind::rotate);
    const auto r = static_cast<std::size_t>(std::ceil(std::sqrt(double(D))));
    EXPECT_LE(rotations / 4.0, double(r + (D + r - 1) / r)) << "D=" << D;
  }
}

TEST(SoftIQ, Examples) {
  Sim s;
  const std::size_t R = 16, F = 4;
  std::vector<std::vector<cplx>> z(F, std::vector<cplx>(R));
  z[1][5] = {0.6, -0.3};
  auto f = encryptFrames(s, z);
  auto iq = softIQ(s.machine, f.re, f.im, R, 2, F);
  EXPECT_EQ(s.machine.maxLevel() - iq.inPhase[0].level, 3);
  const double m = std::pow(0.45, 2);
  for (std::size_t slot = iq.offset; slot < iq.offset + F; ++slot) {
    EXPECT_NEAR(s.dec(iq.inPhase[1])[slot], m * 0.6, 1e-15);
    EXPECT_NEAR(s.dec(iq.quadrature[1])[slot], m * -0.3, 1e-15);
    EXPECT_EQ(s.dec(iq.inPhase[0])[slot], 0.0);
  }

  // Two bins, 10:1 amplitude: phase follows the dominant bin.
  std::vector<std::vector<cplx>> two(1, std::vector<cplx>(R));
  two[0][3] = std::polar(1.0, 0.7);
  two[0][9] = std::polar(0.1, -2.0);
  auto f2 = encryptFrames(s, two);
  auto iq2 = softIQ(s.machine, f2.re, f2.im, R, 2, 1);
  const double phase = std::atan2(s.dec(iq2.quadrature[0])[iq2.offset], s.dec(iq2.inPhase[0])[iq2.offset]);
  EXPECT_LT(std::fabs(phase - 0.7), 0.02);
  const auto ref = oracle::softIQ(two, 2);
  EXPECT_NEAR(phase, std::atan2(ref.q[0], ref.i[0]), 1e-12);
}

TEST(Fir, ExamplesAndForms) {
  Sim s;
  std::mt19937_64 rng(5);
  const std::size_t F = 32;
  const auto x = uniform(F, rng);
  const auto xs = s.enc(padded(x, s.n()));

  Fir identity({1.0}, F);
  EXPECT_EQ(maxAbsDiff(s.dec(identity.applyToeplitz(s.machine, xs)), x, F), 0.0);
  EXPECT_EQ(maxAbsDiff(s.dec(identity.applyRotations(s.machine, xs)), x, F), 0.0);
  Fir zero({0.0, 0.0, 0.0}, F);
  for (double v : s.dec(zero.applyRotations(s.machine, xs))) EXPECT_EQ(v, 0.0);

  const auto taps = uniform(5, rng);
  Fir h(taps, F);
  const auto ref = oracle::fir(x, taps, h.delay());
  auto a = h.applyToeplitz(s.machine, xs);
  auto b = h.applyRotations(s.machine, xs);
  EXPECT_EQ(s.machine.maxLevel() - a.level, 1);
  EXPECT_EQ(s.machine.maxLevel() - b.level, 1);
  const auto da = s.dec(a), db = s.dec(b);
  EXPECT_LT(maxAbsDiff(da, ref, F), 1e-12);
  EXPECT_LT(maxAbsDiff(db, ref, F), 1e-12);
  EXPECT_LT(maxAbsDiff(da, db, s.n()), 1e-12);

  std::vector<SlotVector> reps;
  for (double v : x) reps.push_back(s.enc(std::vector<double>(s.n(), v)));
  const auto dc = s.dec(h.applyColumns(s.machine, reps, 7));
  for (std::size_t i = 0; i < F; ++i) EXPECT_NEAR(dc[7 + i], ref[i], 1e-12);

  EXPECT_THROW(Fir(uniform(40, rng), F), ConfigError);
}

TEST(Notch, Examples) {
  Sim s;
  const DopplerLayout l{1, 2, 32};
  auto once = notch(s.machine, s.enc(std::vector<double>(l.active(), 1.0)), l, 1);
  const auto v = s.dec(once);
  for (std::size_t b = 0; b < 2; ++b) {
    for (std::size_t c = 0; c < 32; ++c) EXPECT_EQ(v[b * 32 + c], c == 16 ? 0.0 : 1.0);
  }
  EXPECT_EQ(s.dec(notch(s.machine, once, l, 1)), v);
  EXPECT_EQ(s.machine.maxLevel() - once.level, 1);

  std::mt19937_64 rng(6);
  const DopplerLayout g{2, 16, 8};
  const auto cube = randomCube<double>(g, rng, drawPower);
  const auto ref = oracle::notch(cube, 2);
  EXPECT_LT(maxAbsDiff(s.dec(notch(s.machine, s.enc(interleave(cube, s.n())), g, 2)), ref, ref.size()), 1e-15);
}

namespace {

FilteredIQ encryptIQ(Sim& s, const std::vector<double>& i, const std::vector<double>& q, TaylorForm form) {
  const double c = taylorConstant(form);
  std::vector<double> ic(i), qc(q);
  for (auto& v : ic) v *= c;
  for (auto& v : qc) v *= c;
  return {s.enc(padded(i, s.n())), s.enc(padded(q, s.n())), s.enc(padded(ic, s.n())), s.enc(padded(qc, s.n()))};
}

}  // namespace

TEST(TaylorPhase, ZeroStepAndDepth) {
  Sim s;
  const std::vector<double> i{0.6, 0.6}, q{0.8, 0.8};
  auto d3 = taylorPhase(s.machine, encryptIQ(s, i, q, TaylorForm::arcsin), 3, TaylorForm::arcsin);
  auto d1 = taylorPhase(s.machine, encryptIQ(s, i, q, TaylorForm::arcsin), 1, TaylorForm::arcsin);
  EXPECT_NEAR(s.dec(d3)[0], 0.0, 1e-15);
  EXPECT_EQ(s.machine.maxLevel() - d3.level, 3);
  EXPECT_EQ(s.machine.maxLevel() - d1.level, 1);
}

TEST(TaylorPhase, AccuracySweep) {
  Sim s;
  double worst = 0;
  for (double d = -0.2; d <= 0.2 + 1e-12; d += 0.01) {
    const std::vector<double> i{std::cos(0.4), std::cos(0.4 + d)}, q{std::sin(0.4), std::sin(0.4 + d)};
    auto out = s.dec(taylorPhase(s.machine, encryptIQ(s, i, q, TaylorForm::arcsin), 3, TaylorForm::arcsin));
    worst = std::max(worst, std::fabs(out[0] - oracle::atan2PhaseDiff(i, q)[0]));
  }
  EXPECT_LE(worst, 5e-3);
  for (double d : {0.1, 0.2, 0.3, 0.4, 0.5}) {
    const std::vector<double> i{1.0, std::cos(d)}, q{0.0, std::sin(d)};
    const double e3 = std::fabs(oracle::taylorPhase(i, q, 3, TaylorForm::arcsin)[0] - d);
    const double e1 = std::fabs(oracle::taylorPhase(i, q, 1, TaylorForm::arcsin)[0] - d);
    EXPECT_LT(e3, e1) << d;
  }
}

TEST(TaylorPhase, MatchesOracleBothForms) {
  Sim s;
  std::mt19937_64 rng(7);
  for (auto form : {TaylorForm::arcsin, TaylorForm::literal}) {
    const auto i = uniform(16, rng), q = uniform(16, rng);
    const auto got = s.dec(taylorPhase(s.machine, encryptIQ(s, i, q, form), 3, form));
    EXPECT_LT(maxAbsDiff(got, oracle::taylorPhase(i, q, 3, form), 15), 1e-12);
    EXPECT_NEAR(got[15], 0.0, 1e-15);
  }
}

TEST(FcForward, Examples) {
  Sim s;
  std::mt19937_64 rng(8);
  FcLayer zero{5, 16, std::vector<double>(80, 0.0), std::vector<double>(5, 0.0)};
  auto x = uniform(16, rng);
  auto z = s.dec(fcForward(s.machine, s.enc(padded(x, s.n())), {zero}));
  for (double v : z) EXPECT_EQ(v, 0.0);

  FcLayer id{16, 16, std::vector<double>(256, 0.0), std::vector<double>(16, 0.0)};
  for (int k = 0; k < 16; ++k) id.weights[k * 17] = 1.0;
  EXPECT_EQ(maxAbsDiff(s.dec(fcForward(s.machine, s.enc(padded(x, s.n())), {id})), x, 16), 0.0);

  std::vector<FcLayer> net{{8, 16, uniform(128, rng), uniform(8, rng)}, {5, 8, uniform(40, rng), uniform(5, rng)}};
  auto out = fcForward(s.machine, s.enc(padded(x, s.n())), net);
  EXPECT_EQ(s.machine.maxLevel() - out.level, 3);
  const auto got = s.dec(out);
  const auto ref = oracle::fcForward(net, x);
  EXPECT_LT(maxAbsDiff(got, ref, 5), 1e-9);
  EXPECT_EQ(oracle::argmax(std::vector<double>(got.begin(), got.begin() + 5)), oracle::argmax(ref));

  FcLayer bad{5, 7, uniform(35, rng), uniform(5, rng)};
  EXPECT_THROW(FcNetwork(s.n(), {net[0], bad}), LayoutError);
}

TEST(Kernels, TracesIndependentOfValues) {
  auto run = [](std::uint64_t seed) {
    Sim s;
    std::mt19937_64 rng(seed);
    const DopplerLayout l{2, 16, 8};
    DopplerDft dft(s.n(), l);
    auto z = dft.apply(s.machine, s.enc(uniform(l.active(), rng)), s.enc(uniform(l.active(), rng)));
    auto p = framePower(s.machine, z.re, z.im);
    dopplerSoftPower(s.machine, notch(s.machine, p, l, 1), l, 4);
    return s.machine.takeTrace();
  };
  EXPECT_TRUE(vm::traceEquals(run(1), run(2)).identical);
}
