#include "cfmimo/combining.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cfmimo/channel.hpp"

namespace cfmimo {
namespace {

CMatrix random_channel(int m, int k, std::mt19937_64& rng) {
  CMatrix h(m, k);
  for (Eigen::Index i = 0; i < h.size(); ++i) h(i) = draw_cn(rng);
  return h;
}

InterferenceProfile make_profile(std::initializer_list<double> g, std::initializer_list<double> n) {
  InterferenceProfile p;
  const auto k = static_cast<Eigen::Index>(n.size());
  p.g = RMatrix::Zero(k, k);
  p.n = RVector(k);
  auto it = g.begin();
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) p.g(i, j) = *it++;
  auto nt = n.begin();
  for (Eigen::Index i = 0; i < k; ++i) p.n(i) = *nt++;
  return p;
}

TEST(ZfWeights, IdentityAndScaling) {
  const CMatrix eye = CMatrix::Identity(2, 2);
  EXPECT_TRUE(zf_weights(eye).isApprox(eye));
  EXPECT_TRUE(zf_weights(2.0 * eye).isApprox(0.5 * eye));
}

TEST(ZfWeights, TallMatrixHandInverse) {
  CMatrix h(3, 2);
  h << 1, 0, 0, 1, 1, 1;
  // Gram = [[2,1],[1,2]], inverse = (1/3)[[2,-1],[-1,2]].
  CMatrix expected(2, 3);
  expected << 2, -1, 1, -1, 2, 1;
  expected /= 3.0;
  const CMatrix w = zf_weights(h);
  EXPECT_LT((w - expected).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((w * h - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(ZfWeights, PseudoInverseOnRandomChannels) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const CMatrix h = random_channel(16, 4, rng);
    const CMatrix w = zf_weights(h);
    EXPECT_LT((w * h - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(ZfWeights, RankDeficientRejected) {
  CMatrix h(4, 2);
  h.col(0) << 1, 2, 3, 4;
  h.col(1) = h.col(0);
  EXPECT_THROW(zf_weights(h), RankDeficientError);
  EXPECT_THROW(zf_weights(CMatrix::Ones(2, 3)), RankDeficientError);
}

TEST(InterferenceProfile, PerfectCsiHasNoLeakage) {
  std::mt19937_64 rng(1);
  const CMatrix w = zf_weights(random_channel(8, 3, rng));
  const auto p = interference_profile(w, CMatrix::Zero(8, 3));
  EXPECT_EQ(p.g.maxCoeff(), 0.0);
  EXPECT_TRUE((p.n.array() > 0.0).all());
}

TEST(InterferenceProfile, UnitProjection) {
  CMatrix h_tilde = CMatrix::Zero(3, 3);
  h_tilde(0, 2) = 1.0;  // column 2 = e_0
  const auto p = interference_profile(CMatrix::Identity(3, 3), h_tilde);
  EXPECT_DOUBLE_EQ(p.g(0, 2), 1.0);
  EXPECT_DOUBLE_EQ(p.g.sum(), 1.0);
}

TEST(InterferenceProfile, NoiseTermIsRowNorm) {
  CMatrix w(1, 2);
  w << 0.5, 0.5;
  const auto p = interference_profile(w, CMatrix::Zero(2, 1));
  EXPECT_DOUBLE_EQ(p.n(0), 0.5);
}

TEST(SinrAndSe, SingleUeAnalytic) {
  CMatrix h(2, 1);
  h << 1, 1;
  const auto p = interference_profile(zf_weights(h), CMatrix::Zero(2, 1));
  EXPECT_NEAR(p.n(0), 0.5, 1e-15);
  const auto m = sinr_and_se({p}, {1.0}, 1.0);
  EXPECT_NEAR(m.sinr[0], 2.0, 1e-14);
  EXPECT_NEAR(m.se[0], std::log2(3.0), 1e-14);
  EXPECT_NEAR(m.se[0], 1.58496, 1e-5);
}

TEST(SinrAndSe, ZeroPowerZeroRate) {
  const auto p = make_profile({0.0, 0.3, 0.2, 0.0}, {1.0, 2.0});
  const auto m = sinr_and_se(p, {0.0, 1.0}, 10.0);
  EXPECT_EQ(m.sinr[0], 0.0);
  EXPECT_EQ(m.se[0], 0.0);
}

TEST(SinrAndSe, ScalarEvaluation) {
  // Diagonal of g is ignored.
  const auto p = make_profile({123.0, 0.01, 0.0, 5.0}, {2.0, 1.0});
  const auto m = sinr_and_se(p, {1.0, 0.5}, 100.0);
  EXPECT_NEAR(m.sinr[0], 40.0, 1e-12);
  EXPECT_NEAR(m.se[0], std::log2(41.0), 1e-12);
  EXPECT_NEAR(m.se[0], 5.3576, 1e-4);
}

TEST(EnergyEfficiency, Examples) {
  SystemConfig cfg;
  PerUeMetrics m;
  m.se = {2.0, 0.0};
  energy_efficiency(m, {1.0, 0.7}, cfg);
  EXPECT_NEAR(m.power_w[0], 0.3, 1e-15);
  EXPECT_NEAR(m.ee[0], 1.3333e8, 1e4);
  EXPECT_EQ(m.ee[1], 0.0);

  cfg.bandwidth_hz = 1.0;
  PerUeMetrics c;
  c.se = {1.0};
  energy_efficiency(c, {0.0}, cfg);
  EXPECT_NEAR(c.ee[0], 10.0, 1e-12);
}

TEST(SinrProperties, MonotoneInOwnAndOtherPowers) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 4;
    InterferenceProfile p{RMatrix::Zero(k, k), RVector(k)};
    for (int i = 0; i < k; ++i) {
      p.n(i) = 0.1 + u(rng);
      for (int j = 0; j < k; ++j) p.g(i, j) = u(rng);
    }
    std::vector<double> q(k);
    for (auto& v : q) v = 0.05 + 0.9 * u(rng);
    const auto base = sinr_and_se(p, q, 3.0);
    const int who = trial % k;
    auto up = q;
    up[who] += 0.05;
    const auto bumped = sinr_and_se(p, up, 3.0);
    for (int i = 0; i < k; ++i) {
      if (i == who) {
        EXPECT_GT(bumped.sinr[i], base.sinr[i]);
      } else {
        EXPECT_LE(bumped.sinr[i], base.sinr[i]);
      }
    }
  }
}

TEST(SinrProperties, PerfectCsiDecouplesUsers) {
  std::mt19937_64 rng(6);
  const CMatrix h = random_channel(12, 3, rng);
  const auto p = interference_profile(zf_weights(h), CMatrix::Zero(12, 3));
  const auto a = sinr_and_se(p, {0.4, 1.0, 0.1}, 50.0);
  const auto b = sinr_and_se(p, {0.4, 0.2, 0.9}, 50.0);
  EXPECT_DOUBLE_EQ(a.se[0], b.se[0]);
}

TEST(EnergyEfficiencyProperties, MonotoneInPowerAndRate) {
  SystemConfig cfg;
  PerUeMetrics lo, hi;
  lo.se = hi.se = {5.0};
  energy_efficiency(lo, {0.2}, cfg);
  energy_efficiency(hi, {0.6}, cfg);
  EXPECT_GT(lo.ee[0], hi.ee[0]);
  PerUeMetrics more;
  more.se = {5.5};
  energy_efficiency(more, {0.2}, cfg);
  EXPECT_GT(more.ee[0], lo.ee[0]);
}

}  // namespace
}  // namespace cfmimo
