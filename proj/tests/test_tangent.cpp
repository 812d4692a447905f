#include <gtest/gtest.h>

#include <cmath>

#include "acsf/tangent.hpp"
#include "oracles.hpp"

using namespace acsf;

namespace {

FrequencyVector fv(std::vector<int> ks) { return FrequencyVector(std::move(ks)); }

}  // namespace

TEST(RescaledSample, CircleIsItsOwnTangentFlow) {
  const TorusCurveFamily fam(fv({1}));
  for (double t : {-1e4, -3.0, -1e-5}) {
    const auto pl = rescaled_sample(fam, t, 64);
    for (std::size_t i = 0; i < pl.size(); ++i)
      EXPECT_NEAR(std::hypot(pl(i, 0), pl(i, 1)), std::sqrt(2.0), 1e-12);
  }
  EXPECT_THROW(rescaled_sample(fam, 0.0, 64), DomainError);
}

TEST(RescaledSample, DominantAmplitudeAtBothEnds) {
  const TorusCurveFamily fam(fv({1, 2}));
  const double r_early = oracle::torus_radius({1, 2}, -1e6);
  const auto early = rescaled_sample(fam, -1e6, 64);
  EXPECT_NEAR(std::hypot(early(0, 2), early(0, 3)), std::pow(r_early, 4) / 1e3, 1e-12);
  EXPECT_NEAR(std::hypot(early(5, 2), early(5, 3)), std::sqrt(2.0), 1e-4);
  const auto late = rescaled_sample(fam, -1e-6, 64);
  EXPECT_NEAR(std::hypot(late(3, 0), late(3, 1)), std::sqrt(2.0), 1e-4);
}

TEST(Diagnostics, TorusOneTwoEarly) {
  const auto d = diagnostics(TorusCurveFamily(fv({1, 2})), -1e6, 512);
  EXPECT_EQ(d.dominant_plane, 1u);
  EXPECT_EQ(d.winding, 2);
  // The subdominant plane still carries amplitude r / 1e3 ~ 6.1e-3.
  const double sub = oracle::torus_radius({1, 2}, -1e6) / 1e3;
  EXPECT_NEAR(d.plane_amplitudes[0], sub, 1e-12);
  EXPECT_LT(d.circle_distance, 1e-2);
  EXPECT_GE(d.circle_distance, sub - 1e-6);
}

TEST(Diagnostics, TorusOneTwoLate) {
  const auto d = diagnostics(TorusCurveFamily(fv({1, 2})), -1e-6, 512);
  EXPECT_EQ(d.dominant_plane, 0u);
  EXPECT_EQ(d.winding, 1);
  EXPECT_LT(d.circle_distance, 1e-3);
}

TEST(Diagnostics, Circle) {
  const TorusCurveFamily fam(fv({1}));
  for (double t : {-1e6, -1.0, -1e-6}) {
    const auto d = diagnostics(fam, t, 128);
    EXPECT_EQ(d.winding, 1);
    EXPECT_LT(d.circle_distance, 1e-10);
  }
}

TEST(Diagnostics, WindingAtExtremesForManyVectors) {
  for (auto ks : {std::vector<int>{1, 2}, {1, 3}, {2, 3}, {1, 2, 3}, {1, 5}, {2, 4, 5}, {1, 2, 3, 4}}) {
    const TorusCurveFamily fam(fv(ks));
    const std::size_t n = 64 * std::size_t(ks.back());
    const auto early = diagnostics(fam, -1e6, n);
    const auto late = diagnostics(fam, -1e-6, n);
    EXPECT_EQ(early.winding, ks.back()) << fv(ks).to_string();
    EXPECT_EQ(late.winding, ks.front()) << fv(ks).to_string();
    EXPECT_EQ(early.dominant_plane, ks.size() - 1);
    EXPECT_EQ(late.dominant_plane, 0u);
  }
}

TEST(TangentProperties, SumRule) {
  for (auto ks : {std::vector<int>{1}, {1, 2}, {2, 3}, {1, 2, 3}}) {
    const TorusCurveFamily fam(fv(ks));
    for (int e = -8; e <= 8; ++e) {
      const double t = -std::pow(10.0, e);
      double s = 0.0;
      for (double a : plane_amplitudes(fam, t)) {
        EXPECT_GT(a, 0.0);
        s += a * a;
      }
      EXPECT_NEAR(s, 2.0, 1e-10) << fv(ks).to_string() << " t=" << t;
    }
  }
}

TEST(TangentProperties, AmplitudeBracketsAroundTheTurningTime) {
  for (auto ks : {std::vector<int>{1, 2}, {1, 3}, {1, 2, 3}}) {
    const TorusCurveFamily fam(fv(ks));
    const double m = double(ks.size());
    const double km2 = double(ks.back() * ks.back()), k12 = double(ks.front() * ks.front());
    for (int e = -6; e <= 6; ++e) {
      const double t = -std::pow(10.0, e);
      const double r = fam.profile().radius(t);
      const double inv = 1.0 / std::sqrt(-t);
      const double slack = 1e-12 * inv;
      if (t <= -0.5 * m) {
        EXPECT_LE(std::sqrt(2.0) / (std::sqrt(m) * std::pow(r, km2)), inv + slack);
        EXPECT_LE(inv, std::sqrt(2.0) / std::pow(r, km2) + slack);
      } else {
        EXPECT_LE(std::sqrt(2.0) / (std::sqrt(m) * std::pow(r, k12)), inv + slack);
        EXPECT_LE(inv, std::sqrt(2.0) / std::pow(r, k12) + slack);
      }
    }
  }
}

TEST(ConvergenceReport, Examples) {
  const TorusCurveFamily fam(fv({1, 2}));
  const auto early = convergence_report(fam, std::vector<double>{-1e8, -1e6, -1e4}, 512);
  ASSERT_EQ(early.rows.size(), 3u);
  EXPECT_TRUE(early.monotone_toward_minus_infinity);
  EXPECT_LT(early.rows[0].circle_distance, early.rows[1].circle_distance);
  EXPECT_LT(early.rows[1].circle_distance, early.rows[2].circle_distance);

  const auto late = convergence_report(fam, std::vector<double>{-1e-4, -1e-6, -1e-8}, 512);
  EXPECT_TRUE(late.monotone_toward_zero);
  EXPECT_GT(late.rows[0].circle_distance, late.rows[1].circle_distance);
  EXPECT_GT(late.rows[1].circle_distance, late.rows[2].circle_distance);

  const auto single = convergence_report(fam, std::vector<double>{-2.0}, 128);
  EXPECT_EQ(single.rows.size(), 1u);
  EXPECT_TRUE(single.monotone_toward_minus_infinity && single.monotone_toward_zero);
}

TEST(ConvergenceReport, Errors) {
  const TorusCurveFamily fam(fv({1, 2}));
  EXPECT_THROW(convergence_report(fam, std::vector<double>{-1.0, -2.0}, 64), DomainError);
  EXPECT_THROW(convergence_report(fam, std::vector<double>{-1.0, 0.0}, 64), DomainError);
}
