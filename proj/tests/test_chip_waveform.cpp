#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "qslora/chip_waveform.hpp"

using namespace qslora;

namespace {

// Independent reference: Boost's adaptive Gauss-Kronrod on the defining
// integrals, with the raised-cosine pulse written out separately.
double pulse(ChipWaveform w, double t) {
  if (t < 0.0 || t >= 1.0) {
    return 0.0;
  }
  return w == ChipWaveform::rectangular ? 1.0 : std::sqrt(2.0 / 3.0) * (1.0 - std::cos(2.0 * std::numbers::pi * t));
}

double kronrod(auto f, double a, double b) {
  if (a == b) {
    return 0.0;
  }
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-14);
}

double ref_overlapping(ChipWaveform w, double delta) {
  const double d = std::abs(delta);
  return kronrod([&](double u) { return pulse(w, u) * pulse(w, u - d); }, d, 1.0);
}

double ref_overlapped(ChipWaveform w, double delta) {
  const double d = std::abs(delta);
  return kronrod([&](double u) { return pulse(w, u) * pulse(w, u + 1.0 - d); }, 0.0, d);
}

}  // namespace

TEST(ChipWaveform, Tokens) {
  EXPECT_EQ(parse_waveform("rect"), ChipWaveform::rectangular);
  EXPECT_EQ(parse_waveform("rc"), ChipWaveform::raised_cosine);
  EXPECT_EQ(to_token(ChipWaveform::raised_cosine), "rc");
  EXPECT_THROW(parse_waveform("rrc"), invalid_input);
}

TEST(SampleWaveform, Examples) {
  EXPECT_EQ(sample_waveform(ChipWaveform::rectangular, 0.5), 1.0);
  EXPECT_EQ(sample_waveform(ChipWaveform::raised_cosine, 0.0), 0.0);
  EXPECT_NEAR(sample_waveform(ChipWaveform::raised_cosine, 0.5), 2.0 * std::sqrt(2.0 / 3.0), 1e-15);
  EXPECT_NEAR(sample_waveform(ChipWaveform::raised_cosine, 0.5), 1.63299, 1e-5);
}

TEST(SampleWaveform, ChipLimited) {
  for (auto w : {ChipWaveform::rectangular, ChipWaveform::raised_cosine}) {
    EXPECT_EQ(sample_waveform(w, -1e-12), 0.0);
    EXPECT_EQ(sample_waveform(w, 1.0), 0.0);
    EXPECT_EQ(sample_waveform(w, 3.7), 0.0);
  }
}

TEST(Energy, UnitEnergy) {
  EXPECT_NEAR(energy(ChipWaveform::rectangular), 1.0, 1e-9);
  EXPECT_NEAR(energy(ChipWaveform::raised_cosine), 1.0, 1e-9);
}

TEST(Energy, RaisedCosineWithoutPrefactor) {
  // int_0^1 (1 - cos 2 pi t)^2 dt = 3/2
  const double e = pulse_energy([](double t) { return 1.0 - std::cos(2.0 * std::numbers::pi * t); });
  EXPECT_NEAR(e, 1.5, 1e-9);
}

TEST(Energy, NonConvergenceIsReported) {
  quadrature::Tolerance tight;
  tight.absolute = 1e-30;
  tight.max_depth = 3;
  EXPECT_THROW(pulse_energy([](double t) { return std::sqrt(t) * std::sin(40.0 * t); }, tight), numerical_error);
}

TEST(Autocorrelation, Examples) {
  for (auto w : {ChipWaveform::rectangular, ChipWaveform::raised_cosine}) {
    EXPECT_NEAR(autocorr_overlapping(w, 0.0), 1.0, 1e-12);
    EXPECT_EQ(autocorr_overlapped(w, 0.0), 0.0);
  }
  EXPECT_NEAR(autocorr_overlapping(ChipWaveform::rectangular, 0.3), 0.7, 1e-15);
  EXPECT_NEAR(autocorr_overlapped(ChipWaveform::rectangular, 0.3), 0.3, 1e-15);
  // (2/3) int_{1/2}^1 sin^2(2 pi u) du = 1/6, and by symmetry the same for the
  // overlapped part
  EXPECT_NEAR(autocorr_overlapping(ChipWaveform::raised_cosine, 0.5), 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(autocorr_overlapped(ChipWaveform::raised_cosine, 0.5), 1.0 / 6.0, 1e-12);
  EXPECT_THROW(autocorr_overlapping(ChipWaveform::rectangular, 1.5), invalid_input);
  EXPECT_THROW(autocorr_overlapped(ChipWaveform::raised_cosine, -1.01), invalid_input);
}

TEST(Autocorrelation, RaisedCosineFrozenValues) {
  // scipy.integrate.quad of the defining integrals (tests/oracles/freeze_values.py)
  struct Row {
    double delta, overlapping, overlapped;
  };
  const Row rows[] = {{0.1, 0.93625402669134838, 8.4971433634344222e-05},
                      {0.2, 0.76710321089478406, 0.0025691205635317662},
                      {0.3, 0.54592804704064379, 0.017732954834373874},
                      {0.75, 0.0075117235747713361, 0.65915494309189526}};
  for (const auto& r : rows) {
    EXPECT_NEAR(autocorr_overlapping(ChipWaveform::raised_cosine, r.delta), r.overlapping, 1e-12);
    EXPECT_NEAR(autocorr_overlapped(ChipWaveform::raised_cosine, r.delta), r.overlapped, 1e-12);
  }
}

TEST(Autocorrelation, RectangularClosedFormsOnGrid) {
  for (int i = 0; i < 1000; ++i) {
    const double d = -1.0 + 2.0 * i / 999.0;
    ASSERT_LT(std::abs(autocorr_overlapping_quadrature(ChipWaveform::rectangular, d) - (1.0 - std::abs(d))), 1e-9);
    ASSERT_LT(std::abs(autocorr_overlapped_quadrature(ChipWaveform::rectangular, d) - std::abs(d)), 1e-9);
  }
}

TEST(Autocorrelation, ClosedFormsMatchQuadrature) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (auto w : {ChipWaveform::rectangular, ChipWaveform::raised_cosine}) {
    for (int i = 0; i < 1000; ++i) {
      const double d = dist(gen);
      ASSERT_LT(std::abs(autocorr_overlapping(w, d) - autocorr_overlapping_quadrature(w, d)), 1e-10) << d;
      ASSERT_LT(std::abs(autocorr_overlapped(w, d) - autocorr_overlapped_quadrature(w, d)), 1e-10) << d;
    }
  }
}

TEST(Autocorrelation, LibraryQuadratureMatchesIndependentKronrod) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (auto w : {ChipWaveform::rectangular, ChipWaveform::raised_cosine}) {
    for (int i = 0; i < 200; ++i) {
      const double d = dist(gen);
      ASSERT_NEAR(autocorr_overlapping_quadrature(w, d), ref_overlapping(w, d), 1e-10) << d;
      ASSERT_NEAR(autocorr_overlapped_quadrature(w, d), ref_overlapped(w, d), 1e-10) << d;
    }
  }
}

TEST(Autocorrelation, EvenInOffset) {
  for (auto w : {ChipWaveform::rectangular, ChipWaveform::raised_cosine}) {
    for (double d = 0.0; d <= 1.0; d += 0.0625) {
      EXPECT_EQ(autocorr_overlapping(w, d), autocorr_overlapping(w, -d));
      EXPECT_EQ(autocorr_overlapped(w, d), autocorr_overlapped(w, -d));
    }
  }
}

TEST(Autocorrelation, Endpoints) {
  for (double d : {-1.0, 1.0}) {
    EXPECT_NEAR(autocorr_overlapping(ChipWaveform::rectangular, d), 0.0, 1e-15);
    EXPECT_NEAR(autocorr_overlapped(ChipWaveform::rectangular, d), 1.0, 1e-15);
    EXPECT_NEAR(autocorr_overlapping(ChipWaveform::raised_cosine, d), 0.0, 1e-12);
    EXPECT_NEAR(autocorr_overlapped(ChipWaveform::raised_cosine, d), 1.0, 1e-12);
  }
}

TEST(Autocorrelation, SumIdentityHoldsOnlyForRectangular) {
  for (double d = 0.0; d <= 1.0; d += 0.05) {
    EXPECT_NEAR(autocorr_overlapping(ChipWaveform::rectangular, d) + autocorr_overlapped(ChipWaveform::rectangular, d),
                1.0, 1e-15);
  }
  const double rc_sum =
      autocorr_overlapping(ChipWaveform::raised_cosine, 0.3) + autocorr_overlapped(ChipWaveform::raised_cosine, 0.3);
  EXPECT_GT(std::abs(rc_sum - 1.0), 0.1);
}
