#include <doctest.h>

#include <cmath>

#include "reps/dp.hpp"

using namespace reps;

TEST_CASE("calibrate_sigma matches the closed form") {
  // Delta2=1, eps=1, delta=0.125: sigma = sqrt(2 ln 10).
  const double sigma = calibrate_sigma(1.0, {1.0, 0.125});
  CHECK(sigma == doctest::Approx(std::sqrt(2.0 * std::log(10.0)))
                     .epsilon(1e-12));
  CHECK(sigma == doctest::Approx(2.145966).epsilon(1e-6));
}

TEST_CASE("calibrate_sigma is linear in sensitivity and 1/epsilon") {
  const PrivacyBudget b{1.0, 1e-5};
  const double base = calibrate_sigma(1.0, b);
  CHECK(calibrate_sigma(2.0, b) == doctest::Approx(2.0 * base));
  CHECK(calibrate_sigma(1.0, {2.0, 1e-5}) == doctest::Approx(base / 2.0));
}

TEST_CASE("calibrate_sigma validates its inputs") {
  CHECK_THROWS_AS(calibrate_sigma(0.0, {1.0, 1e-5}), InvalidBudget);
  CHECK_THROWS_AS(calibrate_sigma(1.0, {-1.0, 1e-5}), InvalidBudget);
  CHECK_THROWS_AS(calibrate_sigma(1.0, {1.0, 1.5}), InvalidBudget);
}

TEST_CASE("gaussian_release with sigma 0 is the identity") {
  const std::vector<double> v = {1.0, -2.5, 3.75};
  CHECK(gaussian_release(v, 0.0, 99) == v);
}

TEST_CASE("gaussian_release noise has the right mean and variance") {
  const std::size_t n = 100000;
  const double sigma = 1.7;
  const std::vector<double> input(n, 4.0);
  const auto out = gaussian_release(input, sigma, 12345);
  double sum = 0.0;
  for (double v : out) sum += v - 4.0;
  const double mean = sum / static_cast<double>(n);
  CHECK(std::abs(mean) < 4.0 * sigma / std::sqrt(static_cast<double>(n)));
  double ss = 0.0;
  for (double v : out) ss += (v - 4.0 - mean) * (v - 4.0 - mean);
  const double var = ss / static_cast<double>(n);
  CHECK(var == doctest::Approx(sigma * sigma).epsilon(0.05));
}

TEST_CASE("gaussian_release is seed-deterministic") {
  const std::vector<double> v(16, 0.0);
  CHECK(gaussian_release(v, 1.0, 7) == gaussian_release(v, 1.0, 7));
  CHECK(gaussian_release(v, 1.0, 7) != gaussian_release(v, 1.0, 8));
}

TEST_CASE("default_delta is 1/n^2") {
  CHECK(default_delta(3360) == doctest::Approx(8.8587e-8).epsilon(1e-4));
  CHECK(default_delta(2) == doctest::Approx(0.25));
  CHECK(default_delta(100) < default_delta(99));
}

TEST_CASE("split_budget follows the 10/90 stage split") {
  const auto s = split_budget({1.0, 1e-6});
  CHECK(s.scoring.epsilon == doctest::Approx(0.1));
  CHECK(s.synthesis.epsilon == doctest::Approx(0.9));
  CHECK(s.scoring.delta == doctest::Approx(5e-7));
  CHECK(s.synthesis.delta == doctest::Approx(5e-7));
  CHECK(s.scoring.epsilon + s.synthesis.epsilon == doctest::Approx(1.0));
  CHECK(s.scoring.delta + s.synthesis.delta == doctest::Approx(1e-6));
}

TEST_CASE("composition ledger totals are coordinate-wise sums") {
  CompositionLedger ledger;
  ledger.record("scoring", {0.1, 5e-7});
  ledger.record("synthesis", {0.9, 5e-7});
  CHECK(ledger.total_epsilon() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ledger.total_delta() == doctest::Approx(1e-6).epsilon(1e-15));
  CHECK(ledger.has_stage("scoring"));
  CHECK_THROWS_AS(ledger.stage("nothing"), MissingStage);
}

TEST_CASE("hockey_stick_delta basics") {
  CHECK(hockey_stick_delta(0.0, 1.0, 0.5) == 0.0);
  // Non-increasing in epsilon.
  double prev = 1.0;
  for (double eps : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double d = hockey_stick_delta(1.0, 1.0, eps);
    CHECK(d <= prev + 1e-15);
    prev = d;
  }
}

TEST_CASE("hockey stick certifies the calibrated sigma at the example") {
  const double sigma = calibrate_sigma(1.0, {1.0, 0.125});
  CHECK(hockey_stick_delta(1.0, sigma, 1.0) <= 0.125);
}

TEST_CASE("classical calibration is certified across a grid for eps <= 1") {
  for (double eps : {0.25, 0.5, 1.0}) {
    for (double alpha : {0.1, 1.0, 10.0}) {
      for (double delta : {1e-6, 1e-2}) {
        const double sigma = calibrate_sigma(alpha, {eps, delta});
        CHECK(hockey_stick_delta(alpha, sigma, eps) <= delta);
      }
    }
  }
}
