#include <doctest.h>

#include <cmath>

#include "spam/spectral.hpp"

using namespace spam;

TEST_CASE("recovers a planted cubic-exponent decay within 5%") {
  // lambda_j = 0.54 exp(-0.006 j^3), j = 1..20
  std::vector<double> seq;
  for (int j = 1; j <= 20; ++j) seq.push_back(0.54 * std::exp(-0.006 * std::pow(j, 3.0)));
  const SpectralFit fit = spectral_fit({seq});
  CHECK(std::abs(fit.c1 - 0.54) / 0.54 <= 0.05);
  CHECK(std::abs(fit.c2 - 0.006) / 0.006 <= 0.05);
  CHECK(std::abs(fit.gamma - 3.0) / 3.0 <= 0.05);
}

TEST_CASE("constant spectrum fits with no decay") {
  std::vector<double> seq(12, 0.37);
  const SpectralFit fit = spectral_fit({seq});
  CHECK(std::abs(fit.c2) <= 1e-6);
  CHECK(fit.c1 == doctest::Approx(0.37).epsilon(1e-9));
}

TEST_CASE("noiseless gamma=1 exponential has near-zero residual") {
  std::vector<double> seq;
  for (int j = 1; j <= 15; ++j) seq.push_back(1.3 * std::exp(-0.21 * j));
  const SpectralFit fit = spectral_fit({seq});
  CHECK(fit.residual <= 1e-8);
  CHECK(fit.gamma == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(fit.c2 == doctest::Approx(0.21).epsilon(1e-3));
}

TEST_CASE("joint fit across several class spectra") {
  std::vector<std::vector<double>> spectra;
  for (int c = 0; c < 4; ++c) {
    std::vector<double> seq;
    for (int j = 1; j <= 10; ++j) seq.push_back(0.8 * std::exp(-0.05 * std::pow(j, 2.0)));
    spectra.push_back(std::move(seq));
  }
  const SpectralFit fit = spectral_fit(spectra);
  CHECK(fit.gamma == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(fit.c1 == doctest::Approx(0.8).epsilon(1e-6));
}

TEST_CASE("degenerate spectra are rejected") {
  CHECK_THROWS_WITH_AS(spectral_fit({{0.0, 0.0, 0.0}}), doctest::Contains("degenerate"), Error);
  CHECK_THROWS_AS(spectral_fit({{1.0, 0.5, 0.0}}), Error);  // only 2 nonzero
  CHECK_THROWS_AS(spectral_fit({}), Error);
}

TEST_CASE("zeros inside a sequence are skipped, not logged") {
  std::vector<double> seq;
  for (int j = 1; j <= 10; ++j) seq.push_back(0.9 * std::exp(-0.1 * j));
  seq.push_back(0.0);
  const SpectralFit fit = spectral_fit({seq});
  CHECK(fit.residual <= 1e-8);
}
