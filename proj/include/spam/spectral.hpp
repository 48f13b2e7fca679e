#pragma once

#include "spam/common.hpp"

namespace spam {

// Parameters of the decay model |lambda_j| ~= c1 * exp(-c2 * j^gamma),
// fitted in log domain. residual is the RMS of ln|lambda_j| fit errors.
struct SpectralFit {
  double c1 = 0.0;
  double c2 = 0.0;
  double gamma = 1.0;
  double residual = 0.0;
};

// Least-squares fit of ln|lambda_j| = ln c1 - c2 * j^gamma over every
// sequence jointly (j is 1-based within each sequence). gamma is selected on
// a coarse grid and refined by golden-section search. Zero entries are
// skipped; an all-zero spectrum is rejected.
SpectralFit spectral_fit(const std::vector<std::vector<double>>& spectra);

}  // namespace spam
