#include "spam/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace spam {

namespace {

struct FitPoints {
  std::vector<double> j;  // 1-based position within its sequence
  std::vector<double> y;  // ln |lambda|
};

// Linear least squares of y = a - b * j^gamma; returns (a, b, rms residual).
struct LinearFit {
  double a = 0.0;
  double b = 0.0;
  double rms = 0.0;
};

LinearFit fit_at_gamma(const FitPoints& pts, double gamma) {
  const size_t n = pts.j.size();
  double tm = 0.0, ym = 0.0;
  std::vector<double> t(n);
  for (size_t i = 0; i < n; ++i) {
    t[i] = std::pow(pts.j[i], gamma);
    tm += t[i];
    ym += pts.y[i];
  }
  tm /= static_cast<double>(n);
  ym /= static_cast<double>(n);
  double stt = 0.0, sty = 0.0;
  for (size_t i = 0; i < n; ++i) {
    stt += (t[i] - tm) * (t[i] - tm);
    sty += (t[i] - tm) * (pts.y[i] - ym);
  }
  LinearFit f;
  const double slope = stt > 0.0 ? sty / stt : 0.0;
  f.b = -slope;
  f.a = ym + f.b * tm;
  double sq = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double e = pts.y[i] - (f.a - f.b * t[i]);
    sq += e * e;
  }
  f.rms = std::sqrt(sq / static_cast<double>(n));
  return f;
}

}  // namespace

SpectralFit spectral_fit(const std::vector<std::vector<double>>& spectra) {
  require(!spectra.empty(), "domain", "spectral_fit: no spectra given");
  FitPoints pts;
  int min_nonzero = -1;
  for (const auto& seq : spectra) {
    int nonzero = 0;
    for (size_t j = 0; j < seq.size(); ++j) {
      const double a = std::abs(seq[j]);
      if (a > 0.0) {
        pts.j.push_back(static_cast<double>(j + 1));
        pts.y.push_back(std::log(a));
        ++nonzero;
      }
    }
    min_nonzero = min_nonzero < 0 ? nonzero : std::min(min_nonzero, nonzero);
  }
  require(!pts.j.empty(), "domain", "spectral_fit: degenerate all-zero spectrum");
  require(min_nonzero >= 3, "domain",
          "spectral_fit: need at least 3 nonzero values per sequence");

  const double grid[] = {1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
  double best_gamma = grid[0];
  double best_rms = fit_at_gamma(pts, grid[0]).rms;
  for (double g : grid) {
    const double rms = fit_at_gamma(pts, g).rms;
    if (rms < best_rms) {
      best_rms = rms;
      best_gamma = g;
    }
  }

  // golden-section refinement around the best grid point
  double lo = std::max(1.0, best_gamma - 0.5);
  double hi = best_gamma + 0.5;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = fit_at_gamma(pts, x1).rms;
  double f2 = fit_at_gamma(pts, x2).rms;
  for (int it = 0; it < 80; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = fit_at_gamma(pts, x1).rms;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = fit_at_gamma(pts, x2).rms;
    }
  }
  const double gamma = 0.5 * (lo + hi);
  const LinearFit refined = fit_at_gamma(pts, gamma);
  const LinearFit coarse = fit_at_gamma(pts, best_gamma);

  SpectralFit out;
  if (refined.rms <= coarse.rms) {
    out.gamma = gamma;
    out.c1 = std::exp(refined.a);
    out.c2 = refined.b;
    out.residual = refined.rms;
  } else {
    out.gamma = best_gamma;
    out.c1 = std::exp(coarse.a);
    out.c2 = coarse.b;
    out.residual = coarse.rms;
  }
  return out;
}

}  // namespace spam
