#include "msfa/metrics.hpp"

#include <cmath>
#include <limits>

namespace msfa {

namespace {

void check_same_shape(const MultispectralImage& a, const MultispectralImage& b) {
  if (a.height != b.height || a.width != b.width || !(a.grid == b.grid))
    throw InvalidArgument("metric: image dimensions or grids do not match");
}

double mse(const MultispectralImage& a, const MultispectralImage& b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    acc += d * d;
  }
  return a.data.empty() ? 0.0 : acc / static_cast<double>(a.data.size());
}

}  // namespace

double psnr(const MultispectralImage& reference, const MultispectralImage& test,
            double peak) {
  check_same_shape(reference, test);
  if (!(peak > 0.0)) throw InvalidArgument("psnr: peak must be > 0");
  const double m = mse(reference, test);
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / m);
}

double rmse(const MultispectralImage& reference, const MultispectralImage& test) {
  check_same_shape(reference, test);
  return std::sqrt(mse(reference, test));
}

double spectral_angle(const MultispectralImage& reference,
                      const MultispectralImage& test) {
  check_same_shape(reference, test);
  const int L = reference.grid.count;
  double acc = 0.0;
  size_t used = 0;
  for (int r = 0; r < reference.height; ++r) {
    for (int c = 0; c < reference.width; ++c) {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (int b = 0; b < L; ++b) {
        const double x = reference.at(r, c, b), y = test.at(r, c, b);
        dot += x * y;
        na += x * x;
        nb += y * y;
      }
      if (na == 0.0 && nb == 0.0) continue;  // no angular information
      if (na == 0.0 || nb == 0.0) {
        acc += 3.14159265358979323846 / 2.0;
        ++used;
        continue;
      }
      double cosv = dot / (std::sqrt(na) * std::sqrt(nb));
      cosv = std::fmin(1.0, std::fmax(-1.0, cosv));
      acc += std::acos(cosv);
      ++used;
    }
  }
  return used == 0 ? 0.0 : acc / static_cast<double>(used);
}

}  // namespace msfa
