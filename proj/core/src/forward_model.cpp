#include "msfa/forward_model.hpp"

#include <cmath>

#include "msfa/rng.hpp"

namespace msfa {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_spectral(const FilterArrayPattern& pattern,
                    const SensitivityMatrix& sens, const SpectralGrid& grid) {
  if (pattern.num_filters != sens.num_filters)
    throw InvalidArgument("forward model: pattern has " +
                          std::to_string(pattern.num_filters) +
                          " filters, sensitivity has " +
                          std::to_string(sens.num_filters));
  if (!(sens.grid == grid))
    throw InvalidArgument("forward model: sensitivity grid does not match image grid");
}

void check_polarized(const FilterArrayPattern& pattern,
                     const PolarizedFilterBank& bank, const SpectralGrid& grid) {
  if (pattern.num_filters != bank.num_filters)
    throw InvalidArgument("forward model: pattern/bank filter counts differ");
  if (!(bank.grid == grid))
    throw InvalidArgument("forward model: bank grid does not match cube grid");
}

}  // namespace

MosaickedImage mosaic_apply(const MultispectralImage& x,
                            const FilterArrayPattern& pattern,
                            const SensitivityMatrix& sens,
                            const NoiseSpec& noise) {
  check_spectral(pattern, sens, x.grid);
  const int L = x.grid.count;
  MosaickedImage y(x.height, x.width);
  for (int r = 0; r < x.height; ++r) {
    for (int c = 0; c < x.width; ++c) {
      const double* s = sens.row(pattern.filter_at(r, c));
      double acc = 0.0;
      for (int i = 0; i < L; ++i) acc += s[i] * x.at(r, c, i);
      if (noise.sigma > 0.0)
        acc += noise.sigma * rng::gaussian(noise.seed, r, c);
      y.at(r, c) = acc;
    }
  }
  return y;
}

MultispectralImage mosaic_adjoint(const MosaickedImage& y,
                                  const FilterArrayPattern& pattern,
                                  const SensitivityMatrix& sens) {
  if (static_cast<size_t>(y.height) * y.width != y.data.size())
    throw InvalidArgument("mosaic_adjoint: malformed mosaic");
  MultispectralImage x(y.height, y.width, sens.grid);
  const int L = sens.grid.count;
  for (int r = 0; r < y.height; ++r) {
    for (int c = 0; c < y.width; ++c) {
      const double* s = sens.row(pattern.filter_at(r, c));
      const double v = y.at(r, c);
      for (int i = 0; i < L; ++i) x.at(r, c, i) = s[i] * v;
    }
  }
  return x;
}

Eigen::MatrixXd build_system_matrix(const FilterArrayPattern& pattern,
                                    const SensitivityMatrix& sens, int height,
                                    int width) {
  const int L = sens.grid.count;
  const size_t rows = static_cast<size_t>(height) * width;
  if (rows * rows * L > 1000000ull)
    throw InvalidArgument("build_system_matrix: instance exceeds 1e6-entry guard");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, rows * L);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const size_t px = static_cast<size_t>(r) * width + c;
      const double* s = sens.row(pattern.filter_at(r, c));
      for (int i = 0; i < L; ++i)
        m(px, static_cast<size_t>(i) * rows + px) = s[i];
    }
  }
  return m;
}

MosaickedImage polarized_mosaic(const StokesCube& s,
                                const PolarizedFilterBank& bank,
                                const FilterArrayPattern& pattern,
                                const NoiseSpec& noise) {
  check_polarized(pattern, bank, s.grid);
  const int L = s.grid.count;
  MosaickedImage y(s.height, s.width);
  for (int r = 0; r < s.height; ++r) {
    for (int c = 0; c < s.width; ++c) {
      const int k = pattern.filter_at(r, c);
      const double theta = bank.orientation_deg[k] * kPi / 180.0;
      const double c2 = std::cos(2.0 * theta), s2 = std::sin(2.0 * theta);
      double acc = 0.0;
      for (int i = 0; i < L; ++i) {
        const double tsum = bank.te(k, i) + bank.tm(k, i);
        const double tdif = bank.te(k, i) - bank.tm(k, i);
        acc += 0.5 * (tsum * s.s0.at(r, c, i) +
                      tdif * (c2 * s.s1.at(r, c, i) + s2 * s.s2.at(r, c, i)));
      }
      if (noise.sigma > 0.0)
        acc += noise.sigma * rng::gaussian(noise.seed, r, c);
      y.at(r, c) = acc;
    }
  }
  return y;
}

Eigen::MatrixXd polarized_system_matrix(const PolarizedFilterBank& bank,
                                        const FilterArrayPattern& pattern,
                                        int height, int width) {
  const int L = bank.grid.count;
  const size_t rows = static_cast<size_t>(height) * width;
  if (rows * rows * 3 * L > 1000000ull)
    throw InvalidArgument("polarized_system_matrix: instance exceeds 1e6-entry guard");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, rows * 3 * L);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const size_t px = static_cast<size_t>(r) * width + c;
      const int k = pattern.filter_at(r, c);
      const double theta = bank.orientation_deg[k] * kPi / 180.0;
      const double c2 = std::cos(2.0 * theta), s2 = std::sin(2.0 * theta);
      for (int i = 0; i < L; ++i) {
        const double tsum = bank.te(k, i) + bank.tm(k, i);
        const double tdif = bank.te(k, i) - bank.tm(k, i);
        const size_t band = static_cast<size_t>(i) * rows + px;
        m(px, band) = 0.5 * tsum;                        // s0 block
        m(px, rows * L + band) = 0.5 * tdif * c2;        // s1 block
        m(px, 2 * rows * L + band) = 0.5 * tdif * s2;    // s2 block
      }
    }
  }
  return m;
}

}  // namespace msfa
