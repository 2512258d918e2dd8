#include "msfa/synth.hpp"

#include <algorithm>
#include <cmath>

#include "msfa/basis.hpp"
#include "msfa/rng.hpp"

namespace msfa {

namespace {

// Seeded white noise blurred by a periodic Gaussian of the given correlation
// length, then min-max normalized to [0, 1].
std::vector<double> smooth_map(int height, int width, double length,
                               std::uint64_t seed, std::uint64_t channel) {
  std::vector<double> m(static_cast<size_t>(height) * width);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c)
      m[static_cast<size_t>(r) * width + c] =
          rng::gaussian(seed, channel, r * 131071ull + c);
  if (length > 0.0) {
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * length)));
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int d = -radius; d <= radius; ++d) {
      k[d + radius] = std::exp(-0.5 * d * d / (length * length));
      sum += k[d + radius];
    }
    for (double& v : k) v /= sum;
    auto blur = [&](bool rows) {
      std::vector<double> out(m.size(), 0.0);
      for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) {
          double acc = 0.0;
          for (int d = -radius; d <= radius; ++d) {
            int rr = rows ? ((r + d) % height + height) % height : r;
            int cc = rows ? c : ((c + d) % width + width) % width;
            acc += k[d + radius] * m[static_cast<size_t>(rr) * width + cc];
          }
          out[static_cast<size_t>(r) * width + c] = acc;
        }
      m.swap(out);
    };
    blur(true);
    blur(false);
  }
  const auto [lo_it, hi_it] = std::minmax_element(m.begin(), m.end());
  const double lo = *lo_it, span = *hi_it - *lo_it;
  for (double& v : m) v = span > 0.0 ? (v - lo) / span : 0.5;
  return m;
}

}  // namespace

MultispectralImage synth_cube(int height, int width, const SpectralGrid& grid,
                              int basis_dim, double smoothness,
                              std::uint64_t seed) {
  const Eigen::MatrixXd phi = spectral_basis(grid, basis_dim);
  std::vector<std::vector<double>> coeffs;
  coeffs.reserve(basis_dim);
  for (int j = 0; j < basis_dim; ++j)
    coeffs.push_back(smooth_map(height, width, smoothness, seed, j));

  MultispectralImage img(height, width, grid);
  double peak = 0.0;
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      const size_t px = static_cast<size_t>(r) * width + c;
      for (int b = 0; b < grid.count; ++b) {
        double v = 0.0;
        for (int j = 0; j < basis_dim; ++j) v += coeffs[j][px] * phi(b, j);
        img.at(r, c, b) = v;
        peak = std::max(peak, v);
      }
    }
  if (peak > 0.0)
    for (double& v : img.data) v /= peak;
  return img;
}

StokesCube synth_stokes(int height, int width, const SpectralGrid& grid,
                        int basis_dim, double smoothness,
                        const MosaickedImage& dop, const MosaickedImage& aolp,
                        std::uint64_t seed) {
  if (dop.height != height || dop.width != width || aolp.height != height ||
      aolp.width != width)
    throw InvalidArgument("synth_stokes: dop/aolp map shape mismatch");
  for (double v : dop.data)
    if (!(v >= 0.0 && v <= 1.0))
      throw InvalidArgument("synth_stokes: dop must lie in [0, 1]");

  StokesCube s(height, width, grid);
  s.s0 = synth_cube(height, width, grid, basis_dim, smoothness, seed);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      const double p = dop.at(r, c);
      const double a = aolp.at(r, c);
      for (int b = 0; b < grid.count; ++b) {
        const double i0 = s.s0.at(r, c, b);
        s.s1.at(r, c, b) = p * i0 * std::cos(2.0 * a);
        s.s2.at(r, c, b) = p * i0 * std::sin(2.0 * a);
      }
    }
  return s;
}

StokesCube synth_stokes(int height, int width, const SpectralGrid& grid,
                        int basis_dim, double smoothness, double dop,
                        double aolp, std::uint64_t seed) {
  MosaickedImage d(height, width), a(height, width);
  std::fill(d.data.begin(), d.data.end(), dop);
  std::fill(a.data.begin(), a.data.end(), aolp);
  return synth_stokes(height, width, grid, basis_dim, smoothness, d, a, seed);
}

MultispectralImage synth_color_chart(const SpectralGrid& grid, int patch_px,
                                     std::uint64_t seed) {
  if (patch_px < 1) throw InvalidArgument("synth_color_chart: patch_px >= 1");
  const int rows = 4, cols = 6;
  const int B = std::min(6, grid.count);
  const Eigen::MatrixXd phi = spectral_basis(grid, B);
  MultispectralImage img(rows * patch_px, cols * patch_px, grid);
  for (int pr = 0; pr < rows; ++pr)
    for (int pc = 0; pc < cols; ++pc) {
      const int patch = pr * cols + pc;
      Eigen::VectorXd coeff(B);
      for (int j = 0; j < B; ++j)
        coeff[j] = rng::uniform(seed, patch, j);
      Eigen::VectorXd spectrum = phi * coeff;
      spectrum /= std::max(1.0, spectrum.maxCoeff());
      for (int r = pr * patch_px; r < (pr + 1) * patch_px; ++r)
        for (int c = pc * patch_px; c < (pc + 1) * patch_px; ++c)
          for (int b = 0; b < grid.count; ++b) img.at(r, c, b) = spectrum[b];
    }
  return img;
}

}  // namespace msfa
