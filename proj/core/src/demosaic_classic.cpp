#include "msfa/demosaic_classic.hpp"

#include <algorithm>
#include <cmath>

namespace msfa {

namespace {

// Separable periodic convolution along one axis. Kernel is indexed
// [-radius, radius] as weights[d + radius].
void conv1d_periodic(std::vector<double>& plane, int height, int width,
                     const std::vector<double>& weights, int radius,
                     bool along_rows) {
  std::vector<double> out(plane.size(), 0.0);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      double acc = 0.0;
      for (int d = -radius; d <= radius; ++d) {
        int rr = r, cc = c;
        if (along_rows) {
          rr = (r + d) % height;
          if (rr < 0) rr += height;
        } else {
          cc = (c + d) % width;
          if (cc < 0) cc += width;
        }
        acc += weights[d + radius] * plane[static_cast<size_t>(rr) * width + cc];
      }
      out[static_cast<size_t>(r) * width + c] = acc;
    }
  }
  plane.swap(out);
}

std::vector<double> triangle_kernel(int period) {
  const int radius = period - 1;
  std::vector<double> w(2 * radius + 1);
  for (int d = -radius; d <= radius; ++d)
    w[d + radius] = 1.0 - static_cast<double>(std::abs(d)) / period;
  return w;
}

std::vector<double> gaussian_kernel(double sigma, int* radius_out) {
  const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * sigma)));
  std::vector<double> w(2 * radius + 1);
  double sum = 0.0;
  for (int d = -radius; d <= radius; ++d) {
    w[d + radius] = std::exp(-0.5 * d * d / (sigma * sigma));
    sum += w[d + radius];
  }
  for (double& v : w) v /= sum;
  *radius_out = radius;
  return w;
}

// Interpolates the scattered samples (value where mask==1) of one band plane
// by normalized convolution with the tile-period triangle kernel.
std::vector<double> normalized_conv(const std::vector<double>& values,
                                    const std::vector<double>& mask, int height,
                                    int width, int period_r, int period_c) {
  std::vector<double> num = values, den = mask;
  const auto kr = triangle_kernel(period_r);
  const auto kc = triangle_kernel(period_c);
  conv1d_periodic(num, height, width, kr, period_r - 1, true);
  conv1d_periodic(num, height, width, kc, period_c - 1, false);
  conv1d_periodic(den, height, width, kr, period_r - 1, true);
  conv1d_periodic(den, height, width, kc, period_c - 1, false);
  for (size_t i = 0; i < num.size(); ++i) num[i] /= den[i];
  return num;
}

void check_sampling(const MosaickedImage& y, const BandSampling& s) {
  for (int b = 0; b < s.num_bands(); ++b)
    if (s.cells_per_band[b].empty())
      throw InvalidArgument("demosaic: band " + std::to_string(b) +
                            " has an empty sample mask");
  if (y.height <= 0 || y.width <= 0)
    throw InvalidArgument("demosaic: empty mosaic");
}

}  // namespace

bool BandSampling::sampled(int r, int c, int band) const {
  const int cell = (r % pattern.tile_height) * pattern.tile_width +
                   (c % pattern.tile_width);
  const auto& cells = cells_per_band[band];
  return std::find(cells.begin(), cells.end(), cell) != cells.end();
}

int BandSampling::densest_band() const {
  int best = 0;
  for (int b = 1; b < num_bands(); ++b)
    if (cells_per_band[b].size() > cells_per_band[best].size()) best = b;
  return best;
}

BandSampling band_sampling_identity(const FilterArrayPattern& pattern,
                                    int num_bands) {
  std::vector<int> map(pattern.num_filters);
  for (int k = 0; k < pattern.num_filters; ++k) map[k] = k;
  return band_sampling_from_map(pattern, map, num_bands);
}

BandSampling band_sampling_from_map(const FilterArrayPattern& pattern,
                                    const std::vector<int>& band_of_filter,
                                    int num_bands) {
  if (static_cast<int>(band_of_filter.size()) != pattern.num_filters)
    throw InvalidArgument("band_sampling: one band per filter required");
  BandSampling s;
  s.pattern = pattern;
  s.cells_per_band.assign(num_bands, {});
  for (int cell = 0; cell < pattern.tile_area(); ++cell) {
    const int b = band_of_filter[pattern.cells[cell]];
    if (b < 0 || b >= num_bands)
      throw InvalidArgument("band_sampling: band index out of range");
    s.cells_per_band[b].push_back(cell);
  }
  for (int b = 0; b < num_bands; ++b)
    if (s.cells_per_band[b].empty())
      throw InvalidArgument("band_sampling: band " + std::to_string(b) +
                            " has no sample cells");
  return s;
}

MultispectralImage demosaic_bilinear(const MosaickedImage& y,
                                     const BandSampling& sampling,
                                     const SpectralGrid& grid) {
  check_sampling(y, sampling);
  const int H = y.height, W = y.width;
  const int pr = sampling.pattern.tile_height, pc = sampling.pattern.tile_width;
  MultispectralImage out(H, W, grid);
  for (int b = 0; b < grid.count; ++b) {
    std::vector<double> mask(static_cast<size_t>(H) * W, 0.0);
    std::vector<double> vals(static_cast<size_t>(H) * W, 0.0);
    for (int r = 0; r < H; ++r)
      for (int c = 0; c < W; ++c)
        if (sampling.sampled(r, c, b)) {
          mask[static_cast<size_t>(r) * W + c] = 1.0;
          vals[static_cast<size_t>(r) * W + c] = y.at(r, c);
        }
    auto interp = normalized_conv(vals, mask, H, W, pr, pc);
    double* plane = out.band_plane(b);
    for (size_t i = 0; i < interp.size(); ++i)
      plane[i] = mask[i] > 0.0 ? vals[i] : interp[i];
  }
  return out;
}

MultispectralImage demosaic_interband(const MosaickedImage& y,
                                      const BandSampling& sampling,
                                      const SpectralGrid& grid,
                                      double smoothing_sigma) {
  MultispectralImage base = demosaic_bilinear(y, sampling, grid);
  if (smoothing_sigma <= 0.0) return base;
  const int H = y.height, W = y.width;
  const int ref = sampling.densest_band();
  int radius = 0;
  const auto gk = gaussian_kernel(smoothing_sigma, &radius);

  MultispectralImage out = base;
  const double* ref_plane = base.band_plane(ref);
  for (int b = 0; b < grid.count; ++b) {
    if (b == ref) continue;
    std::vector<double> diff(static_cast<size_t>(H) * W);
    const double* bp = base.band_plane(b);
    for (size_t i = 0; i < diff.size(); ++i) diff[i] = bp[i] - ref_plane[i];
    conv1d_periodic(diff, H, W, gk, radius, true);
    conv1d_periodic(diff, H, W, gk, radius, false);
    double* op = out.band_plane(b);
    for (int r = 0; r < H; ++r)
      for (int c = 0; c < W; ++c)
        if (!sampling.sampled(r, c, b))
          op[static_cast<size_t>(r) * W + c] =
              ref_plane[static_cast<size_t>(r) * W + c] +
              diff[static_cast<size_t>(r) * W + c];
  }
  return out;
}

MultispectralImage demosaic_ppi(const MosaickedImage& y,
                                const BandSampling& sampling,
                                const SpectralGrid& grid, int kernel_radius) {
  check_sampling(y, sampling);
  const int H = y.height, W = y.width;
  const int pr = sampling.pattern.tile_height, pc = sampling.pattern.tile_width;
  if (kernel_radius < 1) kernel_radius = std::max(pr, pc);
  if (2 * kernel_radius + 1 < std::max(pr, pc))
    throw InvalidArgument("demosaic_ppi: box kernel must cover one full tile");

  // pseudo-panchromatic guide: normalized box average of the raw mosaic
  std::vector<double> ppi = y.data;
  std::vector<double> box(2 * kernel_radius + 1,
                          1.0 / (2 * kernel_radius + 1));
  conv1d_periodic(ppi, H, W, box, kernel_radius, true);
  conv1d_periodic(ppi, H, W, box, kernel_radius, false);

  MultispectralImage out(H, W, grid);
  for (int b = 0; b < grid.count; ++b) {
    std::vector<double> mask(static_cast<size_t>(H) * W, 0.0);
    std::vector<double> diff(static_cast<size_t>(H) * W, 0.0);
    for (int r = 0; r < H; ++r)
      for (int c = 0; c < W; ++c)
        if (sampling.sampled(r, c, b)) {
          const size_t i = static_cast<size_t>(r) * W + c;
          mask[i] = 1.0;
          diff[i] = y.at(r, c) - ppi[i];
        }
    auto interp = normalized_conv(diff, mask, H, W, pr, pc);
    double* plane = out.band_plane(b);
    for (int r = 0; r < H; ++r)
      for (int c = 0; c < W; ++c) {
        const size_t i = static_cast<size_t>(r) * W + c;
        plane[i] = mask[i] > 0.0 ? y.at(r, c) : ppi[i] + interp[i];
      }
  }
  return out;
}

}  // namespace msfa
