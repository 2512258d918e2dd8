#pragma once

#include <vector>

#include "msfa/types.hpp"

namespace msfa {

// Per-band sampling geometry for the classic-MSFA regime where each filter is
// a (near-)delta sample of one native band. Band b is considered sampled at
// the pattern cells listed in cells_per_band[b].
struct BandSampling {
  FilterArrayPattern pattern;
  std::vector<std::vector<int>> cells_per_band;  // flat tile-cell indices

  int num_bands() const { return static_cast<int>(cells_per_band.size()); }
  bool sampled(int r, int c, int band) const;
  // Band with the most sample cells per tile, ties broken by lowest index.
  int densest_band() const;
};

// Delta association: filter k samples band band_of_filter[k]. With L == K the
// identity association is the common case.
BandSampling band_sampling_identity(const FilterArrayPattern& pattern, int num_bands);
BandSampling band_sampling_from_map(const FilterArrayPattern& pattern,
                                    const std::vector<int>& band_of_filter,
                                    int num_bands);

// Per-band normalized-convolution interpolation with a separable triangle
// kernel of half-width equal to the tile period; periodic boundaries.
// Sampled pixels reproduce their measured values exactly.
MultispectralImage demosaic_bilinear(const MosaickedImage& y,
                                     const BandSampling& sampling,
                                     const SpectralGrid& grid);

// Bilinear start, then Gaussian smoothing of the difference planes against
// the densest-sampled reference band.
MultispectralImage demosaic_interband(const MosaickedImage& y,
                                      const BandSampling& sampling,
                                      const SpectralGrid& grid,
                                      double smoothing_sigma = 1.0);

// Pseudo-panchromatic-image guided interpolation: box-filtered mosaic as the
// guide, per-band differences interpolated by normalized convolution.
// kernel_radius < 1 picks the default (max tile dimension).
MultispectralImage demosaic_ppi(const MosaickedImage& y,
                                const BandSampling& sampling,
                                const SpectralGrid& grid,
                                int kernel_radius = 0);

}  // namespace msfa
