#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "msfa/types.hpp"

namespace msfa {

// Per-phase linear estimator from a window of the mosaic to the spectrum (or
// Stokes vector) at the window's center pixel. One matrix per tile cell.
struct WienerModel {
  int tile_height = 0;
  int tile_width = 0;
  int window_tiles = 0;  // odd; window spans window_tiles x window_tiles tiles
  int output_dim = 0;    // L for spectra, 3L for Stokes recovery
  double ridge = 0.0;
  std::vector<Eigen::MatrixXd> matrices;  // tile_area entries, output_dim x D

  int window_height() const { return window_tiles * tile_height; }
  int window_width() const { return window_tiles * tile_width; }
  int window_dim() const { return window_height() * window_width(); }
};

// Ridge-regularized per-phase regression from simulated mosaics of the
// training cubes: W_p = X Y^T (Y Y^T + ridge I)^-1, periodic boundaries.
WienerModel wiener_train(const std::vector<MultispectralImage>& training,
                         const FilterArrayPattern& pattern,
                         const SensitivityMatrix& sens, double noise_sigma,
                         std::uint64_t noise_seed, int window_tiles,
                         double ridge);

// Same machinery with 3L outputs per pixel, trained on Stokes cubes mosaicked
// through the polarized forward model.
WienerModel wiener_train_stokes(const std::vector<StokesCube>& training,
                                const FilterArrayPattern& pattern,
                                const PolarizedFilterBank& bank,
                                double noise_sigma, std::uint64_t noise_seed,
                                int window_tiles, double ridge);

MultispectralImage wiener_apply(const WienerModel& model,
                                const MosaickedImage& y,
                                const SpectralGrid& grid);

StokesCube wiener_apply_stokes(const WienerModel& model,
                               const MosaickedImage& y,
                               const SpectralGrid& grid);

// Versioned binary container ("WIEN1"), row-major 64-bit float matrices.
void write_wiener_model(std::ostream& out, const WienerModel& model);
WienerModel read_wiener_model(std::istream& in);

}  // namespace msfa
