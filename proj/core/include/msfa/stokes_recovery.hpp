#pragma once

#include <cstdint>
#include <vector>

#include "msfa/types.hpp"

namespace msfa {

enum class StokesMethod { kRidge, kTrainedWiener };

struct StokesRecoveryParams {
  // ridge route: Stokes state assumed constant per tile, spectra restricted
  // to a smooth raised-cosine basis of this dimension
  int basis_dim = 4;
  double ridge = 1e-8;
  // trained-wiener route
  const std::vector<StokesCube>* training = nullptr;
  int window_tiles = 1;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  // projection onto s1^2 + s2^2 <= s0^2, s0 >= 0 after the linear estimate
  bool cone_project = true;
};

StokesCube recover_stokes(const MosaickedImage& y,
                          const PolarizedFilterBank& bank,
                          const FilterArrayPattern& pattern,
                          StokesMethod method,
                          const StokesRecoveryParams& params);

// The s0 component of recover_stokes: non-polarized spectral reflectance.
MultispectralImage recover_spectrum_nonpolarized(
    const MosaickedImage& y, const PolarizedFilterBank& bank,
    const FilterArrayPattern& pattern, const StokesRecoveryParams& params);

// In place: clamp s0 at 0 and scale (s1, s2) down to the DOP <= 1 cone.
void project_stokes_cone(StokesCube& s);

}  // namespace msfa
