#pragma once

#include <cstdint>

#include "msfa/types.hpp"

namespace msfa {

// Synthetic cube: nonnegative combinations of `basis_dim` raised-cosine
// spectra with spatially smooth seeded coefficient maps, rescaled to [0, 1].
MultispectralImage synth_cube(int height, int width, const SpectralGrid& grid,
                              int basis_dim, double smoothness,
                              std::uint64_t seed);

// s0 from synth_cube; s1 = dop*s0*cos(2*aolp), s2 = dop*s0*sin(2*aolp).
// dop and aolp are per-pixel maps (aolp in radians); the cone invariant holds
// by construction.
StokesCube synth_stokes(int height, int width, const SpectralGrid& grid,
                        int basis_dim, double smoothness,
                        const MosaickedImage& dop, const MosaickedImage& aolp,
                        std::uint64_t seed);

// Convenience overload with spatially constant dop / aolp.
StokesCube synth_stokes(int height, int width, const SpectralGrid& grid,
                        int basis_dim, double smoothness, double dop,
                        double aolp, std::uint64_t seed);

// 4x6 layout of distinct smooth patch spectra, `patch_px` pixels per patch
// side: a synthetic stand-in for a physical color chart.
MultispectralImage synth_color_chart(const SpectralGrid& grid, int patch_px,
                                     std::uint64_t seed);

}  // namespace msfa
