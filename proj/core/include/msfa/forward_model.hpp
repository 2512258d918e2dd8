#pragma once

#include <Eigen/Dense>

#include "msfa/types.hpp"

namespace msfa {

// y(r,c) = sum_i sens[f(r,c), i] * x(r,c,i) + n(r,c).
// Noise is zero-mean Gaussian of sd noise.sigma, keyed by (seed, r, c).
MosaickedImage mosaic_apply(const MultispectralImage& x,
                            const FilterArrayPattern& pattern,
                            const SensitivityMatrix& sens,
                            const NoiseSpec& noise = {});

// Adjoint of the noiseless operator: xT(r,c,i) = sens[f(r,c), i] * y(r,c).
MultispectralImage mosaic_adjoint(const MosaickedImage& y,
                                  const FilterArrayPattern& pattern,
                                  const SensitivityMatrix& sens);

// Dense (H*W) x (H*W*L) matrix whose action on vec(x) (band-major, matching
// MultispectralImage::data) equals noiseless mosaic_apply. Guarded to
// <= 1e6 entries.
Eigen::MatrixXd build_system_matrix(const FilterArrayPattern& pattern,
                                    const SensitivityMatrix& sens, int height,
                                    int width);

// Linear-diattenuator response restricted to (S0, S1, S2):
// y = sum_i 1/2 [ (te+tm) s0 + (te-tm) (cos2t s1 + sin2t s2) ] + n.
MosaickedImage polarized_mosaic(const StokesCube& s,
                                const PolarizedFilterBank& bank,
                                const FilterArrayPattern& pattern,
                                const NoiseSpec& noise = {});

// Dense (H*W) x (H*W*3L) matrix acting on [vec(s0); vec(s1); vec(s2)].
Eigen::MatrixXd polarized_system_matrix(const PolarizedFilterBank& bank,
                                        const FilterArrayPattern& pattern,
                                        int height, int width);

}  // namespace msfa
