#pragma once

#include "msfa/types.hpp"

namespace msfa {

// 10*log10(peak^2 / MSE), MSE averaged over all pixels and bands.
// Returns +infinity when the cubes are identical.
double psnr(const MultispectralImage& reference, const MultispectralImage& test,
            double peak = 1.0);

double rmse(const MultispectralImage& reference, const MultispectralImage& test);

// Mean over pixels of the angle between reference and test spectra.
// Pixels where both spectra are zero are skipped.
double spectral_angle(const MultispectralImage& reference,
                      const MultispectralImage& test);

}  // namespace msfa
