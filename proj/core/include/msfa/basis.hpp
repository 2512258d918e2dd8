#pragma once

#include <Eigen/Dense>

#include "msfa/types.hpp"

namespace msfa {

// L x B matrix of nonnegative raised-cosine bumps with evenly spaced centers
// spanning the grid. B == 1 gives the constant function.
Eigen::MatrixXd spectral_basis(const SpectralGrid& grid, int dim);

}  // namespace msfa
