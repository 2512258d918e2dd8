#pragma once

#include <vector>

#include "msfa/types.hpp"

namespace msfa {

// First-order primal-dual configuration for the VTV-regularized inversion.
// Convergence requires primal_step * dual_step * 8 <= 1 (8 bounds the squared
// norm of the forward-difference gradient operator).
struct VtvConfig {
  double lambda = 0.01;
  int max_iters = 500;
  double primal_step = 0.25;
  double dual_step = 0.5;
  double stop_tol = 1e-9;  // relative change of the iterate
};

struct VtvResult {
  MultispectralImage x;
  double objective = 0.0;  // lambda*VTV(x) + 0.5*||Ax - y||^2
  double residual = 0.0;   // ||Ax - y||
  int iterations = 0;
  std::vector<double> objective_trace;
};

// Channel-coupled total variation: sum over pixels of the Frobenius norm of
// the L x 2 forward-difference gradient stack, periodic boundaries.
double vtv_value(const MultispectralImage& x);

// Approximately solves min_x lambda*VTV(x) + 0.5*||mosaic_apply(x) - y||^2
// by the Chambolle-Pock primal-dual scheme.
VtvResult demosaic_vtv(const MosaickedImage& y, const FilterArrayPattern& pattern,
                       const SensitivityMatrix& sens, const VtvConfig& cfg);

}  // namespace msfa
