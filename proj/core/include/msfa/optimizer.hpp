#pragma once

#include <cstdint>
#include <vector>

#include "msfa/types.hpp"
#include "msfa/wiener.hpp"

namespace msfa {

struct OptimizerConfig {
  int max_outer_iters = 30;
  double barrier_init = 1e-2;      // log-barrier weight, halved on schedule
  int barrier_halve_every = 5;     // outer iterations per halving
  double gradient_step = 1e-2;
  double backtrack_factor = 0.5;
  int max_backtracks = 12;
  double stop_tol = 1e-7;          // relative objective change
  double smoothness_weight = 1e-3; // penalty on second differences per filter
  double fd_step = 1e-6;           // forward-difference step on sensitivities
  int subsample_pixels = 0;        // 0 = use every pixel for the MSE term
  std::uint64_t seed = 0;
  // inner Wiener retraining
  double noise_sigma = 0.0;
  int window_tiles = 3;
  double ridge = 1e-6;
};

struct TraceRecord {
  int iter = 0;
  double objective = 0.0;  // mean squared reconstruction error, training set
  double barrier_weight = 0.0;
  double step = 0.0;
  bool accepted = false;
};

struct OptimizationTrace {
  std::vector<TraceRecord> records;
};

struct OptimizationResult {
  SensitivityMatrix sensitivity;
  WienerModel model;
  OptimizationTrace trace;
};

// Alternates closed-form Wiener retraining with a barrier-penalized descent
// step on the sensitivities. A step is accepted only when the post-retraining
// objective does not increase.
OptimizationResult optimize_sensitivity(
    const std::vector<MultispectralImage>& training,
    const FilterArrayPattern& pattern, const SensitivityMatrix& init,
    const OptimizerConfig& cfg);

// Mean squared reconstruction error over the training set for sensitivities S
// with a freshly trained Wiener model. This is the data term the optimizer
// descends; exposed so its finite-difference gradient can be checked.
double reconstruction_mse(const std::vector<MultispectralImage>& training,
                          const FilterArrayPattern& pattern,
                          const SensitivityMatrix& sens,
                          const OptimizerConfig& cfg);

// Entries i.i.d. uniform on [0.05, 0.95], deterministic per seed.
SensitivityMatrix random_init_sensitivity(int num_filters,
                                          const SpectralGrid& grid,
                                          std::uint64_t seed);

void write_trace_csv(std::ostream& out, const OptimizationTrace& trace);

}  // namespace msfa
