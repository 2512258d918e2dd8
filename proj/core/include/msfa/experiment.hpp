#pragma once

#include <filesystem>
#include <string>

#include "msfa/types.hpp"

namespace msfa {

// Executes a declarative pipeline spec (JSON): load or synthesize the input
// cube, mosaic it, recover with the configured method, evaluate, and write
// metrics/outputs. Every output write is atomic and the whole run is
// byte-reproducible for a fixed spec.
struct ExperimentReport {
  double psnr_db = 0.0;
  double rmse = 0.0;
  double spectral_angle_rad = 0.0;
  std::filesystem::path output_dir;
};

ExperimentReport run_experiment(const std::filesystem::path& spec_path);

}  // namespace msfa
