#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "msfa/types.hpp"

namespace msfa {

// Average nearest-neighbor distance per band, on the torus defined by the
// tile. A band sampled at every pixel scores 0.
struct AnndReport {
  std::vector<double> per_band;
  double overall = 0.0;
};

AnndReport annd(const FilterArrayPattern& pattern);

struct AnnealSchedule {
  int probe_moves = 100;          // uphill probe used to set T0
  double cooling = 0.95;          // geometric factor
  int moves_per_temperature = 100;
  int stop_after_no_improve = 10000;
  int max_moves = 200000;
  int restarts = 4;               // independent seeded restarts, best wins
};

// Simulated annealing over cell assignments minimizing annd(..).overall.
// With `counts` given the per-filter cell counts are fixed and moves are
// swaps; without, single-cell reassignments are also allowed (rejecting
// moves that would empty a filter). Deterministic per seed.
FilterArrayPattern optimize_pattern(int tile_height, int tile_width, int K,
                                    const std::optional<std::vector<int>>& counts,
                                    const AnnealSchedule& schedule,
                                    std::uint64_t seed);

struct PatternPreset {
  FilterArrayPattern pattern;
  std::optional<SensitivityMatrix> sensitivity;
  std::optional<PolarizedFilterBank> bank;
};

// Presets: "bayer", "brauers6", "monno5", "fig7-pol16".
// The spectral curves attached to the presets are smooth synthetic stand-ins
// on the 420-720nm / 10nm grid; measured device curves are not bundled.
PatternPreset preset_pattern(const std::string& name);

}  // namespace msfa
