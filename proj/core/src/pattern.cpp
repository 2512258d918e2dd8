#include "msfa/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace msfa {

namespace {

double toroidal_dist2(int r1, int c1, int r2, int c2, int th, int tw) {
  int dr = std::abs(r1 - r2);
  int dc = std::abs(c1 - c2);
  dr = std::min(dr, th - dr);
  dc = std::min(dc, tw - dc);
  return static_cast<double>(dr) * dr + static_cast<double>(dc) * dc;
}

double annd_overall(const FilterArrayPattern& p) {
  return annd(p).overall;
}

FilterArrayPattern random_pattern(int th, int tw, int K,
                                  const std::optional<std::vector<int>>& counts,
                                  std::mt19937_64& gen) {
  FilterArrayPattern p;
  p.tile_height = th;
  p.tile_width = tw;
  p.num_filters = K;
  const int area = th * tw;
  p.cells.clear();
  if (counts) {
    for (int k = 0; k < K; ++k)
      p.cells.insert(p.cells.end(), (*counts)[k], k);
  } else {
    for (int k = 0; k < K; ++k) p.cells.push_back(k);
    std::uniform_int_distribution<int> pick(0, K - 1);
    while (static_cast<int>(p.cells.size()) < area)
      p.cells.push_back(pick(gen));
  }
  std::shuffle(p.cells.begin(), p.cells.end(), gen);
  return p;
}

FilterArrayPattern anneal_once(int th, int tw, int K,
                               const std::optional<std::vector<int>>& counts,
                               const AnnealSchedule& sched,
                               std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  const int area = th * tw;
  FilterArrayPattern cur = random_pattern(th, tw, K, counts, gen);
  double cur_cost = annd_overall(cur);
  FilterArrayPattern best = cur;
  double best_cost = cur_cost;

  std::uniform_int_distribution<int> cell_pick(0, area - 1);
  std::uniform_int_distribution<int> filt_pick(0, K - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto propose = [&](FilterArrayPattern& p) {
    if (!counts && unit(gen) < 0.5) {
      // reassign one cell, never emptying a filter
      for (int tries = 0; tries < 16; ++tries) {
        const int i = cell_pick(gen);
        const int k = filt_pick(gen);
        if (k == p.cells[i]) continue;
        if (std::count(p.cells.begin(), p.cells.end(), p.cells[i]) == 1)
          continue;
        p.cells[i] = k;
        return;
      }
    }
    for (int tries = 0; tries < 16; ++tries) {
      const int i = cell_pick(gen), j = cell_pick(gen);
      if (p.cells[i] == p.cells[j]) continue;
      std::swap(p.cells[i], p.cells[j]);
      return;
    }
  };

  // probe: set T0 so roughly half of uphill moves would be accepted
  std::vector<double> uphill;
  for (int m = 0; m < sched.probe_moves; ++m) {
    FilterArrayPattern trial = cur;
    propose(trial);
    const double d = annd_overall(trial) - cur_cost;
    if (d > 0) uphill.push_back(d);
  }
  double t = 1e-3;
  if (!uphill.empty()) {
    std::nth_element(uphill.begin(), uphill.begin() + uphill.size() / 2,
                     uphill.end());
    t = uphill[uphill.size() / 2] / std::log(2.0);
  }

  int since_improve = 0;
  for (int move = 0; move < sched.max_moves; ++move) {
    FilterArrayPattern trial = cur;
    propose(trial);
    const double trial_cost = annd_overall(trial);
    const double d = trial_cost - cur_cost;
    if (d <= 0 || unit(gen) < std::exp(-d / t)) {
      cur = std::move(trial);
      cur_cost = trial_cost;
    }
    if (cur_cost < best_cost - 1e-15) {
      best = cur;
      best_cost = cur_cost;
      since_improve = 0;
    } else if (++since_improve >= sched.stop_after_no_improve) {
      break;
    }
    if ((move + 1) % sched.moves_per_temperature == 0) t *= sched.cooling;
  }
  return best;
}

SensitivityMatrix gaussian_bank(int K, const SpectralGrid& g, double first_peak,
                                double last_peak, double width,
                                double amplitude) {
  SensitivityMatrix s(K, g);
  for (int k = 0; k < K; ++k) {
    const double peak =
        K == 1 ? first_peak : first_peak + (last_peak - first_peak) * k / (K - 1);
    for (int i = 0; i < g.count; ++i) {
      const double d = (g.wavelength(i) - peak) / width;
      s.at(k, i) = amplitude * std::exp(-0.5 * d * d);
    }
  }
  return s;
}

}  // namespace

AnndReport annd(const FilterArrayPattern& pattern) {
  const auto problems = validate(pattern);
  if (!problems.empty())
    throw InvalidArgument("annd: invalid pattern: " + problems.front());
  const int th = pattern.tile_height, tw = pattern.tile_width;
  AnndReport rep;
  rep.per_band.assign(pattern.num_filters, 0.0);
  for (int k = 0; k < pattern.num_filters; ++k) {
    double acc = 0.0;
    for (int r = 0; r < th; ++r) {
      for (int c = 0; c < tw; ++c) {
        double best = std::numeric_limits<double>::infinity();
        for (int r2 = 0; r2 < th; ++r2)
          for (int c2 = 0; c2 < tw; ++c2)
            if (pattern.cell(r2, c2) == k)
              best = std::min(best, toroidal_dist2(r, c, r2, c2, th, tw));
        acc += std::sqrt(best);
      }
    }
    rep.per_band[k] = acc / pattern.tile_area();
  }
  rep.overall = std::accumulate(rep.per_band.begin(), rep.per_band.end(), 0.0) /
                pattern.num_filters;
  return rep;
}

FilterArrayPattern optimize_pattern(int tile_height, int tile_width, int K,
                                    const std::optional<std::vector<int>>& counts,
                                    const AnnealSchedule& schedule,
                                    std::uint64_t seed) {
  const int area = tile_height * tile_width;
  if (K < 1 || K > area)
    throw InvalidArgument("optimize_pattern: need 1 <= K <= tile area");
  if (counts) {
    if (static_cast<int>(counts->size()) != K)
      throw InvalidArgument("optimize_pattern: counts size != K");
    if (std::accumulate(counts->begin(), counts->end(), 0) != area)
      throw InvalidArgument("optimize_pattern: counts must sum to tile area");
    if (std::any_of(counts->begin(), counts->end(), [](int c) { return c < 1; }))
      throw InvalidArgument("optimize_pattern: every filter needs >= 1 cell");
  }
  FilterArrayPattern best;
  double best_cost = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < std::max(1, schedule.restarts); ++restart) {
    FilterArrayPattern cand =
        anneal_once(tile_height, tile_width, K, counts, schedule,
                    seed + static_cast<std::uint64_t>(restart));
    const double cost = annd_overall(cand);
    if (cost < best_cost - 1e-15) {  // strict: earliest restart wins ties
      best = std::move(cand);
      best_cost = cost;
    }
  }
  return best;
}

PatternPreset preset_pattern(const std::string& name) {
  const SpectralGrid g{420.0, 10.0, 31};
  PatternPreset out;
  if (name == "bayer") {
    out.pattern = {2, 2, 4, {0, 1, 2, 3}};
    out.sensitivity = gaussian_bank(4, g, 460.0, 650.0, 45.0, 0.9);
  } else if (name == "brauers6") {
    out.pattern = {2, 3, 6, {0, 1, 2, 3, 4, 5}};
    out.sensitivity = gaussian_bank(6, g, 445.0, 690.0, 35.0, 0.9);
  } else if (name == "monno5") {
    // band 0 on the 8-cell checkerboard, the other four bands 2 cells each
    out.pattern = {4, 4, 5,
                   {0, 1, 0, 2,
                    3, 0, 4, 0,
                    0, 2, 0, 1,
                    4, 0, 3, 0}};
    out.sensitivity = gaussian_bank(5, g, 450.0, 680.0, 40.0, 0.9);
  } else if (name == "fig7-pol16") {
    // 4 lattice pitches x 4 orientations; row = pitch, column = orientation
    FilterArrayPattern p;
    p.tile_height = p.tile_width = 4;
    p.num_filters = 16;
    p.cells.resize(16);
    for (int i = 0; i < 16; ++i) p.cells[i] = i;
    out.pattern = p;

    const double pitches[4] = {265.0, 280.0, 290.0, 305.0};
    const double orients[4] = {0.0, 45.0, 90.0, 135.0};
    PolarizedFilterBank bank(16, g);
    for (int pi = 0; pi < 4; ++pi) {
      // peak wavelength scales with lattice pitch; TE and TM peaks split
      const double peak_te = 460.0 + (pitches[pi] - 265.0) * 2.2;
      const double peak_tm = peak_te + 45.0;
      for (int oi = 0; oi < 4; ++oi) {
        const int k = pi * 4 + oi;
        bank.orientation_deg[k] = orients[oi];
        for (int i = 0; i < g.count; ++i) {
          const double w = g.wavelength(i);
          const double dte = (w - peak_te) / 55.0;
          const double dtm = (w - peak_tm) / 65.0;
          bank.t_te[static_cast<size_t>(k) * g.count + i] =
              0.05 + 0.80 * std::exp(-0.5 * dte * dte);
          bank.t_tm[static_cast<size_t>(k) * g.count + i] =
              0.05 + 0.62 * std::exp(-0.5 * dtm * dtm);
        }
      }
    }
    out.bank = std::move(bank);
  } else {
    throw InvalidArgument("preset_pattern: unknown preset '" + name + "'");
  }
  return out;
}

}  // namespace msfa
