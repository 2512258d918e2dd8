#include "msfa/experiment.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "msfa/colorimetry.hpp"
#include "msfa/demosaic_classic.hpp"
#include "msfa/forward_model.hpp"
#include "msfa/io.hpp"
#include "msfa/metrics.hpp"
#include "msfa/pattern.hpp"
#include "msfa/synth.hpp"
#include "msfa/vtv.hpp"
#include "msfa/wiener.hpp"

namespace msfa {

namespace {

using nlohmann::json;

MultispectralImage load_input(const json& spec,
                              const std::filesystem::path& base,
                              std::uint64_t seed) {
  const auto& input = spec.at("input");
  if (input.is_string()) {
    const std::filesystem::path p = base / input.get<std::string>();
    if (!std::filesystem::exists(p))
      throw FormatError("experiment: input file does not exist: " + p.string());
    return load_cube(p);
  }
  const auto& sy = input.at("synth");
  SpectralGrid grid{sy.value("start_nm", 420.0), sy.value("step_nm", 10.0),
                    sy.value("bands", 31)};
  if (sy.value("chart", false))
    return synth_color_chart(grid, sy.value("patch_px", 8), seed);
  return synth_cube(sy.at("height"), sy.at("width"), grid,
                    sy.value("basis_dim", 4), sy.value("smoothness", 3.0),
                    seed);
}

FilterArrayPattern load_pattern_spec(const json& spec,
                                     const std::filesystem::path& base,
                                     SensitivityMatrix* preset_sens) {
  const auto& pat = spec.at("pattern");
  if (pat.is_string()) {
    const std::filesystem::path p = base / pat.get<std::string>();
    if (!std::filesystem::exists(p))
      throw FormatError("experiment: pattern file does not exist: " + p.string());
    return load_pattern_text(p);
  }
  const PatternPreset preset = preset_pattern(pat.at("preset"));
  if (preset.sensitivity) *preset_sens = *preset.sensitivity;
  return preset.pattern;
}

SensitivityMatrix load_sens_spec(const json& spec,
                                 const std::filesystem::path& base,
                                 const FilterArrayPattern& pattern,
                                 const SpectralGrid& grid,
                                 const SensitivityMatrix& preset_sens) {
  if (!spec.contains("sensitivity")) {
    if (preset_sens.num_filters == pattern.num_filters &&
        preset_sens.grid == grid)
      return preset_sens;
    throw FormatError("experiment: no sensitivity given and the pattern "
                      "preset provides none for this grid");
  }
  const auto& s = spec.at("sensitivity");
  if (s.is_string()) {
    const std::filesystem::path p = base / s.get<std::string>();
    if (!std::filesystem::exists(p))
      throw FormatError("experiment: sensitivity file does not exist: " +
                        p.string());
    return load_sensitivity_csv(p);
  }
  if (s.value("delta", false)) {
    // filter k samples band k (requires K <= L)
    SensitivityMatrix m(pattern.num_filters, grid);
    for (int k = 0; k < pattern.num_filters; ++k)
      m.at(k, k % grid.count) = 1.0;
    return m;
  }
  throw FormatError("experiment: unsupported sensitivity spec");
}

std::string metrics_csv(const ExperimentReport& rep) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "psnr_db,rmse,spectral_angle_rad\n%.17g,%.17g,%.17g\n",
                rep.psnr_db, rep.rmse, rep.spectral_angle_rad);
  return buf;
}

std::string spectra_csv(const MultispectralImage& ref,
                        const MultispectralImage& rec) {
  // Fig.9-style data: wavelength vs reference vs recovered at probe pixels
  // placed on a coarse grid over the image.
  std::ostringstream out;
  out << "wavelength_nm";
  std::vector<std::pair<int, int>> probes;
  for (int pr = 0; pr < 2; ++pr)
    for (int pc = 0; pc < 2; ++pc) {
      const int r = (2 * pr + 1) * ref.height / 4;
      const int c = (2 * pc + 1) * ref.width / 4;
      probes.emplace_back(r, c);
      out << ",ref_r" << r << "c" << c << ",rec_r" << r << "c" << c;
    }
  out << "\n";
  char buf[64];
  for (int b = 0; b < ref.grid.count; ++b) {
    std::snprintf(buf, sizeof(buf), "%.17g", ref.grid.wavelength(b));
    out << buf;
    for (auto [r, c] : probes) {
      std::snprintf(buf, sizeof(buf), ",%.17g,%.17g", ref.at(r, c, b),
                    rec.at(r, c, b));
      out << buf;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace

ExperimentReport run_experiment(const std::filesystem::path& spec_path) {
  std::ifstream in(spec_path);
  if (!in)
    throw FormatError("experiment: cannot open spec " + spec_path.string());
  json spec;
  try {
    in >> spec;
  } catch (const json::exception& e) {
    throw FormatError("experiment: malformed spec JSON: " + std::string(e.what()));
  }

  try {
    const std::filesystem::path base = spec_path.parent_path();
    const std::uint64_t seed = spec.at("seed");
    const MultispectralImage reference = load_input(spec, base, seed);

    SensitivityMatrix preset_sens;
    const FilterArrayPattern pattern =
        load_pattern_spec(spec, base, &preset_sens);
    const SensitivityMatrix sens =
        load_sens_spec(spec, base, pattern, reference.grid, preset_sens);

    const double sigma = spec.value("noise_sigma", 0.0);
    MosaickedImage y = mosaic_apply(reference, pattern, sens, {sigma, seed});
    if (spec.value("quantize_8bit", false))
      for (double& v : y.data)
        v = std::round(std::fmin(1.0, std::fmax(0.0, v)) * 255.0) / 255.0;

    const std::string method = spec.at("method");
    const json params = spec.value("params", json::object());
    MultispectralImage recovered;
    if (method == "bilinear" || method == "ibd" || method == "ppi") {
      const BandSampling sampling =
          band_sampling_identity(pattern, reference.grid.count);
      if (method == "bilinear")
        recovered = demosaic_bilinear(y, sampling, reference.grid);
      else if (method == "ibd")
        recovered = demosaic_interband(y, sampling, reference.grid,
                                       params.value("smoothing_sigma", 1.0));
      else
        recovered = demosaic_ppi(y, sampling, reference.grid,
                                 params.value("kernel_radius", 0));
    } else if (method == "vtv") {
      VtvConfig cfg;
      cfg.lambda = params.value("lambda", 0.01);
      cfg.max_iters = params.value("max_iters", 300);
      cfg.primal_step = params.value("primal_step", 0.25);
      cfg.dual_step = params.value("dual_step", 0.5);
      cfg.stop_tol = params.value("stop_tol", 1e-9);
      recovered = demosaic_vtv(y, pattern, sens, cfg).x;
    } else if (method == "wiener") {
      std::vector<MultispectralImage> training;
      if (params.contains("train_inputs")) {
        for (const auto& t : params.at("train_inputs")) {
          const std::filesystem::path p = base / t.get<std::string>();
          if (!std::filesystem::exists(p))
            throw FormatError("experiment: training file does not exist: " +
                              p.string());
          training.push_back(load_cube(p));
        }
      } else {
        training.push_back(reference);  // in-sample fit
      }
      const WienerModel model = wiener_train(
          training, pattern, sens, sigma, seed,
          params.value("window_tiles", 3), params.value("ridge", 1e-8));
      recovered = wiener_apply(model, y, reference.grid);
    } else {
      throw FormatError("experiment: unknown method '" + method + "'");
    }

    ExperimentReport rep;
    rep.psnr_db = psnr(reference, recovered, spec.value("peak", 1.0));
    rep.rmse = rmse(reference, recovered);
    rep.spectral_angle_rad = spectral_angle(reference, recovered);
    rep.output_dir = base / spec.at("output_dir").get<std::string>();

    std::filesystem::create_directories(rep.output_dir);
    save_text(rep.output_dir / "metrics.csv", metrics_csv(rep));
    save_text(rep.output_dir / "spectra.csv", spectra_csv(reference, recovered));
    save_cube(rep.output_dir / "mosaic.msic",
              [&] {
                MultispectralImage m(y.height, y.width, {0.0, 1.0, 1});
                m.data = y.data;
                return m;
              }());
    save_cube(rep.output_dir / "recovered.msic", recovered);
    if (spec.value("render", true)) {
      MultispectralImage clipped = recovered;
      for (double& v : clipped.data) v = std::fmax(0.0, v);
      save_png(rep.output_dir / "recovered.png",
               render_cube(clipped, d65_illuminant(), cie1931_cmf()));
      save_png(rep.output_dir / "reference.png",
               render_cube(reference, d65_illuminant(), cie1931_cmf()));
    }
    return rep;
  } catch (const json::exception& e) {
    throw FormatError("experiment: spec field error: " + std::string(e.what()));
  }
}

}  // namespace msfa
