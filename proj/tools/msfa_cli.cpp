// Command-line front end for the MSFA simulation and recovery toolkit.

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>

#include "msfa/colorimetry.hpp"
#include "msfa/demosaic_classic.hpp"
#include "msfa/experiment.hpp"
#include "msfa/forward_model.hpp"
#include "msfa/io.hpp"
#include "msfa/metrics.hpp"
#include "msfa/optimizer.hpp"
#include "msfa/pattern.hpp"
#include "msfa/stokes_recovery.hpp"
#include "msfa/synth.hpp"
#include "msfa/vtv.hpp"
#include "msfa/wiener.hpp"

namespace {

using namespace msfa;

MultispectralImage mosaic_as_cube(const MosaickedImage& y) {
  MultispectralImage m(y.height, y.width, SpectralGrid{0.0, 1.0, 1});
  m.data = y.data;
  return m;
}

MosaickedImage cube_as_mosaic(const MultispectralImage& m) {
  if (m.grid.count != 1)
    throw FormatError("expected a single-plane mosaic file, got " +
                      std::to_string(m.grid.count) + " bands");
  MosaickedImage y(m.height, m.width);
  y.data = m.data;
  return y;
}

struct PatternArgs {
  std::string file;
  std::string preset;

  void add(CLI::App* cmd) {
    auto* f = cmd->add_option("--pattern", file, "pattern text file");
    auto* p = cmd->add_option("--preset", preset,
                              "preset name (bayer|brauers6|monno5|fig7-pol16)");
    f->excludes(p);
  }
  PatternPreset resolve() const {
    if (!preset.empty()) return preset_pattern(preset);
    if (file.empty())
      throw InvalidArgument("a --pattern file or --preset is required");
    return {load_pattern_text(file), std::nullopt, std::nullopt};
  }
};

SensitivityMatrix resolve_sens(const std::string& sens_file, bool delta,
                               const PatternPreset& preset,
                               const SpectralGrid& grid) {
  if (!sens_file.empty()) return load_sensitivity_csv(sens_file);
  if (delta) {
    SensitivityMatrix s(preset.pattern.num_filters, grid);
    for (int k = 0; k < s.num_filters; ++k) s.at(k, k % grid.count) = 1.0;
    return s;
  }
  if (preset.sensitivity) return *preset.sensitivity;
  throw InvalidArgument("no sensitivities: pass --sens, --delta, or a preset "
                        "that bundles curves");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multispectral filter array simulation, demosaicking and design"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "global deterministic seed")->capture_default_str();

  // ---- synth ----
  auto* synth = app.add_subcommand("synth", "generate a synthetic cube or Stokes cube");
  struct {
    std::string out;
    int height = 64, width = 64, bands = 31, basis_dim = 4, patch_px = 8;
    double start_nm = 420.0, step_nm = 10.0, smoothness = 3.0;
    bool chart = false, stokes = false;
    double dop = 0.0, aolp_deg = 0.0;
  } sy;
  synth->add_option("--out", sy.out)->required();
  synth->add_option("--height", sy.height);
  synth->add_option("--width", sy.width);
  synth->add_option("--bands", sy.bands);
  synth->add_option("--start-nm", sy.start_nm);
  synth->add_option("--step-nm", sy.step_nm);
  synth->add_option("--basis-dim", sy.basis_dim);
  synth->add_option("--smoothness", sy.smoothness);
  synth->add_flag("--chart", sy.chart, "4x6 color-chart layout");
  synth->add_option("--patch-px", sy.patch_px);
  synth->add_flag("--stokes", sy.stokes, "emit a Stokes cube");
  synth->add_option("--dop", sy.dop, "degree of linear polarization");
  synth->add_option("--aolp-deg", sy.aolp_deg, "angle of linear polarization");

  // ---- mosaic ----
  auto* mosaic = app.add_subcommand("mosaic", "simulate MSFA capture");
  struct {
    std::string cube, sens, out;
    PatternArgs pattern;
    bool delta = false;
    double sigma = 0.0;
  } mo;
  mosaic->add_option("--cube", mo.cube)->required();
  mo.pattern.add(mosaic);
  mosaic->add_option("--sens", mo.sens, "sensitivity CSV");
  mosaic->add_flag("--delta", mo.delta, "delta sensitivities (filter k at band k)");
  mosaic->add_option("--sigma", mo.sigma, "additive Gaussian noise sd");
  mosaic->add_option("--out", mo.out)->required();

  // ---- demosaic ----
  auto* demosaic = app.add_subcommand("demosaic", "recover a cube from a mosaic");
  struct {
    std::string mosaic, sens, out, method = "bilinear", model;
    PatternArgs pattern;
    bool delta = false;
    int bands = 31;
    double start_nm = 420.0, step_nm = 10.0;
    double smoothing_sigma = 1.0, lambda = 0.01;
    int kernel_radius = 0, max_iters = 300;
  } de;
  demosaic->add_option("--mosaic", de.mosaic)->required();
  de.pattern.add(demosaic);
  demosaic->add_option("--method", de.method)
      ->check(CLI::IsMember({"bilinear", "ibd", "ppi", "vtv", "wiener"}));
  demosaic->add_option("--sens", de.sens);
  demosaic->add_flag("--delta", de.delta);
  demosaic->add_option("--bands", de.bands);
  demosaic->add_option("--start-nm", de.start_nm);
  demosaic->add_option("--step-nm", de.step_nm);
  demosaic->add_option("--smoothing-sigma", de.smoothing_sigma);
  demosaic->add_option("--kernel-radius", de.kernel_radius);
  demosaic->add_option("--lambda", de.lambda);
  demosaic->add_option("--max-iters", de.max_iters);
  demosaic->add_option("--model", de.model, "Wiener model file (method=wiener)");
  demosaic->add_option("--out", de.out)->required();

  // ---- train-wiener ----
  auto* train = app.add_subcommand("train-wiener", "train per-phase Wiener matrices");
  struct {
    std::vector<std::string> cubes;
    std::string sens, out;
    PatternArgs pattern;
    bool delta = false;
    double sigma = 0.0, ridge = 1e-8;
    int window_tiles = 3;
  } tw;
  train->add_option("--train", tw.cubes, "training cube files")->required();
  tw.pattern.add(train);
  train->add_option("--sens", tw.sens);
  train->add_flag("--delta", tw.delta);
  train->add_option("--sigma", tw.sigma);
  train->add_option("--window-tiles", tw.window_tiles);
  train->add_option("--ridge", tw.ridge);
  train->add_option("--out", tw.out)->required();

  // ---- optimize-sens ----
  auto* osens = app.add_subcommand("optimize-sens",
                                   "jointly optimize sensitivities and Wiener matrices");
  struct {
    std::vector<std::string> cubes;
    std::string init, out_sens, out_model, out_trace;
    PatternArgs pattern;
    int iters = 30, window_tiles = 3, subsample = 0;
    double ridge = 1e-6, sigma = 0.0, smoothness_weight = 1e-3;
  } os;
  osens->add_option("--train", os.cubes)->required();
  os.pattern.add(osens);
  osens->add_option("--init", os.init, "initial sensitivity CSV (default: random interior)");
  osens->add_option("--iters", os.iters);
  osens->add_option("--window-tiles", os.window_tiles);
  osens->add_option("--ridge", os.ridge);
  osens->add_option("--sigma", os.sigma);
  osens->add_option("--subsample", os.subsample, "pixels per image for the MSE term");
  osens->add_option("--smoothness-weight", os.smoothness_weight);
  osens->add_option("--out-sens", os.out_sens)->required();
  osens->add_option("--out-model", os.out_model);
  osens->add_option("--out-trace", os.out_trace);

  // ---- optimize-pattern ----
  auto* opat = app.add_subcommand("optimize-pattern", "anneal a filter arrangement");
  struct {
    int tile_h = 4, tile_w = 4, num_filters = 4;
    std::vector<int> counts;
    std::string out;
    int max_moves = 200000, restarts = 4;
  } op;
  opat->add_option("--tile-h", op.tile_h);
  opat->add_option("--tile-w", op.tile_w);
  opat->add_option("--num-filters", op.num_filters);
  opat->add_option("--counts", op.counts, "per-filter cell counts");
  opat->add_option("--max-moves", op.max_moves);
  opat->add_option("--restarts", op.restarts);
  opat->add_option("--out", op.out)->required();

  // ---- annd ----
  auto* annd_cmd = app.add_subcommand("annd", "average nearest-neighbor distance");
  PatternArgs annd_pattern;
  annd_pattern.add(annd_cmd);

  // ---- render / swatches ----
  auto* render = app.add_subcommand("render", "render a cube to sRGB PNG");
  struct { std::string cube, out; } re;
  render->add_option("--cube", re.cube)->required();
  render->add_option("--out", re.out)->required();

  auto* swatches = app.add_subcommand("swatches", "render filter curves as sRGB swatches");
  struct { std::string sens, out; int size = 32; } sw;
  swatches->add_option("--sens", sw.sens)->required();
  swatches->add_option("--size", sw.size, "pixels per swatch side");
  swatches->add_option("--out", sw.out)->required();

  // ---- metrics ----
  auto* metrics = app.add_subcommand("metrics", "compare two cubes");
  struct { std::string reference, test; double peak = 1.0; } me;
  metrics->add_option("--reference", me.reference)->required();
  metrics->add_option("--test", me.test)->required();
  metrics->add_option("--peak", me.peak);

  // ---- simulate-pol / recover-pol ----
  auto* simpol = app.add_subcommand("simulate-pol", "polarized mosaicking");
  struct {
    std::string stokes, out, preset = "fig7-pol16";
    double sigma = 0.0;
  } sp;
  simpol->add_option("--stokes", sp.stokes)->required();
  simpol->add_option("--preset", sp.preset);
  simpol->add_option("--sigma", sp.sigma);
  simpol->add_option("--out", sp.out)->required();

  auto* recpol = app.add_subcommand("recover-pol", "Stokes-cube recovery");
  struct {
    std::string mosaic, out, out_s0, preset = "fig7-pol16", method = "ridge";
    std::vector<std::string> training;
    int basis_dim = 4, window_tiles = 1;
    double ridge = 1e-8;
  } rp;
  recpol->add_option("--mosaic", rp.mosaic)->required();
  recpol->add_option("--preset", rp.preset);
  recpol->add_option("--method", rp.method)->check(CLI::IsMember({"ridge", "wiener"}));
  recpol->add_option("--train", rp.training, "Stokes training files (method=wiener)");
  recpol->add_option("--basis-dim", rp.basis_dim);
  recpol->add_option("--window-tiles", rp.window_tiles);
  recpol->add_option("--ridge", rp.ridge);
  recpol->add_option("--out", rp.out, "recovered Stokes cube");
  recpol->add_option("--out-s0", rp.out_s0, "non-polarized spectral cube");

  // ---- run ----
  auto* run = app.add_subcommand("run", "execute a declarative experiment spec");
  std::string run_spec;
  run->add_option("--spec", run_spec)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      SpectralGrid grid{sy.start_nm, sy.step_nm, sy.bands};
      if (sy.stokes) {
        const StokesCube s =
            synth_stokes(sy.height, sy.width, grid, sy.basis_dim, sy.smoothness,
                         sy.dop, sy.aolp_deg * 3.14159265358979323846 / 180.0,
                         seed);
        save_stokes(sy.out, s);
      } else if (sy.chart) {
        save_cube(sy.out, synth_color_chart(grid, sy.patch_px, seed));
      } else {
        save_cube(sy.out, synth_cube(sy.height, sy.width, grid, sy.basis_dim,
                                     sy.smoothness, seed));
      }
      std::cout << "status=ok cmd=synth out=" << sy.out << " seed=" << seed << "\n";
    } else if (*mosaic) {
      const MultispectralImage cube = load_cube(mo.cube);
      const PatternPreset preset = mo.pattern.resolve();
      const SensitivityMatrix sens =
          resolve_sens(mo.sens, mo.delta, preset, cube.grid);
      const MosaickedImage y =
          mosaic_apply(cube, preset.pattern, sens, {mo.sigma, seed});
      save_cube(mo.out, mosaic_as_cube(y));
      std::cout << "status=ok cmd=mosaic out=" << mo.out
                << " sigma=" << fmt(mo.sigma) << " seed=" << seed << "\n";
    } else if (*demosaic) {
      const MosaickedImage y = cube_as_mosaic(load_cube(de.mosaic));
      const PatternPreset preset = de.pattern.resolve();
      const SpectralGrid grid{de.start_nm, de.step_nm, de.bands};
      MultispectralImage out;
      if (de.method == "wiener") {
        if (de.model.empty())
          throw InvalidArgument("demosaic --method wiener needs --model");
        std::ifstream in(de.model, std::ios::binary);
        if (!in) throw FormatError("cannot open " + de.model);
        out = wiener_apply(read_wiener_model(in), y, grid);
      } else if (de.method == "vtv") {
        const SensitivityMatrix sens =
            resolve_sens(de.sens, de.delta, preset, grid);
        VtvConfig cfg;
        cfg.lambda = de.lambda;
        cfg.max_iters = de.max_iters;
        out = demosaic_vtv(y, preset.pattern, sens, cfg).x;
      } else {
        const BandSampling sampling =
            band_sampling_identity(preset.pattern, grid.count);
        if (de.method == "bilinear")
          out = demosaic_bilinear(y, sampling, grid);
        else if (de.method == "ibd")
          out = demosaic_interband(y, sampling, grid, de.smoothing_sigma);
        else
          out = demosaic_ppi(y, sampling, grid, de.kernel_radius);
      }
      save_cube(de.out, out);
      std::cout << "status=ok cmd=demosaic method=" << de.method
                << " out=" << de.out << " seed=" << seed << "\n";
    } else if (*train) {
      std::vector<MultispectralImage> cubes;
      for (const auto& f : tw.cubes) cubes.push_back(load_cube(f));
      const PatternPreset preset = tw.pattern.resolve();
      const SensitivityMatrix sens =
          resolve_sens(tw.sens, tw.delta, preset, cubes.front().grid);
      const WienerModel model =
          wiener_train(cubes, preset.pattern, sens, tw.sigma, seed,
                       tw.window_tiles, tw.ridge);
      std::ostringstream buf(std::ios::binary);
      write_wiener_model(buf, model);
      atomic_write(tw.out, buf.str());
      std::cout << "status=ok cmd=train-wiener out=" << tw.out
                << " phases=" << model.matrices.size() << " seed=" << seed << "\n";
    } else if (*osens) {
      std::vector<MultispectralImage> cubes;
      for (const auto& f : os.cubes) cubes.push_back(load_cube(f));
      const PatternPreset preset = os.pattern.resolve();
      OptimizerConfig cfg;
      cfg.max_outer_iters = os.iters;
      cfg.window_tiles = os.window_tiles;
      cfg.ridge = os.ridge;
      cfg.noise_sigma = os.sigma;
      cfg.subsample_pixels = os.subsample;
      cfg.smoothness_weight = os.smoothness_weight;
      cfg.seed = seed;
      const SensitivityMatrix init =
          os.init.empty()
              ? random_init_sensitivity(preset.pattern.num_filters,
                                        cubes.front().grid, seed)
              : load_sensitivity_csv(os.init);
      const OptimizationResult result =
          optimize_sensitivity(cubes, preset.pattern, init, cfg);
      save_sensitivity_csv(os.out_sens, result.sensitivity);
      if (!os.out_model.empty()) {
        std::ostringstream buf(std::ios::binary);
        write_wiener_model(buf, result.model);
        atomic_write(os.out_model, buf.str());
      }
      if (!os.out_trace.empty()) {
        std::ostringstream buf;
        write_trace_csv(buf, result.trace);
        atomic_write(os.out_trace, buf.str());
      }
      const double final_obj = result.trace.records.empty()
                                   ? 0.0
                                   : result.trace.records.back().objective;
      std::cout << "status=ok cmd=optimize-sens out=" << os.out_sens
                << " iters=" << result.trace.records.size()
                << " objective=" << fmt(final_obj) << " seed=" << seed << "\n";
    } else if (*opat) {
      AnnealSchedule sched;
      sched.max_moves = op.max_moves;
      sched.restarts = op.restarts;
      std::optional<std::vector<int>> counts;
      if (!op.counts.empty()) counts = op.counts;
      const FilterArrayPattern p = optimize_pattern(
          op.tile_h, op.tile_w, op.num_filters, counts, sched, seed);
      save_pattern_text(op.out, p);
      std::cout << "status=ok cmd=optimize-pattern out=" << op.out
                << " annd=" << fmt(annd(p).overall) << " seed=" << seed << "\n";
    } else if (*annd_cmd) {
      const AnndReport rep = annd(annd_pattern.resolve().pattern);
      std::cout << "status=ok cmd=annd overall=" << fmt(rep.overall);
      for (size_t k = 0; k < rep.per_band.size(); ++k)
        std::cout << " band" << k << "=" << fmt(rep.per_band[k]);
      std::cout << "\n";
    } else if (*render) {
      MultispectralImage cube = load_cube(re.cube);
      for (double& v : cube.data) v = std::fmax(0.0, v);
      save_png(re.out, render_cube(cube, d65_illuminant(), cie1931_cmf()));
      std::cout << "status=ok cmd=render out=" << re.out << "\n";
    } else if (*swatches) {
      const SensitivityMatrix sens = load_sensitivity_csv(sw.sens);
      const auto colors =
          render_filter_swatches(sens, d65_illuminant(), cie1931_cmf());
      Raster8 raster;
      raster.height = sw.size;
      raster.width = sw.size * static_cast<int>(colors.size());
      raster.rgb.resize(static_cast<size_t>(raster.height) * raster.width * 3);
      for (int r = 0; r < raster.height; ++r)
        for (int c = 0; c < raster.width; ++c) {
          const auto& px = colors[c / sw.size];
          const size_t i = (static_cast<size_t>(r) * raster.width + c) * 3;
          raster.rgb[i] = px[0];
          raster.rgb[i + 1] = px[1];
          raster.rgb[i + 2] = px[2];
        }
      save_png(sw.out, raster);
      std::cout << "status=ok cmd=swatches filters=" << colors.size()
                << " out=" << sw.out << "\n";
    } else if (*metrics) {
      const MultispectralImage ref = load_cube(me.reference);
      const MultispectralImage test = load_cube(me.test);
      std::cout << "status=ok cmd=metrics psnr_db=" << fmt(psnr(ref, test, me.peak))
                << " rmse=" << fmt(rmse(ref, test))
                << " sam_rad=" << fmt(spectral_angle(ref, test)) << "\n";
    } else if (*simpol) {
      const StokesCube s = load_stokes(sp.stokes);
      const PatternPreset preset = preset_pattern(sp.preset);
      if (!preset.bank)
        throw InvalidArgument("preset '" + sp.preset + "' has no polarized bank");
      const MosaickedImage y =
          polarized_mosaic(s, *preset.bank, preset.pattern, {sp.sigma, seed});
      save_cube(sp.out, mosaic_as_cube(y));
      std::cout << "status=ok cmd=simulate-pol out=" << sp.out
                << " seed=" << seed << "\n";
    } else if (*recpol) {
      const MosaickedImage y = cube_as_mosaic(load_cube(rp.mosaic));
      const PatternPreset preset = preset_pattern(rp.preset);
      if (!preset.bank)
        throw InvalidArgument("preset '" + rp.preset + "' has no polarized bank");
      StokesRecoveryParams params;
      params.basis_dim = rp.basis_dim;
      params.ridge = rp.ridge;
      params.window_tiles = rp.window_tiles;
      params.seed = seed;
      std::vector<StokesCube> training;
      if (rp.method == "wiener") {
        for (const auto& f : rp.training) training.push_back(load_stokes(f));
        params.training = &training;
      }
      const StokesCube rec = recover_stokes(
          y, *preset.bank, preset.pattern,
          rp.method == "ridge" ? StokesMethod::kRidge
                               : StokesMethod::kTrainedWiener,
          params);
      if (!rp.out.empty()) save_stokes(rp.out, rec);
      if (!rp.out_s0.empty()) save_cube(rp.out_s0, rec.s0);
      std::cout << "status=ok cmd=recover-pol method=" << rp.method
                << " out=" << (rp.out.empty() ? rp.out_s0 : rp.out)
                << " seed=" << seed << "\n";
    } else if (*run) {
      const ExperimentReport rep = run_experiment(run_spec);
      std::cout << "status=ok cmd=run psnr_db=" << fmt(rep.psnr_db)
                << " rmse=" << fmt(rep.rmse)
                << " sam_rad=" << fmt(rep.spectral_angle_rad)
                << " out=" << rep.output_dir.string() << "\n";
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "status=error kind=usage message=\"" << e.what() << "\"\n";
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "status=error kind=format message=\"" << e.what() << "\"\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "status=error kind=numerical message=\"" << e.what() << "\"\n";
    return 4;
  }
  return 0;
}
