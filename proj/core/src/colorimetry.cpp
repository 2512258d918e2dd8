#include "msfa/colorimetry.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace msfa {

namespace {

const SpectralGrid kTableGrid{420.0, 10.0, 31};

// CIE 1931 2-degree color matching functions, 420-720 nm, 10 nm step.
const double kXbar[31] = {
    0.1344, 0.2839, 0.3483, 0.3362, 0.2908, 0.1954, 0.0956, 0.0320,
    0.0049, 0.0093, 0.0633, 0.1655, 0.2904, 0.4334, 0.5945, 0.7621,
    0.9163, 1.0263, 1.0622, 1.0026, 0.8544, 0.6424, 0.4479, 0.2835,
    0.1649, 0.0874, 0.0468, 0.0227, 0.0114, 0.0058, 0.0029};
const double kYbar[31] = {
    0.0040, 0.0116, 0.0230, 0.0380, 0.0600, 0.0910, 0.1390, 0.2080,
    0.3230, 0.5030, 0.7100, 0.8620, 0.9540, 0.9950, 0.9950, 0.9520,
    0.8700, 0.7570, 0.6310, 0.5030, 0.3810, 0.2650, 0.1750, 0.1070,
    0.0610, 0.0320, 0.0170, 0.0082, 0.0041, 0.0021, 0.0010};
const double kZbar[31] = {
    0.6456, 1.3856, 1.7471, 1.7721, 1.6692, 1.2876, 0.8130, 0.4652,
    0.2720, 0.1582, 0.0782, 0.0422, 0.0203, 0.0087, 0.0039, 0.0021,
    0.0017, 0.0011, 0.0008, 0.0003, 0.0002, 0.0000, 0.0000, 0.0000,
    0.0000, 0.0000, 0.0000, 0.0000, 0.0000, 0.0000, 0.0000};

// CIE standard illuminant D65, relative spectral power, 420-720 nm, 10 nm.
const double kD65[31] = {
    93.43,  86.68,  104.86, 117.01, 117.81, 114.86, 115.92, 108.81,
    109.35, 107.80, 104.79, 107.69, 104.41, 104.05, 100.00, 96.33,
    95.79,  88.69,  90.01,  89.60,  87.70,  83.29,  83.70,  80.03,
    80.21,  82.28,  78.28,  69.72,  71.61,  74.35,  61.60};

std::vector<double> resample_curve(const std::vector<double>& values,
                                   const SpectralGrid& from,
                                   const SpectralGrid& to) {
  std::vector<double> out(to.count);
  for (int i = 0; i < to.count; ++i) {
    const double w = to.wavelength(i);
    const double pos = (w - from.start_nm) / from.step_nm;
    if (pos <= 0.0) {
      out[i] = values.front();
    } else if (pos >= from.count - 1) {
      out[i] = values.back();
    } else {
      const int lo = static_cast<int>(pos);
      const double t = pos - lo;
      out[i] = (1.0 - t) * values[lo] + t * values[lo + 1];
    }
  }
  return out;
}

// sRGB primaries balanced so the bundled D65 white point maps to (1, 1, 1).
const Eigen::Matrix3d& xyz_to_rgb_matrix() {
  static const Eigen::Matrix3d m = [] {
    auto xyz_of = [](double x, double y) {
      return Eigen::Vector3d(x / y, 1.0, (1.0 - x - y) / y);
    };
    Eigen::Matrix3d primaries;
    primaries.col(0) = xyz_of(0.64, 0.33);   // R
    primaries.col(1) = xyz_of(0.30, 0.60);   // G
    primaries.col(2) = xyz_of(0.15, 0.06);   // B
    std::vector<double> ones(kTableGrid.count, 1.0);
    const Xyz w = spectrum_to_xyz(ones, d65_illuminant(), cie1931_cmf());
    const Eigen::Vector3d white(w.x, w.y, w.z);
    const Eigen::Vector3d scale = primaries.colPivHouseholderQr().solve(white);
    return Eigen::Matrix3d((primaries * scale.asDiagonal()).inverse());
  }();
  return m;
}

std::array<std::uint8_t, 3> quantize(const Rgb& rgb) {
  auto q = [](double v) {
    return static_cast<std::uint8_t>(std::lround(255.0 * v));
  };
  return {q(rgb.r), q(rgb.g), q(rgb.b)};
}

}  // namespace

const IlluminantTable& d65_illuminant() {
  static const IlluminantTable t{kTableGrid,
                                 std::vector<double>(kD65, kD65 + 31)};
  return t;
}

const CmfTable& cie1931_cmf() {
  static const CmfTable t{kTableGrid, std::vector<double>(kXbar, kXbar + 31),
                          std::vector<double>(kYbar, kYbar + 31),
                          std::vector<double>(kZbar, kZbar + 31)};
  return t;
}

IlluminantTable resample(const IlluminantTable& t, const SpectralGrid& grid) {
  return {grid, resample_curve(t.power, t.grid, grid)};
}

CmfTable resample(const CmfTable& t, const SpectralGrid& grid) {
  return {grid, resample_curve(t.xbar, t.grid, grid),
          resample_curve(t.ybar, t.grid, grid),
          resample_curve(t.zbar, t.grid, grid)};
}

Xyz spectrum_to_xyz(const std::vector<double>& reflectance,
                    const IlluminantTable& illuminant, const CmfTable& cmf) {
  if (!(illuminant.grid == cmf.grid) ||
      reflectance.size() != static_cast<size_t>(cmf.grid.count))
    throw InvalidArgument("spectrum_to_xyz: grids do not match");
  Xyz out;
  double norm = 0.0;
  for (int i = 0; i < cmf.grid.count; ++i) {
    const double e = illuminant.power[i];
    const double er = e * reflectance[i];
    out.x += er * cmf.xbar[i];
    out.y += er * cmf.ybar[i];
    out.z += er * cmf.zbar[i];
    norm += e * cmf.ybar[i];
  }
  out.x /= norm;
  out.y /= norm;
  out.z /= norm;
  return out;
}

Rgb xyz_to_srgb(const Xyz& xyz) {
  const Eigen::Vector3d lin =
      xyz_to_rgb_matrix() * Eigen::Vector3d(xyz.x, xyz.y, xyz.z);
  auto channel = [](double v) {
    return srgb_encode(std::fmin(1.0, std::fmax(0.0, v)));
  };
  return {channel(lin[0]), channel(lin[1]), channel(lin[2])};
}

double srgb_encode(double linear) {
  if (linear <= 0.0031308) return 12.92 * linear;
  return 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
}

double srgb_decode(double encoded) {
  if (encoded <= 0.0031308 * 12.92) return encoded / 12.92;
  return std::pow((encoded + 0.055) / 1.055, 2.4);
}

Raster8 render_cube(const MultispectralImage& x, const IlluminantTable& illuminant,
                    const CmfTable& cmf) {
  const IlluminantTable ill = resample(illuminant, x.grid);
  const CmfTable c = resample(cmf, x.grid);
  Raster8 out;
  out.height = x.height;
  out.width = x.width;
  out.rgb.resize(static_cast<size_t>(x.height) * x.width * 3);
  std::vector<double> spectrum(x.grid.count);
  for (int r = 0; r < x.height; ++r)
    for (int col = 0; col < x.width; ++col) {
      for (int b = 0; b < x.grid.count; ++b) spectrum[b] = x.at(r, col, b);
      const auto px = quantize(xyz_to_srgb(spectrum_to_xyz(spectrum, ill, c)));
      const size_t i = (static_cast<size_t>(r) * x.width + col) * 3;
      out.rgb[i] = px[0];
      out.rgb[i + 1] = px[1];
      out.rgb[i + 2] = px[2];
    }
  return out;
}

std::vector<std::array<std::uint8_t, 3>> render_filter_swatches(
    const SensitivityMatrix& sens, const IlluminantTable& illuminant,
    const CmfTable& cmf) {
  const IlluminantTable ill = resample(illuminant, sens.grid);
  const CmfTable c = resample(cmf, sens.grid);
  std::vector<std::array<std::uint8_t, 3>> out;
  out.reserve(sens.num_filters);
  std::vector<double> curve(sens.grid.count);
  for (int k = 0; k < sens.num_filters; ++k) {
    for (int i = 0; i < sens.grid.count; ++i) curve[i] = sens.at(k, i);
    out.push_back(quantize(xyz_to_srgb(spectrum_to_xyz(curve, ill, c))));
  }
  return out;
}

}  // namespace msfa
