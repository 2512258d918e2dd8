#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "msfa/types.hpp"

namespace msfa {

struct IlluminantTable {
  SpectralGrid grid;
  std::vector<double> power;
};

struct CmfTable {
  SpectralGrid grid;
  std::vector<double> xbar, ybar, zbar;
};

// CIE 1931 2-degree observer and D65 relative SPD, tabulated at 10 nm over
// 420-720 nm. Other grids are served by linear interpolation with edge clamp.
const IlluminantTable& d65_illuminant();
const CmfTable& cie1931_cmf();

IlluminantTable resample(const IlluminantTable& t, const SpectralGrid& grid);
CmfTable resample(const CmfTable& t, const SpectralGrid& grid);

struct Xyz {
  double x = 0.0, y = 0.0, z = 0.0;
};

// Normalized so the perfect reflector has Y = 1 under the given illuminant.
Xyz spectrum_to_xyz(const std::vector<double>& reflectance,
                    const IlluminantTable& illuminant, const CmfTable& cmf);

struct Rgb {
  double r = 0.0, g = 0.0, b = 0.0;
};

// Linear sRGB via the primaries matrix balanced to the bundled D65 white
// point, gamma encoded, channels clipped to [0, 1].
Rgb xyz_to_srgb(const Xyz& xyz);

double srgb_encode(double linear);
double srgb_decode(double encoded);

struct Raster8 {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> rgb;  // 3 bytes per pixel, row-major
};

Raster8 render_cube(const MultispectralImage& x, const IlluminantTable& illuminant,
                    const CmfTable& cmf);

// One sRGB triple per filter, treating each sensitivity curve as a reflectance.
std::vector<std::array<std::uint8_t, 3>> render_filter_swatches(
    const SensitivityMatrix& sens, const IlluminantTable& illuminant,
    const CmfTable& cmf);

}  // namespace msfa
