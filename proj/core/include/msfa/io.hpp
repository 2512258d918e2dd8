#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "msfa/colorimetry.hpp"
#include "msfa/types.hpp"

namespace msfa {

// "MSIC1" header, then little-endian 32-bit floats, band-major.
void write_cube(std::ostream& out, const MultispectralImage& img);
MultispectralImage read_cube(std::istream& in);

// Three concatenated cubes: s0, s1, s2.
void write_stokes(std::ostream& out, const StokesCube& s);
StokesCube read_stokes(std::istream& in);

// First row wavelengths, one filter per subsequent row.
void write_sensitivity_csv(std::ostream& out, const SensitivityMatrix& s);
SensitivityMatrix read_sensitivity_csv(std::istream& in);

// First line "tile H W K", then H lines of W space-separated indices.
void write_pattern_text(std::ostream& out, const FilterArrayPattern& p);
FilterArrayPattern read_pattern_text(std::istream& in);

// 8-bit RGB PNG with fixed deflate settings, byte-reproducible.
void write_png(std::ostream& out, const Raster8& raster);

// File wrappers; all writes are atomic (temp file + rename).
void save_cube(const std::filesystem::path& path, const MultispectralImage& img);
MultispectralImage load_cube(const std::filesystem::path& path);
void save_stokes(const std::filesystem::path& path, const StokesCube& s);
StokesCube load_stokes(const std::filesystem::path& path);
void save_sensitivity_csv(const std::filesystem::path& path,
                          const SensitivityMatrix& s);
SensitivityMatrix load_sensitivity_csv(const std::filesystem::path& path);
void save_pattern_text(const std::filesystem::path& path,
                       const FilterArrayPattern& p);
FilterArrayPattern load_pattern_text(const std::filesystem::path& path);
void save_png(const std::filesystem::path& path, const Raster8& raster);
void save_text(const std::filesystem::path& path, const std::string& content);

// Atomic write of arbitrary serialized content.
void atomic_write(const std::filesystem::path& path, const std::string& bytes);

}  // namespace msfa
