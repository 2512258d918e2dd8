#include "msfa/io.hpp"

#include <zlib.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace msfa {

namespace {

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in, const char* what) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw FormatError(std::string("truncated stream while reading ") + what);
  return v;
}

void put_be32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>((v >> 24) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>(v & 0xff));
}

void png_chunk(std::ostream& out, const char type[4], const std::string& data) {
  std::string buf;
  put_be32(buf, static_cast<std::uint32_t>(data.size()));
  buf.append(type, 4);
  buf += data;
  const auto crc =
      crc32(0, reinterpret_cast<const Bytef*>(buf.data() + 4), buf.size() - 4);
  put_be32(buf, static_cast<std::uint32_t>(crc));
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

}  // namespace

void write_cube(std::ostream& out, const MultispectralImage& img) {
  out.write("MSIC1", 5);
  put<std::int32_t>(out, img.height);
  put<std::int32_t>(out, img.width);
  put<std::int32_t>(out, img.grid.count);
  put<double>(out, img.grid.start_nm);
  put<double>(out, img.grid.step_nm);
  put<std::uint8_t>(out, 0);  // encoding: float32 LE band-major
  for (double v : img.data) put<float>(out, static_cast<float>(v));
}

MultispectralImage read_cube(std::istream& in) {
  char magic[5];
  in.read(magic, 5);
  if (!in || std::string(magic, 5) != "MSIC1")
    throw FormatError("cube: bad magic at byte 0 (expected MSIC1)");
  MultispectralImage img;
  img.height = get<std::int32_t>(in, "height");
  img.width = get<std::int32_t>(in, "width");
  img.grid.count = get<std::int32_t>(in, "band count");
  img.grid.start_nm = get<double>(in, "start_nm");
  img.grid.step_nm = get<double>(in, "step_nm");
  const auto tag = get<std::uint8_t>(in, "encoding tag");
  if (tag != 0)
    throw FormatError("cube: unknown payload encoding tag " +
                      std::to_string(tag) + " at byte 33");
  if (img.height < 0 || img.width < 0 || img.grid.count < 1)
    throw FormatError("cube: malformed header dimensions");
  const size_t n =
      static_cast<size_t>(img.height) * img.width * img.grid.count;
  img.data.resize(n);
  for (size_t i = 0; i < n; ++i) {
    float f;
    in.read(reinterpret_cast<char*>(&f), sizeof(float));
    if (!in)
      throw FormatError("cube: truncated payload, expected " +
                        std::to_string(34 + n * 4) + " bytes, got " +
                        std::to_string(34 + i * 4));
    img.data[i] = f;
  }
  return img;
}

void write_stokes(std::ostream& out, const StokesCube& s) {
  write_cube(out, s.s0);
  write_cube(out, s.s1);
  write_cube(out, s.s2);
}

StokesCube read_stokes(std::istream& in) {
  StokesCube s;
  s.s0 = read_cube(in);
  s.s1 = read_cube(in);
  s.s2 = read_cube(in);
  if (s.s0.height != s.s1.height || s.s0.height != s.s2.height ||
      s.s0.width != s.s1.width || s.s0.width != s.s2.width ||
      !(s.s0.grid == s.s1.grid) || !(s.s0.grid == s.s2.grid))
    throw FormatError("stokes: component cubes disagree in shape or grid");
  s.height = s.s0.height;
  s.width = s.s0.width;
  s.grid = s.s0.grid;
  return s;
}

void write_sensitivity_csv(std::ostream& out, const SensitivityMatrix& s) {
  char buf[64];
  for (int i = 0; i < s.grid.count; ++i) {
    std::snprintf(buf, sizeof(buf), "%s%.17g", i ? "," : "",
                  s.grid.wavelength(i));
    out << buf;
  }
  out << "\n";
  for (int k = 0; k < s.num_filters; ++k) {
    for (int i = 0; i < s.grid.count; ++i) {
      std::snprintf(buf, sizeof(buf), "%s%.17g", i ? "," : "", s.at(k, i));
      out << buf;
    }
    out << "\n";
  }
}

SensitivityMatrix read_sensitivity_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw FormatError("sensitivity csv: missing wavelength row at line 1");
  std::vector<double> wavelengths;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) wavelengths.push_back(std::stod(cell));
  }
  if (wavelengths.size() < 1)
    throw FormatError("sensitivity csv: empty wavelength row at line 1");
  SpectralGrid grid;
  grid.start_nm = wavelengths.front();
  grid.count = static_cast<int>(wavelengths.size());
  grid.step_nm = grid.count > 1 ? wavelengths[1] - wavelengths[0] : 10.0;
  for (size_t i = 1; i < wavelengths.size(); ++i) {
    const double step = wavelengths[i] - wavelengths[i - 1];
    if (!(step > 0.0) || std::abs(step - grid.step_nm) > 1e-9)
      throw FormatError(
          "sensitivity csv: non-monotone or non-uniform wavelengths at line 1, "
          "column " + std::to_string(i + 1));
  }

  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != wavelengths.size())
      throw FormatError("sensitivity csv: line " + std::to_string(lineno) +
                        " has " + std::to_string(row.size()) +
                        " values, expected " +
                        std::to_string(wavelengths.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty())
    throw FormatError("sensitivity csv: no filter rows after line 1");
  SensitivityMatrix s(static_cast<int>(rows.size()), grid);
  for (size_t k = 0; k < rows.size(); ++k)
    for (int i = 0; i < grid.count; ++i)
      s.at(static_cast<int>(k), i) = rows[k][i];
  return s;
}

void write_pattern_text(std::ostream& out, const FilterArrayPattern& p) {
  out << "tile " << p.tile_height << " " << p.tile_width << " "
      << p.num_filters << "\n";
  for (int r = 0; r < p.tile_height; ++r) {
    for (int c = 0; c < p.tile_width; ++c)
      out << (c ? " " : "") << p.cell(r, c);
    out << "\n";
  }
}

FilterArrayPattern read_pattern_text(std::istream& in) {
  std::string word;
  in >> word;
  if (word != "tile")
    throw FormatError("pattern: expected 'tile' keyword at line 1");
  FilterArrayPattern p;
  if (!(in >> p.tile_height >> p.tile_width >> p.num_filters))
    throw FormatError("pattern: malformed 'tile H W K' header at line 1");
  p.cells.resize(static_cast<size_t>(p.tile_height) * p.tile_width);
  for (size_t i = 0; i < p.cells.size(); ++i)
    if (!(in >> p.cells[i]))
      throw FormatError("pattern: truncated cell table at entry " +
                        std::to_string(i));
  const auto problems = validate(p);
  if (!problems.empty()) throw FormatError("pattern: " + problems.front());
  return p;
}

void write_png(std::ostream& out, const Raster8& raster) {
  static const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  out.write(reinterpret_cast<const char*>(sig), 8);

  std::string ihdr;
  put_be32(ihdr, static_cast<std::uint32_t>(raster.width));
  put_be32(ihdr, static_cast<std::uint32_t>(raster.height));
  ihdr.push_back(8);   // bit depth
  ihdr.push_back(2);   // truecolor
  ihdr.push_back(0);   // deflate
  ihdr.push_back(0);   // filter method
  ihdr.push_back(0);   // no interlace
  png_chunk(out, "IHDR", ihdr);

  std::string raw;
  raw.reserve(static_cast<size_t>(raster.height) * (raster.width * 3 + 1));
  for (int r = 0; r < raster.height; ++r) {
    raw.push_back(0);  // filter type none
    raw.append(reinterpret_cast<const char*>(
                   raster.rgb.data() + static_cast<size_t>(r) * raster.width * 3),
               static_cast<size_t>(raster.width) * 3);
  }
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::string compressed(bound, '\0');
  if (compress2(reinterpret_cast<Bytef*>(compressed.data()), &bound,
                reinterpret_cast<const Bytef*>(raw.data()),
                static_cast<uLong>(raw.size()), 6) != Z_OK)
    throw NumericalError("png: deflate failed");
  compressed.resize(bound);
  png_chunk(out, "IDAT", compressed);
  png_chunk(out, "IEND", "");
}

void atomic_write(const std::filesystem::path& path, const std::string& bytes) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace {

template <typename T, typename Writer>
void save_with(const std::filesystem::path& path, const T& value, Writer w) {
  std::ostringstream buf(std::ios::binary);
  w(buf, value);
  atomic_write(path, buf.str());
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return in;
}

}  // namespace

void save_cube(const std::filesystem::path& path, const MultispectralImage& img) {
  save_with(path, img, [](std::ostream& o, const MultispectralImage& v) {
    write_cube(o, v);
  });
}

MultispectralImage load_cube(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_cube(in);
}

void save_stokes(const std::filesystem::path& path, const StokesCube& s) {
  save_with(path, s,
            [](std::ostream& o, const StokesCube& v) { write_stokes(o, v); });
}

StokesCube load_stokes(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_stokes(in);
}

void save_sensitivity_csv(const std::filesystem::path& path,
                          const SensitivityMatrix& s) {
  save_with(path, s, [](std::ostream& o, const SensitivityMatrix& v) {
    write_sensitivity_csv(o, v);
  });
}

SensitivityMatrix load_sensitivity_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_sensitivity_csv(in);
}

void save_pattern_text(const std::filesystem::path& path,
                       const FilterArrayPattern& p) {
  save_with(path, p, [](std::ostream& o, const FilterArrayPattern& v) {
    write_pattern_text(o, v);
  });
}

FilterArrayPattern load_pattern_text(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_pattern_text(in);
}

void save_png(const std::filesystem::path& path, const Raster8& raster) {
  save_with(path, raster,
            [](std::ostream& o, const Raster8& v) { write_png(o, v); });
}

void save_text(const std::filesystem::path& path, const std::string& content) {
  atomic_write(path, content);
}

}  // namespace msfa
