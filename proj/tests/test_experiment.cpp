#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "msfa/experiment.hpp"
#include "msfa/io.hpp"

using namespace msfa;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("msfa_exp_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

void write_spec(const std::filesystem::path& p, const std::string& body) {
  std::ofstream out(p);
  out << body;
}

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* kSynthSpec = R"({
  "seed": 5,
  "input": {"synth": {"height": 8, "width": 8, "bands": 4, "basis_dim": 3,
                      "smoothness": 1.5}},
  "pattern": {"preset": "bayer"},
  "sensitivity": {"delta": true},
  "method": "bilinear",
  "output_dir": "out"
})";

}  // namespace

TEST_CASE("a synthetic bilinear pipeline produces all outputs") {
  TempDir dir;
  write_spec(dir.path / "spec.json", kSynthSpec);
  const auto rep = run_experiment(dir.path / "spec.json");
  CHECK(rep.psnr_db > 0.0);
  CHECK(rep.rmse >= 0.0);
  CHECK(std::filesystem::exists(rep.output_dir / "metrics.csv"));
  CHECK(std::filesystem::exists(rep.output_dir / "spectra.csv"));
  CHECK(std::filesystem::exists(rep.output_dir / "mosaic.msic"));
  CHECK(std::filesystem::exists(rep.output_dir / "recovered.msic"));
  CHECK(std::filesystem::exists(rep.output_dir / "recovered.png"));
  CHECK(std::filesystem::exists(rep.output_dir / "reference.png"));

  // the stored mosaic is a 1-band cube
  const auto mosaic = load_cube(rep.output_dir / "mosaic.msic");
  CHECK(mosaic.grid.count == 1);
  CHECK(mosaic.height == 8);
}

TEST_CASE("reruns of the same spec are byte identical") {
  TempDir a, b;
  write_spec(a.path / "spec.json", kSynthSpec);
  write_spec(b.path / "spec.json", kSynthSpec);
  const auto ra = run_experiment(a.path / "spec.json");
  const auto rb = run_experiment(b.path / "spec.json");
  for (const char* name : {"metrics.csv", "spectra.csv", "mosaic.msic",
                           "recovered.msic", "recovered.png", "reference.png"})
    CHECK(read_bytes(ra.output_dir / name) == read_bytes(rb.output_dir / name));
}

TEST_CASE("missing input files and malformed specs are format errors") {
  TempDir dir;
  write_spec(dir.path / "bad.json", "{not json");
  CHECK_THROWS_AS((void)run_experiment(dir.path / "bad.json"), FormatError);

  write_spec(dir.path / "missing.json", R"({
    "seed": 1, "input": "nope.msic", "pattern": {"preset": "bayer"},
    "sensitivity": {"delta": true}, "method": "bilinear", "output_dir": "o"
  })");
  CHECK_THROWS_AS((void)run_experiment(dir.path / "missing.json"), FormatError);

  write_spec(dir.path / "noseed.json", R"({
    "input": {"synth": {"height": 4, "width": 4, "bands": 4}},
    "pattern": {"preset": "bayer"}, "sensitivity": {"delta": true},
    "method": "bilinear", "output_dir": "o"
  })");
  CHECK_THROWS_AS((void)run_experiment(dir.path / "noseed.json"), FormatError);

  write_spec(dir.path / "badmethod.json", R"({
    "seed": 1, "input": {"synth": {"height": 4, "width": 4, "bands": 4}},
    "pattern": {"preset": "bayer"}, "sensitivity": {"delta": true},
    "method": "magic", "output_dir": "o"
  })");
  CHECK_THROWS_AS((void)run_experiment(dir.path / "badmethod.json"),
                  FormatError);
}

TEST_CASE("wiener and vtv methods run end to end") {
  for (const char* method : {"wiener", "vtv"}) {
    TempDir dir;
    std::string spec = R"({
      "seed": 9,
      "input": {"synth": {"height": 8, "width": 8, "bands": 5, "basis_dim": 2,
                          "smoothness": 1.0}},
      "pattern": {"preset": "bayer"},
      "sensitivity": {"delta": true},
      "method": ")" + std::string(method) + R"(",
      "params": {"window_tiles": 1, "max_iters": 50},
      "render": false,
      "output_dir": "out"
    })";
    write_spec(dir.path / "spec.json", spec);
    const auto rep = run_experiment(dir.path / "spec.json");
    CHECK(std::filesystem::exists(rep.output_dir / "recovered.msic"));
    CHECK(!std::filesystem::exists(rep.output_dir / "recovered.png"));
  }
}
