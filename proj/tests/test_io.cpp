#include "catch_amalgamated.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "sparserec/io.hpp"
#include "sparserec/rng.hpp"

using namespace sparserec;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
    const fs::path dir = fs::temp_directory_path() / "sparserec_io_tests";
    fs::create_directories(dir);
    return dir;
}

std::vector<std::string> read_lines(const fs::path& path) {
    std::ifstream in(path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
        lines.push_back(line);
    return lines;
}

} // namespace

TEST_CASE("signal csv round-trips bit-exactly") {
    Rng rng(1);
    Signal1D f;
    f.samples.resize(200);
    for (double& v : f.samples)
        v = rng.gaussian() * 1e3;
    const fs::path path = scratch() / "signal.csv";
    io::write_signal_csv(path, f);
    const Signal1D back = io::read_signal_csv(path);
    REQUIRE(back.samples == f.samples);
}

TEST_CASE("image csv round-trips bit-exactly") {
    Rng rng(2);
    Image2D img = make_image(7, 13);
    for (double& v : img.pixels)
        v = rng.gaussian();
    const fs::path path = scratch() / "image.csv";
    io::write_image_csv(path, img);
    const Image2D back = io::read_image_csv(path);
    REQUIRE(back.rows == 7);
    REQUIRE(back.cols == 13);
    REQUIRE(back.pixels == img.pixels);
}

TEST_CASE("pgm output quantizes to the nearest of 256 levels") {
    Rng rng(3);
    Image2D img = make_image(9, 5);
    for (double& v : img.pixels)
        v = rng.uniform01();
    img.pixels[0] = -2.0;
    img.pixels[1] = 3.0;
    const fs::path path = scratch() / "image.pgm";
    io::write_pgm(path, img);
    const Image2D back = io::read_pgm(path);
    REQUIRE(back.rows == 9);
    REQUIRE(back.cols == 5);
    REQUIRE(back.pixels[0] == 0.0);
    REQUIRE(back.pixels[1] == 1.0);
    for (std::size_t i = 2; i < img.pixels.size(); ++i)
        REQUIRE(std::abs(back.pixels[i] - img.pixels[i]) <= 0.5 / 255.0 + 1e-12);
}

TEST_CASE("1d observations round-trip with their pattern") {
    Signal1D f;
    f.samples = {5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0};
    const auto pattern = make_random_pattern(8, 3, 4);
    const Observation1D g = op1d_forward(pattern, f);
    const fs::path path = scratch() / "obs1.csv";
    io::write_observation_csv(path, g);
    const Observation1D back = io::read_observation_csv(path);
    REQUIRE(back.pattern == g.pattern);
    REQUIRE(back.values == g.values);
}

TEST_CASE("masks round-trip through csv and pgm") {
    const RadialMask mask = make_radial_mask(32, 5);
    const fs::path csv = scratch() / "mask.csv";
    io::write_mask_csv(csv, mask);
    const RadialMask back = io::read_mask_csv(csv);
    REQUIRE(back == mask);
    const fs::path pgm = scratch() / "mask.pgm";
    io::write_mask_pgm(pgm, mask);
    const Image2D img = io::read_pgm(pgm);
    for (std::size_t i = 0; i < mask.cells.size(); ++i)
        REQUIRE(img.pixels[i] == (mask.cells[i] ? 1.0 : 0.0));
}

TEST_CASE("2d observations round-trip against their mask") {
    const RadialMask mask = make_radial_mask(16, 3);
    Rng rng(6);
    Image2D img = make_image(16, 16);
    for (double& v : img.pixels)
        v = rng.uniform01();
    const Observation2D g = op2d_forward(mask, img);
    const fs::path path = scratch() / "obs2.csv";
    io::write_observation_csv(path, g);
    const Observation2D back = io::read_observation_csv(path, mask);
    REQUIRE(back.values == g.values);
}

TEST_CASE("2d observations refuse a foreign mask") {
    const RadialMask mask = make_radial_mask(16, 3);
    const RadialMask other = make_radial_mask(16, 4);
    Image2D img = make_image(16, 16, 0.25);
    const fs::path path = scratch() / "obs2_mismatch.csv";
    io::write_observation_csv(path, op2d_forward(mask, img));
    REQUIRE_THROWS_AS(io::read_observation_csv(path, other), ShapeError);
}

TEST_CASE("traces list one row per iteration with an optional mse") {
    std::vector<TraceRow> trace(2);
    trace[0] = {1, 0.5, 2.0, 0.25, {}};
    trace[1] = {2, 0.125, 1.0, {}, {}};
    const fs::path path = scratch() / "trace.csv";
    io::write_trace_csv(path, trace);
    const auto lines = read_lines(path);
    REQUIRE(lines.size() == 3);
    REQUIRE(lines[0] == "iter,rel_change,residual,mse");
    REQUIRE(lines[1] == "1,0.5,2,0.25");
    REQUIRE(lines[2] == "2,0.125,1,");
}

TEST_CASE("io failures surface as IoError") {
    Signal1D f;
    f.samples = {1.0};
    REQUIRE_THROWS_AS(io::write_signal_csv("/nonexistent-dir/f.csv", f), IoError);
    REQUIRE_THROWS_AS(io::read_signal_csv(scratch() / "missing.csv"), IoError);
}

TEST_CASE("malformed files are rejected") {
    const fs::path path = scratch() / "bad.csv";
    {
        std::ofstream out(path);
        out << "not a number\n";
    }
    REQUIRE_THROWS_AS(io::read_signal_csv(path), IoError);
    const fs::path empty = scratch() / "empty.csv";
    { std::ofstream out(empty); }
    REQUIRE_THROWS_AS(io::read_signal_csv(empty), IoError);
}
