#include "catch_amalgamated.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "sparserec/harness.hpp"

using namespace sparserec;
namespace fs = std::filesystem;

namespace {

ExperimentSpec tiny_spec() {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::heavisine_1d;
    spec.n = 64;
    spec.grid = {16, 32};
    spec.config.max_iter = 5;
    spec.seed = 9;
    return spec;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return text;
}

} // namespace

TEST_CASE("experiment validation fires before any work") {
    ExperimentSpec spec = tiny_spec();
    spec.grid.clear();
    REQUIRE_THROWS_AS(run_experiment(spec), InvalidParameterError);

    spec = tiny_spec();
    spec.noise_db = {20.0};
    REQUIRE_THROWS_AS(run_experiment(spec), InvalidParameterError);

    spec = tiny_spec();
    spec.kind = ExperimentKind::phantom_radial_noisy;
    spec.n = 64;
    spec.grid = {3};
    REQUIRE_THROWS_AS(run_experiment(spec), InvalidParameterError);

    spec = tiny_spec();
    spec.solver = "gradient";
    REQUIRE_THROWS_AS(run_experiment(spec), InvalidParameterError);

    spec = tiny_spec();
    spec.grid = {100};
    REQUIRE_THROWS_AS(run_experiment(spec), InvalidCountError);

    spec = tiny_spec();
    spec.kind = ExperimentKind::phantom_radial;
    spec.n = 48;
    spec.grid = {3};
    REQUIRE_THROWS_AS(run_experiment(spec), InvalidSizeError);
}

TEST_CASE("rows follow the grid order with the declared labels") {
    const auto rows = run_experiment(tiny_spec());
    REQUIRE(rows.size() == 2);
    REQUIRE(rows[0].kind == "heavisine_1d");
    REQUIRE(rows[0].param == 16);
    REQUIRE(rows[1].param == 32);
    for (const ResultRow& row : rows) {
        REQUIRE(row.n == 64);
        REQUIRE(row.solver == "pg");
        REQUIRE((row.stop == "converged" || row.stop == "max_iter"));
        REQUIRE(std::isfinite(row.mse_value));
        REQUIRE(row.iterations >= 1);
        REQUIRE(row.iterations <= 5);
    }
}

TEST_CASE("experiments are deterministic for a fixed seed") {
    const auto a = run_experiment(tiny_spec());
    const auto b = run_experiment(tiny_spec());
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].mse_value == b[i].mse_value);
        REQUIRE(a[i].iterations == b[i].iterations);
    }
    ExperimentSpec other = tiny_spec();
    other.seed = 10;
    const auto c = run_experiment(other);
    REQUIRE(a[0].mse_value != c[0].mse_value);
}

TEST_CASE("noisy sweeps interleave a baseline row per point") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::phantom_radial_noisy;
    spec.n = 32;
    spec.grid = {3};
    spec.noise_db = {20.0, 10.0};
    spec.config.max_iter = 3;
    spec.seed = 4;
    const auto rows = run_experiment(spec);
    REQUIRE(rows.size() == 4);
    REQUIRE(rows[0].solver == "none");
    REQUIRE(rows[0].noise_db == 20.0);
    REQUIRE(rows[1].solver == "pg");
    REQUIRE(rows[2].solver == "none");
    REQUIRE(rows[2].noise_db == 10.0);
    REQUIRE(rows[3].solver == "pg");
    // Less noise leaves the baseline closer to the truth.
    REQUIRE(rows[0].mse_value < rows[2].mse_value);
}

TEST_CASE("the output directory receives the documented files") {
    const fs::path dir = fs::temp_directory_path() / "sparserec_harness_out";
    fs::remove_all(dir);
    ExperimentSpec spec = tiny_spec();
    spec.out_dir = dir;
    spec.dump_raw = true;
    spec.stable_time = true;
    run_experiment(spec);
    REQUIRE(fs::exists(dir / "table.csv"));
    REQUIRE(fs::exists(dir / "meta.txt"));
    REQUIRE(fs::exists(dir / "recon_M16.csv"));
    REQUIRE(fs::exists(dir / "recon_M32.csv"));
    REQUIRE(fs::exists(dir / "truth.csv"));
    const std::string table = slurp(dir / "table.csv");
    REQUIRE(table.rfind("kind,n,param,noise_db,solver,iters,stop,mse,psnr_db,seconds\n",
                        0) == 0);
    const std::string meta = slurp(dir / "meta.txt");
    REQUIRE(meta.find("seed=9\n") != std::string::npos);
    REQUIRE(meta.find("alpha=3\n") != std::string::npos);
}

TEST_CASE("stable timing yields byte-identical tables") {
    const fs::path a = fs::temp_directory_path() / "sparserec_stable_a";
    const fs::path b = fs::temp_directory_path() / "sparserec_stable_b";
    fs::remove_all(a);
    fs::remove_all(b);
    ExperimentSpec spec = tiny_spec();
    spec.stable_time = true;
    spec.out_dir = a;
    run_experiment(spec);
    spec.out_dir = b;
    run_experiment(spec);
    REQUIRE(slurp(a / "table.csv") == slurp(b / "table.csv"));
    REQUIRE(!slurp(a / "table.csv").empty());
}

TEST_CASE("parallel execution reproduces the serial rows") {
    ExperimentSpec spec = tiny_spec();
    const auto serial = run_experiment(spec);
    spec.jobs = 2;
    const auto parallel = run_experiment(spec);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        REQUIRE(serial[i].mse_value == parallel[i].mse_value);
        REQUIRE(serial[i].param == parallel[i].param);
    }
}

TEST_CASE("the extrapolation kind reports near-exact recovery") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::pg_extrapolate;
    spec.n = 64;
    spec.grid = {48};
    spec.band = 3;
    spec.seed = 2;
    const auto rows = run_experiment(spec);
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].mse_value < 1e-4);
}
