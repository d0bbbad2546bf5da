#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sparserec/sparserec.hpp"

namespace fs = std::filesystem;
using namespace sparserec;

namespace {

struct SolverFlags {
    double delta = 1e-4;
    std::size_t max_iter = 500;
    std::string rule = "soft";
    double alpha = 3.0;
    std::size_t bm_m = 0;
    std::optional<double> gamma;
    bool freeze_plan = false;
    std::string solver = "pg";
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
    cmd->add_option("--delta", f.delta, "Relative-change stopping threshold")
        ->capture_default_str();
    cmd->add_option("--max-iter", f.max_iter, "Iteration cap")->capture_default_str();
    cmd->add_option("--rule", f.rule, "Shrinkage rule")
        ->check(CLI::IsMember({"soft", "hard"}))
        ->capture_default_str();
    cmd->add_option("--alpha", f.alpha, "Threshold selection exponent")
        ->capture_default_str();
    cmd->add_option("--bm-m", f.bm_m,
                    "Coefficient budget for threshold selection (0 = signal length)")
        ->capture_default_str();
    cmd->add_option("--gamma", f.gamma,
                    "Fixed threshold; overrides the adaptive selection");
    cmd->add_flag("--freeze-plan", f.freeze_plan,
                  "Fit thresholds once, on the initial iterate");
    cmd->add_option("--solver", f.solver, "Recovery iteration")
        ->check(CLI::IsMember({"pg", "ista"}))
        ->capture_default_str();
}

SolverConfig make_config(const SolverFlags& f, bool trace) {
    SolverConfig cfg;
    cfg.delta = f.delta;
    cfg.max_iter = f.max_iter;
    cfg.rule = f.rule == "soft" ? ShrinkRule::soft : ShrinkRule::hard;
    cfg.freeze_plan = f.freeze_plan;
    cfg.record_trace = trace;
    if (f.gamma) {
        cfg.strategy.kind = ThresholdStrategy::Kind::fixed;
        cfg.strategy.gamma = *f.gamma;
    } else {
        cfg.strategy.kind = ThresholdStrategy::Kind::birge_massart;
        cfg.strategy.alpha = f.alpha;
        cfg.strategy.budget = f.bm_m;
    }
    return cfg;
}

double require_ista_gamma(const SolverFlags& f) {
    if (!f.gamma)
        throw CLI::ValidationError("--solver ista requires --gamma");
    return *f.gamma;
}

void write_meta(const fs::path& dir,
                const std::vector<std::pair<std::string, std::string>>& kv) {
    auto out = io::detail::open_out(dir / "meta.txt");
    for (const auto& [k, v] : kv)
        out << k << '=' << v << '\n';
    io::detail::finish(out, dir / "meta.txt");
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory: " + dir.string());
}

Image2D read_image_any(const fs::path& path) {
    if (path.extension() == ".pgm")
        return io::read_pgm(path);
    return io::read_image_csv(path);
}

template <class T>
void print_score(const T& estimate, const T& truth, double peak) {
    const double m = mse(estimate, truth);
    const double p = psnr(estimate, truth, peak);
    std::cout << "mse=" << io::detail::fmt(m) << " psnr_db=" << io::detail::fmt(p)
              << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse-signal recovery toolkit: scenes, sampling operators, "
                 "iterative thresholding solvers, and benchmark sweeps"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read defaults from an INI/TOML file");

    // gen-signal
    auto* gen_signal = app.add_subcommand("gen-signal", "Write the 1D test signal");
    struct {
        std::size_t n = 1024;
        std::optional<double> noise_db;
        std::uint64_t seed = 1;
        fs::path out;
    } gs;
    gen_signal->add_option("--n", gs.n, "Signal length")->capture_default_str();
    gen_signal->add_option("--noise-db", gs.noise_db, "Also write a noisy copy (PSNR dB)");
    gen_signal->add_option("--seed", gs.seed, "Noise seed")->capture_default_str();
    gen_signal->add_option("--out", gs.out, "Output directory")->required();
    gen_signal->callback([&] {
        ensure_dir(gs.out);
        const Signal1D f = heavisine(gs.n);
        io::write_signal_csv(gs.out / "signal.csv", f);
        std::vector<std::pair<std::string, std::string>> kv{
            {"kind", "heavisine"}, {"n", std::to_string(gs.n)}};
        if (gs.noise_db) {
            io::write_signal_csv(gs.out / "noisy.csv",
                                 add_awgn(f, *gs.noise_db, gs.seed));
            kv.emplace_back("noise_db", io::detail::fmt(*gs.noise_db));
            kv.emplace_back("seed", std::to_string(gs.seed));
        }
        write_meta(gs.out, kv);
        std::cout << "wrote " << (gs.out / "signal.csv").string() << '\n';
    });

    // gen-phantom
    auto* gen_phantom = app.add_subcommand("gen-phantom", "Write the 2D test image");
    struct {
        std::size_t n = 256;
        std::optional<double> noise_db;
        std::uint64_t seed = 1;
        fs::path out;
    } gp;
    gen_phantom->add_option("--n", gp.n, "Image side length")->capture_default_str();
    gen_phantom->add_option("--noise-db", gp.noise_db, "Also write a noisy copy (PSNR dB)");
    gen_phantom->add_option("--seed", gp.seed, "Noise seed")->capture_default_str();
    gen_phantom->add_option("--out", gp.out, "Output directory")->required();
    gen_phantom->callback([&] {
        ensure_dir(gp.out);
        const Image2D img = shepp_logan(gp.n);
        io::write_pgm(gp.out / "phantom.pgm", img);
        io::write_image_csv(gp.out / "phantom.csv", img);
        std::vector<std::pair<std::string, std::string>> kv{
            {"kind", "phantom"}, {"n", std::to_string(gp.n)}};
        if (gp.noise_db) {
            const Image2D noisy = add_awgn(img, *gp.noise_db, gp.seed);
            io::write_pgm(gp.out / "noisy.pgm", noisy);
            io::write_image_csv(gp.out / "noisy.csv", noisy);
            kv.emplace_back("noise_db", io::detail::fmt(*gp.noise_db));
            kv.emplace_back("seed", std::to_string(gp.seed));
        }
        write_meta(gp.out, kv);
        std::cout << "wrote " << (gp.out / "phantom.pgm").string() << '\n';
    });

    // make-mask
    auto* make_mask = app.add_subcommand("make-mask", "Write a radial sampling mask");
    struct {
        std::size_t n = 256;
        std::size_t lines = 0;
        fs::path out;
    } mm;
    make_mask->add_option("--n", mm.n, "Grid side length")->capture_default_str();
    make_mask->add_option("--lines", mm.lines, "Number of diameters")->required();
    make_mask->add_option("--out", mm.out, "Output directory")->required();
    make_mask->callback([&] {
        ensure_dir(mm.out);
        const RadialMask mask = make_radial_mask(mm.n, mm.lines);
        io::write_mask_csv(mm.out / "mask.csv", mask);
        io::write_mask_pgm(mm.out / "mask.pgm", mask);
        std::cout << "wrote " << (mm.out / "mask.csv").string() << " ("
                  << mask.order.size() << " cells)\n";
    });

    // sample
    auto* sample = app.add_subcommand(
        "sample", "Apply a sampling operator to a signal or image");
    struct {
        fs::path signal;
        fs::path image;
        fs::path mask;
        std::size_t m = 0;
        std::uint64_t seed = 1;
        fs::path out;
    } sa;
    sample->add_option("--signal", sa.signal, "1D signal CSV to sample");
    sample->add_option("--image", sa.image, "Image (PGM or CSV) to sample");
    sample->add_option("--mask", sa.mask, "Radial mask CSV (2D mode)");
    sample->add_option("--m", sa.m, "Number of random samples (1D mode)");
    sample->add_option("--seed", sa.seed, "Pattern seed (1D mode)")->capture_default_str();
    sample->add_option("--out", sa.out, "Output directory")->required();
    sample->callback([&] {
        const bool mode_1d = !sa.signal.empty();
        const bool mode_2d = !sa.image.empty();
        if (mode_1d == mode_2d)
            throw CLI::ValidationError("sample needs exactly one of --signal / --image");
        ensure_dir(sa.out);
        if (mode_1d) {
            if (sa.m == 0)
                throw CLI::ValidationError("--signal mode requires --m");
            const Signal1D f = io::read_signal_csv(sa.signal);
            const auto pattern = make_random_pattern(f.samples.size(), sa.m, sa.seed);
            io::write_observation_csv(sa.out / "observation.csv",
                                      op1d_forward(pattern, f));
            write_meta(sa.out, {{"mode", "1d"},
                                {"n", std::to_string(f.samples.size())},
                                {"m", std::to_string(sa.m)},
                                {"seed", std::to_string(sa.seed)}});
        } else {
            if (sa.mask.empty())
                throw CLI::ValidationError("--image mode requires --mask");
            const Image2D img = read_image_any(sa.image);
            const RadialMask mask = io::read_mask_csv(sa.mask);
            io::write_observation_csv(sa.out / "observation.csv",
                                      op2d_forward(mask, img));
            write_meta(sa.out, {{"mode", "2d"},
                                {"n", std::to_string(mask.n)},
                                {"cells", std::to_string(mask.order.size())}});
        }
        std::cout << "wrote " << (sa.out / "observation.csv").string() << '\n';
    });

    // recover
    auto* recover = app.add_subcommand("recover", "Reconstruct from an observation");
    struct {
        fs::path observation;
        fs::path mask;
        fs::path truth;
        std::optional<std::size_t> band;
        bool trace = false;
        fs::path out;
    } re;
    SolverFlags re_solver;
    recover->add_option("--observation", re.observation, "Observation CSV")->required();
    recover->add_option("--mask", re.mask, "Radial mask CSV (2D mode)");
    recover->add_option("--band", re.band,
                        "Band limit; switches 1D mode to band-limited extrapolation");
    recover->add_option("--truth", re.truth, "Reference scene to score against");
    recover->add_flag("--trace", re.trace, "Write per-iteration trace.csv");
    recover->add_option("--out", re.out, "Output directory")->required();
    add_solver_flags(recover, re_solver);
    recover->callback([&] {
        ensure_dir(re.out);
        const SolverConfig cfg = make_config(re_solver, re.trace);
        if (!re.mask.empty()) {
            const RadialMask mask = io::read_mask_csv(re.mask);
            const Observation2D g = io::read_observation_csv(re.observation, mask);
            const RadialFourier op{mask};
            Image2D truth;
            const Image2D* truth_ptr = nullptr;
            if (!re.truth.empty()) {
                truth = read_image_any(re.truth);
                truth_ptr = &truth;
            }
            auto rec = re_solver.solver == "pg"
                           ? recover_pg_ist(op, g, cfg, truth_ptr)
                           : recover_ista(op, g, require_ista_gamma(re_solver), cfg,
                                          truth_ptr);
            io::write_pgm(re.out / "recovery.pgm", rec.estimate);
            io::write_image_csv(re.out / "recovery.csv", rec.estimate);
            if (re.trace)
                io::write_trace_csv(re.out / "trace.csv", rec.trace);
            std::cout << "iterations=" << rec.iterations << " stop="
                      << (rec.stop == StopReason::converged ? "converged" : "max_iter")
                      << '\n';
            if (truth_ptr) {
                Image2D clipped = rec.estimate;
                for (double& v : clipped.pixels)
                    v = std::min(1.0, std::max(0.0, v));
                print_score(clipped, truth, 1.0);
            }
        } else {
            const Observation1D g = io::read_observation_csv(re.observation);
            Signal1D truth;
            const Signal1D* truth_ptr = nullptr;
            if (!re.truth.empty()) {
                truth = io::read_signal_csv(re.truth);
                truth_ptr = &truth;
            }
            RecoveryResult<Signal1D> rec;
            if (re.band) {
                const Signal1D g_full = op1d_adjoint(g.pattern, g.values);
                rec = pg_extrapolate(g_full, g.pattern, *re.band, cfg, truth_ptr);
            } else {
                const Sampling1D op{g.pattern};
                rec = re_solver.solver == "pg"
                          ? recover_pg_ist(op, g, cfg, truth_ptr)
                          : recover_ista(op, g, require_ista_gamma(re_solver), cfg,
                                         truth_ptr);
            }
            io::write_signal_csv(re.out / "recovery.csv", rec.estimate);
            if (re.trace)
                io::write_trace_csv(re.out / "trace.csv", rec.trace);
            std::cout << "iterations=" << rec.iterations << " stop="
                      << (rec.stop == StopReason::converged ? "converged" : "max_iter")
                      << '\n';
            if (truth_ptr)
                print_score(rec.estimate, truth, reference_peak(truth));
        }
    });

    // bench
    auto* bench = app.add_subcommand(
        "bench", "Run a benchmark sweep and write its results table");
    struct {
        std::string kind = "heavisine";
        std::optional<std::size_t> n;
        std::vector<std::size_t> m;
        std::vector<std::size_t> lines;
        std::vector<double> noise_db;
        std::uint64_t seed = 1;
        std::size_t band = 3;
        std::size_t jobs = 1;
        bool dump_raw = false;
        bool stable_time = false;
        fs::path out;
    } be;
    SolverFlags be_solver;
    bench->add_option("--kind", be.kind, "Sweep kind")
        ->check(CLI::IsMember({"heavisine", "phantom", "phantom-noisy", "pg"}))
        ->capture_default_str();
    bench->add_option("--n", be.n, "Scene size (default depends on kind)");
    bench->add_option("--m", be.m, "Sample counts for 1D kinds")->delimiter(',');
    bench->add_option("--lines", be.lines, "Line counts for 2D kinds")->delimiter(',');
    bench->add_option("--noise-db", be.noise_db, "Noise levels for phantom-noisy")
        ->delimiter(',');
    bench->add_option("--seed", be.seed, "Base seed")->capture_default_str();
    bench->add_option("--band", be.band, "Band limit for the pg kind")
        ->capture_default_str();
    bench->add_option("--jobs", be.jobs, "Parallel grid points")->capture_default_str();
    bench->add_flag("--dump-raw", be.dump_raw, "Also write the reference scene");
    bench->add_flag("--stable-time", be.stable_time,
                    "Write 0.000 in the seconds column for reproducible output");
    bench->add_option("--out", be.out, "Output directory")->required();
    add_solver_flags(bench, be_solver);
    bench->callback([&] {
        ExperimentSpec spec;
        const bool is_2d = be.kind == "phantom" || be.kind == "phantom-noisy";
        if (be.kind == "heavisine")
            spec.kind = ExperimentKind::heavisine_1d;
        else if (be.kind == "phantom")
            spec.kind = ExperimentKind::phantom_radial;
        else if (be.kind == "phantom-noisy")
            spec.kind = ExperimentKind::phantom_radial_noisy;
        else
            spec.kind = ExperimentKind::pg_extrapolate;
        if (is_2d && !be.m.empty())
            throw CLI::ValidationError("--m applies to 1D kinds; use --lines");
        if (!is_2d && !be.lines.empty())
            throw CLI::ValidationError("--lines applies to 2D kinds; use --m");
        if (be.kind != "phantom-noisy" && !be.noise_db.empty())
            throw CLI::ValidationError("--noise-db applies to kind phantom-noisy");
        spec.n = be.n.value_or(is_2d ? 256 : (be.kind == "pg" ? 64 : 1024));
        if (is_2d)
            spec.grid = be.lines;
        else
            spec.grid = be.m;
        if (spec.grid.empty()) {
            if (be.kind == "heavisine")
                spec.grid = {70, 100, 150, 200};
            else if (be.kind == "phantom")
                spec.grid = {9, 11, 15, 21};
            else if (be.kind == "phantom-noisy")
                spec.grid = {31};
            else
                spec.grid = {48};
        }
        spec.noise_db = be.noise_db;
        if (be.kind == "phantom-noisy" && spec.noise_db.empty())
            spec.noise_db = {20.0};
        spec.solver = be_solver.solver;
        spec.config = make_config(be_solver, false);
        if (be_solver.gamma)
            spec.ista_gamma = *be_solver.gamma;
        else if (spec.solver == "ista")
            throw CLI::ValidationError("--solver ista requires --gamma");
        spec.band = be.band;
        spec.seed = be.seed;
        spec.out_dir = be.out;
        spec.dump_raw = be.dump_raw;
        spec.stable_time = be.stable_time;
        spec.jobs = be.jobs;
        const auto rows = run_experiment(spec);
        std::cout << "kind,n,param,noise_db,solver,iters,stop,mse,psnr_db,seconds\n";
        for (const ResultRow& row : rows)
            std::cout << detail::format_row(row, spec.stable_time) << '\n';
        std::cout << "wrote " << (spec.out_dir / "table.csv").string() << '\n';
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
