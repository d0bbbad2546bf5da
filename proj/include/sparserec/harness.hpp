#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "sparserec/errors.hpp"
#include "sparserec/io.hpp"
#include "sparserec/metrics.hpp"
#include "sparserec/operators.hpp"
#include "sparserec/rng.hpp"
#include "sparserec/signals.hpp"
#include "sparserec/solvers.hpp"

namespace sparserec {

enum class ExperimentKind { heavisine_1d, phantom_radial, phantom_radial_noisy, pg_extrapolate };

inline std::string kind_name(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::heavisine_1d: return "heavisine_1d";
    case ExperimentKind::phantom_radial: return "phantom_radial";
    case ExperimentKind::phantom_radial_noisy: return "phantom_radial_noisy";
    case ExperimentKind::pg_extrapolate: return "pg_extrapolate";
    }
    throw InvalidParameterError("kind_name: unknown kind");
}

/// One benchmark sweep: a parameter grid over a single scene kind.
/// grid holds sample counts (1D kinds) or line counts (2D kinds).
struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::heavisine_1d;
    std::size_t n = 1024;
    std::vector<std::size_t> grid;
    std::vector<double> noise_db;
    std::string solver = "pg";
    SolverConfig config;
    double ista_gamma = 0.0;
    std::size_t band = 3;
    std::uint64_t seed = 1;
    std::filesystem::path out_dir;
    bool dump_raw = false;
    bool stable_time = false;
    std::size_t jobs = 1;
};

struct ResultRow {
    std::string kind;
    std::size_t n = 0;
    std::size_t param = 0;
    std::optional<double> noise_db;
    std::string solver;
    std::size_t iterations = 0;
    std::string stop;
    double mse_value = 0.0;
    double psnr_value = 0.0;
    double seconds = 0.0;
};

namespace detail {

inline std::string format_db(double db) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", db);
    return buf;
}

/// Per-point seed: base seed shifted by a hash of the point's labels, so
/// every (param, noise, role) tuple gets an independent stream.
inline std::uint64_t point_seed(const ExperimentSpec& spec, std::size_t param,
                                const std::optional<double>& db, const char* role) {
    std::string label = kind_name(spec.kind);
    label += ':';
    label += std::to_string(spec.n);
    label += ':';
    label += std::to_string(param);
    label += ':';
    label += db ? format_db(*db) : "none";
    label += ':';
    label += role;
    return spec.seed + fnv1a64(label);
}

inline void clip_unit(Image2D& img) {
    for (double& v : img.pixels)
        v = std::min(1.0, std::max(0.0, v));
}

inline std::string stop_name(StopReason stop) {
    return stop == StopReason::converged ? "converged" : "max_iter";
}

/// Real signal with unitary spectrum supported on |k| <= band.
inline Signal1D make_bandlimited(std::size_t n, std::size_t band, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Complex> spec(n, Complex(0.0, 0.0));
    spec[0] = Complex(rng.gaussian(), 0.0);
    for (std::size_t k = 1; k <= band; ++k) {
        spec[k] = Complex(rng.gaussian(), rng.gaussian());
        spec[n - k] = std::conj(spec[k]);
    }
    const auto samples = dft1(spec, true);
    Signal1D f;
    f.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        f.samples[i] = samples[i].real();
    return f;
}

struct PointOutcome {
    ResultRow row;
    Signal1D recon_1d;
    Image2D recon_2d;
    Image2D noisy_input;
};

} // namespace detail

/// Dynamic-range peak of the reference scene, for PSNR.
template <class T>
double reference_peak(const T& truth) {
    const auto vals = elements(truth);
    const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
    const double range = *hi - *lo;
    return range > 0.0 ? range : 1.0;
}

inline void validate_spec(const ExperimentSpec& spec) {
    if (spec.grid.empty())
        throw InvalidParameterError("experiment: parameter grid is empty");
    const bool noisy = spec.kind == ExperimentKind::phantom_radial_noisy;
    if (noisy && spec.noise_db.empty())
        throw InvalidParameterError("experiment: noisy kind needs noise levels");
    if (!noisy && !spec.noise_db.empty())
        throw InvalidParameterError("experiment: noise levels need the noisy kind");
    if (spec.solver != "pg" && spec.solver != "ista")
        throw InvalidParameterError("experiment: solver must be pg or ista");
    if (spec.jobs == 0)
        throw InvalidParameterError("experiment: jobs must be positive");
    const bool needs_pow2 = spec.kind != ExperimentKind::heavisine_1d;
    if (needs_pow2 && !detail::is_pow2(spec.n))
        throw InvalidSizeError("experiment: n must be a power of two");
    if (spec.kind == ExperimentKind::heavisine_1d || spec.kind == ExperimentKind::pg_extrapolate) {
        for (std::size_t m : spec.grid)
            if (m == 0 || m > spec.n)
                throw InvalidCountError("experiment: sample count outside [1, n]");
    } else {
        for (std::size_t k : spec.grid)
            if (k == 0)
                throw InvalidCountError("experiment: line count must be positive");
    }
    if (spec.solver == "ista" && !(spec.ista_gamma >= 0.0))
        throw InvalidParameterError("experiment: ista gamma must be nonnegative");
}

namespace detail {

inline PointOutcome run_point_1d(const ExperimentSpec& spec, const Signal1D& truth,
                                 std::size_t param) {
    const auto pattern = make_random_pattern(spec.n, param,
                                             point_seed(spec, param, {}, "pattern"));
    const Sampling1D op{pattern};
    const Observation1D g = op.forward(truth);
    const auto t0 = std::chrono::steady_clock::now();
    RecoveryResult<Signal1D> rec =
        spec.solver == "pg" ? recover_pg_ist(op, g, spec.config)
                            : recover_ista(op, g, spec.ista_gamma, spec.config);
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    PointOutcome out;
    out.row = {kind_name(spec.kind), spec.n, param, {}, spec.solver, rec.iterations,
               stop_name(rec.stop), mse(rec.estimate, truth),
               psnr(rec.estimate, truth, reference_peak(truth)), dt.count()};
    out.recon_1d = std::move(rec.estimate);
    return out;
}

inline PointOutcome run_point_2d(const ExperimentSpec& spec, const Image2D& truth,
                                 std::size_t param, std::optional<double> db) {
    const auto mask = make_radial_mask(spec.n, param);
    const RadialFourier op{mask};
    Image2D scene = truth;
    if (db)
        scene = add_awgn(truth, *db, point_seed(spec, param, db, "noise"));
    const Observation2D g = op.forward(scene);
    const auto t0 = std::chrono::steady_clock::now();
    RecoveryResult<Image2D> rec =
        spec.solver == "pg" ? recover_pg_ist(op, g, spec.config)
                            : recover_ista(op, g, spec.ista_gamma, spec.config);
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    clip_unit(rec.estimate);
    PointOutcome out;
    out.row = {kind_name(spec.kind), spec.n, param, db, spec.solver, rec.iterations,
               stop_name(rec.stop), mse(rec.estimate, truth),
               psnr(rec.estimate, truth, 1.0), dt.count()};
    out.recon_2d = std::move(rec.estimate);
    if (db)
        out.noisy_input = std::move(scene);
    return out;
}

inline PointOutcome run_point_pg(const ExperimentSpec& spec, std::size_t param) {
    const Signal1D truth =
        make_bandlimited(spec.n, spec.band, point_seed(spec, param, {}, "truth"));
    const auto pattern = make_random_pattern(spec.n, param,
                                             point_seed(spec, param, {}, "pattern"));
    const auto t0 = std::chrono::steady_clock::now();
    RecoveryResult<Signal1D> rec =
        pg_extrapolate(truth, pattern, spec.band, spec.config, &truth);
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    PointOutcome out;
    out.row = {kind_name(spec.kind), spec.n, param, {}, "pg", rec.iterations,
               stop_name(rec.stop), mse(rec.estimate, truth),
               psnr(rec.estimate, truth, reference_peak(truth)), dt.count()};
    out.recon_1d = std::move(rec.estimate);
    return out;
}

inline std::string format_row(const ResultRow& row, bool stable_time) {
    char buf[64];
    std::string line = row.kind;
    line += ',';
    line += std::to_string(row.n);
    line += ',';
    line += std::to_string(row.param);
    line += ',';
    if (row.noise_db)
        line += format_db(*row.noise_db);
    line += ',';
    line += row.solver;
    line += ',';
    line += std::to_string(row.iterations);
    line += ',';
    line += row.stop;
    line += ',';
    std::snprintf(buf, sizeof(buf), "%.6e", row.mse_value);
    line += buf;
    line += ',';
    if (std::isinf(row.psnr_value)) {
        line += "inf";
    } else {
        std::snprintf(buf, sizeof(buf), "%.4f", row.psnr_value);
        line += buf;
    }
    line += ',';
    std::snprintf(buf, sizeof(buf), "%.3f", stable_time ? 0.0 : row.seconds);
    line += buf;
    return line;
}

inline void write_meta(const ExperimentSpec& spec) {
    auto out = io::detail::open_out(spec.out_dir / "meta.txt");
    out << "kind=" << kind_name(spec.kind) << '\n';
    out << "n=" << spec.n << '\n';
    out << "grid=";
    for (std::size_t i = 0; i < spec.grid.size(); ++i)
        out << (i ? " " : "") << spec.grid[i];
    out << '\n';
    out << "noise_db=";
    for (std::size_t i = 0; i < spec.noise_db.size(); ++i)
        out << (i ? " " : "") << format_db(spec.noise_db[i]);
    out << '\n';
    out << "solver=" << spec.solver << '\n';
    out << "delta=" << io::detail::fmt(spec.config.delta) << '\n';
    out << "max_iter=" << spec.config.max_iter << '\n';
    out << "rule=" << (spec.config.rule == ShrinkRule::soft ? "soft" : "hard") << '\n';
    if (spec.config.strategy.kind == ThresholdStrategy::Kind::birge_massart) {
        out << "strategy=birge_massart\n";
        out << "alpha=" << io::detail::fmt(spec.config.strategy.alpha) << '\n';
        out << "bm_m=" << spec.config.strategy.budget << '\n';
    } else {
        out << "strategy=fixed\n";
        out << "gamma=" << io::detail::fmt(spec.config.strategy.gamma) << '\n';
    }
    out << "freeze_plan=" << (spec.config.freeze_plan ? 1 : 0) << '\n';
    if (spec.solver == "ista")
        out << "ista_gamma=" << io::detail::fmt(spec.ista_gamma) << '\n';
    if (spec.kind == ExperimentKind::pg_extrapolate)
        out << "band=" << spec.band << '\n';
    out << "seed=" << spec.seed << '\n';
    io::detail::finish(out, spec.out_dir / "meta.txt");
}

} // namespace detail

/// Runs the sweep and, when out_dir is set, writes table.csv, meta.txt,
/// per-point reconstructions, and (with dump_raw) scenes and observations.
/// Row order is the grid order, with noise levels innermost; a baseline row
/// (solver "none") precedes each noisy recovery.
inline std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
    validate_spec(spec);

    struct Point {
        std::size_t param;
        std::optional<double> db;
    };
    std::vector<Point> points;
    for (std::size_t param : spec.grid) {
        if (spec.kind == ExperimentKind::phantom_radial_noisy) {
            for (double db : spec.noise_db)
                points.push_back({param, db});
        } else {
            points.push_back({param, {}});
        }
    }

    Signal1D truth_1d;
    Image2D truth_2d;
    const bool is_2d = spec.kind == ExperimentKind::phantom_radial ||
                       spec.kind == ExperimentKind::phantom_radial_noisy;
    if (spec.kind == ExperimentKind::heavisine_1d)
        truth_1d = heavisine(spec.n);
    else if (is_2d)
        truth_2d = shepp_logan(spec.n);

    const auto run_point = [&](const Point& pt) {
        switch (spec.kind) {
        case ExperimentKind::heavisine_1d:
            return detail::run_point_1d(spec, truth_1d, pt.param);
        case ExperimentKind::phantom_radial:
        case ExperimentKind::phantom_radial_noisy:
            return detail::run_point_2d(spec, truth_2d, pt.param, pt.db);
        case ExperimentKind::pg_extrapolate:
            return detail::run_point_pg(spec, pt.param);
        }
        throw InvalidParameterError("run_experiment: unknown kind");
    };

    std::vector<detail::PointOutcome> outcomes(points.size());
    const std::size_t jobs = std::min(spec.jobs, points.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < points.size(); ++i)
            outcomes[i] = run_point(points[i]);
    } else {
        std::vector<std::future<void>> workers;
        for (std::size_t w = 0; w < jobs; ++w)
            workers.push_back(std::async(std::launch::async, [&, w] {
                for (std::size_t i = w; i < points.size(); i += jobs)
                    outcomes[i] = run_point(points[i]);
            }));
        for (auto& worker : workers)
            worker.get();
    }

    std::vector<ResultRow> rows;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].db) {
            // Baseline quality of the noisy scene itself, scored as produced.
            const Image2D& noisy = outcomes[i].noisy_input;
            rows.push_back({kind_name(spec.kind), spec.n, points[i].param, points[i].db,
                            "none", 0, "none", mse(noisy, truth_2d),
                            psnr(noisy, truth_2d, 1.0), 0.0});
        }
        rows.push_back(outcomes[i].row);
    }

    if (!spec.out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(spec.out_dir, ec);
        if (ec)
            throw IoError("cannot create output directory: " + spec.out_dir.string());
        auto table = io::detail::open_out(spec.out_dir / "table.csv");
        table << "kind,n,param,noise_db,solver,iters,stop,mse,psnr_db,seconds\n";
        for (const ResultRow& row : rows)
            table << detail::format_row(row, spec.stable_time) << '\n';
        io::detail::finish(table, spec.out_dir / "table.csv");
        detail::write_meta(spec);
        for (std::size_t i = 0; i < points.size(); ++i) {
            std::string tag = is_2d ? "K" : "M";
            tag += std::to_string(points[i].param);
            if (points[i].db)
                tag += "_db" + detail::format_db(*points[i].db);
            if (is_2d) {
                io::write_pgm(spec.out_dir / ("recon_" + tag + ".pgm"),
                              outcomes[i].recon_2d);
                if (points[i].db)
                    io::write_pgm(spec.out_dir / ("noisy_" + tag + ".pgm"),
                                  outcomes[i].noisy_input);
            } else {
                io::write_signal_csv(spec.out_dir / ("recon_" + tag + ".csv"),
                                     outcomes[i].recon_1d);
            }
        }
        if (spec.dump_raw) {
            if (spec.kind == ExperimentKind::heavisine_1d)
                io::write_signal_csv(spec.out_dir / "truth.csv", truth_1d);
            else if (is_2d) {
                io::write_pgm(spec.out_dir / "truth.pgm", truth_2d);
                io::write_image_csv(spec.out_dir / "truth.csv", truth_2d);
            }
        }
    }
    return rows;
}

} // namespace sparserec
