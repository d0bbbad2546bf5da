#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "sparserec/errors.hpp"
#include "sparserec/metrics.hpp"
#include "sparserec/operators.hpp"
#include "sparserec/thresholding.hpp"
#include "sparserec/transforms.hpp"

namespace sparserec {

struct SolverConfig {
    double delta = 1e-4;
    std::size_t max_iter = 500;
    ShrinkRule rule = ShrinkRule::soft;
    ThresholdStrategy strategy;
    bool freeze_plan = false;
    bool record_trace = false;
};

enum class StopReason { converged, max_iter };

/// One row per completed iteration; optional fields are filled when the
/// caller supplied ground truth or the solver tracks an objective.
struct TraceRow {
    std::size_t iter = 0;
    double rel_change = 0.0;
    double residual = 0.0;
    std::optional<double> mse;
    std::optional<double> objective;
};

template <class DomainT>
struct RecoveryResult {
    DomainT estimate;
    std::size_t iterations = 0;
    StopReason stop = StopReason::max_iter;
    std::vector<TraceRow> trace;
};

namespace detail {

template <class T>
bool all_finite(const T& f) {
    for (double v : elements(f))
        if (!std::isfinite(v))
            return false;
    return true;
}

template <class T>
void add_into(T& dst, const T& src) {
    auto d = elements(dst);
    auto s = elements(src);
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] += s[i];
}

/// L1 norm of the detail subbands of the SWT of f.
inline double detail_l1(const Signal1D& f) {
    const SwtCoeffs1D c = swt1_forward(f);
    double acc = 0.0;
    for (double v : c.detail)
        acc += std::abs(v);
    return acc;
}

inline double detail_l1(const Image2D& f) {
    const SwtCoeffs2D c = swt2_forward(f);
    double acc = 0.0;
    for (double v : c.lh.pixels)
        acc += std::abs(v);
    for (double v : c.hl.pixels)
        acc += std::abs(v);
    for (double v : c.hh.pixels)
        acc += std::abs(v);
    return acc;
}

} // namespace detail

/// Iterative thresholding with re-substitution of the observed data:
///   f0 = K* g
///   h  = shrink(f_{n-1})        (SWT-domain constraint)
///   fn = h + K* (g - K h)
/// The plan is refit to the current iterate each pass unless freeze_plan,
/// in which case the plan fitted to f0 is reused throughout.
template <class Op>
RecoveryResult<typename Op::Domain>
recover_pg_ist(const Op& op, const typename Op::Range& g, const SolverConfig& cfg,
               const typename Op::Domain* ground_truth = nullptr) {
    using DomainT = typename Op::Domain;
    DomainT f = op.adjoint(g);
    if (!detail::all_finite(f))
        throw DivergenceError("recover_pg_ist: non-finite initial iterate");
    std::optional<ThresholdPlan> frozen;
    if (cfg.freeze_plan)
        frozen = make_plan(f, cfg.strategy);
    RecoveryResult<DomainT> result{f, 0, StopReason::max_iter, {}};
    for (std::size_t n = 1; n <= cfg.max_iter; ++n) {
        const ThresholdPlan plan = frozen ? *frozen : make_plan(f, cfg.strategy);
        DomainT h = apply_constraint(f, plan, cfg.rule);
        const auto residual_obs = observation_subtract(g, op.forward(h));
        DomainT next = op.adjoint_values(residual_obs.values);
        detail::add_into(next, h);
        if (!detail::all_finite(next))
            throw DivergenceError("recover_pg_ist: non-finite iterate");
        const double rel = relative_change(f, next);
        f = std::move(next);
        result.iterations = n;
        if (cfg.record_trace) {
            TraceRow row;
            row.iter = n;
            row.rel_change = rel;
            row.residual = observation_norm2(observation_subtract(g, op.forward(f)));
            if (ground_truth)
                row.mse = mse(f, *ground_truth);
            result.trace.push_back(row);
        }
        if (rel < cfg.delta) {
            result.stop = StopReason::converged;
            break;
        }
    }
    result.estimate = std::move(f);
    return result;
}

/// Thresholded Landweber iteration with a fixed threshold:
///   fn = shrink(f_{n-1} + K* (g - K f_{n-1}))
/// The trace objective is |K f - g|^2 + gamma * L1(detail coefficients).
template <class Op>
RecoveryResult<typename Op::Domain>
recover_ista(const Op& op, const typename Op::Range& g, double gamma,
             const SolverConfig& cfg,
             const typename Op::Domain* ground_truth = nullptr) {
    using DomainT = typename Op::Domain;
    if (!(gamma >= 0.0))
        throw InvalidParameterError("recover_ista: gamma must be nonnegative");
    const ThresholdPlan plan = [&] {
        if constexpr (std::is_same_v<DomainT, Signal1D>)
            return fixed_plan_1d(gamma);
        else
            return fixed_plan_2d(gamma);
    }();
    DomainT f = op.adjoint(g);
    if (!detail::all_finite(f))
        throw DivergenceError("recover_ista: non-finite initial iterate");
    RecoveryResult<DomainT> result{f, 0, StopReason::max_iter, {}};
    for (std::size_t n = 1; n <= cfg.max_iter; ++n) {
        const auto residual_obs = observation_subtract(g, op.forward(f));
        DomainT next = op.adjoint_values(residual_obs.values);
        detail::add_into(next, f);
        next = apply_constraint(next, plan, cfg.rule);
        if (!detail::all_finite(next))
            throw DivergenceError("recover_ista: non-finite iterate");
        const double rel = relative_change(f, next);
        f = std::move(next);
        result.iterations = n;
        if (cfg.record_trace) {
            TraceRow row;
            row.iter = n;
            row.rel_change = rel;
            const double res = observation_norm2(observation_subtract(g, op.forward(f)));
            row.residual = res;
            row.objective = res * res + gamma * detail::detail_l1(f);
            if (ground_truth)
                row.mse = mse(f, *ground_truth);
            result.trace.push_back(row);
        }
        if (rel < cfg.delta) {
            result.stop = StopReason::converged;
            break;
        }
    }
    result.estimate = std::move(f);
    return result;
}

/// Band-limited extrapolation by alternating projections:
///   f0 = g (zeros off the known set)
///   h  = lowpass(f_{n-1})   keeping centered DFT bins |k| <= band
///   fn = g on known indices, h elsewhere
/// Both projections are orthogonal, so the error norm cannot increase.
inline RecoveryResult<Signal1D>
pg_extrapolate(const Signal1D& g, const SamplingPattern1D& known, std::size_t band,
               const SolverConfig& cfg, const Signal1D* ground_truth = nullptr) {
    const std::size_t n = g.samples.size();
    if (n != known.n)
        throw ShapeError("pg_extrapolate: signal length differs from pattern");
    if (!detail::is_pow2(n))
        throw InvalidSizeError("pg_extrapolate: length must be a power of two");
    if (band < 1 || band >= n / 2)
        throw InvalidParameterError("pg_extrapolate: band must lie in [1, n/2)");
    std::vector<std::uint8_t> is_known(n, 0);
    for (std::size_t idx : known.indices)
        is_known[idx] = 1;
    const auto lowpass = [&](const Signal1D& x) {
        std::vector<Complex> spec(n);
        for (std::size_t i = 0; i < n; ++i)
            spec[i] = Complex(x.samples[i], 0.0);
        spec = dft1(spec);
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t centered = k <= n / 2 ? k : n - k;
            if (centered > band)
                spec[k] = Complex(0.0, 0.0);
        }
        spec = dft1(spec, true);
        Signal1D y;
        y.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            y.samples[i] = spec[i].real();
        return y;
    };
    Signal1D f = g;
    for (std::size_t i = 0; i < n; ++i)
        if (!is_known[i])
            f.samples[i] = 0.0;
    const Signal1D observed = f;
    RecoveryResult<Signal1D> result{f, 0, StopReason::max_iter, {}};
    for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
        Signal1D next = lowpass(f);
        // Known-set mismatch of the band-limited iterate, before reimposing.
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (is_known[i]) {
                const double d = next.samples[i] - observed.samples[i];
                acc += d * d;
                next.samples[i] = observed.samples[i];
            }
        if (!detail::all_finite(next))
            throw DivergenceError("pg_extrapolate: non-finite iterate");
        const double rel = relative_change(f, next);
        f = std::move(next);
        result.iterations = it;
        if (cfg.record_trace) {
            TraceRow row;
            row.iter = it;
            row.rel_change = rel;
            row.residual = std::sqrt(acc);
            if (ground_truth)
                row.mse = mse(f, *ground_truth);
            result.trace.push_back(row);
        }
        if (rel < cfg.delta) {
            result.stop = StopReason::converged;
            break;
        }
    }
    result.estimate = std::move(f);
    return result;
}

} // namespace sparserec
