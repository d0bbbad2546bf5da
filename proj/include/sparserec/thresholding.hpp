#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sparserec/errors.hpp"
#include "sparserec/transforms.hpp"

namespace sparserec {

enum class ShrinkRule { soft, hard };

/// Scalar soft shrinkage with branch points at gamma/2:
///   x + g/2  for x <= -g/2,   0  for |x| < g/2,   x - g/2  for x >= g/2.
inline double soft(double x, double gamma) {
    const double half = 0.5 * gamma;
    if (x <= -half)
        return x + half;
    if (x >= half)
        return x - half;
    return 0.0;
}

/// Scalar hard shrinkage: zero below gamma/2 in magnitude, identity above.
inline double hard(double x, double gamma) {
    return std::abs(x) < 0.5 * gamma ? 0.0 : x;
}

inline double shrink(double x, double gamma, ShrinkRule rule) {
    return rule == ShrinkRule::soft ? soft(x, gamma) : hard(x, gamma);
}

/// How per-subband thresholds are chosen.
struct ThresholdStrategy {
    enum class Kind { fixed, birge_massart };
    Kind kind = Kind::birge_massart;
    double gamma = 0.0;     // fixed mode
    double alpha = 3.0;     // birge_massart mode
    std::size_t budget = 0; // birge_massart M; 0 means total signal length
};

/// Per-subband soft-threshold values plus the strategy that produced them.
/// Approximation subbands are never listed and never thresholded.
struct ThresholdPlan {
    std::map<std::string, double> gamma_per_subband;
    ThresholdStrategy strategy;
};

namespace detail {

/// Kept-coefficient budget for decomposition depth 1: round(M / 2^alpha).
inline std::size_t birge_massart_keep_count(std::size_t budget, double alpha) {
    return static_cast<std::size_t>(
        std::llround(static_cast<double>(budget) / std::pow(2.0, alpha)));
}

/// gamma = 2 * ((n1+1)-th largest magnitude), so shrinkage at gamma/2 zeroes
/// all but the n1 largest; 0 when the budget covers the whole subband.
inline double birge_massart_gamma(const std::vector<double>& subband, std::size_t n1) {
    if (n1 >= subband.size())
        return 0.0;
    std::vector<double> mags(subband.size());
    std::transform(subband.begin(), subband.end(), mags.begin(),
                   [](double v) { return std::abs(v); });
    std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(n1),
                     mags.end(), std::greater<double>());
    return 2.0 * mags[n1];
}

} // namespace detail

inline ThresholdPlan birge_massart_plan(const SwtCoeffs1D& coeffs, double alpha,
                                        std::size_t budget) {
    if (alpha <= 1.0)
        throw InvalidParameterError("birge_massart_plan: alpha must exceed 1");
    const std::size_t n1 = detail::birge_massart_keep_count(budget, alpha);
    ThresholdPlan plan;
    plan.strategy = {ThresholdStrategy::Kind::birge_massart, 0.0, alpha, budget};
    plan.gamma_per_subband["detail"] = detail::birge_massart_gamma(coeffs.detail, n1);
    return plan;
}

inline ThresholdPlan birge_massart_plan(const SwtCoeffs2D& coeffs, double alpha,
                                        std::size_t budget) {
    if (alpha <= 1.0)
        throw InvalidParameterError("birge_massart_plan: alpha must exceed 1");
    const std::size_t n1 = detail::birge_massart_keep_count(budget, alpha);
    ThresholdPlan plan;
    plan.strategy = {ThresholdStrategy::Kind::birge_massart, 0.0, alpha, budget};
    plan.gamma_per_subband["lh"] = detail::birge_massart_gamma(coeffs.lh.pixels, n1);
    plan.gamma_per_subband["hl"] = detail::birge_massart_gamma(coeffs.hl.pixels, n1);
    plan.gamma_per_subband["hh"] = detail::birge_massart_gamma(coeffs.hh.pixels, n1);
    return plan;
}

inline ThresholdPlan fixed_plan_1d(double gamma) {
    ThresholdPlan plan;
    plan.strategy = {ThresholdStrategy::Kind::fixed, gamma, 0.0, 0};
    plan.gamma_per_subband["detail"] = gamma;
    return plan;
}

inline ThresholdPlan fixed_plan_2d(double gamma) {
    ThresholdPlan plan;
    plan.strategy = {ThresholdStrategy::Kind::fixed, gamma, 0.0, 0};
    plan.gamma_per_subband["lh"] = gamma;
    plan.gamma_per_subband["hl"] = gamma;
    plan.gamma_per_subband["hh"] = gamma;
    return plan;
}

/// Plan for this signal under the given strategy; budget 0 resolves to the
/// signal's total element count.
inline ThresholdPlan make_plan(const Signal1D& f, const ThresholdStrategy& st) {
    if (st.kind == ThresholdStrategy::Kind::fixed)
        return fixed_plan_1d(st.gamma);
    const std::size_t budget = st.budget ? st.budget : f.samples.size();
    return birge_massart_plan(swt1_forward(f), st.alpha, budget);
}

inline ThresholdPlan make_plan(const Image2D& f, const ThresholdStrategy& st) {
    if (st.kind == ThresholdStrategy::Kind::fixed)
        return fixed_plan_2d(st.gamma);
    const std::size_t budget = st.budget ? st.budget : f.pixels.size();
    return birge_massart_plan(swt2_forward(f), st.alpha, budget);
}

namespace detail {

inline double plan_gamma(const ThresholdPlan& plan, const std::string& key) {
    const auto it = plan.gamma_per_subband.find(key);
    if (it == plan.gamma_per_subband.end())
        throw ShapeError("apply_constraint: plan lacks subband '" + key + "'");
    if (it->second < 0.0)
        throw InvalidParameterError("apply_constraint: negative threshold");
    return it->second;
}

inline void shrink_subband(std::vector<double>& v, double gamma, ShrinkRule rule) {
    for (double& x : v)
        x = shrink(x, gamma, rule);
}

} // namespace detail

/// Signal-domain constraint operator: SWT, shrink the detail subbands with
/// the plan's thresholds, inverse SWT. Approximation subbands pass through.
inline Signal1D apply_constraint(const Signal1D& f, const ThresholdPlan& plan,
                                 ShrinkRule rule = ShrinkRule::soft) {
    SwtCoeffs1D c = swt1_forward(f);
    detail::shrink_subband(c.detail, detail::plan_gamma(plan, "detail"), rule);
    return swt1_inverse(c);
}

inline Image2D apply_constraint(const Image2D& f, const ThresholdPlan& plan,
                                ShrinkRule rule = ShrinkRule::soft) {
    SwtCoeffs2D c = swt2_forward(f);
    detail::shrink_subband(c.lh.pixels, detail::plan_gamma(plan, "lh"), rule);
    detail::shrink_subband(c.hl.pixels, detail::plan_gamma(plan, "hl"), rule);
    detail::shrink_subband(c.hh.pixels, detail::plan_gamma(plan, "hh"), rule);
    return swt2_inverse(c);
}

} // namespace sparserec
