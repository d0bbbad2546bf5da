#pragma once

#include <cmath>
#include <limits>

#include "sparserec/errors.hpp"
#include "sparserec/signals.hpp"

namespace sparserec {

struct MetricReport {
    double mse = 0.0;
    double psnr_db = 0.0;
    double peak = 1.0;
};

template <class T>
double mse(const T& a, const T& b) {
    if (!same_shape(a, b))
        throw ShapeError("mse: shape mismatch");
    const auto ea = elements(a);
    const auto eb = elements(b);
    double acc = 0.0;
    for (std::size_t i = 0; i < ea.size(); ++i) {
        const double d = ea[i] - eb[i];
        acc += d * d;
    }
    return acc / static_cast<double>(ea.size());
}

/// 10 log10(peak^2 / mse), +infinity when the inputs coincide.
template <class T>
double psnr(const T& a, const T& b, double peak = 1.0) {
    if (peak <= 0.0)
        throw InvalidParameterError("psnr: peak must be positive");
    const double m = mse(a, b);
    if (m == 0.0)
        return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / m);
}

template <class T>
MetricReport metric_report(const T& a, const T& b, double peak = 1.0) {
    return MetricReport{mse(a, b), psnr(a, b, peak), peak};
}

/// Pixels where the forward-difference gradient magnitude exceeds tol.
/// dx and dy are zero at the last column and row respectively.
inline std::size_t nonzero_gradient_count(const Image2D& img, double tol = 1e-12) {
    std::size_t count = 0;
    for (std::size_t r = 0; r < img.rows; ++r) {
        for (std::size_t c = 0; c < img.cols; ++c) {
            const double dx = (c + 1 < img.cols) ? img.at(r, c + 1) - img.at(r, c) : 0.0;
            const double dy = (r + 1 < img.rows) ? img.at(r + 1, c) - img.at(r, c) : 0.0;
            if (std::hypot(dx, dy) > tol)
                ++count;
        }
    }
    return count;
}

/// ||curr - prev|| / ||prev||; 0 when both norms vanish, +infinity when
/// only the denominator does.
template <class T>
double relative_change(const T& prev, const T& curr) {
    if (!same_shape(prev, curr))
        throw ShapeError("relative_change: shape mismatch");
    const auto ep = elements(prev);
    const auto ec = elements(curr);
    double dn = 0.0, pn = 0.0;
    for (std::size_t i = 0; i < ep.size(); ++i) {
        const double d = ec[i] - ep[i];
        dn += d * d;
        pn += ep[i] * ep[i];
    }
    if (pn == 0.0)
        return dn == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(dn) / std::sqrt(pn);
}

template <class T>
double norm2(const T& x) {
    double acc = 0.0;
    for (const double v : elements(x))
        acc += v * v;
    return std::sqrt(acc);
}

} // namespace sparserec
