#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "sparserec/errors.hpp"
#include "sparserec/rng.hpp"

namespace sparserec {

/// Real-valued 1D signal.
struct Signal1D {
    std::vector<double> samples;

    std::size_t size() const { return samples.size(); }
};

/// Real-valued image, row-major.
struct Image2D {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> pixels;

    double& at(std::size_t r, std::size_t c) { return pixels[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return pixels[r * cols + c]; }
    std::size_t size() const { return pixels.size(); }
};

inline Image2D make_image(std::size_t rows, std::size_t cols, double fill = 0.0) {
    return Image2D{rows, cols, std::vector<double>(rows * cols, fill)};
}

// Uniform element access so metrics and solvers can treat both signal kinds
// as flat vectors.
inline std::span<const double> elements(const Signal1D& s) { return s.samples; }
inline std::span<double> elements(Signal1D& s) { return s.samples; }
inline std::span<const double> elements(const Image2D& im) { return im.pixels; }
inline std::span<double> elements(Image2D& im) { return im.pixels; }

inline bool same_shape(const Signal1D& a, const Signal1D& b) {
    return a.samples.size() == b.samples.size();
}
inline bool same_shape(const Image2D& a, const Image2D& b) {
    return a.rows == b.rows && a.cols == b.cols;
}

/// One ellipse of the phantom: additive intensity, semi-axes as a fraction
/// of the half-width, center in [-1,1]^2 coordinates, rotation in degrees.
struct EllipseSpec {
    double intensity;
    double a, b;
    double x0, y0;
    double phi_deg;
};

/// The classic ten-ellipse Shepp-Logan table.
inline constexpr std::array<EllipseSpec, 10> shepp_logan_ellipses = {{
    {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
    {-0.98, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
    {-0.02, 0.11, 0.31, 0.22, 0.0, -18.0},
    {-0.02, 0.16, 0.41, -0.22, 0.0, 18.0},
    {0.01, 0.21, 0.25, 0.0, 0.35, 0.0},
    {0.01, 0.046, 0.046, 0.0, 0.1, 0.0},
    {0.01, 0.046, 0.046, 0.0, -0.1, 0.0},
    {0.01, 0.046, 0.023, -0.08, -0.605, 0.0},
    {0.01, 0.023, 0.023, 0.0, -0.606, 0.0},
    {0.01, 0.023, 0.046, 0.06, -0.605, 0.0},
}};

/// HeaviSine test signal on the grid t_i = (i+1)/n:
///   f(t) = 4 sin(4 pi t) - sgn(t - 0.3) - sgn(0.72 - t)
inline Signal1D heavisine(std::size_t n) {
    if (n < 2)
        throw InvalidSizeError("heavisine: n must be >= 2");
    auto sgn = [](double v) { return (v > 0.0) - (v < 0.0); };
    Signal1D out;
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i + 1) / static_cast<double>(n);
        out.samples[i] = 4.0 * std::sin(4.0 * std::numbers::pi * t) -
                         sgn(t - 0.3) - sgn(0.72 - t);
    }
    return out;
}

/// n x n Shepp-Logan phantom. Each pixel sums the intensities of the
/// ellipses containing its center, with pixel (r,c) mapped to
/// (x, y) = ((c+0.5)*2/n - 1, 1 - (r+0.5)*2/n); the result is clipped
/// to [0,1]. No anti-aliasing.
inline Image2D shepp_logan(std::size_t n) {
    if (n < 16)
        throw InvalidSizeError("shepp_logan: n must be >= 16");
    Image2D img = make_image(n, n);
    constexpr double deg = std::numbers::pi / 180.0;
    for (std::size_t r = 0; r < n; ++r) {
        const double y = 1.0 - (static_cast<double>(r) + 0.5) * 2.0 / static_cast<double>(n);
        for (std::size_t c = 0; c < n; ++c) {
            const double x = (static_cast<double>(c) + 0.5) * 2.0 / static_cast<double>(n) - 1.0;
            double v = 0.0;
            for (const EllipseSpec& e : shepp_logan_ellipses) {
                const double ct = std::cos(e.phi_deg * deg);
                const double st = std::sin(e.phi_deg * deg);
                const double dx = x - e.x0;
                const double dy = y - e.y0;
                const double xr = dx * ct + dy * st;
                const double yr = -dx * st + dy * ct;
                if ((xr / e.a) * (xr / e.a) + (yr / e.b) * (yr / e.b) <= 1.0)
                    v += e.intensity;
            }
            img.at(r, c) = std::min(1.0, std::max(0.0, v));
        }
    }
    return img;
}

namespace detail {
template <class T>
T add_awgn_impl(const T& x, double noise_psnr_db, std::uint64_t seed) {
    if (!std::isfinite(noise_psnr_db))
        throw InvalidParameterError("add_awgn: noise_psnr_db must be finite");
    const double sigma = std::pow(10.0, -noise_psnr_db / 20.0); // peak = 1
    T out = x;
    Rng rng(seed);
    for (double& v : elements(out))
        v += sigma * rng.gaussian();
    return out;
}
} // namespace detail

/// Additive white Gaussian noise with sigma = 10^(-psnr_db/20), peak 1.
/// Deterministic in the seed.
inline Signal1D add_awgn(const Signal1D& x, double noise_psnr_db, std::uint64_t seed) {
    return detail::add_awgn_impl(x, noise_psnr_db, seed);
}
inline Image2D add_awgn(const Image2D& x, double noise_psnr_db, std::uint64_t seed) {
    return detail::add_awgn_impl(x, noise_psnr_db, seed);
}

} // namespace sparserec
