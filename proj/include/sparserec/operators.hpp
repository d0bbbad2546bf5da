#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "sparserec/errors.hpp"
#include "sparserec/rng.hpp"
#include "sparserec/signals.hpp"
#include "sparserec/transforms.hpp"

namespace sparserec {

/// Subset of 1D sample positions; indices are sorted and unique.
struct SamplingPattern1D {
    std::size_t n = 0;
    std::vector<std::size_t> indices;

    friend bool operator==(const SamplingPattern1D&, const SamplingPattern1D&) = default;
};

/// Draws m distinct indices from [0, n) by partial Fisher-Yates, then sorts.
inline SamplingPattern1D make_random_pattern(std::size_t n, std::size_t m,
                                             std::uint64_t seed) {
    if (n == 0)
        throw InvalidSizeError("make_random_pattern: n must be positive");
    if (m == 0 || m > n)
        throw InvalidCountError("make_random_pattern: need 0 < m <= n");
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i)
        pool[i] = i;
    Rng rng(seed);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(pool[i], pool[j]);
    }
    SamplingPattern1D p;
    p.n = n;
    p.indices.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(m));
    std::sort(p.indices.begin(), p.indices.end());
    return p;
}

/// Observed values at the pattern's positions, in pattern order.
struct Observation1D {
    std::vector<double> values;
    SamplingPattern1D pattern;
};

inline Observation1D op1d_forward(const SamplingPattern1D& p, const Signal1D& f) {
    if (f.samples.size() != p.n)
        throw ShapeError("op1d_forward: signal length differs from pattern");
    Observation1D g;
    g.pattern = p;
    g.values.reserve(p.indices.size());
    for (std::size_t idx : p.indices)
        g.values.push_back(f.samples[idx]);
    return g;
}

/// Adjoint of sampling: scatter observed values back, zero elsewhere.
inline Signal1D op1d_adjoint(const SamplingPattern1D& p,
                             const std::vector<double>& values) {
    if (values.size() != p.indices.size())
        throw ShapeError("op1d_adjoint: value count differs from pattern");
    Signal1D f;
    f.samples.assign(p.n, 0.0);
    for (std::size_t i = 0; i < p.indices.size(); ++i)
        f.samples[p.indices[i]] = values[i];
    return f;
}

/// Star-shaped set of DFT cells over an n-by-n grid. cells is a row-major
/// 0/1 membership map; order lists member linear indices in row-major order.
struct RadialMask {
    std::size_t n = 0;
    std::vector<std::uint8_t> cells;
    std::vector<std::size_t> order;

    friend bool operator==(const RadialMask&, const RadialMask&) = default;
};

/// k_lines diameters at angles j*pi/k through the centered grid, rasterized
/// along the dominant axis, then symmetrized so that membership of (u, v)
/// implies membership of (-u mod n, -v mod n). DC always belongs.
inline RadialMask make_radial_mask(std::size_t n, std::size_t k_lines) {
    if (!detail::is_pow2(n))
        throw InvalidSizeError("make_radial_mask: n must be a power of two");
    if (k_lines == 0)
        throw InvalidCountError("make_radial_mask: need at least one line");
    RadialMask mask;
    mask.n = n;
    mask.cells.assign(n * n, 0);
    const auto half = static_cast<std::ptrdiff_t>(n / 2);
    const auto mark = [&](std::ptrdiff_t u, std::ptrdiff_t v) {
        const std::size_t r = static_cast<std::size_t>(((u % static_cast<std::ptrdiff_t>(n)) + static_cast<std::ptrdiff_t>(n)) % static_cast<std::ptrdiff_t>(n));
        const std::size_t c = static_cast<std::size_t>(((v % static_cast<std::ptrdiff_t>(n)) + static_cast<std::ptrdiff_t>(n)) % static_cast<std::ptrdiff_t>(n));
        mask.cells[r * n + c] = 1;
    };
    const double pi = 3.14159265358979323846;
    for (std::size_t j = 0; j < k_lines; ++j) {
        const double theta = static_cast<double>(j) * pi / static_cast<double>(k_lines);
        const double s = std::sin(theta);
        const double c = std::cos(theta);
        if (std::abs(c) >= std::abs(s)) {
            // Dominant horizontal axis: step v, round u = v * tan(theta).
            const double t = s / c;
            for (std::ptrdiff_t v = -half; v < half; ++v)
                mark(std::lround(static_cast<double>(v) * t), v);
        } else {
            const double t = c / s;
            for (std::ptrdiff_t u = -half; u < half; ++u)
                mark(u, std::lround(static_cast<double>(u) * t));
        }
    }
    // Hermitian closure keeps real images consistent with their spectra.
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (mask.cells[r * n + c])
                mask.cells[((n - r) % n) * n + ((n - c) % n)] = 1;
    mask.cells[0] = 1;
    for (std::size_t i = 0; i < n * n; ++i)
        if (mask.cells[i])
            mask.order.push_back(i);
    return mask;
}

/// Observed DFT values at the mask's cells, in mask.order order.
struct Observation2D {
    std::vector<Complex> values;
    RadialMask mask;
};

inline Observation2D op2d_forward(const RadialMask& mask, const Image2D& f) {
    if (f.rows != mask.n || f.cols != mask.n)
        throw ShapeError("op2d_forward: image shape differs from mask");
    ComplexGrid grid = make_grid(mask.n, mask.n);
    for (std::size_t i = 0; i < f.pixels.size(); ++i)
        grid.entries[i] = Complex(f.pixels[i], 0.0);
    const ComplexGrid spectrum = dft2(grid);
    Observation2D g;
    g.mask = mask;
    g.values.reserve(mask.order.size());
    for (std::size_t idx : mask.order)
        g.values.push_back(spectrum.entries[idx]);
    return g;
}

/// Adjoint of masked Fourier sampling: zero-filled spectrum, inverse unitary
/// DFT, real part.
inline Image2D op2d_adjoint(const RadialMask& mask, const std::vector<Complex>& values) {
    if (values.size() != mask.order.size())
        throw ShapeError("op2d_adjoint: value count differs from mask");
    ComplexGrid spectrum = make_grid(mask.n, mask.n);
    for (std::size_t i = 0; i < mask.order.size(); ++i)
        spectrum.entries[mask.order[i]] = values[i];
    const ComplexGrid grid = dft2(spectrum, true);
    Image2D f = make_image(mask.n, mask.n);
    for (std::size_t i = 0; i < f.pixels.size(); ++i)
        f.pixels[i] = grid.entries[i].real();
    return f;
}

/// Operator handle for subsampled identity on 1D signals. Satisfies
/// K K* = I because the pattern indices are distinct.
struct Sampling1D {
    using Domain = Signal1D;
    using Range = Observation1D;

    SamplingPattern1D pattern;

    Observation1D forward(const Signal1D& f) const { return op1d_forward(pattern, f); }
    Signal1D adjoint(const Observation1D& g) const {
        if (!(g.pattern == pattern))
            throw ShapeError("Sampling1D::adjoint: observation pattern differs");
        return op1d_adjoint(pattern, g.values);
    }
    Signal1D adjoint_values(const std::vector<double>& values) const {
        return op1d_adjoint(pattern, values);
    }
};

/// Operator handle for masked unitary Fourier sampling on square images.
/// K K* = I because mask cells are distinct unitary-DFT rows.
struct RadialFourier {
    using Domain = Image2D;
    using Range = Observation2D;

    RadialMask mask;

    Observation2D forward(const Image2D& f) const { return op2d_forward(mask, f); }
    Image2D adjoint(const Observation2D& g) const {
        if (!(g.mask == mask))
            throw ShapeError("RadialFourier::adjoint: observation mask differs");
        return op2d_adjoint(mask, g.values);
    }
    Image2D adjoint_values(const std::vector<Complex>& values) const {
        return op2d_adjoint(mask, values);
    }
};

/// Residual g - h in the observation range; patterns must agree.
inline Observation1D observation_subtract(const Observation1D& g, const Observation1D& h) {
    if (!(g.pattern == h.pattern))
        throw ShapeError("observation_subtract: patterns differ");
    Observation1D r = g;
    for (std::size_t i = 0; i < r.values.size(); ++i)
        r.values[i] -= h.values[i];
    return r;
}

inline Observation2D observation_subtract(const Observation2D& g, const Observation2D& h) {
    if (!(g.mask == h.mask))
        throw ShapeError("observation_subtract: masks differ");
    Observation2D r = g;
    for (std::size_t i = 0; i < r.values.size(); ++i)
        r.values[i] -= h.values[i];
    return r;
}

inline double observation_norm2(const Observation1D& g) {
    double acc = 0.0;
    for (double v : g.values)
        acc += v * v;
    return std::sqrt(acc);
}

inline double observation_norm2(const Observation2D& g) {
    double acc = 0.0;
    for (const Complex& v : g.values)
        acc += std::norm(v);
    return std::sqrt(acc);
}

} // namespace sparserec
