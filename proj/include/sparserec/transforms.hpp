#pragma once

#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "sparserec/errors.hpp"
#include "sparserec/signals.hpp"

namespace sparserec {

using Complex = std::complex<double>;

/// Complex-valued grid, row-major. Frequency-domain container for the 2D DFT.
struct ComplexGrid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Complex> entries;

    Complex& at(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
    Complex at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
};

inline ComplexGrid make_grid(std::size_t rows, std::size_t cols) {
    return ComplexGrid{rows, cols, std::vector<Complex>(rows * cols)};
}

/// Undecimated 1-level Haar coefficients; both subbands keep the source length.
struct SwtCoeffs1D {
    std::vector<double> approx;
    std::vector<double> detail;
};

/// 2D counterpart; subband letters are (horizontal band, vertical band).
struct SwtCoeffs2D {
    Image2D ll, lh, hl, hh;
};

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Twiddle table w[k] = exp(-2 pi i k / n), k < n/2.
inline std::vector<Complex> fft_twiddles(std::size_t n) {
    std::vector<Complex> w(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k)
        w[k] = std::polar(1.0, -2.0 * std::numbers::pi *
                                   static_cast<double>(k) / static_cast<double>(n));
    return w;
}

/// In-place radix-2 transform, no normalization. The inverse conjugates the
/// twiddles.
inline void fft_radix2(std::span<Complex> a, std::span<const Complex> w, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j |= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                Complex tw = w[j * stride];
                if (inverse)
                    tw = std::conj(tw);
                const Complex u = a[i + j];
                const Complex v = a[i + j + len / 2] * tw;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
}

} // namespace detail

/// Unitary DFT of a power-of-two-length vector. Forward kernel
/// exp(-2 pi i jk/n)/sqrt(n); the inverse conjugates the kernel with the
/// same normalization, so inverse(forward(x)) = x.
inline std::vector<Complex> dft1(std::span<const Complex> x, bool inverse = false) {
    const std::size_t n = x.size();
    if (!detail::is_pow2(n))
        throw InvalidSizeError("dft1: length must be a power of two");
    std::vector<Complex> a(x.begin(), x.end());
    const auto w = detail::fft_twiddles(n);
    detail::fft_radix2(a, w, inverse);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (Complex& v : a)
        v *= scale;
    return a;
}

/// Separable unitary 2D DFT: dft1 along each row, then along each column.
inline ComplexGrid dft2(const ComplexGrid& x, bool inverse = false) {
    if (!detail::is_pow2(x.rows) || !detail::is_pow2(x.cols))
        throw InvalidSizeError("dft2: dimensions must be powers of two");
    ComplexGrid out = x;
    const auto wr = detail::fft_twiddles(x.cols);
    for (std::size_t r = 0; r < x.rows; ++r)
        detail::fft_radix2(std::span(out.entries).subspan(r * x.cols, x.cols), wr, inverse);
    const auto wc = detail::fft_twiddles(x.rows);
    std::vector<Complex> col(x.rows);
    for (std::size_t c = 0; c < x.cols; ++c) {
        for (std::size_t r = 0; r < x.rows; ++r)
            col[r] = out.at(r, c);
        detail::fft_radix2(col, wc, inverse);
        for (std::size_t r = 0; r < x.rows; ++r)
            out.at(r, c) = col[r];
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(x.rows) *
                                         static_cast<double>(x.cols));
    for (Complex& v : out.entries)
        v *= scale;
    return out;
}

/// 1-level undecimated Haar analysis with periodic extension:
///   approx[i] = (x[i] + x[i+1])/sqrt(2), detail[i] = (x[i] - x[i+1])/sqrt(2).
inline SwtCoeffs1D swt1_forward(const Signal1D& x) {
    const std::size_t n = x.samples.size();
    if (n < 2)
        throw InvalidSizeError("swt1_forward: n must be >= 2");
    SwtCoeffs1D c;
    c.approx.resize(n);
    c.detail.resize(n);
    const double s = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = x.samples[i];
        const double b = x.samples[(i + 1) % n];
        c.approx[i] = (a + b) * s;
        c.detail[i] = (a - b) * s;
    }
    return c;
}

/// Averages the two shift-consistent reconstructions; exact inverse of
/// swt1_forward.
inline Signal1D swt1_inverse(const SwtCoeffs1D& c) {
    const std::size_t n = c.approx.size();
    if (c.detail.size() != n)
        throw ShapeError("swt1_inverse: subband lengths differ");
    Signal1D x;
    x.samples.resize(n);
    const double s = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t p = (i + n - 1) % n;
        x.samples[i] = 0.5 * ((c.approx[i] + c.detail[i]) * s +
                              (c.approx[p] - c.detail[p]) * s);
    }
    return x;
}

namespace detail {

// 1D Haar pass along each row (axis = cols) or each column (axis = rows).
inline void swt_rows(const Image2D& x, Image2D& low, Image2D& high) {
    const double s = 1.0 / std::sqrt(2.0);
    for (std::size_t r = 0; r < x.rows; ++r) {
        for (std::size_t c = 0; c < x.cols; ++c) {
            const double a = x.at(r, c);
            const double b = x.at(r, (c + 1) % x.cols);
            low.at(r, c) = (a + b) * s;
            high.at(r, c) = (a - b) * s;
        }
    }
}

inline void swt_cols(const Image2D& x, Image2D& low, Image2D& high) {
    const double s = 1.0 / std::sqrt(2.0);
    for (std::size_t r = 0; r < x.rows; ++r) {
        const std::size_t rn = (r + 1) % x.rows;
        for (std::size_t c = 0; c < x.cols; ++c) {
            const double a = x.at(r, c);
            const double b = x.at(rn, c);
            low.at(r, c) = (a + b) * s;
            high.at(r, c) = (a - b) * s;
        }
    }
}

inline Image2D iswt_rows(const Image2D& low, const Image2D& high) {
    Image2D x = make_image(low.rows, low.cols);
    const double s = 1.0 / std::sqrt(2.0);
    for (std::size_t r = 0; r < x.rows; ++r) {
        for (std::size_t c = 0; c < x.cols; ++c) {
            const std::size_t p = (c + x.cols - 1) % x.cols;
            x.at(r, c) = 0.5 * ((low.at(r, c) + high.at(r, c)) * s +
                                (low.at(r, p) - high.at(r, p)) * s);
        }
    }
    return x;
}

inline Image2D iswt_cols(const Image2D& low, const Image2D& high) {
    Image2D x = make_image(low.rows, low.cols);
    const double s = 1.0 / std::sqrt(2.0);
    for (std::size_t r = 0; r < x.rows; ++r) {
        const std::size_t p = (r + x.rows - 1) % x.rows;
        for (std::size_t c = 0; c < x.cols; ++c) {
            x.at(r, c) = 0.5 * ((low.at(r, c) + high.at(r, c)) * s +
                                (low.at(p, c) - high.at(p, c)) * s);
        }
    }
    return x;
}

} // namespace detail

/// Separable 2D analysis: rows first, then columns of each half.
inline SwtCoeffs2D swt2_forward(const Image2D& x) {
    if (x.rows < 2 || x.cols < 2)
        throw InvalidSizeError("swt2_forward: dimensions must be >= 2");
    Image2D low = make_image(x.rows, x.cols);
    Image2D high = make_image(x.rows, x.cols);
    detail::swt_rows(x, low, high);
    SwtCoeffs2D c{make_image(x.rows, x.cols), make_image(x.rows, x.cols),
                  make_image(x.rows, x.cols), make_image(x.rows, x.cols)};
    detail::swt_cols(low, c.ll, c.lh);
    detail::swt_cols(high, c.hl, c.hh);
    return c;
}

inline Image2D swt2_inverse(const SwtCoeffs2D& c) {
    if (!same_shape(c.ll, c.lh) || !same_shape(c.ll, c.hl) || !same_shape(c.ll, c.hh))
        throw ShapeError("swt2_inverse: subband dimensions differ");
    const Image2D low = detail::iswt_cols(c.ll, c.lh);
    const Image2D high = detail::iswt_cols(c.hl, c.hh);
    return detail::iswt_rows(low, high);
}

} // namespace sparserec
