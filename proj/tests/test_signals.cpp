#include "catch_amalgamated.hpp"

#include <algorithm>
#include <cmath>

#include "sparserec/metrics.hpp"
#include "sparserec/signals.hpp"

using namespace sparserec;
using Catch::Matchers::WithinAbs;

TEST_CASE("heavisine matches frozen values at n = 8") {
    const Signal1D f = heavisine(8);
    REQUIRE(f.samples.size() == 8);
    const double expected[8] = {4.0,
                                4.4408920985006262e-16,
                                -6.0,
                                -2.0000000000000009,
                                2.0,
                                1.4432899320127035e-15,
                                -4.0,
                                -1.9984014443252818e-15};
    for (std::size_t i = 0; i < 8; ++i)
        REQUIRE_THAT(f.samples[i], WithinAbs(expected[i], 1e-12));
}

TEST_CASE("heavisine midpoint sits on the two step edges") {
    const Signal1D f = heavisine(1024);
    REQUIRE(f.samples.size() == 1024);
    // t = 0.5: the sine term vanishes and both steps contribute -1.
    REQUIRE_THAT(f.samples[511], WithinAbs(-2.0, 1e-12));
}

TEST_CASE("heavisine rejects degenerate lengths") {
    REQUIRE_THROWS_AS(heavisine(0), InvalidSizeError);
    REQUIRE_THROWS_AS(heavisine(1), InvalidSizeError);
}

TEST_CASE("phantom values stay in the unit interval") {
    const Image2D img = shepp_logan(256);
    REQUIRE(img.rows == 256);
    REQUIRE(img.cols == 256);
    const auto [lo, hi] = std::minmax_element(img.pixels.begin(), img.pixels.end());
    REQUIRE(*lo >= 0.0);
    REQUIRE(*hi <= 1.0);
    REQUIRE(*hi > 0.9);
}

TEST_CASE("phantom corners lie outside every ellipse") {
    const Image2D img = shepp_logan(64);
    REQUIRE(img.at(0, 0) == 0.0);
    REQUIRE(img.at(0, 63) == 0.0);
    REQUIRE(img.at(63, 0) == 0.0);
    REQUIRE(img.at(63, 63) == 0.0);
}

TEST_CASE("phantom rejects tiny grids") {
    REQUIRE_THROWS_AS(shepp_logan(8), InvalidSizeError);
}

TEST_CASE("phantom gradient support is stable at 256") {
    const Image2D img = shepp_logan(256);
    const std::size_t count = nonzero_gradient_count(img);
    // Regression pin; the nominal figure for this scene is 2184.
    REQUIRE(count == 2194);
    REQUIRE(count >= 2140);
    REQUIRE(count <= 2228);
}

TEST_CASE("awgn is deterministic per seed") {
    const Signal1D f = heavisine(256);
    const Signal1D a = add_awgn(f, 20.0, 7);
    const Signal1D b = add_awgn(f, 20.0, 7);
    const Signal1D c = add_awgn(f, 20.0, 8);
    REQUIRE(a.samples == b.samples);
    REQUIRE(a.samples != c.samples);
}

TEST_CASE("awgn noise level follows the decibel argument") {
    const Image2D img = shepp_logan(256);
    const Image2D noisy = add_awgn(img, 20.0, 11);
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        const double d = noisy.pixels[i] - img.pixels[i];
        sum += d;
        sumsq += d * d;
    }
    const double n = static_cast<double>(img.pixels.size());
    const double mean = sum / n;
    const double stddev = std::sqrt(sumsq / n - mean * mean);
    // 20 dB target PSNR means sigma = 0.1.
    REQUIRE_THAT(mean, WithinAbs(0.0, 0.005));
    REQUIRE_THAT(stddev, WithinAbs(0.1, 0.005));
}

TEST_CASE("awgn hits the requested psnr in the large-sample limit") {
    const Image2D img = shepp_logan(256);
    const Image2D noisy = add_awgn(img, 30.0, 3);
    const double p = psnr(noisy, img, 1.0);
    REQUIRE(p > 29.0);
    REQUIRE(p < 31.0);
}

TEST_CASE("awgn rejects a non-finite level") {
    const Signal1D f = heavisine(16);
    REQUIRE_THROWS_AS(add_awgn(f, std::nan(""), 1), InvalidParameterError);
}
