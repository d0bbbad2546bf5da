#include "catch_amalgamated.hpp"

#include <cmath>
#include <set>
#include <vector>

#include "sparserec/operators.hpp"
#include "sparserec/rng.hpp"

using namespace sparserec;
using Catch::Matchers::WithinAbs;

namespace {

Signal1D random_signal(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Signal1D f;
    f.samples.resize(n);
    for (double& x : f.samples)
        x = rng.gaussian();
    return f;
}

Image2D random_image(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Image2D img = make_image(n, n);
    for (double& x : img.pixels)
        x = rng.gaussian();
    return img;
}

} // namespace

TEST_CASE("random patterns are deterministic, sorted, and distinct") {
    const auto a = make_random_pattern(1024, 70, 5);
    const auto b = make_random_pattern(1024, 70, 5);
    const auto c = make_random_pattern(1024, 70, 6);
    REQUIRE(a == b);
    REQUIRE(!(a == c));
    REQUIRE(a.indices.size() == 70);
    for (std::size_t i = 1; i < a.indices.size(); ++i)
        REQUIRE(a.indices[i] > a.indices[i - 1]);
    REQUIRE(a.indices.back() < 1024);
}

TEST_CASE("random patterns never repeat an index") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto p = make_random_pattern(64, 48, seed);
        const std::set<std::size_t> unique(p.indices.begin(), p.indices.end());
        REQUIRE(unique.size() == 48);
    }
}

TEST_CASE("a full pattern enumerates every index") {
    const auto p = make_random_pattern(16, 16, 3);
    for (std::size_t i = 0; i < 16; ++i)
        REQUIRE(p.indices[i] == i);
}

TEST_CASE("pattern construction rejects bad counts") {
    REQUIRE_THROWS_AS(make_random_pattern(0, 1, 0), InvalidSizeError);
    REQUIRE_THROWS_AS(make_random_pattern(8, 0, 0), InvalidCountError);
    REQUIRE_THROWS_AS(make_random_pattern(8, 9, 0), InvalidCountError);
}

TEST_CASE("1d sampling picks and scatters the chosen entries") {
    Signal1D f;
    f.samples = {10.0, 20.0, 30.0, 40.0};
    SamplingPattern1D p;
    p.n = 4;
    p.indices = {1, 3};
    const Observation1D g = op1d_forward(p, f);
    REQUIRE(g.values == std::vector<double>{20.0, 40.0});
    const Signal1D back = op1d_adjoint(p, g.values);
    REQUIRE(back.samples == std::vector<double>{0.0, 20.0, 0.0, 40.0});
}

TEST_CASE("1d sampling satisfies the adjoint identity") {
    const auto p = make_random_pattern(256, 100, 21);
    const Signal1D f = random_signal(256, 22);
    Rng rng(23);
    std::vector<double> g(100);
    for (double& v : g)
        v = rng.gaussian();
    const Observation1D kf = op1d_forward(p, f);
    double lhs = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        lhs += kf.values[i] * g[i];
    const Signal1D kstar_g = op1d_adjoint(p, g);
    double rhs = 0.0;
    for (std::size_t i = 0; i < f.samples.size(); ++i)
        rhs += f.samples[i] * kstar_g.samples[i];
    REQUIRE_THAT(lhs, WithinAbs(rhs, 1e-12 * std::abs(lhs)));
}

TEST_CASE("1d sample-then-scatter-then-sample is the identity on observations") {
    const auto p = make_random_pattern(128, 40, 31);
    Rng rng(32);
    std::vector<double> values(40);
    for (double& v : values)
        v = rng.gaussian();
    const Observation1D again = op1d_forward(p, op1d_adjoint(p, values));
    REQUIRE(again.values == values);
}

TEST_CASE("a single diameter rasterizes to one grid row") {
    const RadialMask mask = make_radial_mask(8, 1);
    REQUIRE(mask.order.size() == 8);
    for (std::size_t idx : mask.order)
        REQUIRE(idx / 8 == 0);
}

TEST_CASE("two diameters rasterize to an axis-aligned cross") {
    const RadialMask mask = make_radial_mask(8, 2);
    std::set<std::size_t> expected;
    for (std::size_t c = 0; c < 8; ++c)
        expected.insert(c);
    for (std::size_t u = 0; u < 8; ++u)
        expected.insert(u * 8);
    const std::set<std::size_t> actual(mask.order.begin(), mask.order.end());
    REQUIRE(actual == expected);
}

TEST_CASE("masks are symmetric, contain dc, and list cells in row-major order") {
    for (std::size_t k : {1u, 2u, 3u, 9u, 21u}) {
        const RadialMask mask = make_radial_mask(32, k);
        REQUIRE(mask.cells[0] == 1);
        for (std::size_t r = 0; r < 32; ++r)
            for (std::size_t c = 0; c < 32; ++c)
                if (mask.cells[r * 32 + c])
                    REQUIRE(mask.cells[((32 - r) % 32) * 32 + ((32 - c) % 32)] == 1);
        std::size_t members = 0;
        for (std::uint8_t bit : mask.cells)
            members += bit;
        REQUIRE(mask.order.size() == members);
        for (std::size_t i = 1; i < mask.order.size(); ++i)
            REQUIRE(mask.order[i] > mask.order[i - 1]);
    }
}

TEST_CASE("mask construction rejects bad shapes") {
    REQUIRE_THROWS_AS(make_radial_mask(12, 3), InvalidSizeError);
    REQUIRE_THROWS_AS(make_radial_mask(16, 0), InvalidCountError);
}

TEST_CASE("2d sampling satisfies the real adjoint identity") {
    const RadialMask mask = make_radial_mask(16, 5);
    const Image2D f = random_image(16, 41);
    Rng rng(42);
    std::vector<Complex> g(mask.order.size());
    for (Complex& z : g)
        z = Complex(rng.gaussian(), rng.gaussian());
    const Observation2D kf = op2d_forward(mask, f);
    double lhs = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        lhs += (kf.values[i] * std::conj(g[i])).real();
    const Image2D kstar_g = op2d_adjoint(mask, g);
    double rhs = 0.0;
    for (std::size_t i = 0; i < f.pixels.size(); ++i)
        rhs += f.pixels[i] * kstar_g.pixels[i];
    REQUIRE_THAT(lhs, WithinAbs(rhs, 1e-10));
}

TEST_CASE("2d sampling is a left inverse of its adjoint on reachable data") {
    const RadialMask mask = make_radial_mask(32, 7);
    const Image2D f = random_image(32, 51);
    const Observation2D g = op2d_forward(mask, f);
    const Observation2D again = op2d_forward(mask, op2d_adjoint(mask, g.values));
    for (std::size_t i = 0; i < g.values.size(); ++i)
        REQUIRE_THAT(std::abs(again.values[i] - g.values[i]), WithinAbs(0.0, 1e-10));
}

TEST_CASE("a full mask makes the operator unitary") {
    RadialMask full;
    full.n = 16;
    full.cells.assign(256, 1);
    for (std::size_t i = 0; i < 256; ++i)
        full.order.push_back(i);
    const Image2D f = random_image(16, 61);
    const Image2D back = op2d_adjoint(full, op2d_forward(full, f).values);
    for (std::size_t i = 0; i < f.pixels.size(); ++i)
        REQUIRE_THAT(back.pixels[i], WithinAbs(f.pixels[i], 1e-12));
}

TEST_CASE("observation arithmetic insists on matching geometry") {
    const auto p1 = make_random_pattern(32, 8, 1);
    const auto p2 = make_random_pattern(32, 8, 2);
    Observation1D a, b;
    a.pattern = p1;
    a.values.assign(8, 1.0);
    b.pattern = p2;
    b.values.assign(8, 1.0);
    REQUIRE_THROWS_AS(observation_subtract(a, b), ShapeError);
    b.pattern = p1;
    const Observation1D r = observation_subtract(a, b);
    for (double v : r.values)
        REQUIRE(v == 0.0);
}

TEST_CASE("operator handles validate the observation geometry") {
    const Sampling1D op{make_random_pattern(64, 16, 9)};
    Observation1D g;
    g.pattern = make_random_pattern(64, 16, 10);
    g.values.assign(16, 0.0);
    REQUIRE_THROWS_AS(op.adjoint(g), ShapeError);
}
