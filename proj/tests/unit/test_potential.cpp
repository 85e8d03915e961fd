#include <doctest.h>

#include <hjhomog/potential.hpp>

#include <cmath>

using namespace hjhomog;

namespace {

EnsembleSpec bumps(std::uint64_t seed) {
    EnsembleSpec s;
    s.kind = EnsembleKind::PoissonBumps;
    s.dim = 2;
    s.seed = seed;
    s.intensity = 1.0;
    s.bump_radius = 0.3;
    s.bump_height = 0.4;
    return s;
}

EnsembleSpec cosine(std::uint64_t seed) {
    EnsembleSpec s;
    s.kind = EnsembleKind::ShiftedPeriodic;
    s.dim = 1;
    s.seed = seed;
    s.amplitude = 0.2;
    s.period = 1.0;
    return s;
}

}  // namespace

TEST_CASE("sampling is deterministic in (spec, grid, realization)") {
    const Grid g = Grid::make(2, 1.0 / 16, 2.0);
    const PotentialField a = sample_potential(bumps(5), g, 3);
    const PotentialField b = sample_potential(bumps(5), g, 3);
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);

    const PotentialField c = sample_potential(bumps(5), g, 4);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.values.size(); ++i) any_diff |= (a.values[i] != c.values[i]);
    CHECK(any_diff);
}

TEST_CASE("fields respect the hard bounds") {
    const Grid g = Grid::make(2, 1.0 / 16, 3.0);
    for (std::uint64_t r = 0; r < 4; ++r) {
        const PotentialField f = sample_potential(bumps(9), g, r);
        for (double v : f.values) {
            REQUIRE(v >= 0.0);
            REQUIRE(v <= 1.0);  // k0
        }
    }
    const Grid g1 = Grid::make(1, 1.0 / 64, 2.0);
    const PotentialField f1 = sample_potential(cosine(9), g1, 0);
    for (double v : f1.values) {
        REQUIRE(v >= 0.0);
        REQUIRE(v <= 0.4 + 1e-12);  // 2 * amplitude
    }
}

TEST_CASE("bump realizations are consistent across nested boxes") {
    // the same realization seen through a larger window keeps the old bumps
    const Grid small = Grid::make(2, 1.0 / 16, 1.0);
    const Grid large = Grid::make(2, 1.0 / 16, 2.0);
    const PotentialField fs = sample_potential(bumps(21), small, 1);
    const PotentialField fl = sample_potential(bumps(21), large, 1);
    for (std::size_t i = 0; i < fs.values.size(); ++i) {
        const Vec x = fs.grid.node_coord(i);
        CHECK(fs.values[i] == fl.value_at(x));
    }
}

TEST_CASE("periodic profile has the advertised range and period") {
    const Grid g = Grid::make(1, 1.0 / 256, 4.0);
    const PotentialField f = sample_potential(cosine(33), g, 0);
    double lo = 1e300, hi = -1e300;
    for (double v : f.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    // the window covers many periods, so the sampled range fills [0, 0.4]
    CHECK(lo < 1e-4);
    CHECK(hi > 0.4 - 1e-4);
    // periodicity: one period to the right is the same value
    for (double x = -1.0; x < 1.0; x += 0.1) {
        CHECK(f.value_at({x, 0.0}) == doctest::Approx(f.value_at({x + 1.0, 0.0})).epsilon(1e-10));
    }
}

TEST_CASE("distinct realizations of the shifted profile differ by a shift") {
    const Grid g = Grid::make(1, 1.0 / 128, 2.0);
    const PotentialField a = sample_potential(cosine(7), g, 0);
    const PotentialField b = sample_potential(cosine(7), g, 1);
    bool differ = false;
    for (std::size_t i = 0; i < a.values.size(); ++i) differ |= (a.values[i] != b.values[i]);
    CHECK(differ);
    // same sup either way
    CHECK(cosine(7).true_sup() == doctest::Approx(0.4));
}

TEST_CASE("normalize is idempotent and records bounds") {
    const Grid g = Grid::make(2, 1.0 / 8, 2.0);
    PotentialField f = sample_potential(bumps(13), g, 0);
    normalize(f);
    const PotentialField once = f;
    normalize(f);
    CHECK(f.vbar == once.vbar);
    for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(f.values[i] == once.values[i]);
    CHECK(f.normalized);
}

TEST_CASE("field_from_values wraps explicit data") {
    const Grid g = Grid::make(1, 0.5, 1.0);
    PotentialField f = field_from_values(g, {0.1, 0.2, 0.7, 0.2, 0.1});
    CHECK(f.value_at({0.0, 0.0}) == 0.7);
    CHECK(f.value_at({0.25, 0.0}) == doctest::Approx(0.45));
}

TEST_CASE("bounds tables widen monotonically with the box") {
    const BoundsTable t = estimate_bounds(bumps(17), {1.0, 2.0, 4.0}, 1.0 / 8, 3);
    REQUIRE(t.radii.size() == 3);
    for (std::size_t r = 0; r + 1 < t.radii.size(); ++r) {
        for (std::size_t k = 0; k < t.vmax[r].size(); ++k) {
            CHECK(t.vmax[r][k] <= t.vmax[r + 1][k] + 1e-15);
            CHECK(t.vmin[r][k] >= t.vmin[r + 1][k] - 1e-15);
        }
    }
}

TEST_CASE("ensemble validation rejects nonsense") {
    EnsembleSpec s = bumps(1);
    s.bump_radius = -1.0;
    CHECK_THROWS(s.validate());
    EnsembleSpec c = cosine(1);
    c.period = 0.0;
    CHECK_THROWS(c.validate());
    EnsembleSpec k = bumps(1);
    k.k0 = 0.0;
    CHECK_THROWS(k.validate());
}
