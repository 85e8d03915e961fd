#include <doctest.h>

#include <hjhomog/effham.hpp>

#include <cmath>
#include <set>

#include "oracles.hpp"

using namespace hjhomog;

namespace {

EnsembleSpec cosine1d(std::uint64_t seed) {
    EnsembleSpec s;
    s.kind = EnsembleKind::ShiftedPeriodic;
    s.dim = 1;
    s.seed = seed;
    s.amplitude = 0.2;
    s.period = 1.0;
    return s;
}

ShapeProvider cosine_provider(std::uint64_t seed) {
    ShapeOptions o;
    o.radii = {25.0, 50.0, 100.0};
    o.spacing = 1.0 / 128;
    return ShapeProvider(cosine1d(seed), o);
}

}  // namespace

TEST_CASE("derived constants cover both signs of kappa") {
    const EffConstants a = EffConstants::from_vbar(0.4);
    CHECK(a.kappa == doctest::Approx(0.6));
    CHECK(a.mu_star == doctest::Approx(0.6));
    CHECK(a.sigma_star == doctest::Approx(-1.0));
    // sup above 1: the degenerate pair sits on the sigma leg instead
    const EffConstants b = EffConstants::from_vbar(4.0);
    CHECK(b.mu_star == doctest::Approx(0.0));
    CHECK(b.sigma_star == doctest::Approx(-0.5));
    // the defining identity sigma*sqrt(mu + vbar) = -1 in both regimes
    CHECK(a.sigma_star * std::sqrt(a.mu_star + 0.4) == doctest::Approx(-1.0));
    CHECK(b.sigma_star * std::sqrt(b.mu_star + 4.0) == doctest::Approx(-1.0));
}

TEST_CASE("support gap is the worst directional margin") {
    ShapeFunction s;
    s.params = {0.0, 1.0};
    s.directions = {{1.0, 0.0}, {-1.0, 0.0}};
    s.values = {1.2, 0.9};
    s.stderrs = {0.0, 0.0};
    s.radii = {1.0};
    // gap = min(1.2 - p, 0.9 + p)
    CHECK(support_gap(s, {0.5, 0.0}) == doctest::Approx(0.7));
    CHECK(support_gap(s, {-1.0, 0.0}) == doctest::Approx(-0.1));
}

TEST_CASE("effective level for the cosine profile matches the 1d oracle") {
    ShapeProvider prov = cosine_provider(3);

    // frozen from independent quadrature and bisection over the family
    const HbarValue h0 = hbar({0.0, 0.0}, prov);
    CHECK(h0.value == doctest::Approx(0.6).epsilon(3e-3));
    CHECK(h0.region == Region::K1);

    const HbarValue h05 = hbar({0.5, 0.0}, prov);
    CHECK(h05.value == doctest::Approx(0.3579147938544507).epsilon(1e-2));
    CHECK(h05.region == Region::K2);

    const HbarValue h08 = hbar({0.8, 0.0}, prov);
    CHECK(std::abs(h08.value) <= 2e-3);
    CHECK(h08.region == Region::K3);

    const HbarValue h1 = hbar({1.0, 0.0}, prov);
    CHECK(std::abs(h1.value) <= 2e-3);
    CHECK(h1.region == Region::K3);

    const HbarValue h15 = hbar({1.5, 0.0}, prov);
    CHECK(h15.value == doctest::Approx(1.3665924004679102).epsilon(3e-3));
    CHECK(h15.region == Region::K4);

    CHECK_FALSE(h0.flagged);
    CHECK_FALSE(h15.flagged);
}

TEST_CASE("momentum grid enumerates the box") {
    PGrid pg;
    pg.p_max = 1.0;
    pg.n_axis = 3;
    pg.dim = 2;
    CHECK(pg.count() == 9);
    CHECK(pg.step() == doctest::Approx(1.0));
    std::set<std::pair<double, double>> seen;
    for (std::size_t i = 0; i < pg.count(); ++i) {
        const Vec p = pg.node(i);
        seen.insert({p[0], p[1]});
        CHECK(std::abs(p[0]) <= 1.0);
        CHECK(std::abs(p[1]) <= 1.0);
    }
    CHECK(seen.size() == 9);

    PGrid s1;
    s1.p_max = 2.0;
    s1.n_axis = 5;
    s1.dim = 1;
    CHECK(s1.count() == 5);
    CHECK(s1.node(0)[0] == doctest::Approx(-2.0));
    CHECK(s1.node(4)[0] == doctest::Approx(2.0));
}

TEST_CASE("tabulation interpolates piecewise-linearly between nodes") {
    ShapeProvider prov = cosine_provider(5);
    PGrid pg;
    pg.p_max = 2.0;
    pg.n_axis = 9;
    pg.dim = 1;
    const EffectiveHamiltonian t = tabulate(pg, prov);
    REQUIRE(t.nodes.size() == 9);
    // exact at nodes
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        CHECK(t.value_interp(t.nodes[i]) == doctest::Approx(t.values[i]));
    }
    // linear midpoint between adjacent nodes
    const double mid = 0.5 * (t.values[0] + t.values[1]);
    const Vec pm{0.5 * (t.nodes[0][0] + t.nodes[1][0]), 0.0};
    CHECK(t.value_interp(pm) == doctest::Approx(mid).epsilon(1e-12));
    // clamped outside the box
    CHECK(t.value_interp({-3.0, 0.0}) == doctest::Approx(t.values[0]));
    CHECK(t.slope_bound() > 0.0);
    CHECK(t.constants.mu_star == doctest::Approx(0.6).epsilon(1e-9));

    // symmetry of the medium: the table is even in p up to the bisection step
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        CHECK(std::abs(t.value_interp({-t.nodes[i][0], 0.0}) - t.values[i]) <= 2e-3);
    }
}

TEST_CASE("augmented directions cover the uniform menu and the node rays") {
    PGrid pg;
    pg.p_max = 2.0;
    pg.n_axis = 5;
    pg.dim = 2;
    const std::vector<Vec> dirs = augmented_directions(pg, 16);
    CHECK(dirs.size() >= 16);
    for (const Vec& d : dirs) CHECK(norm(d, 2) == doctest::Approx(1.0).epsilon(1e-12));
    // the diagonal node direction must be present
    bool diag = false;
    for (const Vec& d : dirs) {
        if (std::abs(d[0] - d[1]) < 1e-12 && d[0] > 0.0) diag = true;
    }
    CHECK(diag);
    // no duplicates
    std::set<std::pair<long, long>> keys;
    for (const Vec& d : dirs) {
        keys.insert({std::lround(d[0] * 1e9), std::lround(d[1] * 1e9)});
    }
    CHECK(keys.size() == dirs.size());

    PGrid one;
    one.dim = 1;
    const std::vector<Vec> d1 = augmented_directions(one, 16);
    CHECK(d1.size() == 2);
}
