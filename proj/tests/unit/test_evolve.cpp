#include <doctest.h>

#include <hjhomog/evolve.hpp>

#include <cmath>
#include <stdexcept>

using namespace hjhomog;

namespace {

EnsembleSpec constant_spec(double level) {
    EnsembleSpec s;
    s.kind = EnsembleKind::Constant;
    s.dim = 1;
    s.level = level;
    return s;
}

InitialData plane(double slope) {
    InitialData d;
    d.g = [slope](const Vec& x) { return slope * x[0]; };
    d.lip = std::abs(slope);
    d.name = "plane";
    return d;
}

/// Kinetic-only table on [-2, 2]: H(p) = (p^2 - 1)^2 at 17 nodes.
EffectiveHamiltonian kinetic_table() {
    EffectiveHamiltonian t;
    t.pgrid = PGrid{2.0, 17, 1};
    for (std::size_t i = 0; i < t.pgrid.count(); ++i) {
        const Vec p = t.pgrid.node(i);
        t.nodes.push_back(p);
        const double s = p[0] * p[0] - 1.0;
        t.values.push_back(s * s);
        t.regions.push_back(Region::K4);
        t.tangency_mu.push_back(0.0);
        t.flagged.push_back(0);
    }
    t.constants = EffConstants::from_vbar(0.0);
    return t;
}

}  // namespace

TEST_CASE("plane data rides a constant medium exactly") {
    // linear data keeps central gradients equal to the slope and the
    // dissipation term at zero, so the update is the exact transport
    // u = p x - t ((p^2-1)^2 - level) until boundary noise arrives, and
    // the box is sized so it cannot reach |x| <= 1 within t_final
    EvolveOptions opt;
    opt.spacing = 1.0 / 32;
    opt.t_final = 0.25;
    const double p = 0.75;
    const double level = 0.3;
    const EvolutionResult r =
        solve_oscillatory(constant_spec(level), 0, 0.25, plane(p), opt);
    const double hp = (p * p - 1.0) * (p * p - 1.0);
    CHECK(sup_error_vs_plane(r, {p, 0.0}, hp - level, 1.0) <= 1e-10);
    CHECK(r.epsilon == 0.25);
    CHECK(r.times.size() == 11);
    CHECK(r.times.front() == 0.0);
    CHECK(r.times.back() == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(compare_sup(r, r, 1.0) == 0.0);
}

TEST_CASE("the homogenized solver transports planes at the table value") {
    const EffectiveHamiltonian table = kinetic_table();
    EvolveOptions opt;
    opt.spacing = 1.0 / 64;
    opt.t_final = 0.1;
    const double p = 0.75;  // a table node, so the interpolant is exact there
    const EvolutionResult r = solve_homogenized(table, plane(p), opt);
    const double hp = (p * p - 1.0) * (p * p - 1.0);
    CHECK(sup_error_vs_plane(r, {p, 0.0}, hp, 1.0) <= 1e-10);
    CHECK(r.epsilon == 0.0);
    CHECK(r.alpha >= table.slope_bound());
}

TEST_CASE("slice schedules resolve and validate") {
    EvolveOptions opt;
    opt.t_final = 0.5;
    const std::vector<double> d = opt.resolved_slices();
    REQUIRE(d.size() == 11);
    CHECK(d.front() == 0.0);
    CHECK(d[1] == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(d.back() == doctest::Approx(0.5).epsilon(1e-12));

    opt.slice_times = {0.5, 0.25};
    const std::vector<double> e = opt.resolved_slices();
    REQUIRE(e.size() == 2);
    CHECK(e[0] == 0.25);  // sorted
    CHECK(e[1] == 0.5);

    opt.slice_times = {-0.1};
    CHECK_THROWS_AS(opt.resolved_slices(), std::invalid_argument);
}

TEST_CASE("runs on different grids refuse to compare") {
    EvolveOptions a;
    a.spacing = 1.0 / 32;
    a.t_final = 0.1;
    EvolveOptions b = a;
    b.spacing = 1.0 / 64;
    const EvolutionResult ra = solve_oscillatory(constant_spec(0.0), 0, 0.25, plane(0.5), a);
    const EvolutionResult rb = solve_oscillatory(constant_spec(0.0), 0, 0.5, plane(0.5), b);
    CHECK_THROWS_AS(compare_sup(ra, rb, 1.0), std::invalid_argument);
}

TEST_CASE("resolution and range guards throw") {
    EvolveOptions opt;
    opt.spacing = 1.0 / 16;
    opt.t_final = 0.1;
    // h = 1/16 cannot resolve eps = 1/4 oscillations (needs h <= eps/8)
    CHECK_THROWS_AS(solve_oscillatory(constant_spec(0.0), 0, 0.25, plane(0.5), opt),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_oscillatory(constant_spec(0.0), 0, 0.0, plane(0.5), opt),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_homogenized(kinetic_table(), plane(2.5), opt),
                    std::invalid_argument);
}

TEST_CASE("understated Lipschitz data aborts instead of smearing") {
    // slope 2 data declared as 1-Lipschitz: the dissipation is sized for
    // gradients up to gradient_radius(1, 0) = 1, the actual gradient is 2
    EvolveOptions opt;
    opt.spacing = 1.0 / 16;
    opt.t_final = 0.1;
    InitialData lie = plane(2.0);
    lie.lip = 1.0;
    CHECK_THROWS_AS(solve_oscillatory(constant_spec(0.0), 0, 0.5, lie, opt),
                    std::runtime_error);
}
