#include <doctest.h>

#include <hjhomog/grid.hpp>
#include <hjhomog/rng.hpp>

#include <cmath>
#include <set>
#include <stdexcept>

using namespace hjhomog;

TEST_CASE("rng streams are deterministic and keyed") {
    RngStream a(42, "test", 1, 2);
    RngStream b(42, "test", 1, 2);
    for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());

    // different purpose, seed, or subkey gives a different sequence
    RngStream c(42, "other", 1, 2);
    RngStream d(43, "test", 1, 2);
    RngStream e(42, "test", 1, 3);
    RngStream base(42, "test", 1, 2);
    const std::uint64_t first = base.next_u64();
    CHECK(c.next_u64() != first);
    CHECK(d.next_u64() != first);
    CHECK(e.next_u64() != first);
}

TEST_CASE("rng uniform01 stays in range with sane mean") {
    RngStream r(7, "uniform");
    double sum = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double u = r.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / 20000 - 0.5) < 0.02);
}

TEST_CASE("rng poisson matches its mean and variance roughly") {
    RngStream r(11, "poisson");
    const double lam = 3.0;
    double s = 0.0, s2 = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const int k = r.poisson(lam);
        REQUIRE(k >= 0);
        s += k;
        s2 += double(k) * k;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    CHECK(std::abs(mean - lam) < 0.1);
    CHECK(std::abs(var - lam) < 0.3);
    CHECK_THROWS(r.poisson(1000.0));
}

TEST_CASE("grid construction validates spacing against the extent") {
    const Grid g = Grid::make(2, 0.25, 1.0);
    CHECK(g.n_axis == 9);
    CHECK(g.node_count() == 81);
    CHECK(g.axis_coord(0, 0) == -1.0);
    CHECK(g.axis_coord(8, 0) == 1.0);
    CHECK_THROWS_AS(Grid::make(1, 0.3, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Grid::make(3, 0.25, 1.0), std::invalid_argument);
}

TEST_CASE("periodic grid drops the duplicate edge node") {
    const Grid g = Grid::make(1, 0.25, 1.0, true);
    CHECK(g.n_axis == 8);
    // wrap: one period to the right lands on the same node value
    std::vector<double> vals(g.node_count());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = double(i);
    CHECK(grid_interp(g, vals, {-1.0, 0.0}) == grid_interp(g, vals, {1.0, 0.0}));
}

TEST_CASE("grid interpolation is exact on linear data") {
    const Grid g = Grid::make(2, 0.125, 1.0);
    std::vector<double> vals(g.node_count());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const Vec x = g.node_coord(i);
        vals[i] = 3.0 * x[0] - 2.0 * x[1] + 0.5;
    }
    for (const Vec x : {Vec{0.3, -0.7}, Vec{-0.55, 0.05}, Vec{1.0, 1.0}}) {
        CHECK(grid_interp(g, vals, x) ==
              doctest::Approx(3.0 * x[0] - 2.0 * x[1] + 0.5).epsilon(1e-12));
    }
}

TEST_CASE("nearest node inverts node_coord") {
    const Grid g = Grid::make(2, 0.5, 2.0, false, {0.25, -0.5});
    for (std::size_t i = 0; i < g.node_count(); i += 7) {
        CHECK(g.nearest_node(g.node_coord(i)) == i);
    }
}
