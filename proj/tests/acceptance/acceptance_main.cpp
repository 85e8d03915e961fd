// End-to-end acceptance checks against analytic oracles. Each criterion
// prints exactly one PASS/FAIL line; the exit code is 0 only if all pass.
//
// The oracle constants for the 1D periodic profile V(x) = 0.2(1 - cos 2 pi x)
// were computed with an independent adaptive Simpson integrator (see
// tests/support/oracles.hpp) and are re-derived at startup as a self-check.

#include <hjhomog/cell.hpp>
#include <hjhomog/effham.hpp>
#include <hjhomog/evolve.hpp>
#include <hjhomog/metric.hpp>
#include <hjhomog/potential.hpp>
#include <hjhomog/shape.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"

using namespace hjhomog;

namespace {

// Frozen oracle values for the 1D periodic profile (amplitude 0.2, period 1).
constexpr double kHbar00 = 0.6;                 // K1 plateau = 1 - sup V
constexpr double kHbar05 = 0.3579147938544507;  // transition value at p = 0.5
constexpr double kHbar10 = 0.0;                 // valley at |p| = 1
constexpr double kHbar15 = 1.3665924004679102;  // coercive value at p = 1.5
constexpr double kAvg01 = 1.1813414600952232;   // cell average of sqrt(1+sqrt(V))

double kinetic(double p2) {
    const double s = p2 - 1.0;
    return s * s;
}

EnsembleSpec periodic1d() {
    EnsembleSpec s;
    s.kind = EnsembleKind::ShiftedPeriodic;
    s.dim = 1;
    s.amplitude = 0.2;
    s.period = 1.0;
    s.seed = 1234;
    return s;
}

EnsembleSpec bumps2d() {
    EnsembleSpec s;
    s.kind = EnsembleKind::PoissonBumps;
    s.dim = 2;
    s.seed = 1234;
    return s;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. Free-space exactness: with V = 0 the construction must reproduce the
//    kinetic Hamiltonian (|p|^2-1)^2 over |p| <= 2 in both dimensions.
bool criterion_free_space(std::string& detail) {
    constexpr double tol = 0.02;
    constexpr double wall_limit = 300.0;  // seconds
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    for (int dim : {1, 2}) {
        EnsembleSpec spec;
        spec.kind = EnsembleKind::Constant;
        spec.dim = dim;
        spec.level = 0.0;
        PGrid pg;
        pg.p_max = 2.0;
        pg.n_axis = dim == 1 ? 17 : 9;
        pg.dim = dim;
        ShapeOptions so;
        so.spacing = 1.0 / 64;
        so.radii = dim == 1 ? std::vector<double>{25.0, 50.0, 100.0}
                            : std::vector<double>{1.75, 3.5};
        so.richardson = dim == 2;  // cancels the O(1/R) seeding bias exactly
        so.directions = augmented_directions(pg, dim == 1 ? 2 : 16);
        ShapeProvider shapes(spec, so);
        const EffectiveHamiltonian tab = tabulate(pg, shapes);
        double worst = 0.0;
        for (std::size_t i = 0; i < tab.nodes.size(); ++i) {
            const Vec p = tab.nodes[i];
            if (norm(p, dim) > 2.0 + 1e-12) continue;
            worst = std::max(worst, std::abs(tab.values[i] - kinetic(dot(p, p, dim))));
        }
        ok = ok && worst <= tol;
        detail += "d=" + std::to_string(dim) + " max|err|=" + fmt(worst) + " (" +
                  std::to_string(shapes.solves()) + " solves)  ";
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ok = ok && wall <= wall_limit;
    detail += "tol " + fmt(tol) + ", wall limit " + fmt(wall_limit) + "s";
    return ok;
}

// ---------------------------------------------------------------------------
// 2. 1D metric against adaptive quadrature: m_{0,+1}(100)/100 equals the cell
//    average of the speed within 1e-3 (the shift integrates out over the
//    integer window).
bool criterion_metric_quadrature(std::string& detail) {
    constexpr double tol = 1e-3;
    const double oracle = oracles::cosine_cell_average(0.0, +1.0);
    if (std::abs(oracle - kAvg01) > 1e-9) {
        detail = "oracle self-check failed: " + fmt(oracle);
        return false;
    }
    const EnsembleSpec spec = periodic1d();
    MetricOptions mo;
    mo.target_radius = 100.0;
    mo.box_factor = 1.05;
    mo.spacing = 1.0 / 64;
    const PotentialField f = sample_potential(spec, Grid::make(1, mo.spacing, 106.0), 0);
    const MetricField m = solve_metric(f, {0.0, +1.0}, {0.0, 0.0}, mo);
    const double measured = m.value_at({100.0, 0.0}) / 100.0;
    detail = "m(100)/100 = " + fmt(measured) + " vs " + fmt(oracle) + ", |diff| = " +
             fmt(std::abs(measured - oracle)) + ", tol " + fmt(tol);
    return std::abs(measured - oracle) <= tol;
}

// ---------------------------------------------------------------------------
// 3. Cone bounds node-wise: speed extremes sandwich the distance at every
//    trusted node, slack 10h, for five parameter pairs on the 2D bumps.
bool criterion_cone_bounds(std::string& detail) {
    const double h = 1.0 / 32;
    const double slack = 10.0 * h;
    MetricOptions mo;
    mo.target_radius = 2.0;
    mo.box_factor = 1.5;
    const PotentialField f =
        sample_potential(bumps2d(), Grid::make(2, h, mo.box_factor * 2.0 + h), 0);
    const ParamPair pairs[] = {{0.0, 1.0}, {0.0, -1.0}, {0.25, 1.0}, {0.25, -1.0},
                               {0.25, 0.0}};
    double worst = 0.0;
    for (const ParamPair& prm : pairs) {
        const MetricField m = solve_metric(f, prm, {0.0, 0.0}, mo);
        const double s0 = 1.0 + prm.sigma * std::sqrt(prm.mu);
        const double s1 = 1.0 + prm.sigma * std::sqrt(prm.mu + f.vbar);
        const double lo = std::sqrt(std::max(0.0, std::min(s0, s1)));
        const double hi = std::sqrt(std::max(0.0, std::max(s0, s1)));
        for (std::size_t i = 0; i < m.values.size(); ++i) {
            const Vec y = m.grid.node_coord(i);
            const double d = norm(y, 2);
            if (d > m.trust_radius) continue;
            worst = std::max(worst, lo * d - m.values[i]);
            worst = std::max(worst, m.values[i] - hi * d);
        }
    }
    detail = "max cone violation " + fmt(worst) + " over 5 pairs, slack " + fmt(slack);
    return worst <= slack;
}

// ---------------------------------------------------------------------------
// 4. Symmetry and subadditivity defects scale like C h with C stable under
//    h -> h/2, over 210 source pairs and 200 triples snapped to a shared
//    coarse lattice.
bool criterion_defect_scaling(std::string& detail) {
    const PotentialField f = sample_potential(bumps2d(), Grid::make(2, 1.0 / 64, 2.5), 0);
    SubsolutionReport rep[2];
    const double hs[2] = {1.0 / 32, 1.0 / 64};
    for (int k = 0; k < 2; ++k) {
        MetricOptions mo;
        mo.target_radius = 1.5;
        mo.box_factor = 1.5;
        mo.spacing = hs[k];
        rep[k] = check_subsolution_properties(f, {0.0, 1.0}, mo, 20, 200, 4242, 0.25);
    }
    bool ok = rep[0].pairs >= 200 && rep[0].triples >= 150;
    std::string parts;
    const double defects[2][2] = {{rep[0].max_symmetry_defect, rep[1].max_symmetry_defect},
                                  {rep[0].max_subadd_defect, rep[1].max_subadd_defect}};
    const char* names[2] = {"sym", "subadd"};
    for (int q = 0; q < 2; ++q) {
        const double c0 = defects[q][0] / hs[0];
        const double c1 = defects[q][1] / hs[1];
        if (defects[q][0] <= 1e-12 && defects[q][1] <= 1e-12) {
            parts += std::string(names[q]) + " defect 0 at both h  ";
            continue;  // identically zero at both resolutions: stable
        }
        const double ratio = c1 > c0 ? c1 / std::max(c0, 1e-300) : c0 / std::max(c1, 1e-300);
        ok = ok && ratio <= 2.0;
        parts += std::string(names[q]) + " C=" + fmt(c0) + "->" + fmt(c1) + "  ";
    }
    detail = parts + "(" + std::to_string(rep[0].pairs) + " pairs, " +
             std::to_string(rep[0].triples) + " triples)";
    return ok;
}

// ---------------------------------------------------------------------------
// 5. Parameter monotonicity holds exactly on shared-field estimates, and the
//    (0.25,-1) vs (0,-1) gap is strictly positive. The bump ensemble is
//    capped at k0 = 0.5 so the whole parameter ladder stays admissible
//    (at k0 = 1 the (0.25,-1) member is void: sqrt(0.25 + 1) > 1).
bool criterion_monotonicity(std::string& detail) {
    EnsembleSpec spec = bumps2d();
    spec.k0 = 0.5;
    const double h = 1.0 / 32;
    const std::vector<double> radii = {1.5, 3.0};
    const Grid g = Grid::make(2, h, std::ceil(1.5 * radii.back() / h) * h);
    std::vector<PotentialField> fields;
    for (int r = 0; r < 4; ++r) fields.push_back(sample_potential(spec, g, r));
    ShapeOptions so;
    so.spacing = h;
    const std::vector<Vec> dirs = so.resolved_directions(2);

    std::vector<ShapeFunction> shapes;
    for (const ParamPair prm : {ParamPair{0.0, -1.0}, ParamPair{0.0, 1.0},
                                ParamPair{0.25, -1.0}, ParamPair{0.25, 1.0}}) {
        shapes.push_back(estimate_shape_from_fields(fields, spec.true_sup(), prm,
                                                    dirs, radii, so));
        if (shapes.back().status != MetricStatus::Finite) {
            detail = "void family in the ladder";
            return false;
        }
    }
    const ShapeMonotonicityReport rep = check_shape_monotonicity(shapes);
    double gap = 1e300;
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        gap = std::min(gap, shapes[0].values[d] - shapes[2].values[d]);
    }
    detail = "sigma viol " + fmt(rep.max_sigma_violation) + ", sigma-mu viol " +
             fmt(rep.max_sigma_mu_violation) + ", strict gap " + fmt(gap) + " over " +
             std::to_string(rep.comparisons) + " comparisons";
    return rep.max_sigma_violation == 0.0 && rep.max_sigma_mu_violation == 0.0 &&
           gap > 0.0;
}

// ---------------------------------------------------------------------------
// Shared tables for criteria 6 and 7.
struct Tables {
    EffectiveHamiltonian t1d;
    double vbar1d = 0.0;
    EffectiveHamiltonian t2d;
    double vbar2d = 0.0;
};

Tables build_tables() {
    Tables t;
    {
        PGrid pg;
        pg.p_max = 2.0;
        pg.n_axis = 17;
        pg.dim = 1;
        ShapeOptions so;
        so.spacing = 1.0 / 64;
        so.directions = augmented_directions(pg, 2);
        ShapeProvider shapes(periodic1d(), so);
        t.t1d = tabulate(pg, shapes);
        t.vbar1d = shapes.vbar();
    }
    {
        // The momentum box stops at 1.25: it still meets all four regions
        // (the valley sits at |p| = 1), while the mu-readback amplification
        // d mu / d m ~ 4 sqrt(mu) sqrt(1 + sqrt(mu)) |p| stays small enough
        // for marching-accuracy shape estimates to certify 0.05 slack.
        PGrid pg;
        pg.p_max = 1.25;
        pg.n_axis = 11;
        pg.dim = 2;
        ShapeOptions so;
        so.spacing = 1.0 / 32;
        so.radii = {1.5, 3.0};
        so.realizations = 4;
        so.directions = augmented_directions(pg, 16);
        ShapeProvider shapes(bumps2d(), so);
        t.t2d = tabulate(pg, shapes);
        t.vbar2d = shapes.vbar();
    }
    return t;
}

// 6. Kinetic sandwich at every tabulated node: kin - vbar <= Hbar <= kin,
//    slack 0.05, for the 1D periodic and 2D bump ensembles.
bool criterion_sandwich(const Tables& tabs, std::string& detail) {
    constexpr double tol = 0.05;
    bool ok = true;
    const EffectiveHamiltonian* ts[2] = {&tabs.t1d, &tabs.t2d};
    const double vbars[2] = {tabs.vbar1d, tabs.vbar2d};
    const char* names[2] = {"1d", "2d"};
    for (int k = 0; k < 2; ++k) {
        double worst = 0.0;
        for (std::size_t i = 0; i < ts[k]->nodes.size(); ++i) {
            const Vec p = ts[k]->nodes[i];
            const double kin = kinetic(dot(p, p, ts[k]->pgrid.dim));
            worst = std::max(worst, kin - vbars[k] - ts[k]->values[i]);
            worst = std::max(worst, ts[k]->values[i] - kin);
        }
        ok = ok && worst <= tol;
        detail += std::string(names[k]) + " max violation " + fmt(worst) + "  ";
    }
    detail += "tol " + fmt(tol);
    return ok;
}

// 7. Flat regions: the K1 plateau is flat at mu_star and the K3 valley is
//    flat at zero, both within 0.02.
bool criterion_flat_regions(const Tables& tabs, std::string& detail) {
    constexpr double tol = 0.02;
    bool ok = true;
    const EffectiveHamiltonian* ts[2] = {&tabs.t1d, &tabs.t2d};
    const char* names[2] = {"1d", "2d"};
    for (int k = 0; k < 2; ++k) {
        const EffectiveHamiltonian& t = *ts[k];
        double k1_min = 1e300, k1_max = -1e300, k3_abs = 0.0;
        int n1 = 0, n3 = 0;
        for (std::size_t i = 0; i < t.nodes.size(); ++i) {
            if (t.regions[i] == Region::K1) {
                k1_min = std::min(k1_min, t.values[i]);
                k1_max = std::max(k1_max, t.values[i]);
                ++n1;
            } else if (t.regions[i] == Region::K3) {
                k3_abs = std::max(k3_abs, std::abs(t.values[i]));
                ++n3;
            }
        }
        if (n1 > 0) {
            ok = ok && (k1_max - k1_min) <= tol &&
                 std::abs(k1_max - t.constants.mu_star) <= tol &&
                 std::abs(k1_min - t.constants.mu_star) <= tol;
        }
        if (n3 > 0) ok = ok && k3_abs <= tol;
        detail += std::string(names[k]) + ": " + std::to_string(n1) + " K1 nodes" +
                  (n1 ? " (spread " + fmt(k1_max - k1_min) + ", off mu* by " +
                            fmt(std::max(std::abs(k1_max - t.constants.mu_star),
                                         std::abs(k1_min - t.constants.mu_star))) +
                            ")"
                      : "") +
                  ", " + std::to_string(n3) + " K3 nodes" +
                  (n3 ? " (max |H| " + fmt(k3_abs) + ")" : "") + "  ";
    }
    detail += "tol " + fmt(tol);
    return ok;
}

// ---------------------------------------------------------------------------
// 8. Discounted approximation: |(-delta v(0)) - Hbar(p)| is nonincreasing
//    over the delta ladder and at most 0.05 at delta = 0.025.
bool criterion_cell_ladder(std::string& detail) {
    constexpr double tol_final = 0.05;
    constexpr double tie = 1e-3;
    constexpr double wall_limit = 600.0;  // seconds
    const auto t0 = std::chrono::steady_clock::now();
    const double href[4] = {kHbar00, kHbar05, kHbar10, kHbar15};
    const double ps[4] = {0.0, 0.5, 1.0, 1.5};
    const PotentialField f =
        sample_potential(periodic1d(), Grid::make(1, 1.0 / 256, 0.5, true), 0);
    bool ok = true;
    for (int ip = 0; ip < 4; ++ip) {
        CellOptions opt;
        CellSolution prev;
        double last_err = 1e300;
        std::string errs;
        for (const double delta : {0.1, 0.05, 0.025}) {
            CellOptions o = opt;
            if (delta < 0.1) o.warm_start = &prev;
            const CellSolution s = solve_cell(f, {ps[ip], 0.0}, delta, o);
            const double err = std::abs(s.minus_delta_v0 - href[ip]);
            ok = ok && err <= last_err + tie;
            last_err = err;
            prev = s;
            errs += fmt(err) + " ";
        }
        ok = ok && last_err <= tol_final;
        detail += "p=" + fmt(ps[ip]) + ": " + errs + " ";
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ok = ok && wall <= wall_limit;
    detail += "(each ladder nonincreasing, final <= " + fmt(tol_final) + ")";
    return ok;
}

// ---------------------------------------------------------------------------
// 9. Oscillatory runs approach the homogenized plane: the sup error over
//    B_1 x [0,1] is nonincreasing over epsilon in {1/8, 1/16, 1/32}.
bool criterion_evolve_ladder(std::string& detail) {
    const double href[3] = {kHbar00, kHbar05, kHbar15};
    const double ps[3] = {0.0, 0.5, 1.5};
    const EnsembleSpec spec = periodic1d();
    bool ok = true;
    for (int ip = 0; ip < 3; ++ip) {
        InitialData data;
        const double p = ps[ip];
        data.g = [p](const Vec& x) { return p * x[0]; };
        data.lip = std::max(p, 1e-6);
        data.name = "plane";
        double last = 1e300;
        std::string errs;
        for (const double eps : {0.125, 0.0625, 0.03125}) {
            EvolveOptions opt;
            opt.spacing = eps / 32.0;
            opt.t_final = 1.0;
            const EvolutionResult r = solve_oscillatory(spec, 0, eps, data, opt);
            const double err = sup_error_vs_plane(r, {p, 0.0}, href[ip], 1.0);
            ok = ok && err <= last + 1e-9;
            last = err;
            errs += fmt(err) + " ";
        }
        detail += "p=" + fmt(p) + ": " + errs + " ";
    }
    detail += "(each ladder nonincreasing)";
    return ok;
}

// ---------------------------------------------------------------------------
// 10. Ergodicity proxy: two disjoint 8-realization batches agree within 3x
//     the pooled standard error on all 32 directions.
bool criterion_two_batches(std::string& detail) {
    ShapeOptions base;
    base.spacing = 1.0 / 32;
    base.radii = {1.5, 3.0};
    base.n_dir = 32;
    base.realizations = 8;
    ShapeOptions b = base;
    b.realization_offset = 8;
    const ShapeFunction sa = estimate_shape(bumps2d(), {0.0, 1.0}, base);
    const ShapeFunction sb = estimate_shape(bumps2d(), {0.0, 1.0}, b);
    double worst_z = 0.0;
    for (std::size_t d = 0; d < sa.directions.size(); ++d) {
        const double se = std::hypot(sa.stderrs[d], sb.stderrs[d]);
        const double z = std::abs(sa.values[d] - sb.values[d]) / std::max(se, 1e-300);
        worst_z = std::max(worst_z, z);
    }
    detail = "max |diff|/pooled-se = " + fmt(worst_z) + " over " +
             std::to_string(sa.directions.size()) + " directions, limit 3";
    return worst_z <= 3.0;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

    Tables tabs;
    const bool need_tables = only.empty() || only.count(6) || only.count(7);
    if (need_tables) {
        const auto t0 = std::chrono::steady_clock::now();
        tabs = build_tables();
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("      shared media tables built in %.1f s (used by criteria 6, 7)\n",
                    secs);
    }

    struct Item {
        int id;
        const char* name;
        std::function<bool(std::string&)> run;
    };
    const Item items[] = {
        {1, "free-space-exactness", criterion_free_space},
        {2, "metric-vs-quadrature", criterion_metric_quadrature},
        {3, "cone-bounds-nodewise", criterion_cone_bounds},
        {4, "defect-scaling", criterion_defect_scaling},
        {5, "monotonicity-strict-gap", criterion_monotonicity},
        {6, "kinetic-sandwich", [&](std::string& d) { return criterion_sandwich(tabs, d); }},
        {7, "flat-regions", [&](std::string& d) { return criterion_flat_regions(tabs, d); }},
        {8, "cell-ladder", criterion_cell_ladder},
        {9, "evolve-ladder", criterion_evolve_ladder},
        {10, "two-batch-agreement", criterion_two_batches},
    };

    int failures = 0;
    for (const Item& it : items) {
        if (!only.empty() && !only.count(it.id)) continue;
        std::string detail;
        bool pass = false;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            pass = it.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s  criterion-%02d %-24s (%.1f s)  %s\n", pass ? "PASS" : "FAIL",
                    it.id, it.name, wall, detail.c_str());
        std::fflush(stdout);
        if (!pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
