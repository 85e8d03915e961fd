#include "hjhomog/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hjhomog/cell.hpp"
#include "hjhomog/csvio.hpp"
#include "hjhomog/effham.hpp"
#include "hjhomog/evolve.hpp"
#include "hjhomog/grid.hpp"
#include "hjhomog/metric.hpp"
#include "hjhomog/potential.hpp"
#include "hjhomog/shape.hpp"
#include "hjhomog/verify.hpp"

namespace hjhomog {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string stage_path(const ExperimentConfig& cfg, const std::string& stage,
                       const std::string& file) {
  return (fs::path(cfg.out_dir) / stage / file).string();
}

std::string num_tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

nlohmann::json grid_json(const Grid& g) {
  return {{"dim", g.dim},
          {"spacing", g.spacing},
          {"half_extent", g.half_extent},
          {"periodic", g.periodic},
          {"n_axis", g.n_axis}};
}

nlohmann::json ensemble_json(const EnsembleSpec& s) {
  nlohmann::json j{{"kind", to_string(s.kind)}, {"dim", s.dim}, {"k0", s.k0},
                   {"seed", s.seed},            {"level", s.level}};
  if (s.kind == EnsembleKind::ShiftedPeriodic) {
    j["amplitude"] = s.amplitude;
    j["period"] = s.period;
  }
  if (s.kind == EnsembleKind::PoissonBumps) {
    j["intensity"] = s.intensity;
    j["bump_radius"] = s.bump_radius;
    j["bump_height"] = s.bump_height;
  }
  return j;
}

PGrid pgrid_of(const ExperimentConfig& cfg) {
  PGrid pg;
  pg.p_max = cfg.p_max;
  pg.n_axis = cfg.p_axis;
  pg.dim = cfg.ensemble.dim;
  return pg;
}

ShapeOptions provider_options(const ExperimentConfig& cfg) {
  ShapeOptions so;
  so.radii = cfg.radii;
  so.spacing = cfg.shape_spacing;
  so.box_factor = cfg.shape_box_factor;
  so.realizations = cfg.realizations;
  so.directions = augmented_directions(pgrid_of(cfg), cfg.n_directions);
  return so;
}

/// Potential sampled on the metric solve box; the shared demo field for the
/// potential and metric stages.
PotentialField stage_field(const ExperimentConfig& cfg) {
  const double h = cfg.metric_spacing;
  const double half =
      std::ceil(cfg.metric_box_factor * cfg.metric_target_radius / h) * h;
  const Grid grid = Grid::make(cfg.ensemble.dim, h, half);
  return sample_potential(cfg.ensemble, grid, 0);
}

void progress(bool quiet, const char* fmt, double a) {
  if (quiet) return;
  std::printf(fmt, a);
  std::fflush(stdout);
}

}  // namespace

StageRecord run_potential_stage(const ExperimentConfig& cfg, bool quiet) {
  StageRecord rec;
  rec.name = "potential";
  const auto t0 = Clock::now();
  const PotentialField field = stage_field(cfg);
  const std::string csv = stage_path(cfg, "potential", "field.csv");
  write_csv(csv, field_table(field));
  nlohmann::json j;
  j["ensemble"] = ensemble_json(cfg.ensemble);
  j["grid"] = grid_json(field.grid);
  j["vbar"] = field.vbar;
  j["vlow"] = field.vlow;
  j["normalized"] = field.normalized;
  const std::string meta = stage_path(cfg, "potential", "field.json");
  write_json(meta, j);
  rec.outputs = {csv, meta};
  rec.wall_seconds = seconds_since(t0);
  progress(quiet, "potential: done in %.2f s\n", rec.wall_seconds);
  return rec;
}

StageRecord run_metric_stage(const ExperimentConfig& cfg, bool quiet) {
  StageRecord rec;
  rec.name = "metric";
  const auto t0 = Clock::now();
  const PotentialField field = stage_field(cfg);
  MetricOptions mopt;
  mopt.target_radius = cfg.metric_target_radius;
  mopt.box_factor = cfg.metric_box_factor;
  mopt.spacing = cfg.metric_spacing;
  nlohmann::json index = nlohmann::json::array();
  for (double mu : cfg.mu_ladder) {
    for (double sigma : cfg.sigma_ladder) {
      const ParamPair prm{mu, sigma};
      nlohmann::json entry{{"mu", mu}, {"sigma", sigma}};
      if (!prm.admissible(field.vbar)) {
        // void family: record the sentinel instead of a field
        entry["admissible"] = false;
        entry["value"] = "-infinity";
        index.push_back(std::move(entry));
        continue;
      }
      const MetricField mf = solve_metric(field, prm, {0.0, 0.0}, mopt);
      const std::string csv = stage_path(
          cfg, "metric", "m_mu" + num_tag(mu) + "_sig" + num_tag(sigma) + ".csv");
      write_csv(csv, metric_table(mf));
      rec.outputs.push_back(csv);
      entry["admissible"] = true;
      entry["csv"] = csv;
      entry["trust_radius"] = mf.trust_radius;
      entry["degenerate_nodes"] = mf.degenerate_nodes;
      index.push_back(std::move(entry));
    }
  }
  nlohmann::json j;
  j["ensemble"] = ensemble_json(cfg.ensemble);
  j["solves"] = std::move(index);
  const std::string meta = stage_path(cfg, "metric", "metric.json");
  write_json(meta, j);
  rec.outputs.push_back(meta);
  rec.wall_seconds = seconds_since(t0);
  progress(quiet, "metric: done in %.2f s\n", rec.wall_seconds);
  return rec;
}

StageRecord run_shape_stage(const ExperimentConfig& cfg, bool quiet) {
  StageRecord rec;
  rec.name = "shape";
  const auto t0 = Clock::now();
  ShapeOptions so;
  so.radii = cfg.radii;
  so.spacing = cfg.shape_spacing;
  so.box_factor = cfg.shape_box_factor;
  so.realizations = cfg.realizations;
  so.n_dir = cfg.n_directions;
  CsvTable table;
  table.columns = {"mu", "sigma", "dir_x", "dir_y", "radius", "value", "stderr"};
  nlohmann::json index = nlohmann::json::array();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double mu : cfg.mu_ladder) {
    for (double sigma : cfg.sigma_ladder) {
      const ShapeFunction sf = estimate_shape(cfg.ensemble, {mu, sigma}, so);
      for (std::size_t r = 0; r < sf.radii.size(); ++r) {
        const bool top = r + 1 == sf.radii.size();
        for (std::size_t d = 0; d < sf.directions.size(); ++d) {
          table.add_row({mu, sigma, sf.directions[d][0], sf.directions[d][1], sf.radii[r],
                         sf.ladder[r][d], top ? sf.stderrs[d] : nan});
        }
      }
      index.push_back({{"mu", mu},
                       {"sigma", sigma},
                       {"finite", sf.status == MetricStatus::Finite},
                       {"read_tolerance", sf.read_tolerance()}});
    }
  }
  const std::string csv = stage_path(cfg, "shape", "ladder.csv");
  write_csv(csv, table);
  nlohmann::json j;
  j["ensemble"] = ensemble_json(cfg.ensemble);
  j["estimates"] = std::move(index);
  j["radii"] = cfg.radii;
  j["realizations"] = cfg.realizations;
  const std::string meta = stage_path(cfg, "shape", "shape.json");
  write_json(meta, j);
  rec.outputs = {csv, meta};
  rec.wall_seconds = seconds_since(t0);
  progress(quiet, "shape: done in %.2f s\n", rec.wall_seconds);
  return rec;
}

StageRecord run_effham_stage(const ExperimentConfig& cfg, bool quiet) {
  StageRecord rec;
  rec.name = "effham";
  const auto t0 = Clock::now();
  ShapeProvider prov(cfg.ensemble, provider_options(cfg));
  const EffectiveHamiltonian table = tabulate(pgrid_of(cfg), prov);
  CsvTable csv;
  csv.columns = {"p_x", "p_y", "value", "region", "tangency_mu", "flagged"};
  for (std::size_t i = 0; i < table.nodes.size(); ++i) {
    csv.add_row({table.nodes[i][0], cfg.ensemble.dim == 2 ? table.nodes[i][1] : 0.0,
                 table.values[i], static_cast<double>(static_cast<int>(table.regions[i]) + 1),
                 table.tangency_mu[i], static_cast<double>(table.flagged[i])});
  }
  const std::string csv_path = stage_path(cfg, "effham", "table.csv");
  write_csv(csv_path, csv);
  nlohmann::json j;
  j["ensemble"] = ensemble_json(cfg.ensemble);
  j["constants"] = {{"vbar", table.constants.vbar},
                    {"kappa", table.constants.kappa},
                    {"mu_star", table.constants.mu_star},
                    {"sigma_star", table.constants.sigma_star}};
  j["tolerances"] = {{"tol_mu", cfg.tol_mu}, {"tol_gap", cfg.tol_gap}, {"tol_h", cfg.tol_h}};
  j["momentum_grid"] = {{"p_max", cfg.p_max}, {"n_axis", cfg.p_axis}, {"dim", cfg.ensemble.dim}};
  j["slope_bound"] = table.slope_bound();
  j["shape_solves"] = prov.solves();
  int flagged = 0;
  for (auto f : table.flagged) flagged += f;
  j["flagged_nodes"] = flagged;
  const std::string meta = stage_path(cfg, "effham", "table.json");
  write_json(meta, j);
  rec.outputs = {csv_path, meta};
  rec.wall_seconds = seconds_since(t0);
  progress(quiet, "effham: done in %.2f s\n", rec.wall_seconds);
  return rec;
}

StageRecord run_cell_stage(const ExperimentConfig& cfg, bool quiet) {
  StageRecord rec;
  rec.name = "cell";
  const auto t0 = Clock::now();
  const EnsembleSpec& spec = cfg.ensemble;
  const double h = cfg.cell_spacing;

  PotentialField field = [&] {
    if (spec.kind == EnsembleKind::PoissonBumps) {
      // aperiodic: the solver localizes on a box of half-extent s/delta
      const double vbar = spec.true_sup();
      const double s = 2.0 * (1.0 + std::sqrt(vbar + 1.0));
      const double half = std::ceil(s / cfg.delta_ladder.back() / h + 2.0) * h;
      return sample_potential(spec, Grid::make(spec.dim, h, half), 0);
    }
    const double half = 0.5 * spec.period;
    return sample_potential(spec, Grid::make(spec.dim, h, half, true), 0);
  }();

  // reference levels from the distance-based construction
  ShapeProvider prov(spec, provider_options(cfg));

  CsvTable table;
  table.columns = {"p",       "delta",      "minus_delta_v0", "hbar_ref", "abs_err",
                   "residual", "iterations", "max_grad"};
  for (double p : cfg.cell_p) {
    const double ref = hbar({p, 0.0}, prov).value;
    const CellSolution* warm = nullptr;
    std::vector<CellSolution> chain;
    chain.reserve(cfg.delta_ladder.size());
    for (double delta : cfg.delta_ladder) {
      CellOptions co;
      co.tol_factor = cfg.tol_cell;
      co.warm_start = warm;
      chain.push_back(solve_cell(field, {p, 0.0}, delta, co));
      const CellSolution& sol = chain.back();
      warm = &sol;
      table.add_row({p, delta, sol.minus_delta_v0, ref, std::abs(sol.minus_delta_v0 - ref),
                     sol.residual, static_cast<double>(sol.iterations), sol.max_grad});
    }
  }
  const std::string csv = stage_path(cfg, "cell", "ladder.csv");
  write_csv(csv, table);
  nlohmann::json j;
  j["ensemble"] = ensemble_json(cfg.ensemble);
  j["tol_cell"] = cfg.tol_cell;
  j["tol_hom"] = cfg.tol_hom;
  j["delta"] = cfg.delta_ladder;
  j["momenta"] = cfg.cell_p;
  j["grid"] = grid_json(field.grid);
  const std::string meta = stage_path(cfg, "cell", "cell.json");
  write_json(meta, j);
  rec.outputs = {csv, meta};
  rec.wall_seconds = seconds_since(t0);
  progress(quiet, "cell: done in %.2f s\n", rec.wall_seconds);
  return rec;
}

StageRecord run_evolve_stage(const ExperimentConfig& cfg, bool quiet) {
  StageRecord rec;
  rec.name = "evolve";
  const auto t0 = Clock::now();
  const double p = std::min(cfg.cell_p.back(), cfg.p_max);
  ShapeProvider prov(cfg.ensemble, provider_options(cfg));
  const double ref = hbar({p, 0.0}, prov).value;
  const InitialData plane{[p](const Vec& x) { return p * x[0]; }, std::abs(p), "plane"};

  CsvTable table;
  table.columns = {"epsilon", "spacing", "sup_err_vs_plane", "alpha", "tau"};
  std::optional<EvolutionResult> finest;
  for (double eps : cfg.epsilon_ladder) {
    EvolveOptions eo;
    eo.spacing = eps / cfg.evolve_spacing_divisor;
    eo.inner_radius = cfg.evolve_inner_radius;
    eo.t_final = cfg.evolve_t_final;
    EvolutionResult r = solve_oscillatory(cfg.ensemble, 0, eps, plane, eo);
    const double err = sup_error_vs_plane(r, {p, 0.0}, ref, cfg.evolve_inner_radius);
    table.add_row({eps, eo.spacing, err, r.alpha, r.tau});
    finest = std::move(r);
  }
  const std::string csv = stage_path(cfg, "evolve", "ladder.csv");
  write_csv(csv, table);

  // final-time slice of the finest run, restricted to the trusted ball
  CsvTable slice;
  const Grid& g = finest->grid;
  slice.columns = g.dim == 1 ? std::vector<std::string>{"x", "value"}
                             : std::vector<std::string>{"x", "y", "value"};
  const std::vector<double>& last = finest->slices.back();
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const Vec x = g.node_coord(i);
    if (norm(x, g.dim) > cfg.evolve_inner_radius + 1e-12) continue;
    if (g.dim == 1)
      slice.rows.push_back({x[0], last[i]});
    else
      slice.rows.push_back({x[0], x[1], last[i]});
  }
  const std::string slice_path = stage_path(cfg, "evolve", "final_slice.csv");
  write_csv(slice_path, slice);

  nlohmann::json j;
  j["ensemble"] = ensemble_json(cfg.ensemble);
  j["momentum"] = p;
  j["hbar_ref"] = ref;
  j["epsilon"] = cfg.epsilon_ladder;
  j["t_final"] = cfg.evolve_t_final;
  j["tol_hom"] = cfg.tol_hom;
  const std::string meta = stage_path(cfg, "evolve", "evolve.json");
  write_json(meta, j);
  rec.outputs = {csv, slice_path, meta};
  rec.wall_seconds = seconds_since(t0);
  progress(quiet, "evolve: done in %.2f s\n", rec.wall_seconds);
  return rec;
}

namespace {

int finish(const ExperimentConfig& cfg, RunRecord record, bool quiet) {
  const std::string path = stage_path(cfg, "verify", "runrecord.json");
  write_json(path, record.to_json());
  if (!quiet) std::printf("record: %s\n", path.c_str());
  return record.all_pass() ? 0 : 1;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args) {
  CLI::App app{"effective Hamiltonian pipeline for a degenerate oscillatory medium"};
  app.require_subcommand(1);
  app.fallthrough();  // accept the global flags after the subcommand too
  std::string config_path;
  std::string out_dir;
  long long seed = -1;
  int dim = 0;
  bool quiet = false;
  app.add_option("--config", config_path, "configuration file");
  app.add_option("--out", out_dir, "output root (overrides config and environment)");
  app.add_option("--seed", seed, "master seed override");
  app.add_option("--dim", dim, "ensemble dimension override")->check(CLI::Range(1, 2));
  app.add_flag("--quiet", quiet, "suppress progress output");

  const char* names[] = {"potential", "metric", "shape", "effham",
                         "cell",      "evolve", "verify", "all"};
  const char* descs[] = {"sample and export one realization",
                         "point-source distance fields over the parameter ladders",
                         "normalized large-radius distance estimates",
                         "tabulate the effective Hamiltonian on the momentum grid",
                         "discounted approximations of the cell problem",
                         "oscillatory initial-value runs against the homogenized plane",
                         "run the invariant battery",
                         "all stages plus the invariant battery"};
  for (std::size_t i = 0; i < std::size(names); ++i) app.add_subcommand(names[i], descs[i]);

  std::vector<const char*> argv;
  argv.push_back("hjhomog");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = ExperimentConfig::parse_file(config_path);
    if (const char* root = std::getenv("HJHOMOG_OUT_ROOT"); root && *root) cfg.out_dir = root;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed >= 0) {
      cfg.master_seed = static_cast<std::uint64_t>(seed);
      cfg.ensemble.seed = static_cast<std::uint64_t>(seed);
    }
    if (dim != 0) cfg.ensemble.dim = dim;
    cfg.validate();
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    if (sub == "verify") {
      return finish(cfg, run_verification_suite(cfg, quiet), quiet);
    }
    if (sub == "all") {
      RunRecord record;
      record.config_digest = config_digest(cfg);
      record.add(run_potential_stage(cfg, quiet));
      record.add(run_metric_stage(cfg, quiet));
      record.add(run_shape_stage(cfg, quiet));
      record.add(run_effham_stage(cfg, quiet));
      record.add(run_cell_stage(cfg, quiet));
      record.add(run_evolve_stage(cfg, quiet));
      const RunRecord battery = run_verification_suite(cfg, quiet);
      for (const auto& s : battery.stages) {
        StageRecord merged = s;
        merged.name = "verify-" + merged.name;
        record.add(std::move(merged));
      }
      return finish(cfg, std::move(record), quiet);
    }
    StageRecord (*stage)(const ExperimentConfig&, bool) = nullptr;
    if (sub == "potential") stage = run_potential_stage;
    if (sub == "metric") stage = run_metric_stage;
    if (sub == "shape") stage = run_shape_stage;
    if (sub == "effham") stage = run_effham_stage;
    if (sub == "cell") stage = run_cell_stage;
    if (sub == "evolve") stage = run_evolve_stage;
    RunRecord record;
    record.config_digest = config_digest(cfg);
    record.add(stage(cfg, quiet));
    const std::string path = stage_path(cfg, sub, "stage.json");
    write_json(path, record.to_json());
    return record.all_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  }
}

}  // namespace hjhomog
