#pragma once

#include <string>
#include <vector>

#include "hjhomog/config.hpp"
#include "hjhomog/runrecord.hpp"

namespace hjhomog {

/// Pipeline stages driven by the configured ensemble. Each writes CSV/JSON
/// artifacts under <out_dir>/<stage>/ and returns a record with the output
/// paths and wall time. Numerical failures propagate as exceptions.
StageRecord run_potential_stage(const ExperimentConfig& cfg, bool quiet);
StageRecord run_metric_stage(const ExperimentConfig& cfg, bool quiet);
StageRecord run_shape_stage(const ExperimentConfig& cfg, bool quiet);
StageRecord run_effham_stage(const ExperimentConfig& cfg, bool quiet);
StageRecord run_cell_stage(const ExperimentConfig& cfg, bool quiet);
StageRecord run_evolve_stage(const ExperimentConfig& cfg, bool quiet);

/// Command-line front end. args is the argument list without the program
/// name, e.g. {"verify", "--config", "ref.cfg"}.
///
/// Subcommands: potential, metric, shape, effham, cell, evolve (artifacts),
/// verify (invariant battery), all (artifacts + battery). Flags: --config
/// PATH, --out DIR, --seed N, --dim {1,2}, --quiet. The HJHOMOG_OUT_ROOT
/// environment variable overrides the configured output root (the --out
/// flag wins over both).
///
/// Exit codes: 0 every asserted check passed; 1 at least one check failed;
/// 2 usage error or malformed/missing config; 3 numerical failure.
int cli_dispatch(const std::vector<std::string>& args);

}  // namespace hjhomog
