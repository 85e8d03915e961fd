#pragma once

#include "hjhomog/config.hpp"
#include "hjhomog/runrecord.hpp"

namespace hjhomog {

/// Per-stage invariant batteries. Each runs a fixed, seeded scenario suite
/// (seeds derived from cfg.master_seed, tolerances taken from cfg where the
/// config names them) and returns one record with a CheckEntry per anchor.
/// A check that throws is recorded as a failure with the exception text; it
/// never escapes, so later stages still run.
StageRecord verify_field_stage(const ExperimentConfig& cfg, bool quiet);
StageRecord verify_metric_stage(const ExperimentConfig& cfg, bool quiet);
StageRecord verify_shape_stage(const ExperimentConfig& cfg, bool quiet);
StageRecord verify_effham_stage(const ExperimentConfig& cfg, bool quiet);
StageRecord verify_cell_stage(const ExperimentConfig& cfg, bool quiet);
StageRecord verify_evolve_stage(const ExperimentConfig& cfg, bool quiet);

/// Byte-reproducibility probe plus the coverage diff against
/// RunRecord::required_anchors(); needs the checks recorded so far.
StageRecord verify_harness_stage(const ExperimentConfig& cfg, const RunRecord& sofar,
                                 bool quiet);

/// The whole battery in dependency order:
/// field, metric, shape, effham, cell, evolve, harness.
RunRecord run_verification_suite(const ExperimentConfig& cfg, bool quiet);

}  // namespace hjhomog
