#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace hjhomog {

/// One verified property: a stable anchor id, the measured figure, the
/// tolerance it was held to, and the verdict. detail carries the human
/// explanation (what was compared, at which parameters).
struct CheckEntry {
  std::string anchor;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct StageRecord {
  std::string name;
  double wall_seconds = 0.0;
  std::vector<std::string> outputs;  ///< artifact paths written by the stage
  std::vector<CheckEntry> checks;
};

/// Aggregated result of a run: which configuration (by digest), what each
/// stage produced, and every check with its measured value. The required
/// anchor manifest makes coverage auditable: missing_anchors() diffs the
/// record against it.
struct RunRecord {
  std::string config_digest;
  std::vector<StageRecord> stages;

  void add(StageRecord stage);
  bool all_pass() const;
  int failed_count() const;
  const CheckEntry* find(const std::string& anchor) const;
  std::vector<std::string> missing_anchors() const;
  nlohmann::json to_json() const;

  /// Every anchor the verification suite must cover, one per documented
  /// module property.
  static const std::vector<std::string>& required_anchors();
};

}  // namespace hjhomog
