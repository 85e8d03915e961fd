#include "hjhomog/runrecord.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace hjhomog {

void RunRecord::add(StageRecord stage) { stages.push_back(std::move(stage)); }

bool RunRecord::all_pass() const { return failed_count() == 0; }

int RunRecord::failed_count() const {
  int n = 0;
  for (const auto& s : stages)
    for (const auto& c : s.checks)
      if (!c.pass) ++n;
  return n;
}

const CheckEntry* RunRecord::find(const std::string& anchor) const {
  for (const auto& s : stages)
    for (const auto& c : s.checks)
      if (c.anchor == anchor) return &c;
  return nullptr;
}

std::vector<std::string> RunRecord::missing_anchors() const {
  std::vector<std::string> missing;
  for (const auto& a : required_anchors())
    if (find(a) == nullptr) missing.push_back(a);
  return missing;
}

nlohmann::json RunRecord::to_json() const {
  nlohmann::json j;
  j["config_digest"] = config_digest;
  j["all_pass"] = all_pass();
  j["failed_checks"] = failed_count();
  j["missing_anchors"] = missing_anchors();
  j["stages"] = nlohmann::json::array();
  for (const auto& s : stages) {
    nlohmann::json js;
    js["name"] = s.name;
    js["wall_seconds"] = s.wall_seconds;
    js["outputs"] = s.outputs;
    js["checks"] = nlohmann::json::array();
    for (const auto& c : s.checks) {
      js["checks"].push_back({{"anchor", c.anchor},
                              {"measured", c.measured},
                              {"tolerance", c.tolerance},
                              {"pass", c.pass},
                              {"detail", c.detail}});
    }
    j["stages"].push_back(std::move(js));
  }
  return j;
}

const std::vector<std::string>& RunRecord::required_anchors() {
  static const std::vector<std::string> anchors = {
      // field
      "field-determinism",
      "field-bounded",
      "field-shift-mean",
      "field-normalize-idempotent",
      // metric
      "metric-symmetry",
      "metric-subadditivity",
      "metric-cone-bounds",
      "metric-monotonicity",
      "metric-strict-gap",
      "metric-1d-quadrature",
      // shape
      "shape-cauchy-r",
      "shape-two-seed",
      "shape-cone-bounds",
      "shape-evenness",
      // effective Hamiltonian
      "effham-sandwich",
      "effham-hilltop-flat",
      "effham-valley-flat",
      "effham-coercivity-ray",
      "effham-partition",
      "effham-dir-robustness",
      // discounted cell problem
      "cell-bounds-node",
      "cell-gradient-delta",
      "cell-ladder-decay",
      "cell-liminf-tangent",
      "cell-hilltop-limsup",
      "cell-liminf-zero",
      // time-dependent solver
      "evolve-monotone",
      "evolve-constants-commute",
      "evolve-translation",
      // harness
      "harness-reproducibility",
      "harness-completeness",
  };
  return anchors;
}

}  // namespace hjhomog
