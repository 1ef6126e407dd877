#pragma once

#include <optional>
#include <string>
#include <vector>

#include "roust/projection.hpp"
#include "roust/types.hpp"

namespace roust {

struct CentroidResult {
  bool holds = true;
  /// Branch labels from the root to the outermost violating interaction.
  std::vector<std::string> path;
  /// The violating interaction, e.g. "B -> A : Suggest".
  std::string witness;

  explicit operator bool() const { return holds; }
};

CentroidResult is_centroid(const Global& g, const Role& s);

struct WfReport {
  bool ok = true;
  std::vector<MergeFailure> failures;  // one per role that fails to project
  std::optional<CentroidResult> centroid;  // set by check_wf_routed

  explicit operator bool() const { return ok; }
  std::string to_string() const;
};

WfReport check_wf(const Global& g);
WfReport check_wf_routed(const Global& g, const Role& s);

}  // namespace roust
