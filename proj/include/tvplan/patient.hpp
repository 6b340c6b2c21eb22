#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tvplan {

/// Per-case facts the planner may use when a guideline leaves a choice open
/// (for example a margin given as a range). preferences maps a margin role
/// such as "ctv_radial" to an explicit mm value.
struct PatientContext {
  std::string patient_id;
  std::optional<std::string> dose_level;
  std::map<std::string, double> preferences;
  std::optional<std::string> tumor_site;
  std::vector<std::string> initial_rois;
};

}  // namespace tvplan
