#pragma once

#include <string>

#include "tvplan/aliases.hpp"
#include "tvplan/patient.hpp"

namespace tvplan {

struct GuidelineDoc {
  std::string id;
  std::string body;

  GuidelineDoc(std::string id_, std::string body_)
      : id(std::move(id_)), body(std::move(body_)) {
    if (body.empty()) {
      throw ConfigError("guideline body must be non-empty");
    }
  }
};

/// Deterministic system prompt: role assignment with the fixed CTV/PTV
/// templates, guideline parameterization (catalog, aliases, range policy),
/// the step-by-step tool-call sequencing, and the plan document format.
/// Byte-identical for identical inputs.
inline std::string build_system_prompt(const StructureCatalog& catalog,
                                       const AliasTable& aliases,
                                       const std::vector<std::string>& initial_rois) {
  if (catalog.empty()) {
    throw ConfigError("cannot build a system prompt from an empty structure catalog");
  }
  std::string initial;
  for (std::size_t i = 0; i < initial_rois.size(); ++i) {
    if (i) initial += ", ";
    initial += initial_rois[i];
  }
  if (initial.empty()) initial = "(none)";

  std::string alias_lines;
  for (const auto& [term, targets] : aliases.entries()) {
    alias_lines += "  " + term + " -> ";
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (i) alias_lines += ", ";
      alias_lines += targets[i];
    }
    alias_lines += "\n";
  }
  if (alias_lines.empty()) alias_lines = "  (none)\n";

  std::string p;
  p += "You are an expert radiation oncology guideline-to-implementation agent.\n";
  p += "You convert a clinical guideline document plus patient context into a\n";
  p += "delineation plan: an ordered sequence of tool calls, expressed as a JSON\n";
  p += "document, that a deterministic engine executes over 3D binary masks.\n";
  p += "\n";
  p += "Mandatory target-volume templates (build every plan from these):\n";
  p += "  CTV = (GTV \xE2\x8A\x95 m_ctv) \\ OARs\n";
  p += "  PTV = CTV \xE2\x8A\x95 m_ptv\n";
  p += "where \xE2\x8A\x95 dilates by a direction-specific margin vector (six\n";
  p += "non-negative mm values: x_neg,x_pos,y_neg,y_pos,z_neg,z_pos) and \\\n";
  p += "subtracts the unified barrier-structure mask.\n";
  p += "\n";
  p += "Guideline parameterization:\n";
  p += "- Segmentable structures: " + catalog.join(", ") + "\n";
  p += "- OAR alias examples (guideline term -> structures):\n";
  p += alias_lines;
  p += "- When an alias maps to several structures, apply operations per component\n";
  p += "  and union the results.\n";
  p += "- When the guideline states a margin as a range (e.g. 5-10 mm), resolve it\n";
  p += "  with the patient context (dose level, physician preferences). If no\n";
  p += "  context applies, use the midpoint of the range.\n";
  p += "\n";
  p += "Tool-call sequencing (follow this order):\n";
  p += "1. Review the ROIs already present (" + initial + ") and the segmentable\n";
  p += "   structures above.\n";
  p += "2. segment: delineate every barrier structure the guideline excludes.\n";
  p += "3. union: combine the segmented structures into one exclusion mask.\n";
  p += "4. dilate: expand GTV by m_ctv into the CTV base.\n";
  p += "5. subtract: remove the exclusion mask from the CTV base to obtain CTV.\n";
  p += "6. dilate: expand CTV by m_ptv into PTV.\n";
  p += "7. The plan is validated against the tool-call schema; when violations are\n";
  p += "   reported back, reply with a corrected, complete plan document.\n";
  p += "\n";
  p += "Plan document format (JSON):\n";
  p += "{\"version\": \"1\", \"guideline_id\": string, \"patient_id\": string,\n";
  p += " \"calls\": [{\"id\": int, \"tool\": string, \"args\": object,\n";
  p += "            \"output\": string or array}]}\n";
  p += "The five tools and their args:\n";
  p += "- segment:   {\"structures\": [names]}; output lists one ROI per structure\n";
  p += "- dilate:    {\"roi\": name, \"margin\": {\"x_neg\": mm, \"x_pos\": mm,\n";
  p += "             \"y_neg\": mm, \"y_pos\": mm, \"z_neg\": mm, \"z_pos\": mm}}\n";
  p += "- union:     {\"rois\": [names]}\n";
  p += "- subtract:  {\"roi\": name, \"minus\": [names]}\n";
  p += "- intersect: {\"rois\": [name, name]}\n";
  p += "Rules: call ids are positive and strictly increasing; every input ROI must\n";
  p += "be an initial ROI or the output of an earlier call; output names are unique\n";
  p += "and use only letters, digits and underscores (at most 64 characters);\n";
  p += "margins are in mm and non-negative.\n";
  p += "Emit exactly one plan document.\n";
  return p;
}

/// User turn: the guideline body plus a labeled key-value context block.
inline std::string format_user_request(const GuidelineDoc& guideline,
                                       const PatientContext& context) {
  std::string u;
  u += "Clinical guideline '" + guideline.id + "':\n";
  u += guideline.body;
  if (u.back() != '\n') u += "\n";
  u += "\n";
  u += "Patient context:\n";
  u += "- patient_id: " + context.patient_id + "\n";
  if (context.tumor_site) u += "- tumor_site: " + *context.tumor_site + "\n";
  if (context.dose_level) u += "- dose_level: " + *context.dose_level + "\n";
  std::string rois;
  for (std::size_t i = 0; i < context.initial_rois.size(); ++i) {
    if (i) rois += ", ";
    rois += context.initial_rois[i];
  }
  u += "- initial ROIs: " + (rois.empty() ? "(none)" : rois) + "\n";
  if (context.preferences.empty()) {
    u += "- margin preferences: (none)\n";
  } else {
    u += "- margin preferences:";
    bool first = true;
    for (const auto& [role, mm] : context.preferences) {
      u += (first ? " " : ", ") + role + "=" + std::to_string(mm) + " mm";
      first = false;
    }
    u += "\n";
  }
  u += "\nProduce the delineation plan document now.\n";
  return u;
}

}  // namespace tvplan
