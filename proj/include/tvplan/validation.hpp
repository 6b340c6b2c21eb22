#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tvplan/aliases.hpp"
#include "tvplan/plan.hpp"

namespace tvplan {

enum class ViolationCode {
  Schema,
  UnknownTool,
  UndefRoi,
  DupOutput,
  NegMargin,
  UnknownStructure,
  EmptyPlan,
  BadName,
};

inline const char* violation_code_name(ViolationCode c) {
  switch (c) {
    case ViolationCode::Schema: return "E_SCHEMA";
    case ViolationCode::UnknownTool: return "E_UNKNOWN_TOOL";
    case ViolationCode::UndefRoi: return "E_UNDEF_ROI";
    case ViolationCode::DupOutput: return "E_DUP_OUTPUT";
    case ViolationCode::NegMargin: return "E_NEG_MARGIN";
    case ViolationCode::UnknownStructure: return "E_UNKNOWN_STRUCTURE";
    case ViolationCode::EmptyPlan: return "E_EMPTY_PLAN";
    case ViolationCode::BadName: return "E_BAD_NAME";
  }
  return "?";
}

struct Violation {
  ViolationCode code;
  std::optional<int> call_id;
  std::string message;

  std::string format() const {
    std::string s = violation_code_name(code);
    if (call_id) s += " (call " + std::to_string(*call_id) + ")";
    return s + ": " + message;
  }
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
};

/// ROI name grammar: letters, digits, underscore; 1..64 chars.
inline bool is_valid_roi_name(const std::string& s) {
  if (s.empty() || s.size() > 64) return false;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

/// Simulates dataflow in call order against the catalog and the initially
/// bound ROIs, reporting every violation it finds. An empty report means the
/// plan will execute without dataflow errors.
inline ValidationReport validate_plan(const Plan& plan, const StructureCatalog& catalog,
                                      const std::vector<std::string>& initial_rois) {
  ValidationReport report;
  auto add = [&](ViolationCode code, std::optional<int> call_id, std::string msg) {
    report.violations.push_back(Violation{code, call_id, std::move(msg)});
  };

  if (plan.calls.empty()) {
    add(ViolationCode::EmptyPlan, std::nullopt, "plan has no calls");
    return report;
  }

  std::set<std::string> defined(initial_rois.begin(), initial_rois.end());
  const std::set<std::string> initial = defined;
  int prev_id = 0;

  for (const ToolCall& call : plan.calls) {
    const std::optional<int> cid = call.id;
    if (call.id <= 0) {
      add(ViolationCode::Schema, cid, "call id must be a positive integer");
    } else if (call.id <= prev_id) {
      add(ViolationCode::Schema, cid,
          "call ids must be strictly increasing (previous id " +
              std::to_string(prev_id) + ")");
    }
    prev_id = call.id;

    // tool-specific argument rules
    switch (call.tool) {
      case Tool::Segment: {
        const auto& a = std::get<SegmentArgs>(call.args);
        if (a.structures.empty()) {
          add(ViolationCode::Schema, cid, "segment requires at least one structure");
        }
        if (a.structures.size() != call.outputs.size()) {
          add(ViolationCode::Schema, cid,
              "segment declares " + std::to_string(a.structures.size()) +
                  " structures but " + std::to_string(call.outputs.size()) +
                  " outputs; one output per structure is required");
        }
        for (const std::string& s : a.structures) {
          if (!catalog.contains(s)) {
            add(ViolationCode::UnknownStructure, cid,
                "structure '" + s + "' is not segmentable (catalog: " +
                    catalog.join(", ") + ")");
          }
        }
        break;
      }
      case Tool::Dilate: {
        const auto& a = std::get<DilateArgs>(call.args);
        for (int c = 0; c < 6; ++c) {
          if (a.margin[c] < 0.0) {
            add(ViolationCode::NegMargin, cid,
                std::string("margin component ") + detail::kMarginKeys[c] +
                    " is negative");
          }
        }
        break;
      }
      case Tool::Union: {
        if (std::get<UnionArgs>(call.args).rois.empty()) {
          add(ViolationCode::Schema, cid, "union requires at least one input ROI");
        }
        break;
      }
      case Tool::Subtract: {
        if (std::get<SubtractArgs>(call.args).minus.empty()) {
          add(ViolationCode::Schema, cid,
              "subtract requires at least one ROI to subtract");
        }
        break;
      }
      case Tool::Intersect:
        break;
    }

    // dataflow: inputs must already be defined
    for (const std::string& in : call.input_rois()) {
      if (!is_valid_roi_name(in)) {
        add(ViolationCode::BadName, cid,
            "input ROI name '" + in + "' violates the name grammar");
      } else if (!defined.count(in)) {
        add(ViolationCode::UndefRoi, cid,
            "input ROI '" + in + "' is not defined at this point");
      }
    }

    for (const std::string& out : call.outputs) {
      if (!is_valid_roi_name(out)) {
        add(ViolationCode::BadName, cid,
            "output ROI name '" + out + "' violates the name grammar");
        continue;
      }
      if (initial.count(out)) {
        add(ViolationCode::DupOutput, cid,
            "output ROI '" + out + "' collides with an initial ROI");
      } else if (defined.count(out)) {
        add(ViolationCode::DupOutput, cid,
            "output ROI '" + out + "' is already defined");
      }
      defined.insert(out);
    }
  }
  return report;
}

struct ParseOutcome {
  std::optional<Plan> plan;
  ValidationReport report;  // shape-level violations when parsing failed
};

/// Lenient entry point for the refinement loop: parse failures become report
/// entries instead of exceptions.
inline ParseOutcome try_parse_plan(const std::string& text) {
  ParseOutcome out;
  try {
    out.plan = parse_plan(text);
  } catch (const PlanParseError& e) {
    out.report.violations.push_back(
        Violation{e.unknown_tool ? ViolationCode::UnknownTool : ViolationCode::Schema,
                  e.call_id, e.what()});
  }
  return out;
}

}  // namespace tvplan
