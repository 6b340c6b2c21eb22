#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tvplan/errors.hpp"
#include "tvplan/grid.hpp"

namespace tvplan {

enum class Tool { Segment, Dilate, Union, Subtract, Intersect };

inline const char* tool_name(Tool t) {
  switch (t) {
    case Tool::Segment: return "segment";
    case Tool::Dilate: return "dilate";
    case Tool::Union: return "union";
    case Tool::Subtract: return "subtract";
    case Tool::Intersect: return "intersect";
  }
  return "?";
}

inline std::optional<Tool> tool_from_name(const std::string& s) {
  if (s == "segment") return Tool::Segment;
  if (s == "dilate") return Tool::Dilate;
  if (s == "union") return Tool::Union;
  if (s == "subtract") return Tool::Subtract;
  if (s == "intersect") return Tool::Intersect;
  return std::nullopt;
}

struct SegmentArgs {
  std::vector<std::string> structures;
  friend bool operator==(const SegmentArgs&, const SegmentArgs&) = default;
};

/// Margin components are kept raw (possibly negative) so that validation,
/// not parsing, reports E_NEG_MARGIN. Order: x-,x+,y-,y+,z-,z+.
struct DilateArgs {
  std::string roi;
  std::array<double, 6> margin;

  MarginVector margin_vector() const {
    return MarginVector(margin[0], margin[1], margin[2], margin[3], margin[4],
                        margin[5]);
  }
  friend bool operator==(const DilateArgs&, const DilateArgs&) = default;
};

struct UnionArgs {
  std::vector<std::string> rois;
  friend bool operator==(const UnionArgs&, const UnionArgs&) = default;
};

struct SubtractArgs {
  std::string roi;
  std::vector<std::string> minus;
  friend bool operator==(const SubtractArgs&, const SubtractArgs&) = default;
};

struct IntersectArgs {
  std::array<std::string, 2> rois;
  friend bool operator==(const IntersectArgs&, const IntersectArgs&) = default;
};

struct ToolCall {
  int id = 0;
  Tool tool = Tool::Segment;
  std::variant<SegmentArgs, DilateArgs, UnionArgs, SubtractArgs, IntersectArgs> args;
  std::vector<std::string> outputs;  // one per structure for segment, else one

  std::vector<std::string> input_rois() const {
    switch (tool) {
      case Tool::Segment: return {};
      case Tool::Dilate: return {std::get<DilateArgs>(args).roi};
      case Tool::Union: return std::get<UnionArgs>(args).rois;
      case Tool::Subtract: {
        const auto& a = std::get<SubtractArgs>(args);
        std::vector<std::string> in{a.roi};
        in.insert(in.end(), a.minus.begin(), a.minus.end());
        return in;
      }
      case Tool::Intersect: {
        const auto& a = std::get<IntersectArgs>(args);
        return {a.rois[0], a.rois[1]};
      }
    }
    return {};
  }

  friend bool operator==(const ToolCall&, const ToolCall&) = default;
};

struct Plan {
  std::string version = "1";
  std::string guideline_id;
  std::string patient_id;
  std::vector<ToolCall> calls;

  friend bool operator==(const Plan&, const Plan&) = default;
};

/// Parse failure. unknown_tool distinguishes a bad tool variant from other
/// shape problems; call_index/call_id locate the failing call when known.
struct PlanParseError : Error {
  PlanParseError(const std::string& msg, bool unknown_tool_ = false,
                 std::optional<int> call_index_ = std::nullopt,
                 std::optional<int> call_id_ = std::nullopt)
      : Error(msg),
        unknown_tool(unknown_tool_),
        call_index(call_index_),
        call_id(call_id_) {}
  bool unknown_tool = false;
  std::optional<int> call_index;
  std::optional<int> call_id;
};

namespace detail {

using nlohmann::json;

inline const json& expect(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) {
    throw PlanParseError(path + ": expected an object");
  }
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw PlanParseError(path + ": missing required field '" + key + "'");
  }
  return *it;
}

inline std::string expect_string(const json& obj, const char* key,
                                 const std::string& path) {
  const json& v = expect(obj, key, path);
  if (!v.is_string()) {
    throw PlanParseError(path + "." + key + ": expected a string");
  }
  return v.get<std::string>();
}

inline double expect_number(const json& v, const std::string& path) {
  if (!v.is_number()) {
    throw PlanParseError(path + ": expected a number");
  }
  return v.get<double>();
}

inline std::vector<std::string> expect_string_array(const json& v,
                                                    const std::string& path) {
  if (!v.is_array()) {
    throw PlanParseError(path + ": expected an array of strings");
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) {
      throw PlanParseError(path + "[" + std::to_string(i) + "]: expected a string");
    }
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

inline void reject_unknown_keys(const json& obj, std::initializer_list<const char*> keys,
                                const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : keys) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw PlanParseError(path + ": unknown field '" + it.key() + "'");
    }
  }
}

static constexpr const char* kMarginKeys[6] = {"x_neg", "x_pos", "y_neg",
                                               "y_pos", "z_neg", "z_pos"};

inline std::array<double, 6> parse_margin(const json& v, const std::string& path) {
  if (!v.is_object()) {
    throw PlanParseError(path + ": expected a margin object");
  }
  reject_unknown_keys(v, {"x_neg", "x_pos", "y_neg", "y_pos", "z_neg", "z_pos"}, path);
  std::array<double, 6> out{};
  for (int c = 0; c < 6; ++c) {
    out[c] = expect_number(expect(v, kMarginKeys[c], path), path + "." + kMarginKeys[c]);
  }
  return out;
}

}  // namespace detail

/// Parses a plan document. Shape checks only: types, arities, the closed tool
/// set. Dataflow and naming rules are the validator's job.
inline Plan parse_plan(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw PlanParseError(std::string("plan document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw PlanParseError("plan document must be a JSON object");
  }
  detail::reject_unknown_keys(doc, {"version", "guideline_id", "patient_id", "calls"},
                              "plan");
  Plan plan;
  plan.version = detail::expect_string(doc, "version", "plan");
  if (plan.version != "1") {
    throw PlanParseError("plan.version: unsupported version '" + plan.version + "'");
  }
  plan.guideline_id = detail::expect_string(doc, "guideline_id", "plan");
  plan.patient_id = detail::expect_string(doc, "patient_id", "plan");

  const json& calls = detail::expect(doc, "calls", "plan");
  if (!calls.is_array()) {
    throw PlanParseError("plan.calls: expected an array");
  }
  for (std::size_t idx = 0; idx < calls.size(); ++idx) {
    const std::string path = "calls[" + std::to_string(idx) + "]";
    const json& c = calls[idx];
    if (!c.is_object()) {
      throw PlanParseError(path + ": expected an object", false,
                           static_cast<int>(idx));
    }
    detail::reject_unknown_keys(c, {"id", "tool", "args", "output"}, path);

    ToolCall call;
    const nlohmann::json& idv = detail::expect(c, "id", path);
    if (!idv.is_number_integer()) {
      throw PlanParseError(path + ".id: expected an integer", false,
                           static_cast<int>(idx));
    }
    call.id = idv.get<int>();

    const std::string tool = detail::expect_string(c, "tool", path);
    const auto t = tool_from_name(tool);
    if (!t) {
      throw PlanParseError(path + ".tool: unknown tool '" + tool + "'", true,
                           static_cast<int>(idx), call.id);
    }
    call.tool = *t;

    const nlohmann::json& args = detail::expect(c, "args", path);
    const std::string apath = path + ".args";
    if (!args.is_object()) {
      throw PlanParseError(apath + ": expected an object", false,
                           static_cast<int>(idx), call.id);
    }

    const nlohmann::json& outv = detail::expect(c, "output", path);
    auto single_output = [&]() {
      if (!outv.is_string()) {
        throw PlanParseError(path + ".output: expected a string", false,
                             static_cast<int>(idx), call.id);
      }
      call.outputs = {outv.get<std::string>()};
    };

    try {
      switch (*t) {
        case Tool::Segment: {
          detail::reject_unknown_keys(args, {"structures"}, apath);
          SegmentArgs a;
          a.structures = detail::expect_string_array(
              detail::expect(args, "structures", apath), apath + ".structures");
          call.args = std::move(a);
          if (outv.is_string()) {
            call.outputs = {outv.get<std::string>()};
          } else if (outv.is_array()) {
            call.outputs = detail::expect_string_array(outv, path + ".output");
          } else {
            throw PlanParseError(path + ".output: expected a string or array of strings");
          }
          break;
        }
        case Tool::Dilate: {
          detail::reject_unknown_keys(args, {"roi", "margin"}, apath);
          DilateArgs a;
          a.roi = detail::expect_string(args, "roi", apath);
          a.margin = detail::parse_margin(detail::expect(args, "margin", apath),
                                          apath + ".margin");
          call.args = std::move(a);
          single_output();
          break;
        }
        case Tool::Union: {
          detail::reject_unknown_keys(args, {"rois"}, apath);
          UnionArgs a;
          a.rois = detail::expect_string_array(detail::expect(args, "rois", apath),
                                               apath + ".rois");
          call.args = std::move(a);
          single_output();
          break;
        }
        case Tool::Subtract: {
          detail::reject_unknown_keys(args, {"roi", "minus"}, apath);
          SubtractArgs a;
          a.roi = detail::expect_string(args, "roi", apath);
          a.minus = detail::expect_string_array(detail::expect(args, "minus", apath),
                                                apath + ".minus");
          call.args = std::move(a);
          single_output();
          break;
        }
        case Tool::Intersect: {
          detail::reject_unknown_keys(args, {"rois"}, apath);
          const auto rois = detail::expect_string_array(
              detail::expect(args, "rois", apath), apath + ".rois");
          if (rois.size() != 2) {
            throw PlanParseError(apath + ".rois: intersect takes exactly two ROIs");
          }
          call.args = IntersectArgs{{rois[0], rois[1]}};
          single_output();
          break;
        }
      }
    } catch (PlanParseError& e) {
      // attach location if the inner helper did not know it
      if (!e.call_index) {
        throw PlanParseError(e.what(), e.unknown_tool, static_cast<int>(idx), call.id);
      }
      throw;
    }
    plan.calls.push_back(std::move(call));
  }
  return plan;
}

/// Canonical serialization: stable key order, two-space indent, trailing
/// newline. parse_plan(serialize_plan(p)) is structurally equal to p.
inline std::string serialize_plan(const Plan& plan) {
  using ojson = nlohmann::ordered_json;
  ojson doc;
  doc["version"] = plan.version;
  doc["guideline_id"] = plan.guideline_id;
  doc["patient_id"] = plan.patient_id;
  doc["calls"] = ojson::array();
  for (const ToolCall& c : plan.calls) {
    ojson jc;
    jc["id"] = c.id;
    jc["tool"] = tool_name(c.tool);
    ojson args;
    switch (c.tool) {
      case Tool::Segment:
        args["structures"] = std::get<SegmentArgs>(c.args).structures;
        break;
      case Tool::Dilate: {
        const auto& a = std::get<DilateArgs>(c.args);
        args["roi"] = a.roi;
        ojson m;
        for (int i = 0; i < 6; ++i) m[detail::kMarginKeys[i]] = a.margin[i];
        args["margin"] = std::move(m);
        break;
      }
      case Tool::Union:
        args["rois"] = std::get<UnionArgs>(c.args).rois;
        break;
      case Tool::Subtract: {
        const auto& a = std::get<SubtractArgs>(c.args);
        args["roi"] = a.roi;
        args["minus"] = a.minus;
        break;
      }
      case Tool::Intersect: {
        const auto& a = std::get<IntersectArgs>(c.args);
        args["rois"] = {a.rois[0], a.rois[1]};
        break;
      }
    }
    jc["args"] = std::move(args);
    if (c.outputs.size() == 1) {
      jc["output"] = c.outputs[0];
    } else {
      jc["output"] = c.outputs;
    }
    doc["calls"].push_back(std::move(jc));
  }
  return doc.dump(2) + "\n";
}

}  // namespace tvplan
