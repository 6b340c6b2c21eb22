#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tvplan/plan.hpp"

namespace tvplan {

namespace detail {

struct Producer {
  std::size_t call_index;
  std::size_t slot;  // output slot (structure index for segment)
};

class Canonicalizer {
 public:
  Canonicalizer(const Plan& plan, const std::vector<std::string>& initial_rois)
      : plan_(plan), initial_(initial_rois.begin(), initial_rois.end()) {
    for (std::size_t c = 0; c < plan.calls.size(); ++c) {
      const auto& outs = plan.calls[c].outputs;
      for (std::size_t s = 0; s < outs.size(); ++s) {
        producers_.emplace(outs[s], Producer{c, s});
      }
    }
  }

  std::string key_for(std::size_t call_index) {
    if (call_index >= plan_.calls.size()) {
      throw Error("canonicalize: call index out of range");
    }
    auto it = memo_.find(call_index);
    if (it != memo_.end()) return it->second;
    if (in_progress_.count(call_index)) {
      throw Error("canonicalize: cyclic ROI reference (plan was not validated)");
    }
    in_progress_.insert(call_index);
    std::string key = compute(plan_.calls[call_index], call_index);
    in_progress_.erase(call_index);
    memo_.emplace(call_index, key);
    return key;
  }

 private:
  // Margins participate in call identity at 0.1 mm resolution.
  static std::string margin_key(const std::array<double, 6>& m) {
    std::string s = "m[";
    for (int c = 0; c < 6; ++c) {
      if (c) s += ",";
      s += std::to_string(static_cast<long long>(std::llround(m[c] * 10.0)));
    }
    return s + "]";
  }

  std::string ref(const std::string& name, std::size_t referrer) {
    if (initial_.count(name)) {
      return "INPUT:" + name;
    }
    auto it = producers_.find(name);
    if (it == producers_.end() || it->second.call_index >= referrer) {
      throw Error("canonicalize: ROI '" + name +
                  "' has no earlier producer (plan was not validated)");
    }
    const ToolCall& prod = plan_.calls[it->second.call_index];
    if (prod.tool == Tool::Segment) {
      const auto& structures = std::get<SegmentArgs>(prod.args).structures;
      if (it->second.slot >= structures.size()) {
        throw Error("canonicalize: segment call lacks a structure for output '" + name +
                    "'");
      }
      return "segment(" + structures[it->second.slot] + ")";
    }
    return key_for(it->second.call_index);
  }

  std::string compute(const ToolCall& call, std::size_t index) {
    switch (call.tool) {
      case Tool::Segment: {
        auto structures = std::get<SegmentArgs>(call.args).structures;
        std::sort(structures.begin(), structures.end());
        std::string s = "segment[";
        for (std::size_t i = 0; i < structures.size(); ++i) {
          if (i) s += ",";
          s += structures[i];
        }
        return s + "]";
      }
      case Tool::Dilate: {
        const auto& a = std::get<DilateArgs>(call.args);
        return "dilate(" + ref(a.roi, index) + ";" + margin_key(a.margin) + ")";
      }
      case Tool::Union: {
        std::vector<std::string> refs;
        for (const auto& r : std::get<UnionArgs>(call.args).rois) {
          refs.push_back(ref(r, index));
        }
        std::sort(refs.begin(), refs.end());
        std::string s = "union[";
        for (std::size_t i = 0; i < refs.size(); ++i) {
          if (i) s += ",";
          s += refs[i];
        }
        return s + "]";
      }
      case Tool::Subtract: {
        const auto& a = std::get<SubtractArgs>(call.args);
        std::vector<std::string> refs;
        for (const auto& r : a.minus) refs.push_back(ref(r, index));
        std::sort(refs.begin(), refs.end());
        std::string s = "subtract(" + ref(a.roi, index) + ";[";
        for (std::size_t i = 0; i < refs.size(); ++i) {
          if (i) s += ",";
          s += refs[i];
        }
        return s + "])";
      }
      case Tool::Intersect: {
        const auto& a = std::get<IntersectArgs>(call.args);
        std::string r0 = ref(a.rois[0], index);
        std::string r1 = ref(a.rois[1], index);
        if (r1 < r0) std::swap(r0, r1);
        return "intersect[" + r0 + "," + r1 + "]";
      }
    }
    throw Error("canonicalize: unreachable tool");
  }

  const Plan& plan_;
  std::set<std::string> initial_;
  std::map<std::string, Producer> producers_;
  std::map<std::size_t, std::string> memo_;
  std::set<std::size_t> in_progress_;
};

}  // namespace detail

/// Canonical key of one call: tool plus arguments with every ROI reference
/// replaced by its producing call's canonical key ("INPUT:<name>" for initial
/// ROIs), unordered argument lists sorted, margins rounded to 0.1 mm. Keys
/// are invariant under renaming of intermediate ROIs.
inline std::string canonicalize_call(const ToolCall& call, const Plan& plan,
                                     const std::vector<std::string>& initial_rois) {
  detail::Canonicalizer canon(plan, initial_rois);
  for (std::size_t c = 0; c < plan.calls.size(); ++c) {
    if (&plan.calls[c] == &call || plan.calls[c] == call) {
      return canon.key_for(c);
    }
  }
  throw Error("canonicalize_call: call is not part of the plan");
}

/// Canonical keys of every call, in plan order.
inline std::vector<std::string> canonical_keys(const Plan& plan,
                                               const std::vector<std::string>& initial_rois) {
  detail::Canonicalizer canon(plan, initial_rois);
  std::vector<std::string> keys;
  keys.reserve(plan.calls.size());
  for (std::size_t c = 0; c < plan.calls.size(); ++c) {
    keys.push_back(canon.key_for(c));
  }
  return keys;
}

}  // namespace tvplan
