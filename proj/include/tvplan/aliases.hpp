#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "tvplan/errors.hpp"
#include "tvplan/patient.hpp"

namespace tvplan {

struct UnknownStructureError : Error {
  using Error::Error;
};

/// Structure names the segmentation provider can delineate.
class StructureCatalog {
 public:
  StructureCatalog() = default;

  explicit StructureCatalog(std::vector<std::string> names) : names_(std::move(names)) {
    for (const auto& n : names_) {
      if (n.empty()) throw ConfigError("catalog names must be non-empty");
    }
    auto sorted = names_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ConfigError("catalog names must be unique");
    }
  }

  const std::vector<std::string>& names() const { return names_; }
  bool contains(const std::string& name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
  }
  bool empty() const { return names_.empty(); }

  std::string join(const std::string& sep) const {
    std::string out;
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (i) out += sep;
      out += names_[i];
    }
    return out;
  }

 private:
  std::vector<std::string> names_;
};

namespace detail {
inline std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}
}  // namespace detail

/// Guideline term -> catalog structure names, looked up case-insensitively.
/// Every target must exist in the catalog.
class AliasTable {
 public:
  AliasTable() = default;

  AliasTable(std::map<std::string, std::vector<std::string>> entries,
             const StructureCatalog& catalog) {
    for (auto& [term, targets] : entries) {
      if (targets.empty()) {
        throw ConfigError("alias '" + term + "' has no targets");
      }
      for (const auto& t : targets) {
        if (!catalog.contains(t)) {
          throw ConfigError("alias '" + term + "' maps to '" + t +
                            "' which is not in the structure catalog");
        }
      }
      entries_[detail::lowercase(term)] = targets;
    }
  }

  const std::map<std::string, std::vector<std::string>>& entries() const {
    return entries_;
  }

  const std::vector<std::string>* lookup(const std::string& term) const {
    auto it = entries_.find(detail::lowercase(term));
    return it == entries_.end() ? nullptr : &it->second;
  }

 private:
  std::map<std::string, std::vector<std::string>> entries_;  // lowercased keys
};

/// Alias expansion if the term is aliased, the term itself if it is a catalog
/// name, otherwise an unknown-structure error.
inline std::vector<std::string> resolve_aliases(const std::string& term,
                                                const AliasTable& table,
                                                const StructureCatalog& catalog) {
  if (const auto* targets = table.lookup(term)) {
    return *targets;
  }
  if (catalog.contains(term)) {
    return {term};
  }
  throw UnknownStructureError("term '" + term +
                              "' is neither an alias nor a catalog structure");
}

/// A guideline margin given as "low--high mm".
struct MarginRangeSpec {
  double low = 0.0;
  double high = 0.0;

  MarginRangeSpec(double low_, double high_) : low(low_), high(high_) {
    if (!(low >= 0.0) || !(high >= low)) {
      throw ConfigError("margin range requires 0 <= low <= high, got [" +
                        std::to_string(low) + ", " + std::to_string(high) + "]");
    }
  }
};

struct MarginResolution {
  double mm = 0.0;
  bool clamped = false;
  std::string note;
};

/// Deterministic range resolution: an explicit context override for the given
/// role wins (clamped into the range, with a note); otherwise the midpoint.
inline MarginResolution resolve_margin_range(const MarginRangeSpec& spec,
                                             const PatientContext& context,
                                             const std::string& role) {
  MarginResolution res;
  auto it = context.preferences.find(role);
  if (it == context.preferences.end()) {
    res.mm = (spec.low + spec.high) / 2.0;
    return res;
  }
  const double want = it->second;
  res.mm = std::clamp(want, spec.low, spec.high);
  if (res.mm != want) {
    res.clamped = true;
    res.note = "override " + std::to_string(want) + " mm for role '" + role +
               "' clamped into [" + std::to_string(spec.low) + ", " +
               std::to_string(spec.high) + "]";
  }
  return res;
}

inline nlohmann::json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open " + path.string());
  }
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

/// Catalog file: a JSON array of structure names.
inline StructureCatalog load_catalog(const std::filesystem::path& path) {
  const auto doc = load_json_file(path);
  if (!doc.is_array()) {
    throw ConfigError(path.string() + ": catalog must be a JSON array of names");
  }
  std::vector<std::string> names;
  for (const auto& v : doc) {
    if (!v.is_string()) {
      throw ConfigError(path.string() + ": catalog entries must be strings");
    }
    names.push_back(v.get<std::string>());
  }
  return StructureCatalog(std::move(names));
}

/// Alias file: a JSON object mapping term -> name or array of names.
inline AliasTable load_alias_table(const std::filesystem::path& path,
                                   const StructureCatalog& catalog) {
  const auto doc = load_json_file(path);
  if (!doc.is_object()) {
    throw ConfigError(path.string() + ": alias table must be a JSON object");
  }
  std::map<std::string, std::vector<std::string>> entries;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    std::vector<std::string> targets;
    if (it.value().is_string()) {
      targets.push_back(it.value().get<std::string>());
    } else if (it.value().is_array()) {
      for (const auto& v : it.value()) {
        if (!v.is_string()) {
          throw ConfigError(path.string() + ": alias targets must be strings");
        }
        targets.push_back(v.get<std::string>());
      }
    } else {
      throw ConfigError(path.string() + ": alias '" + it.key() +
                        "' must map to a name or an array of names");
    }
    entries[it.key()] = std::move(targets);
  }
  return AliasTable(std::move(entries), catalog);
}

}  // namespace tvplan
