#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tvplan/prompt.hpp"
#include "tvplan/validation.hpp"

namespace tvplan {

struct Message {
  std::string role;  // "system" | "user" | "assistant"
  std::string content;
};

/// Chat-completion abstraction: given the transcript so far, return one
/// completion. Implementations either are safe for concurrent use or say so.
class PlannerBackend {
 public:
  virtual ~PlannerBackend() = default;
  virtual std::string complete(const std::vector<Message>& transcript) = 0;
};

/// Replays canned completions in order. Deterministic; one instance drives
/// exactly one planning loop at a time (not safe for concurrent use).
class ScriptedBackend : public PlannerBackend {
 public:
  explicit ScriptedBackend(std::vector<std::string> completions)
      : completions_(std::move(completions)) {}

  static ScriptedBackend from_directory(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
      throw ConfigError("scripted backend directory does not exist: " + dir.string());
    }
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      throw ConfigError("scripted backend directory is empty: " + dir.string());
    }
    std::vector<std::string> completions;
    for (const auto& f : files) {
      std::ifstream in(f, std::ios::binary);
      completions.emplace_back(std::istreambuf_iterator<char>(in),
                               std::istreambuf_iterator<char>());
    }
    return ScriptedBackend(std::move(completions));
  }

  std::string complete(const std::vector<Message>&) override {
    if (next_ >= completions_.size()) {
      throw BackendError("scripted backend exhausted after " +
                         std::to_string(completions_.size()) + " completions");
    }
    ++calls_;
    return completions_[next_++];
  }

  std::size_t calls() const { return calls_; }

 private:
  std::vector<std::string> completions_;
  std::size_t next_ = 0;
  std::size_t calls_ = 0;
};

struct PlanningResult {
  Plan plan;
  int attempts = 0;
  std::vector<Message> transcript;
  std::vector<ValidationReport> reports;  // one per attempt; last one empty
};

struct PlanningError : Error {
  PlanningError(const std::string& msg, std::vector<Message> transcript_,
                std::vector<ValidationReport> reports_, int attempts_)
      : Error(msg),
        transcript(std::move(transcript_)),
        reports(std::move(reports_)),
        attempts(attempts_) {}
  std::vector<Message> transcript;
  std::vector<ValidationReport> reports;
  int attempts = 0;
};

/// Feedback turn for the self-refinement loop: every violation, in report
/// order, plus the instruction to resend a full corrected plan.
inline std::string format_refinement_message(const ValidationReport& report) {
  if (report.valid()) {
    throw Error("format_refinement_message requires a non-empty report");
  }
  std::string msg = "The plan was rejected by schema validation. Violations:\n";
  for (const Violation& v : report.violations) {
    msg += "- " + v.format() + "\n";
  }
  msg +=
      "\nReply with a corrected, complete plan document (JSON) that fixes every "
      "violation. Do not omit unchanged calls.\n";
  return msg;
}

/// The first well-formed plan document in a completion: the whole text, a
/// fenced code block, or the outermost brace span - in that order, preferring
/// candidates that carry a "calls" field.
inline std::optional<std::string> extract_plan_document(const std::string& completion) {
  std::vector<std::string> candidates;
  candidates.push_back(completion);

  std::size_t at = 0;
  while (true) {
    const auto open = completion.find("```", at);
    if (open == std::string::npos) break;
    auto body_start = completion.find('\n', open);
    if (body_start == std::string::npos) break;
    ++body_start;
    const auto close = completion.find("```", body_start);
    if (close == std::string::npos) break;
    candidates.push_back(completion.substr(body_start, close - body_start));
    at = close + 3;
  }

  const auto first = completion.find('{');
  const auto last = completion.rfind('}');
  if (first != std::string::npos && last != std::string::npos && first < last) {
    candidates.push_back(completion.substr(first, last - first + 1));
  }

  auto parses = [](const std::string& text, bool* has_calls) {
    const auto doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) return false;
    *has_calls = doc.contains("calls");
    return true;
  };

  std::optional<std::string> fallback;
  for (const auto& c : candidates) {
    bool has_calls = false;
    if (!parses(c, &has_calls)) continue;
    if (has_calls) return c;
    if (!fallback) fallback = c;
  }
  return fallback;
}

/// Planning loop: send guideline and context, parse and validate the
/// completion, feed violations back, stop on the first valid plan. attempts
/// counts backend calls and never exceeds max_refine.
inline PlanningResult generate_plan(PlannerBackend& backend, const GuidelineDoc& guideline,
                                    const PatientContext& context,
                                    const StructureCatalog& catalog,
                                    const AliasTable& aliases, int max_refine = 3) {
  if (max_refine < 1) {
    throw ConfigError("max_refine must be >= 1");
  }
  std::vector<Message> transcript;
  transcript.push_back({"system", build_system_prompt(catalog, aliases, context.initial_rois)});
  transcript.push_back({"user", format_user_request(guideline, context)});

  std::vector<ValidationReport> reports;
  for (int attempt = 1; attempt <= max_refine; ++attempt) {
    std::string completion;
    try {
      completion = backend.complete(transcript);
    } catch (const BackendError& e) {
      throw PlanningError(std::string("planning backend failed: ") + e.what(),
                          std::move(transcript), std::move(reports), attempt);
    }
    if (completion.empty()) {
      throw PlanningError("planning backend returned an empty completion",
                          std::move(transcript), std::move(reports), attempt);
    }
    transcript.push_back({"assistant", completion});

    ValidationReport report;
    std::optional<Plan> plan;
    if (const auto doc = extract_plan_document(completion)) {
      ParseOutcome outcome = try_parse_plan(*doc);
      if (outcome.plan) {
        plan = std::move(outcome.plan);
        report = validate_plan(*plan, catalog, context.initial_rois);
      } else {
        report = std::move(outcome.report);
      }
    } else {
      report.violations.push_back(Violation{
          ViolationCode::Schema, std::nullopt,
          "no plan document found in the completion (raw JSON or fenced block)"});
    }
    reports.push_back(report);

    if (report.valid() && plan) {
      return PlanningResult{std::move(*plan), attempt, std::move(transcript),
                            std::move(reports)};
    }
    if (attempt < max_refine) {
      transcript.push_back({"user", format_refinement_message(report)});
    }
  }
  throw PlanningError(
      "planning did not converge after " + std::to_string(max_refine) + " attempts",
      std::move(transcript), std::move(reports), max_refine);
}

}  // namespace tvplan
