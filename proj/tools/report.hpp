#pragma once

// Commands of the lgtrace executable. Each one turns a parsed problem into a
// result document plus a verdict; main.cpp wraps it with the header fields.

#include "lgtrace/problem.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace lgtrace::cli {

using Json = nlohmann::ordered_json;

enum class Verdict { pass, fail, skipped };

std::string to_string(Verdict v);

/// Problem-file options after command-line overrides.
struct Settings {
  TraceBackend backend = TraceBackend::residue;
  Rational scale = 1;
  std::optional<int> truncate;
  std::optional<CohomologyBackend> cohomology;
  std::optional<std::pair<int, int>> window;
};

Settings resolve(const ProblemOptions& file, const ProblemOptions& flags);
Json to_json(const Settings& s);

struct Outcome {
  Json result;
  Verdict verdict = Verdict::pass;
  std::string reason;
};

Outcome run_bulk(const ProblemSpec& spec, const Settings& s);
Outcome run_koszul(const ProblemSpec& spec, const Settings& s);
Outcome run_boundary(const ProblemSpec& spec, const Settings& s);
Outcome run_spectral(const ProblemSpec& spec, const Settings& s);
Outcome run_category(const ProblemSpec& spec, const Settings& s);
/// Fixed battery of invariant checks; ignores the problem file and flags.
Outcome run_selftest();

/// One "key,value" row per leaf, keys as dotted paths.
std::string render_csv(const Json& doc);

std::string sha256_hex(std::string_view bytes);

}  // namespace lgtrace::cli
