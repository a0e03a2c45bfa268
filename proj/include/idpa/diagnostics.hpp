#pragma once

#include <optional>
#include <string>
#include <vector>

namespace idpa {

enum class Severity { Error, Warning };

// Position inside a source file, 1-based. The grammar is line-oriented, so a
// span never crosses the line it starts on.
struct SourceSpan {
  int line = 1;
  int column = 1;
  int length = 1;

  auto operator<=>(const SourceSpan&) const = default;
};

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
  // Id of the offending element ("f-upload-contacts"), or "model" for
  // model-level findings.
  std::string location;
  // Set for diagnostics produced by the parser.
  std::optional<SourceSpan> span;

  auto operator<=>(const Diagnostic&) const = default;
};

bool has_errors(const std::vector<Diagnostic>& diagnostics);

// Stable order for validator output: errors before warnings, then by
// location, message, source position.
void sort_diagnostics(std::vector<Diagnostic>& diagnostics);

// One-line rendering: "file.idpa:3:7: error: ..." when a span is present,
// otherwise "error: ... (location)". `file` may be empty.
std::string format_diagnostic(const Diagnostic& d, const std::string& file = "");

}  // namespace idpa
