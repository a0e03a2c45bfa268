#include "idpa/diagnostics.hpp"

#include <algorithm>
#include <tuple>

namespace idpa {

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

void sort_diagnostics(std::vector<Diagnostic>& diagnostics) {
  std::sort(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& a, const Diagnostic& b) {
    auto key = [](const Diagnostic& d) {
      SourceSpan s = d.span.value_or(SourceSpan{0, 0, 0});
      return std::make_tuple(d.severity == Severity::Error ? 0 : 1, d.location, d.message, s.line,
                             s.column);
    };
    return key(a) < key(b);
  });
}

std::string format_diagnostic(const Diagnostic& d, const std::string& file) {
  std::string out;
  if (d.span) {
    if (!file.empty()) {
      out += file;
      out += ':';
    }
    out += std::to_string(d.span->line);
    out += ':';
    out += std::to_string(d.span->column);
    out += ": ";
  }
  out += d.severity == Severity::Error ? "error: " : "warning: ";
  out += d.message;
  if (!d.span && !d.location.empty()) {
    out += " (";
    out += d.location;
    out += ')';
  }
  return out;
}

}  // namespace idpa
