#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "idpa/diagnostics.hpp"
#include "idpa/model.hpp"

namespace idpa {

struct ParseResult {
  // Present iff no error-severity diagnostic was produced.
  std::optional<Model> model;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return model.has_value(); }
};

// Parses the line-oriented model format. Never throws on any 8-bit input;
// malformed text yields diagnostics with source spans. Error recovery is at
// statement (line) granularity, capped at 50 diagnostics.
ParseResult parse(std::string_view text);

inline constexpr int kMaxParseDiagnostics = 50;

// Canonical text form: statements sorted by (kind, id), attributes in fixed
// order, defaults omitted, LF endings. Deterministic byte output; the
// canonical form is a fixpoint of parse ∘ serialize.
// Precondition: the model validates with zero errors.
std::string serialize(const Model& model);

}  // namespace idpa
