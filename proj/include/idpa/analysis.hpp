#pragma once

#include <optional>
#include <vector>

#include "idpa/diagnostics.hpp"
#include "idpa/model.hpp"
#include "idpa/report.hpp"

namespace idpa {

struct AnalysisResult {
  // Absent when validation (or misactor assignment) produced errors.
  std::optional<AnalysisReport> report;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return report.has_value(); }
};

// The full pipeline: validate, classify and propagate taint, elicit threats,
// assign misactors, evaluate ACA, map mitigations, compute posture. Pure:
// the same model yields a byte-identical report.
AnalysisResult analyze(const Model& model, const Catalog& catalog = Catalog::builtin());

}  // namespace idpa
