#include "idpa/analysis.hpp"

#include "idpa/classify.hpp"
#include "idpa/threats.hpp"

namespace idpa {

AnalysisResult analyze(const Model& model, const Catalog& catalog) {
  AnalysisResult result;
  result.diagnostics = validate(model);
  if (has_errors(result.diagnostics)) {
    return result;
  }

  TaintMap taint = propagate(model);
  std::vector<Threat> threats = elicit(model, taint);

  std::vector<ReportedThreat> reported;
  bool misactor_error = false;
  for (Threat& threat : threats) {
    threat.misactors = assign_misactors(threat, model);
    if (threat.misactors.empty()) {
      result.diagnostics.push_back({Severity::Error,
                                    "threat " + threat.id.value + " left with no misactor",
                                    threat.location, std::nullopt});
      misactor_error = true;
      continue;
    }
    threat.aca = evaluate_aca(threat, model);

    ReportedThreat rt;
    rt.note = transform_note(threat, model);
    for (const Mitigation& m : suggest(threat, catalog)) {
      rt.mitigation_ids.push_back(m.id);
    }
    rt.threat = std::move(threat);
    reported.push_back(std::move(rt));
  }
  if (misactor_error) {
    sort_diagnostics(result.diagnostics);
    return result;
  }

  std::vector<Threat> plain;
  plain.reserve(reported.size());
  for (const ReportedThreat& rt : reported) {
    plain.push_back(rt.threat);
  }
  PostureReport posture_report = posture(model, plain);

  result.report =
      build_report(model, taint, std::move(reported), std::move(posture_report), catalog);
  return result;
}

}  // namespace idpa
