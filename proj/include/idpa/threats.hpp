#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "idpa/classify.hpp"
#include "idpa/model.hpp"

namespace idpa {

// The three interdependent-privacy threat categories: improper sharing,
// improper storage, improper processing.
enum class ThreatCategory { IS, IST, IP };

enum class ThreatStatus { Active, Potential, Mitigated };

// Per-dimension answer to the awareness / consent / access-control
// questions. Silence never passes: unknown counts as a gap, but is kept
// distinguishable from an explicit "no".
enum class AcaStatus { Satisfied, Gap, UnknownTreatedAsGap };

struct AcaDimension {
  AcaStatus status = AcaStatus::UnknownTreatedAsGap;
  std::string evidence;

  bool is_gap() const { return status != AcaStatus::Satisfied; }
  auto operator<=>(const AcaDimension&) const = default;
};

struct AcaGapReport {
  AcaDimension awareness;
  AcaDimension consent;
  AcaDimension access;

  auto operator<=>(const AcaGapReport&) const = default;
};

struct Threat {
  ThreatId id;  // <CAT>-<location-id>-<data-id>, a pure function of its parts
  ThreatCategory category = ThreatCategory::IS;
  std::string location;  // flow id (IS) or node id (IST/IP)
  bool location_is_flow = true;
  DataId data;
  FlowClass trigger = FlowClass::IDPF;  // effective class that fired the rule
  Likelihood likelihood;
  ThreatStatus status = ThreatStatus::Active;
  std::vector<MisactorKind> misactors;  // candidate order follows the enum
  AcaGapReport aca;
  std::vector<TaintWitness> witnesses;  // pairs delivering this data here
};

std::string_view to_string(ThreatCategory category);
std::string_view to_string(ThreatStatus status);
std::string_view to_string(AcaStatus status);
std::optional<ThreatCategory> threat_category_from_string(std::string_view text);

ThreatId make_threat_id(ThreatCategory category, std::string_view location, const DataId& data);

// Applies the elicitation rules and returns threats sorted by id:
//   R1 (IS):  every flow with effective class >= PIDPF, one threat per
//             contributing data object;
//   R2 (IST): every tainted data store, one threat per witness data object;
//   R3 (IP):  every tainted process that analyzes, correlates, or matches,
//             one threat per witness data object.
// IDPF triggers are active, PIDPF triggers potential; a threat whose
// witness data arrives exclusively over encrypting flows is downgraded to
// mitigated but still reported. Misactors and ACA are filled by the caller.
std::vector<Threat> elicit(const Model& model, const TaintMap& taint);

// Rule-generated candidates narrowed by the model's documented exclusions.
// User-initiated sharing implicates the user misactor classes; system-
// initiated sharing, storage, and processing implicate the service provider,
// plus the government authority where government access is flagged.
// An empty result means an exclusion removed every candidate — the caller
// must surface that as an error.
std::vector<MisactorKind> assign_misactors(const Threat& threat, const Model& model);

// Answers the three analysis questions for the threat's flow/data from the
// model's annotations; a flow annotation overrides a data annotation and a
// missing annotation is conservatively treated as unknown.
AcaGapReport evaluate_aca(const Threat& threat, const Model& model);

}  // namespace idpa
