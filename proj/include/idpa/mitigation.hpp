#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "idpa/diagnostics.hpp"
#include "idpa/threats.hpp"

namespace idpa {

// The six posture principles. The first three are proactive, the last three
// reactive.
enum class Principle { Awareness, Authorization, Access, Accountability, Auditability, Alignment };

std::string_view to_string(Principle p);
std::optional<Principle> principle_from_string(std::string_view text);

struct Mitigation {
  std::string id;
  MisactorKind misactor = MisactorKind::MU;
  std::string text;
  std::vector<Principle> principles;  // non-empty, in principle order
};

// The built-in catalog: two entries per misactor kind, twelve total.
class Catalog {
 public:
  static const Catalog& builtin();

  // A replacement catalog in the same structured form as the report's
  // mitigation section. Misactors present in the override replace their
  // built-in entries; absent misactors keep the defaults. Returns nullopt
  // and a diagnostic on malformed input.
  static std::optional<Catalog> with_override(const std::string& json_text,
                                              std::vector<Diagnostic>& diagnostics);

  const std::vector<Mitigation>& entries() const { return entries_; }
  std::vector<const Mitigation*> for_misactor(MisactorKind kind) const;

 private:
  std::vector<Mitigation> entries_;  // sorted by (misactor, id)
};

// Union of catalog entries over the threat's misactor candidates, ordered by
// (misactor, id).
std::vector<Mitigation> suggest(const Threat& threat, const Catalog& catalog = Catalog::builtin());

// For mitigated threats: a note naming the transform already in place.
std::optional<std::string> transform_note(const Threat& threat, const Model& model);

enum class PostureStatus { Satisfied, Gap, Unknown };

std::string_view to_string(PostureStatus status);

struct PostureDimension {
  PostureStatus status = PostureStatus::Unknown;
  std::vector<std::string> evidence;
};

// The model's posture over the six principles: the proactive trio aggregates
// the threats' ACA answers (any gap is a gap), the reactive trio restates
// the declared policy, unknown preserved.
struct PostureReport {
  PostureDimension awareness;
  PostureDimension authorization;
  PostureDimension access;
  PostureDimension accountability;
  PostureDimension auditability;
  PostureDimension alignment;
};

PostureReport posture(const Model& model, const std::vector<Threat>& threats);

}  // namespace idpa
