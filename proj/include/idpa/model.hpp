#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "idpa/diagnostics.hpp"
#include "idpa/likelihood.hpp"

namespace idpa {

// Identifier namespaces are distinct; a lightweight tag keeps them from
// mixing at compile time. Model-authored ids match [a-z][a-z0-9-]*.
template <class Tag>
struct Id {
  std::string value;

  Id() = default;
  explicit Id(std::string v) : value(std::move(v)) {}

  auto operator<=>(const Id&) const = default;
};

using NodeId = Id<struct NodeIdTag>;
using DataId = Id<struct DataIdTag>;
using FlowId = Id<struct FlowIdTag>;
using ThreatId = Id<struct ThreatIdTag>;

bool is_valid_token(std::string_view text);

enum class NodeKind { ExternalEntity, Process, DataStore };

enum class SubjectsClass { SenderOnly, IncludesOthers, MayIncludeOthers };

enum class Capability { Analyzes, Correlates, Matches };

enum class Transform { None, StripsOthers, Encrypts };

enum class TriState { Yes, No, Unknown };

enum class AccessControl { Enforced, Partial, None, Unknown };

// Actor classes that can cause interdependent-privacy harm. Order matters:
// candidate sets and catalog listings follow it.
enum class MisactorKind { MU, IU, UU, UFU, SP, GA };

inline constexpr MisactorKind kAllMisactors[] = {MisactorKind::MU, MisactorKind::IU,
                                                 MisactorKind::UU, MisactorKind::UFU,
                                                 MisactorKind::SP, MisactorKind::GA};

struct Node {
  NodeId id;
  std::string label;
  NodeKind kind = NodeKind::Process;
  // Processes only.
  std::set<Capability> capabilities;
  // Stores and processes only.
  bool government_access = false;
};

struct DataObject {
  DataId id;
  std::string label;
  SubjectsClass subjects = SubjectsClass::SenderOnly;
  // Meaningful only for may-include-others.
  std::optional<Likelihood> likelihood;
  // Acyclic across the model; sorted, unique.
  std::vector<DataId> derived_from;
  // Free tags; sorted, unique.
  std::vector<std::string> categories;
};

struct Flow {
  FlowId id;
  NodeId source;
  NodeId destination;
  // Non-empty; sorted, unique.
  std::vector<DataId> carries;
  // Absent means the source initiates.
  std::optional<NodeId> initiator;
  Transform transform = Transform::None;

  const NodeId& effective_initiator() const { return initiator ? *initiator : source; }
};

struct AcaAnnotation {
  // A flow id or a data id; resolved during validation.
  std::string target;
  TriState awareness_sender = TriState::Unknown;
  TriState awareness_stakeholders = TriState::Unknown;
  TriState consent_sender = TriState::Unknown;
  TriState consent_stakeholders = TriState::Unknown;
  AccessControl access_control = AccessControl::Unknown;
};

struct Policy {
  TriState accountability = TriState::Unknown;
  TriState auditability = TriState::Unknown;
  TriState alignment = TriState::Unknown;

  bool all_unknown() const {
    return accountability == TriState::Unknown && auditability == TriState::Unknown &&
           alignment == TriState::Unknown;
  }
};

// Records the analyst's documented narrowing of misactor candidates.
struct MisactorExclusion {
  FlowId flow;
  std::vector<MisactorKind> excluded;  // sorted in misactor order, unique
  std::string reason;                  // mandatory
};

struct Model {
  std::string name;
  std::vector<Node> nodes;
  std::vector<DataObject> data_objects;
  std::vector<Flow> flows;
  std::vector<AcaAnnotation> aca_annotations;
  std::vector<MisactorExclusion> exclusions;
  // Absent policy block is equivalent to all-unknown.
  Policy policy;

  const Node* find_node(const NodeId& id) const;
  const DataObject* find_data(const DataId& id) const;
  const Flow* find_flow(const FlowId& id) const;
  // First annotation whose target matches; validation rejects duplicates.
  const AcaAnnotation* annotation_for(std::string_view target) const;
  // Union of all exclusions covering the flow.
  std::vector<MisactorKind> excluded_misactors(const FlowId& flow) const;
};

// Keyword spellings used by the model format and in report output.
std::string_view to_keyword(NodeKind kind);
std::string_view to_keyword(SubjectsClass subjects);
std::string_view to_keyword(Capability capability);
std::string_view to_keyword(Transform transform);
std::string_view to_keyword(TriState value);
std::string_view to_keyword(AccessControl value);
std::string_view to_keyword(MisactorKind kind);
std::string_view misactor_gloss(MisactorKind kind);

std::optional<SubjectsClass> subjects_from_keyword(std::string_view text);
std::optional<Capability> capability_from_keyword(std::string_view text);
std::optional<Transform> transform_from_keyword(std::string_view text);
std::optional<TriState> tristate_from_keyword(std::string_view text);
std::optional<AccessControl> access_control_from_keyword(std::string_view text);
std::optional<MisactorKind> misactor_from_keyword(std::string_view text);

// Checks every model invariant: id syntax and uniqueness, reference
// resolution, capability and likelihood placement, derivation acyclicity,
// annotation uniqueness, exclusion reasons. Warnings (self-loop flows, a
// model without flows) never block analysis. Output is sorted and pure.
std::vector<Diagnostic> validate(const Model& model);

}  // namespace idpa
