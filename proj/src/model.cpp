#include "idpa/model.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace idpa {

bool is_valid_token(std::string_view text) {
  if (text.empty() || text[0] < 'a' || text[0] > 'z') {
    return false;
  }
  return std::all_of(text.begin(), text.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
  });
}

const Node* Model::find_node(const NodeId& id) const {
  for (const Node& n : nodes) {
    if (n.id == id) {
      return &n;
    }
  }
  return nullptr;
}

const DataObject* Model::find_data(const DataId& id) const {
  for (const DataObject& d : data_objects) {
    if (d.id == id) {
      return &d;
    }
  }
  return nullptr;
}

const Flow* Model::find_flow(const FlowId& id) const {
  for (const Flow& f : flows) {
    if (f.id == id) {
      return &f;
    }
  }
  return nullptr;
}

const AcaAnnotation* Model::annotation_for(std::string_view target) const {
  for (const AcaAnnotation& a : aca_annotations) {
    if (a.target == target) {
      return &a;
    }
  }
  return nullptr;
}

std::vector<MisactorKind> Model::excluded_misactors(const FlowId& flow) const {
  std::set<MisactorKind> out;
  for (const MisactorExclusion& e : exclusions) {
    if (e.flow == flow) {
      out.insert(e.excluded.begin(), e.excluded.end());
    }
  }
  return {out.begin(), out.end()};
}

std::string_view to_keyword(NodeKind kind) {
  switch (kind) {
    case NodeKind::ExternalEntity: return "external-entity";
    case NodeKind::Process: return "process";
    case NodeKind::DataStore: return "data-store";
  }
  return "";
}

std::string_view to_keyword(SubjectsClass subjects) {
  switch (subjects) {
    case SubjectsClass::SenderOnly: return "sender-only";
    case SubjectsClass::IncludesOthers: return "includes-others";
    case SubjectsClass::MayIncludeOthers: return "may-include-others";
  }
  return "";
}

std::string_view to_keyword(Capability capability) {
  switch (capability) {
    case Capability::Analyzes: return "analyzes";
    case Capability::Correlates: return "correlates";
    case Capability::Matches: return "matches";
  }
  return "";
}

std::string_view to_keyword(Transform transform) {
  switch (transform) {
    case Transform::None: return "none";
    case Transform::StripsOthers: return "strips-others";
    case Transform::Encrypts: return "encrypts";
  }
  return "";
}

std::string_view to_keyword(TriState value) {
  switch (value) {
    case TriState::Yes: return "yes";
    case TriState::No: return "no";
    case TriState::Unknown: return "unknown";
  }
  return "";
}

std::string_view to_keyword(AccessControl value) {
  switch (value) {
    case AccessControl::Enforced: return "enforced";
    case AccessControl::Partial: return "partial";
    case AccessControl::None: return "none";
    case AccessControl::Unknown: return "unknown";
  }
  return "";
}

std::string_view to_keyword(MisactorKind kind) {
  switch (kind) {
    case MisactorKind::MU: return "MU";
    case MisactorKind::IU: return "IU";
    case MisactorKind::UU: return "UU";
    case MisactorKind::UFU: return "UFU";
    case MisactorKind::SP: return "SP";
    case MisactorKind::GA: return "GA";
  }
  return "";
}

std::string_view misactor_gloss(MisactorKind kind) {
  switch (kind) {
    case MisactorKind::MU: return "malicious user";
    case MisactorKind::IU: return "indifferent user";
    case MisactorKind::UU: return "unprepared user";
    case MisactorKind::UFU: return "uninformed user";
    case MisactorKind::SP: return "service provider";
    case MisactorKind::GA: return "government authority";
  }
  return "";
}

std::optional<SubjectsClass> subjects_from_keyword(std::string_view text) {
  if (text == "sender-only") return SubjectsClass::SenderOnly;
  if (text == "includes-others") return SubjectsClass::IncludesOthers;
  if (text == "may-include-others") return SubjectsClass::MayIncludeOthers;
  return std::nullopt;
}

std::optional<Capability> capability_from_keyword(std::string_view text) {
  if (text == "analyzes") return Capability::Analyzes;
  if (text == "correlates") return Capability::Correlates;
  if (text == "matches") return Capability::Matches;
  return std::nullopt;
}

std::optional<Transform> transform_from_keyword(std::string_view text) {
  if (text == "none") return Transform::None;
  if (text == "strips-others") return Transform::StripsOthers;
  if (text == "encrypts") return Transform::Encrypts;
  return std::nullopt;
}

std::optional<TriState> tristate_from_keyword(std::string_view text) {
  if (text == "yes") return TriState::Yes;
  if (text == "no") return TriState::No;
  if (text == "unknown") return TriState::Unknown;
  return std::nullopt;
}

std::optional<AccessControl> access_control_from_keyword(std::string_view text) {
  if (text == "enforced") return AccessControl::Enforced;
  if (text == "partial") return AccessControl::Partial;
  if (text == "none") return AccessControl::None;
  if (text == "unknown") return AccessControl::Unknown;
  return std::nullopt;
}

std::optional<MisactorKind> misactor_from_keyword(std::string_view text) {
  for (MisactorKind kind : kAllMisactors) {
    if (to_keyword(kind) == text) {
      return kind;
    }
  }
  return std::nullopt;
}

namespace {

void check_label(const std::string& label, const std::string& location,
                 std::vector<Diagnostic>& out) {
  if (label.find('\n') != std::string::npos || label.find('\r') != std::string::npos) {
    out.push_back({Severity::Error, "label must not contain line breaks", location, std::nullopt});
  }
}

// Detects a cycle over derived_from reachable from `start`.
bool has_derivation_cycle(const Model& model, const DataId& start) {
  enum class Mark { Unseen, Active, Done };
  std::map<DataId, Mark> marks;
  // Iterative DFS with an explicit stack; the second visit of an Active node
  // is a back edge.
  struct Frame {
    DataId id;
    size_t next = 0;
  };
  std::vector<Frame> stack{{start}};
  marks[start] = Mark::Active;
  while (!stack.empty()) {
    Frame& frame = stack.back();
    const DataObject* d = model.find_data(frame.id);
    if (d == nullptr || frame.next >= d->derived_from.size()) {
      marks[frame.id] = Mark::Done;
      stack.pop_back();
      continue;
    }
    DataId parent = d->derived_from[frame.next++];
    Mark& mark = marks.emplace(parent, Mark::Unseen).first->second;
    if (mark == Mark::Active) {
      return true;
    }
    if (mark == Mark::Unseen) {
      mark = Mark::Active;
      stack.push_back({parent});
    }
  }
  return false;
}

}  // namespace

std::vector<Diagnostic> validate(const Model& model) {
  std::vector<Diagnostic> out;
  auto error = [&out](std::string message, std::string location) {
    out.push_back({Severity::Error, std::move(message), std::move(location), std::nullopt});
  };
  auto warning = [&out](std::string message, std::string location) {
    out.push_back({Severity::Warning, std::move(message), std::move(location), std::nullopt});
  };

  std::set<std::string> node_ids;
  for (const Node& n : model.nodes) {
    if (!is_valid_token(n.id.value)) {
      error("invalid node id '" + n.id.value + "'", n.id.value);
    }
    if (!node_ids.insert(n.id.value).second) {
      error("duplicate node id " + n.id.value, n.id.value);
    }
    check_label(n.label, n.id.value, out);
    if (n.kind != NodeKind::Process && !n.capabilities.empty()) {
      error("capabilities are only allowed on processes", n.id.value);
    }
    if (n.kind == NodeKind::ExternalEntity && n.government_access) {
      error("government-access is only allowed on processes and stores", n.id.value);
    }
  }

  std::set<std::string> data_ids;
  for (const DataObject& d : model.data_objects) {
    if (!is_valid_token(d.id.value)) {
      error("invalid data id '" + d.id.value + "'", d.id.value);
    }
    if (!data_ids.insert(d.id.value).second) {
      error("duplicate data id " + d.id.value, d.id.value);
    }
    check_label(d.label, d.id.value, out);
    if (d.likelihood && d.subjects != SubjectsClass::MayIncludeOthers) {
      error("likelihood is only meaningful for subjects=may-include-others", d.id.value);
    }
    if (d.likelihood == Likelihood::certain() && d.subjects == SubjectsClass::MayIncludeOthers) {
      error("likelihood=1 asserts certainty; declare subjects=includes-others instead",
            d.id.value);
    }
    for (const DataId& parent : d.derived_from) {
      if (model.find_data(parent) == nullptr) {
        error("unresolved data reference " + parent.value, d.id.value);
      }
    }
    for (const std::string& category : d.categories) {
      if (!is_valid_token(category)) {
        error("invalid category tag '" + category + "'", d.id.value);
      }
    }
  }
  for (const DataObject& d : model.data_objects) {
    if (has_derivation_cycle(model, d.id)) {
      error("derived-from cycle involving " + d.id.value, d.id.value);
    }
  }

  std::set<std::string> flow_ids;
  for (const Flow& f : model.flows) {
    if (!is_valid_token(f.id.value)) {
      error("invalid flow id '" + f.id.value + "'", f.id.value);
    }
    if (!flow_ids.insert(f.id.value).second) {
      error("duplicate flow id " + f.id.value, f.id.value);
    }
    if (model.find_node(f.source) == nullptr) {
      error("unresolved node reference " + f.source.value, f.id.value);
    }
    if (model.find_node(f.destination) == nullptr) {
      error("unresolved node reference " + f.destination.value, f.id.value);
    }
    if (f.initiator && model.find_node(*f.initiator) == nullptr) {
      error("unresolved node reference " + f.initiator->value, f.id.value);
    }
    if (f.carries.empty()) {
      error("flow must carry at least one data object", f.id.value);
    }
    for (const DataId& d : f.carries) {
      if (model.find_data(d) == nullptr) {
        error("unresolved data reference " + d.value, f.id.value);
      }
    }
    if (f.source == f.destination && model.find_node(f.source) != nullptr) {
      warning("flow is a self-loop", f.id.value);
    }
  }

  std::set<std::string> annotation_targets;
  for (const AcaAnnotation& a : model.aca_annotations) {
    bool is_flow = flow_ids.count(a.target) > 0;
    bool is_data = data_ids.count(a.target) > 0;
    if (is_flow && is_data) {
      error("ambiguous annotation target " + a.target + " (both a flow and a data object)",
            a.target);
    } else if (!is_flow && !is_data) {
      error("unresolved annotation target " + a.target, a.target);
    }
    if (!annotation_targets.insert(a.target).second) {
      error("duplicate annotation for target " + a.target, a.target);
    }
  }

  for (const MisactorExclusion& e : model.exclusions) {
    if (model.find_flow(e.flow) == nullptr) {
      error("unresolved flow reference " + e.flow.value, e.flow.value);
    }
    if (e.excluded.empty()) {
      error("exclusion must name at least one misactor", e.flow.value);
    }
    if (e.reason.empty()) {
      error("exclusion reason must not be empty", e.flow.value);
    }
    check_label(e.reason, e.flow.value, out);
  }

  if (model.flows.empty()) {
    warning("model has no flows", "model");
  }

  sort_diagnostics(out);
  return out;
}

}  // namespace idpa
