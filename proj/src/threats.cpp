#include "idpa/threats.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace idpa {

std::string_view to_string(ThreatCategory category) {
  switch (category) {
    case ThreatCategory::IS: return "IS";
    case ThreatCategory::IST: return "IST";
    case ThreatCategory::IP: return "IP";
  }
  return "";
}

std::string_view to_string(ThreatStatus status) {
  switch (status) {
    case ThreatStatus::Active: return "active";
    case ThreatStatus::Potential: return "potential";
    case ThreatStatus::Mitigated: return "mitigated";
  }
  return "";
}

std::string_view to_string(AcaStatus status) {
  switch (status) {
    case AcaStatus::Satisfied: return "satisfied";
    case AcaStatus::Gap: return "gap";
    case AcaStatus::UnknownTreatedAsGap: return "unknown-treated-as-gap";
  }
  return "";
}

std::optional<ThreatCategory> threat_category_from_string(std::string_view text) {
  if (text == "IS") return ThreatCategory::IS;
  if (text == "IST") return ThreatCategory::IST;
  if (text == "IP") return ThreatCategory::IP;
  return std::nullopt;
}

ThreatId make_threat_id(ThreatCategory category, std::string_view location, const DataId& data) {
  std::string id(to_string(category));
  id += '-';
  id += location;
  id += '-';
  id += data.value;
  return ThreatId{std::move(id)};
}

namespace {

Threat make_flow_threat(const Model& model, const Flow& flow, const DataId& data, FlowClass cls) {
  Threat t;
  t.category = ThreatCategory::IS;
  t.location = flow.id.value;
  t.location_is_flow = true;
  t.data = data;
  t.trigger = cls;
  t.id = make_threat_id(t.category, t.location, data);
  t.likelihood = likelihood_of(cls, *model.find_data(data));
  t.status = cls == FlowClass::IDPF ? ThreatStatus::Active : ThreatStatus::Potential;
  if (flow.transform == Transform::Encrypts) {
    t.status = ThreatStatus::Mitigated;
  }
  t.witnesses = {{flow.id, data, cls}};
  return t;
}

Threat make_node_threat(const Model& model, const TaintMap& taint, ThreatCategory category,
                        const Node& node, const DataId& data) {
  Threat t;
  t.category = category;
  t.location = node.id.value;
  t.location_is_flow = false;
  t.data = data;
  t.id = make_threat_id(category, t.location, data);

  auto node_taint = taint.nodes.find(node.id);
  FlowClass trigger = FlowClass::NIDPF;
  bool all_encrypted = true;
  for (const TaintWitness& w : node_taint->second.witnesses) {
    if (w.data != data) {
      continue;
    }
    t.witnesses.push_back(w);
    trigger = max_class(trigger, w.cls);
    const Flow* f = model.find_flow(w.flow);
    if (f == nullptr || f->transform != Transform::Encrypts) {
      all_encrypted = false;
    }
  }
  t.trigger = trigger;
  t.likelihood = likelihood_of(trigger, *model.find_data(data));
  t.status = trigger == FlowClass::IDPF ? ThreatStatus::Active : ThreatStatus::Potential;
  if (all_encrypted) {
    t.status = ThreatStatus::Mitigated;
  }
  return t;
}

}  // namespace

std::vector<Threat> elicit(const Model& model, const TaintMap& taint) {
  std::vector<Threat> threats;

  // R1: sharing threats on every flow that moves interdependent data.
  for (const Flow& f : model.flows) {
    auto ft = taint.flows.find(f.id);
    if (ft == taint.flows.end() || ft->second.effective == FlowClass::NIDPF) {
      continue;
    }
    for (const auto& [data_id, cls] : ft->second.per_data) {
      if (cls != FlowClass::NIDPF) {
        threats.push_back(make_flow_threat(model, f, data_id, cls));
      }
    }
  }

  // R2 and R3: storage and processing threats on tainted nodes.
  for (const Node& n : model.nodes) {
    auto nt = taint.nodes.find(n.id);
    if (nt == taint.nodes.end() || nt->second.level == 0) {
      continue;
    }
    bool storage = n.kind == NodeKind::DataStore;
    bool processing = n.kind == NodeKind::Process && !n.capabilities.empty();
    if (!storage && !processing) {
      continue;
    }
    std::set<DataId> witness_data;
    for (const TaintWitness& w : nt->second.witnesses) {
      witness_data.insert(w.data);
    }
    for (const DataId& data : witness_data) {
      threats.push_back(make_node_threat(model, taint,
                                         storage ? ThreatCategory::IST : ThreatCategory::IP, n,
                                         data));
    }
  }

  std::sort(threats.begin(), threats.end(),
            [](const Threat& a, const Threat& b) { return a.id < b.id; });
  return threats;
}

std::vector<MisactorKind> assign_misactors(const Threat& threat, const Model& model) {
  std::set<MisactorKind> candidates;
  if (threat.category == ThreatCategory::IS) {
    const Flow* flow = model.find_flow(FlowId{threat.location});
    const Node* initiator = flow ? model.find_node(flow->effective_initiator()) : nullptr;
    if (initiator != nullptr && initiator->kind == NodeKind::ExternalEntity) {
      candidates = {MisactorKind::MU, MisactorKind::IU, MisactorKind::UU, MisactorKind::UFU};
    } else {
      // System-originated disclosure.
      candidates = {MisactorKind::SP};
    }
    if (flow != nullptr) {
      for (MisactorKind excluded : model.excluded_misactors(flow->id)) {
        candidates.erase(excluded);
      }
    }
  } else {
    candidates = {MisactorKind::SP};
    const Node* node = model.find_node(NodeId{threat.location});
    if (node != nullptr && node->government_access) {
      candidates.insert(MisactorKind::GA);
    }
  }

  std::vector<MisactorKind> out;
  for (MisactorKind kind : kAllMisactors) {
    if (candidates.count(kind) > 0) {
      out.push_back(kind);
    }
  }
  return out;
}

namespace {

AcaDimension dimension_from_tristate(TriState value, std::string_view key,
                                     const std::string& target) {
  AcaDimension dim;
  dim.evidence = std::string(key) + "=" + std::string(to_keyword(value)) + " (annotate " + target + ")";
  switch (value) {
    case TriState::Yes: dim.status = AcaStatus::Satisfied; break;
    case TriState::No: dim.status = AcaStatus::Gap; break;
    case TriState::Unknown: dim.status = AcaStatus::UnknownTreatedAsGap; break;
  }
  return dim;
}

AcaDimension dimension_from_access(AccessControl value, const std::string& target) {
  AcaDimension dim;
  dim.evidence = "access-control=" + std::string(to_keyword(value)) + " (annotate " + target + ")";
  switch (value) {
    case AccessControl::Enforced: dim.status = AcaStatus::Satisfied; break;
    case AccessControl::Partial:
    case AccessControl::None: dim.status = AcaStatus::Gap; break;
    case AccessControl::Unknown: dim.status = AcaStatus::UnknownTreatedAsGap; break;
  }
  return dim;
}

AcaDimension dimension_absent(std::string_view key, const std::string& searched) {
  AcaDimension dim;
  dim.status = AcaStatus::UnknownTreatedAsGap;
  dim.evidence = "no annotation for " + searched + "; " + std::string(key) + " unknown";
  return dim;
}

}  // namespace

AcaGapReport evaluate_aca(const Threat& threat, const Model& model) {
  const AcaAnnotation* annotation = nullptr;
  std::string searched;
  if (threat.location_is_flow) {
    annotation = model.annotation_for(threat.location);
    if (annotation == nullptr) {
      annotation = model.annotation_for(threat.data.value);
      searched = threat.location + " or " + threat.data.value;
    }
  } else {
    annotation = model.annotation_for(threat.data.value);
    searched = threat.data.value;
  }

  AcaGapReport report;
  if (annotation == nullptr) {
    report.awareness = dimension_absent("awareness.stakeholders", searched);
    report.consent = dimension_absent("consent.stakeholders", searched);
    report.access = dimension_absent("access-control", searched);
    return report;
  }
  // Sender-side answers are never sufficient; the stakeholder-side values
  // decide each dimension.
  report.awareness = dimension_from_tristate(annotation->awareness_stakeholders,
                                             "awareness.stakeholders", annotation->target);
  report.consent = dimension_from_tristate(annotation->consent_stakeholders,
                                           "consent.stakeholders", annotation->target);
  report.access = dimension_from_access(annotation->access_control, annotation->target);
  return report;
}

}  // namespace idpa
