#include "idpa/classify.hpp"

#include <algorithm>
#include <stdexcept>

namespace idpa {

std::string_view to_string(FlowClass c) {
  switch (c) {
    case FlowClass::NIDPF: return "NIDPF";
    case FlowClass::PIDPF: return "PIDPF";
    case FlowClass::IDPF: return "IDPF";
  }
  return "";
}

FlowClass declared_class(SubjectsClass subjects) {
  switch (subjects) {
    case SubjectsClass::SenderOnly: return FlowClass::NIDPF;
    case SubjectsClass::MayIncludeOthers: return FlowClass::PIDPF;
    case SubjectsClass::IncludesOthers: return FlowClass::IDPF;
  }
  return FlowClass::NIDPF;
}

FlowClass classify_flow(const Flow& flow, const Model& model) {
  FlowClass result = FlowClass::NIDPF;
  for (const DataId& id : flow.carries) {
    if (const DataObject* d = model.find_data(id)) {
      result = max_class(result, declared_class(d->subjects));
    }
  }
  return result;
}

namespace {

// True when the object's sender-only declaration is backed by an actual
// strips-others transform on some flow into a node the object flows out of.
bool declaration_backed_by_strip(const Model& model, const DataObject& data) {
  for (const Flow& producer : model.flows) {
    if (std::find(producer.carries.begin(), producer.carries.end(), data.id) ==
        producer.carries.end()) {
      continue;
    }
    for (const Flow& incoming : model.flows) {
      if (incoming.destination == producer.source &&
          incoming.transform == Transform::StripsOthers) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace

TaintMap propagate(const Model& model) {
  TaintMap taint;

  // Data objects whose derivation inheritance is cut: declared sender-only
  // with a stripped input at the producer.
  std::map<DataId, bool> cut;
  for (const DataObject& d : model.data_objects) {
    bool is_cut = !d.derived_from.empty() && d.subjects == SubjectsClass::SenderOnly &&
                  declaration_backed_by_strip(model, d);
    cut[d.id] = is_cut;
    taint.data_effective[d.id] = declared_class(d.subjects);
  }

  // Monotone iteration to the least fixpoint; levels only increase and are
  // bounded, so this terminates.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const DataObject& d : model.data_objects) {
      if (cut[d.id]) {
        continue;
      }
      FlowClass current = taint.data_effective[d.id];
      FlowClass joined = current;
      for (const DataId& parent : d.derived_from) {
        auto it = taint.data_effective.find(parent);
        if (it != taint.data_effective.end()) {
          joined = max_class(joined, it->second);
        }
      }
      if (joined != current) {
        taint.data_effective[d.id] = joined;
        changed = true;
      }
    }
  }

  for (const Flow& f : model.flows) {
    FlowTaint& ft = taint.flows[f.id];
    ft.declared = classify_flow(f, model);
    ft.effective = FlowClass::NIDPF;
    for (const DataId& id : f.carries) {
      FlowClass c = f.transform == Transform::StripsOthers ? FlowClass::NIDPF
                                                           : taint.data_effective[id];
      ft.per_data[id] = c;
      ft.effective = max_class(ft.effective, c);
    }
  }

  for (const Node& n : model.nodes) {
    taint.nodes[n.id];  // level 0, no witnesses
  }
  for (const Flow& f : model.flows) {
    NodeTaint& nt = taint.nodes[f.destination];
    const FlowTaint& ft = taint.flows[f.id];
    nt.level = std::max(nt.level, level_of(ft.effective));
    for (const auto& [data_id, cls] : ft.per_data) {
      if (cls != FlowClass::NIDPF) {
        nt.witnesses.push_back({f.id, data_id, cls});
      }
    }
  }
  for (auto& [id, nt] : taint.nodes) {
    std::sort(nt.witnesses.begin(), nt.witnesses.end());
  }

  return taint;
}

Likelihood likelihood_of(FlowClass flow_effective_class, const DataObject& data) {
  switch (flow_effective_class) {
    case FlowClass::IDPF:
      return Likelihood::certain();
    case FlowClass::PIDPF:
      return data.likelihood.value_or(kDefaultPidpfLikelihood);
    case FlowClass::NIDPF:
      break;
  }
  throw std::logic_error("likelihood_of called with NIDPF");
}

}  // namespace idpa
