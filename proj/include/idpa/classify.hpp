#pragma once

#include <map>
#include <string_view>
#include <vector>

#include "idpa/likelihood.hpp"
#include "idpa/model.hpp"

namespace idpa {

// Data-flow classes, totally ordered by severity:
// NIDPF (carries only the sender's data) < PIDPF (may carry others' data)
// < IDPF (definitely carries others' data).
enum class FlowClass { NIDPF = 0, PIDPF = 1, IDPF = 2 };

constexpr int level_of(FlowClass c) { return static_cast<int>(c); }
constexpr FlowClass max_class(FlowClass a, FlowClass b) { return a < b ? b : a; }
std::string_view to_string(FlowClass c);

FlowClass declared_class(SubjectsClass subjects);

// A (flow, data object) pair that carries interdependent data into a node,
// recorded so findings stay explainable.
struct TaintWitness {
  FlowId flow;
  DataId data;
  FlowClass cls = FlowClass::NIDPF;

  auto operator<=>(const TaintWitness&) const = default;
};

struct NodeTaint {
  int level = 0;  // max effective class over incoming flows
  std::vector<TaintWitness> witnesses;  // all incoming pairs with class > NIDPF, sorted

  auto operator<=>(const NodeTaint&) const = default;
};

struct FlowTaint {
  FlowClass declared = FlowClass::NIDPF;   // from the carried objects' subjects alone
  FlowClass effective = FlowClass::NIDPF;  // adjusted for derivation and transforms
  // Effective class of every carried object on this flow (after the
  // strips-others cap).
  std::map<DataId, FlowClass> per_data;
};

struct TaintMap {
  std::map<NodeId, NodeTaint> nodes;
  std::map<FlowId, FlowTaint> flows;
  // Effective class of each data object (declared joined with derivation).
  std::map<DataId, FlowClass> data_effective;
};

// Max over the carried data objects' declared classes. Direction-agnostic:
// a system-to-user flow classifies exactly like a user-to-system flow.
FlowClass classify_flow(const Flow& flow, const Model& model);

// Least fixpoint of the taint rules, by monotone iteration:
//   - a derived data object joins its parents' effective classes, unless it
//     is declared sender-only and a strips-others flow feeds its producing
//     node (then the declaration stands);
//   - transform=strips-others caps that flow's effective class at NIDPF;
//     transform=encrypts lowers nothing (encrypted other-party data is
//     still other-party data);
//   - a node's level is the max effective class over its incoming flows.
// Precondition: model validated (derivation acyclic, references resolved).
TaintMap propagate(const Model& model);

// IDPF is certain by definition; PIDPF takes the object's declared
// likelihood, defaulting to kDefaultPidpfLikelihood.
// Calling with NIDPF is a contract violation and throws std::logic_error.
Likelihood likelihood_of(FlowClass flow_effective_class, const DataObject& data);

inline const Likelihood kDefaultPidpfLikelihood = Likelihood::from_hundredths(50);

}  // namespace idpa
