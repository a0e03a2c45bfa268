#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "idpa/classify.hpp"
#include "idpa/mitigation.hpp"
#include "idpa/model.hpp"
#include "idpa/threats.hpp"

namespace idpa {

struct ReportedThreat {
  Threat threat;
  std::vector<std::string> mitigation_ids;  // in suggest() order
  std::optional<std::string> note;          // set for mitigated threats
};

// The complete analysis output. Self-contained and immutable; every emitter
// is a pure function of this value, so repeated emission is byte-identical.
struct AnalysisReport {
  std::string model_name;
  std::string model_hash;  // "fnv1a64:" + 16 hex digits over the canonical text
  std::string engine_version;

  struct FlowRow {
    FlowId id;
    NodeId source;
    NodeId destination;
    Transform transform = Transform::None;
    FlowClass declared = FlowClass::NIDPF;
    FlowClass effective = FlowClass::NIDPF;
    std::vector<std::pair<DataId, FlowClass>> per_data;  // sorted by data id
  };
  std::vector<FlowRow> flows;  // sorted by flow id

  TaintMap taint;
  std::vector<ReportedThreat> threats;  // sorted by threat id
  Catalog catalog;
  PostureReport posture;

  // Display data so emitters need no Model.
  std::map<std::string, std::string> node_labels;

  const ReportedThreat* find_threat(const ThreatId& id) const;
  std::vector<ThreatId> threat_ids() const;
};

// FNV-1a 64 over the canonical serialized model.
std::string model_content_hash(const Model& model);

AnalysisReport build_report(const Model& model, const TaintMap& taint,
                            std::vector<ReportedThreat> threats, PostureReport posture,
                            Catalog catalog);

enum class MapFormat { Markdown, Csv };

// The threat map table: one row per (flow, threat) pair plus one row per
// threat-free flow. Node threats pair with the flows that deliver their
// witness data. Columns: Source, Flow, Destination, IDPF, PIDPF, NIDPF,
// Misactor, Privacy Threat. CSV uses RFC-4180-style quoting with LF endings;
// both formats contain the same rows in the same order.
std::string emit_threat_map(const AnalysisReport& report, MapFormat format);

// A DOT digraph explaining one threat: root -> classification, misactor
// candidates (with their catalog countermeasures as leaves), and ACA gaps.
// Node ids are "<threat-id>/<layer>/<ordinal>". Returns nullopt for an
// unknown id and fills `error` with the known ids.
std::optional<std::string> emit_threat_tree(const AnalysisReport& report, const ThreatId& threat,
                                            std::string* error = nullptr);

// Canonical machine-readable report, schema "idpa-report/1": sorted keys,
// likelihoods as shortest decimals with at most two fraction digits.
std::string emit_json(const AnalysisReport& report);

// Flows have no label in the model; the map derives a display name from the
// id ("f-upload-contacts" -> "upload contacts").
std::string flow_display_name(const FlowId& id);

}  // namespace idpa
