#include "idpa/report.hpp"

#include <algorithm>
#include <array>

#include "idpa/json_writer.hpp"
#include "idpa/parser.hpp"
#include "idpa/version.hpp"

namespace idpa {

const ReportedThreat* AnalysisReport::find_threat(const ThreatId& id) const {
  for (const ReportedThreat& rt : threats) {
    if (rt.threat.id == id) {
      return &rt;
    }
  }
  return nullptr;
}

std::vector<ThreatId> AnalysisReport::threat_ids() const {
  std::vector<ThreatId> ids;
  for (const ReportedThreat& rt : threats) {
    ids.push_back(rt.threat.id);
  }
  return ids;
}

std::string model_content_hash(const Model& model) {
  std::string text = serialize(model);
  unsigned long long hash = 1469598103934665603ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out = "fnv1a64:";
  for (int shift = 60; shift >= 0; shift -= 4) {
    out += hex[(hash >> shift) & 0xF];
  }
  return out;
}

AnalysisReport build_report(const Model& model, const TaintMap& taint,
                            std::vector<ReportedThreat> threats, PostureReport posture,
                            Catalog catalog) {
  AnalysisReport report;
  report.model_name = model.name;
  report.model_hash = model_content_hash(model);
  report.engine_version = kEngineVersion;
  report.taint = taint;
  report.threats = std::move(threats);
  report.posture = std::move(posture);
  report.catalog = std::move(catalog);

  for (const Flow& f : model.flows) {
    AnalysisReport::FlowRow row;
    row.id = f.id;
    row.source = f.source;
    row.destination = f.destination;
    row.transform = f.transform;
    auto ft = taint.flows.find(f.id);
    if (ft != taint.flows.end()) {
      row.declared = ft->second.declared;
      row.effective = ft->second.effective;
      row.per_data.assign(ft->second.per_data.begin(), ft->second.per_data.end());
    }
    report.flows.push_back(std::move(row));
  }
  std::sort(report.flows.begin(), report.flows.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });

  for (const Node& n : model.nodes) {
    report.node_labels[n.id.value] = n.label.empty() ? n.id.value : n.label;
  }
  return report;
}

std::string flow_display_name(const FlowId& id) {
  std::string name = id.value;
  if (name.rfind("f-", 0) == 0) {
    name = name.substr(2);
  }
  std::replace(name.begin(), name.end(), '-', ' ');
  return name;
}

namespace {

std::string node_display(const AnalysisReport& report, const NodeId& id) {
  auto it = report.node_labels.find(id.value);
  return it != report.node_labels.end() ? it->second : id.value;
}

std::string csv_cell(const std::string& value) {
  bool needs_quotes = value.find_first_of(",\"\n") != std::string::npos;
  if (!needs_quotes) {
    return value;
  }
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  out += '"';
  return out;
}

std::string markdown_cell(const std::string& value) {
  std::string out;
  for (char c : value) {
    if (c == '|') {
      out += "\\|";
    } else {
      out += c;
    }
  }
  return out;
}

struct MapRow {
  std::array<std::string, 8> cells;
};

std::vector<MapRow> threat_map_rows(const AnalysisReport& report) {
  std::vector<MapRow> rows;
  for (const auto& flow : report.flows) {
    // Threats attributable to this flow: located on it, or located on its
    // destination node with this flow among the delivering witnesses.
    std::vector<const ReportedThreat*> paired;
    for (const ReportedThreat& rt : report.threats) {
      const Threat& t = rt.threat;
      bool here = false;
      if (t.location_is_flow) {
        here = t.location == flow.id.value;
      } else if (t.location == flow.destination.value) {
        here = std::any_of(t.witnesses.begin(), t.witnesses.end(),
                           [&flow](const TaintWitness& w) { return w.flow == flow.id; });
      }
      if (here) {
        paired.push_back(&rt);
      }
    }

    MapRow base;
    base.cells[0] = node_display(report, flow.source);
    base.cells[1] = flow_display_name(flow.id);
    base.cells[2] = node_display(report, flow.destination);
    base.cells[3] = flow.effective == FlowClass::IDPF ? "X" : "";
    base.cells[4] = flow.effective == FlowClass::PIDPF ? "X" : "";
    base.cells[5] = flow.effective == FlowClass::NIDPF ? "X" : "";

    if (paired.empty()) {
      rows.push_back(base);
      continue;
    }
    for (const ReportedThreat* rt : paired) {
      MapRow row = base;
      std::string misactors;
      for (size_t i = 0; i < rt->threat.misactors.size(); ++i) {
        if (i > 0) {
          misactors += ',';
        }
        misactors += to_keyword(rt->threat.misactors[i]);
      }
      row.cells[6] = misactors;
      row.cells[7] = std::string(to_string(rt->threat.category));
      rows.push_back(row);
    }
  }
  return rows;
}

constexpr const char* kMapHeader[8] = {"Source", "Flow",  "Destination", "IDPF",
                                       "PIDPF",  "NIDPF", "Misactor",    "Privacy Threat"};

}  // namespace

std::string emit_threat_map(const AnalysisReport& report, MapFormat format) {
  std::vector<MapRow> rows = threat_map_rows(report);
  std::string out;
  if (format == MapFormat::Csv) {
    for (int i = 0; i < 8; ++i) {
      if (i > 0) {
        out += ',';
      }
      out += kMapHeader[i];
    }
    out += '\n';
    for (const MapRow& row : rows) {
      for (int i = 0; i < 8; ++i) {
        if (i > 0) {
          out += ',';
        }
        out += csv_cell(row.cells[i]);
      }
      out += '\n';
    }
    return out;
  }
  out += "|";
  for (const char* column : kMapHeader) {
    out += ' ';
    out += column;
    out += " |";
  }
  out += "\n|";
  for (int i = 0; i < 8; ++i) {
    out += " --- |";
  }
  out += '\n';
  for (const MapRow& row : rows) {
    out += '|';
    for (const std::string& cell : row.cells) {
      out += ' ';
      out += markdown_cell(cell);
      if (!cell.empty()) {
        out += ' ';
      }
      out += '|';
    }
    out += '\n';
  }
  return out;
}

namespace {

std::string dot_quote(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') {
      out += '\\';
    }
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::optional<std::string> emit_threat_tree(const AnalysisReport& report, const ThreatId& threat_id,
                                            std::string* error) {
  const ReportedThreat* rt = report.find_threat(threat_id);
  if (rt == nullptr) {
    if (error != nullptr) {
      *error = "unknown threat id '" + threat_id.value + "'; available threat ids:";
      for (const ThreatId& id : report.threat_ids()) {
        *error += "\n  " + id.value;
      }
    }
    return std::nullopt;
  }
  const Threat& t = rt->threat;
  const std::string& tid = t.id.value;
  auto node_id = [&tid](const std::string& layer, int ordinal) {
    return tid + "/" + layer + "/" + std::to_string(ordinal);
  };

  std::string location_label = t.location_is_flow
                                   ? flow_display_name(FlowId{t.location})
                                   : node_display(report, NodeId{t.location});
  std::string root_label = std::string(to_string(t.category)) + ": " + location_label;
  if (t.status == ThreatStatus::Mitigated) {
    root_label += " [mitigated]";
  }

  std::string nodes;
  std::string edges;
  const std::string root = node_id("root", 0);
  nodes += "  " + dot_quote(root) + " [label=" + dot_quote(root_label) + "];\n";

  const std::string class_node = node_id("class", 0);
  std::string class_label = std::string(to_string(t.trigger)) + " (likelihood " +
                            t.likelihood.to_string() + ", " + t.data.value + ")";
  nodes += "  " + dot_quote(class_node) + " [label=" + dot_quote(class_label) + "];\n";
  edges += "  " + dot_quote(root) + " -> " + dot_quote(class_node) +
           " [label=\"classified-as\"];\n";

  int countermeasure_ordinal = 0;
  int misactor_ordinal = 0;
  for (MisactorKind kind : t.misactors) {
    const std::string m_node = node_id("misactor", misactor_ordinal++);
    std::string m_label =
        std::string(to_keyword(kind)) + " (" + std::string(misactor_gloss(kind)) + ")";
    nodes += "  " + dot_quote(m_node) + " [label=" + dot_quote(m_label) + "];\n";
    edges += "  " + dot_quote(root) + " -> " + dot_quote(m_node) + " [label=\"misactor\"];\n";
    for (const Mitigation* m : report.catalog.for_misactor(kind)) {
      const std::string c_node = node_id("countermeasure", countermeasure_ordinal++);
      nodes += "  " + dot_quote(c_node) + " [label=" + dot_quote(m->id + ": " + m->text) + "];\n";
      edges += "  " + dot_quote(m_node) + " -> " + dot_quote(c_node) +
               " [label=\"countermeasure\"];\n";
    }
  }

  int aca_ordinal = 0;
  auto add_gap = [&](const AcaDimension& dim, const char* name) {
    if (!dim.is_gap()) {
      return;
    }
    const std::string a_node = node_id("aca", aca_ordinal++);
    nodes += "  " + dot_quote(a_node) +
             " [label=" + dot_quote(std::string(name) + " gap: " + dim.evidence) + "];\n";
    edges += "  " + dot_quote(root) + " -> " + dot_quote(a_node) + " [label=\"aca-gap\"];\n";
  };
  add_gap(t.aca.awareness, "awareness");
  add_gap(t.aca.consent, "consent");
  add_gap(t.aca.access, "access");

  if (rt->note) {
    const std::string n_node = node_id("countermeasure", countermeasure_ordinal++);
    nodes += "  " + dot_quote(n_node) + " [label=" + dot_quote(*rt->note) + "];\n";
    edges += "  " + dot_quote(root) + " -> " + dot_quote(n_node) +
             " [label=\"countermeasure\"];\n";
  }

  std::string out = "digraph " + dot_quote(tid) + " {\n";
  out += "  rankdir=TB;\n";
  out += "  node [shape=box];\n";
  out += nodes;
  out += edges;
  out += "}\n";
  return out;
}

std::string emit_json(const AnalysisReport& report) {
  JsonValue root = JsonValue::object();
  root.set("schema", JsonValue::string(kReportSchema));

  JsonValue engine = JsonValue::object();
  engine.set("name", JsonValue::string("idpa"));
  engine.set("version", JsonValue::string(report.engine_version));
  root.set("engine", std::move(engine));

  JsonValue defaults = JsonValue::object();
  defaults.set("pidpf_likelihood", JsonValue::number(kDefaultPidpfLikelihood.to_string()));
  root.set("defaults", std::move(defaults));

  JsonValue model = JsonValue::object();
  model.set("name", JsonValue::string(report.model_name));
  model.set("hash", JsonValue::string(report.model_hash));
  root.set("model", std::move(model));

  JsonValue flows = JsonValue::array();
  for (const auto& flow : report.flows) {
    JsonValue row = JsonValue::object();
    row.set("id", JsonValue::string(flow.id.value));
    row.set("source", JsonValue::string(flow.source.value));
    row.set("destination", JsonValue::string(flow.destination.value));
    row.set("transform", JsonValue::string(std::string(to_keyword(flow.transform))));
    row.set("declared_class", JsonValue::string(std::string(to_string(flow.declared))));
    row.set("effective_class", JsonValue::string(std::string(to_string(flow.effective))));
    JsonValue carries = JsonValue::array();
    for (const auto& [data_id, cls] : flow.per_data) {
      JsonValue entry = JsonValue::object();
      entry.set("data", JsonValue::string(data_id.value));
      entry.set("class", JsonValue::string(std::string(to_string(cls))));
      carries.push(std::move(entry));
    }
    row.set("carries", std::move(carries));
    flows.push(std::move(row));
  }
  root.set("flows", std::move(flows));

  JsonValue taint_nodes = JsonValue::array();
  for (const auto& [node_id, nt] : report.taint.nodes) {
    JsonValue entry = JsonValue::object();
    entry.set("id", JsonValue::string(node_id.value));
    entry.set("level", JsonValue::number(nt.level));
    JsonValue witnesses = JsonValue::array();
    for (const TaintWitness& w : nt.witnesses) {
      JsonValue witness = JsonValue::object();
      witness.set("flow", JsonValue::string(w.flow.value));
      witness.set("data", JsonValue::string(w.data.value));
      witness.set("class", JsonValue::string(std::string(to_string(w.cls))));
      witnesses.push(std::move(witness));
    }
    entry.set("witnesses", std::move(witnesses));
    taint_nodes.push(std::move(entry));
  }
  JsonValue taint = JsonValue::object();
  taint.set("nodes", std::move(taint_nodes));
  root.set("taint", std::move(taint));

  JsonValue threats = JsonValue::array();
  for (const ReportedThreat& rt : report.threats) {
    const Threat& t = rt.threat;
    JsonValue entry = JsonValue::object();
    entry.set("id", JsonValue::string(t.id.value));
    entry.set("category", JsonValue::string(std::string(to_string(t.category))));
    entry.set("location", JsonValue::string(t.location));
    entry.set("location_kind", JsonValue::string(t.location_is_flow ? "flow" : "node"));
    entry.set("data", JsonValue::string(t.data.value));
    entry.set("class", JsonValue::string(std::string(to_string(t.trigger))));
    entry.set("likelihood", JsonValue::number(t.likelihood.to_string()));
    entry.set("status", JsonValue::string(std::string(to_string(t.status))));
    JsonValue misactors = JsonValue::array();
    for (MisactorKind kind : t.misactors) {
      misactors.push(JsonValue::string(std::string(to_keyword(kind))));
    }
    entry.set("misactors", std::move(misactors));

    JsonValue aca = JsonValue::object();
    auto dimension = [](const AcaDimension& dim) {
      JsonValue value = JsonValue::object();
      value.set("status", JsonValue::string(std::string(to_string(dim.status))));
      value.set("evidence", JsonValue::string(dim.evidence));
      return value;
    };
    aca.set("awareness", dimension(t.aca.awareness));
    aca.set("consent", dimension(t.aca.consent));
    aca.set("access", dimension(t.aca.access));
    entry.set("aca", std::move(aca));

    JsonValue witnesses = JsonValue::array();
    for (const TaintWitness& w : t.witnesses) {
      JsonValue witness = JsonValue::object();
      witness.set("flow", JsonValue::string(w.flow.value));
      witness.set("data", JsonValue::string(w.data.value));
      witness.set("class", JsonValue::string(std::string(to_string(w.cls))));
      witnesses.push(std::move(witness));
    }
    entry.set("witnesses", std::move(witnesses));

    JsonValue mitigations = JsonValue::array();
    for (const std::string& id : rt.mitigation_ids) {
      mitigations.push(JsonValue::string(id));
    }
    entry.set("mitigations", std::move(mitigations));
    if (rt.note) {
      entry.set("note", JsonValue::string(*rt.note));
    }
    threats.push(std::move(entry));
  }
  root.set("threats", std::move(threats));

  JsonValue catalog = JsonValue::array();
  for (const Mitigation& m : report.catalog.entries()) {
    JsonValue entry = JsonValue::object();
    entry.set("id", JsonValue::string(m.id));
    entry.set("misactor", JsonValue::string(std::string(to_keyword(m.misactor))));
    entry.set("text", JsonValue::string(m.text));
    JsonValue principles = JsonValue::array();
    for (Principle p : m.principles) {
      principles.push(JsonValue::string(std::string(to_string(p))));
    }
    entry.set("principles", std::move(principles));
    catalog.push(std::move(entry));
  }
  root.set("mitigation_catalog", std::move(catalog));

  JsonValue posture = JsonValue::object();
  auto dimension = [](const PostureDimension& dim) {
    JsonValue value = JsonValue::object();
    value.set("status", JsonValue::string(std::string(to_string(dim.status))));
    JsonValue evidence = JsonValue::array();
    for (const std::string& e : dim.evidence) {
      evidence.push(JsonValue::string(e));
    }
    value.set("evidence", std::move(evidence));
    return value;
  };
  posture.set("awareness", dimension(report.posture.awareness));
  posture.set("authorization", dimension(report.posture.authorization));
  posture.set("access", dimension(report.posture.access));
  posture.set("accountability", dimension(report.posture.accountability));
  posture.set("auditability", dimension(report.posture.auditability));
  posture.set("alignment", dimension(report.posture.alignment));
  root.set("posture", std::move(posture));

  return root.dump();
}

}  // namespace idpa
