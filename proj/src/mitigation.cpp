#include "idpa/mitigation.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

namespace idpa {

std::string_view to_string(Principle p) {
  switch (p) {
    case Principle::Awareness: return "Awareness";
    case Principle::Authorization: return "Authorization";
    case Principle::Access: return "Access";
    case Principle::Accountability: return "Accountability";
    case Principle::Auditability: return "Auditability";
    case Principle::Alignment: return "Alignment";
  }
  return "";
}

std::optional<Principle> principle_from_string(std::string_view text) {
  for (Principle p : {Principle::Awareness, Principle::Authorization, Principle::Access,
                      Principle::Accountability, Principle::Auditability, Principle::Alignment}) {
    if (to_string(p) == text) {
      return p;
    }
  }
  return std::nullopt;
}

std::string_view to_string(PostureStatus status) {
  switch (status) {
    case PostureStatus::Satisfied: return "satisfied";
    case PostureStatus::Gap: return "gap";
    case PostureStatus::Unknown: return "unknown";
  }
  return "";
}

namespace {

std::vector<Mitigation> builtin_entries() {
  using P = Principle;
  using M = MisactorKind;
  return {
      {"mu-security-measures", M::MU,
       "Deploy strong technical safeguards (encryption, anomaly and intrusion detection) so "
       "interdependent data cannot be accessed or exfiltrated by attackers.",
       {P::Access}},
      {"mu-security-audits", M::MU,
       "Run periodic security audits and penetration tests to find and fix weaknesses before "
       "they are exploited.",
       {P::Auditability}},
      {"iu-awareness-training", M::IU,
       "Run recurring privacy training so careless actors understand the consequences their "
       "sharing has for other people.",
       {P::Awareness}},
      {"iu-privacy-by-design", M::IU,
       "Redesign features so they expose as little third-party data as possible by default and "
       "give data subjects control.",
       {P::Access}},
      {"uu-privacy-tools", M::UU,
       "Ship easy-to-use tools that let well-meaning users protect other people's data while "
       "still using the feature.",
       {P::Access}},
      {"uu-privacy-guidance", M::UU,
       "Publish practical guidelines and best practices for handling data that involves others.",
       {P::Awareness}},
      {"ufu-educational-campaigns", M::UFU,
       "Run educational campaigns about privacy rights and the duties users have toward the "
       "people appearing in their data.",
       {P::Awareness}},
      {"ufu-clear-policies", M::UFU,
       "Keep privacy policies complete yet plain enough that users understand how shared data "
       "affects others.",
       {P::Awareness, P::Alignment}},
      {"sp-data-handling-protocols", M::SP,
       "Enforce rigorous internal data handling protocols with recurring compliance checks.",
       {P::Auditability, P::Alignment}},
      {"sp-data-protection-agreements", M::SP,
       "Require strict data protection terms in every agreement with third parties that touch "
       "the data.",
       {P::Accountability}},
      {"ga-regulatory-compliance", M::GA,
       "Fulfil data requests only when they are fully compliant with data protection law and "
       "due process.",
       {P::Alignment}},
      {"ga-transparency-accountability", M::GA,
       "Publish transparency reports on data requests and keep accountable oversight of how "
       "they are handled.",
       {P::Accountability, P::Auditability}},
  };
}

void sort_entries(std::vector<Mitigation>& entries) {
  std::sort(entries.begin(), entries.end(), [](const Mitigation& a, const Mitigation& b) {
    if (a.misactor != b.misactor) {
      return a.misactor < b.misactor;
    }
    return a.id < b.id;
  });
}

}  // namespace

const Catalog& Catalog::builtin() {
  static const Catalog instance = [] {
    Catalog c;
    c.entries_ = builtin_entries();
    sort_entries(c.entries_);
    return c;
  }();
  return instance;
}

std::optional<Catalog> Catalog::with_override(const std::string& json_text,
                                              std::vector<Diagnostic>& diagnostics) {
  auto fail = [&diagnostics](std::string message) {
    diagnostics.push_back(
        {Severity::Error, "catalog override: " + std::move(message), "catalog", std::nullopt});
    return std::nullopt;
  };
  nlohmann::json parsed = nlohmann::json::parse(json_text, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_array()) {
    return fail("expected a JSON array of mitigation entries");
  }
  std::vector<Mitigation> overrides;
  std::set<std::string> ids;
  for (const auto& entry : parsed) {
    if (!entry.is_object() || !entry.contains("id") || !entry.contains("misactor") ||
        !entry.contains("text") || !entry["id"].is_string() || !entry["misactor"].is_string() ||
        !entry["text"].is_string()) {
      return fail("each entry requires string fields id, misactor, and text");
    }
    Mitigation m;
    m.id = entry["id"].get<std::string>();
    m.text = entry["text"].get<std::string>();
    auto kind = misactor_from_keyword(entry["misactor"].get<std::string>());
    if (!kind) {
      return fail("unknown misactor '" + entry["misactor"].get<std::string>() + "'");
    }
    m.misactor = *kind;
    if (entry.contains("principles")) {
      if (!entry["principles"].is_array()) {
        return fail("principles must be an array");
      }
      for (const auto& p : entry["principles"]) {
        auto principle = p.is_string() ? principle_from_string(p.get<std::string>()) : std::nullopt;
        if (!principle) {
          return fail("unknown principle in entry '" + m.id + "'");
        }
        m.principles.push_back(*principle);
      }
      std::sort(m.principles.begin(), m.principles.end());
      m.principles.erase(std::unique(m.principles.begin(), m.principles.end()),
                         m.principles.end());
    }
    if (m.principles.empty()) {
      return fail("entry '" + m.id + "' needs at least one principle tag");
    }
    if (!ids.insert(m.id).second) {
      return fail("duplicate mitigation id '" + m.id + "'");
    }
    overrides.push_back(std::move(m));
  }
  if (overrides.empty()) {
    return fail("override contains no entries");
  }

  std::set<MisactorKind> overridden;
  for (const Mitigation& m : overrides) {
    overridden.insert(m.misactor);
  }
  Catalog result;
  result.entries_ = std::move(overrides);
  for (const Mitigation& m : builtin().entries_) {
    if (overridden.count(m.misactor) == 0) {
      result.entries_.push_back(m);
    }
  }
  sort_entries(result.entries_);
  return result;
}

std::vector<const Mitigation*> Catalog::for_misactor(MisactorKind kind) const {
  std::vector<const Mitigation*> out;
  for (const Mitigation& m : entries_) {
    if (m.misactor == kind) {
      out.push_back(&m);
    }
  }
  return out;
}

std::vector<Mitigation> suggest(const Threat& threat, const Catalog& catalog) {
  std::vector<Mitigation> out;
  for (MisactorKind kind : kAllMisactors) {
    if (std::find(threat.misactors.begin(), threat.misactors.end(), kind) ==
        threat.misactors.end()) {
      continue;
    }
    for (const Mitigation* m : catalog.for_misactor(kind)) {
      out.push_back(*m);
    }
  }
  return out;
}

std::optional<std::string> transform_note(const Threat& threat, const Model& model) {
  if (threat.status != ThreatStatus::Mitigated) {
    return std::nullopt;
  }
  std::vector<std::string> flows;
  for (const TaintWitness& w : threat.witnesses) {
    const Flow* f = model.find_flow(w.flow);
    if (f != nullptr && f->transform == Transform::Encrypts) {
      flows.push_back(f->id.value);
    }
  }
  std::sort(flows.begin(), flows.end());
  flows.erase(std::unique(flows.begin(), flows.end()), flows.end());
  std::string joined;
  for (size_t i = 0; i < flows.size(); ++i) {
    if (i > 0) {
      joined += ", ";
    }
    joined += flows[i];
  }
  return "mitigated by transform=encrypts on " + joined;
}

namespace {

PostureDimension aggregate_proactive(const std::vector<Threat>& threats,
                                     AcaDimension AcaGapReport::*member, std::string_view label) {
  PostureDimension dim;
  std::vector<std::string> gapped;
  for (const Threat& t : threats) {
    if ((t.aca.*member).is_gap()) {
      gapped.push_back(t.id.value);
    }
  }
  if (!gapped.empty()) {
    dim.status = PostureStatus::Gap;
    dim.evidence = std::move(gapped);
    return dim;
  }
  dim.status = PostureStatus::Satisfied;
  dim.evidence = {threats.empty() ? "no threats elicited"
                                  : "no " + std::string(label) + " gaps across threats"};
  return dim;
}

PostureDimension from_policy(TriState value, std::string_view key) {
  PostureDimension dim;
  switch (value) {
    case TriState::Yes:
      dim.status = PostureStatus::Satisfied;
      dim.evidence = {"policy " + std::string(key) + "=yes"};
      break;
    case TriState::No:
      dim.status = PostureStatus::Gap;
      dim.evidence = {"policy " + std::string(key) + "=no"};
      break;
    case TriState::Unknown:
      dim.status = PostureStatus::Unknown;
      dim.evidence = {"no policy declaration for " + std::string(key)};
      break;
  }
  return dim;
}

}  // namespace

PostureReport posture(const Model& model, const std::vector<Threat>& threats) {
  PostureReport report;
  report.awareness = aggregate_proactive(threats, &AcaGapReport::awareness, "awareness");
  report.authorization = aggregate_proactive(threats, &AcaGapReport::consent, "consent");
  report.access = aggregate_proactive(threats, &AcaGapReport::access, "access-control");
  report.accountability = from_policy(model.policy.accountability, "accountability");
  report.auditability = from_policy(model.policy.auditability, "auditability");
  report.alignment = from_policy(model.policy.alignment, "alignment");
  return report;
}

}  // namespace idpa
