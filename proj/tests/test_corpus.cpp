#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dot_checker.hpp"
#include "idpa/analysis.hpp"
#include "idpa/parser.hpp"

using namespace idpa;
namespace fs = std::filesystem;

namespace {

const fs::path kCorpusDir = IDPA_CORPUS_DIR;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing file: " << path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Model load_model(const fs::path& path) {
  ParseResult parsed = parse(read_file(path));
  for (const Diagnostic& d : parsed.diagnostics) {
    CAPTURE(format_diagnostic(d, path.string()));
    CHECK(d.severity != Severity::Error);
  }
  REQUIRE(parsed.ok());
  return std::move(*parsed.model);
}

std::vector<fs::path> corpus_models() {
  std::vector<fs::path> models;
  for (const auto& entry : fs::directory_iterator(kCorpusDir)) {
    if (entry.path().extension() == ".idpa") {
      models.push_back(entry.path());
    }
  }
  std::sort(models.begin(), models.end());
  return models;
}

}  // namespace

TEST_CASE("corpus models parse and validate cleanly") {
  auto models = corpus_models();
  REQUIRE(models.size() >= 2);
  for (const fs::path& path : models) {
    CAPTURE(path.string());
    Model m = load_model(path);
    auto diagnostics = validate(m);
    for (const Diagnostic& d : diagnostics) {
      CAPTURE(format_diagnostic(d));
      CHECK(d.severity != Severity::Error);
    }
  }
}

TEST_CASE("regenerating every frozen golden is a no-op") {
  for (const fs::path& path : corpus_models()) {
    CAPTURE(path.string());
    Model m = load_model(path);
    std::string stem = path.stem().string();
    fs::path golden = kCorpusDir / "golden";

    CHECK(serialize(m) == read_file(golden / (stem + ".canonical.idpa")));

    AnalysisResult result = analyze(m);
    REQUIRE(result.ok());
    CHECK(emit_json(*result.report) == read_file(golden / (stem + ".report.json")));
    CHECK(emit_threat_map(*result.report, MapFormat::Csv) ==
          read_file(golden / (stem + ".map.csv")));
    CHECK(emit_threat_map(*result.report, MapFormat::Markdown) ==
          read_file(golden / (stem + ".map.md")));

    // Every frozen tree golden must match its regenerated form.
    for (const auto& entry : fs::directory_iterator(golden)) {
      std::string name = entry.path().filename().string();
      std::string prefix = stem + ".tree.";
      if (name.rfind(prefix, 0) != 0) {
        continue;
      }
      std::string threat_id = name.substr(prefix.size());
      threat_id = threat_id.substr(0, threat_id.size() - std::string(".dot").size());
      std::string error;
      auto dot = emit_threat_tree(*result.report, ThreatId{threat_id}, &error);
      REQUIRE_MESSAGE(dot.has_value(), error);
      CHECK(*dot == read_file(entry.path()));
    }
  }
}

TEST_CASE("wechat fixture reproduces the case-study findings") {
  Model m = load_model(kCorpusDir / "wechat.idpa");

  // The upload flow carries data about people other than the sender.
  const Flow* upload = m.find_flow(FlowId{"f-upload-contacts"});
  REQUIRE(upload != nullptr);
  const DataObject* contacts = m.find_data(DataId{"d-contacts"});
  REQUIRE(contacts != nullptr);
  CHECK(contacts->subjects == SubjectsClass::IncludesOthers);

  AnalysisResult result = analyze(m);
  REQUIRE(result.ok());
  const AnalysisReport& report = *result.report;

  const ReportedThreat* upload_is =
      report.find_threat(ThreatId{"IS-f-upload-contacts-d-contacts"});
  REQUIRE(upload_is != nullptr);
  CHECK(upload_is->threat.trigger == FlowClass::IDPF);
  CHECK(upload_is->threat.likelihood == Likelihood::certain());
  CHECK(upload_is->threat.status == ThreatStatus::Active);
  CHECK(upload_is->threat.misactors ==
        std::vector<MisactorKind>{MisactorKind::MU, MisactorKind::IU, MisactorKind::UU});

  const ReportedThreat* storage =
      report.find_threat(ThreatId{"IST-s-user-relationship-d-contact-graph"});
  REQUIRE(storage != nullptr);
  CHECK(storage->threat.status == ThreatStatus::Active);

  const ReportedThreat* matching = report.find_threat(ThreatId{"IP-p-find-friends-d-contacts"});
  REQUIRE(matching != nullptr);
  CHECK(matching->threat.status == ThreatStatus::Mitigated);
  CHECK(matching->threat.likelihood == Likelihood::certain());

  const ReportedThreat* registration =
      report.find_threat(ThreatId{"IS-f-registration-status-d-registration-status"});
  REQUIRE(registration != nullptr);
  CHECK(registration->threat.misactors == std::vector<MisactorKind>{MisactorKind::SP});

  const ReportedThreat* payee = report.find_threat(ThreatId{"IS-f-payee-name-d-payee-name"});
  REQUIRE(payee != nullptr);
  CHECK(payee->threat.misactors == std::vector<MisactorKind>{MisactorKind::SP});
  CHECK(payee->threat.status == ThreatStatus::Active);

  const ReportedThreat* moments = report.find_threat(ThreatId{"IS-f-post-moments-d-moments-photo"});
  REQUIRE(moments != nullptr);
  CHECK(moments->threat.trigger == FlowClass::PIDPF);
  CHECK(moments->threat.status == ThreatStatus::Potential);
  CHECK(moments->threat.likelihood == kDefaultPidpfLikelihood);

  // Policy-backed reactive trio.
  CHECK(report.posture.accountability.status == PostureStatus::Satisfied);
  CHECK(report.posture.auditability.status == PostureStatus::Satisfied);
  CHECK(report.posture.alignment.status == PostureStatus::Satisfied);
  CHECK(report.posture.awareness.status == PostureStatus::Gap);
}

TEST_CASE("minimal contacts fixture: sharing plus storage, strips removes storage") {
  Model m = load_model(kCorpusDir / "minimal-contacts.idpa");
  AnalysisResult result = analyze(m);
  REQUIRE(result.ok());
  const AnalysisReport& report = *result.report;

  CHECK(report.find_threat(ThreatId{"IS-f-upload-contacts-d-contacts"}) != nullptr);
  CHECK(report.find_threat(ThreatId{"IST-s-contacts-db-d-contacts"}) != nullptr);
  CHECK(report.taint.nodes.at(NodeId{"s-contacts-db"}).level == 2);

  // The storage flow itself is also a sharing of interdependent data.
  CHECK(report.find_threat(ThreatId{"IS-f-store-contacts-d-contacts"}) != nullptr);
  CHECK(report.threats.size() == 3);

  SUBCASE("strips-others on the storage flow removes the storage threat") {
    for (Flow& f : m.flows) {
      if (f.id == FlowId{"f-store-contacts"}) {
        f.transform = Transform::StripsOthers;
      }
    }
    AnalysisResult stripped = analyze(m);
    REQUIRE(stripped.ok());
    CHECK(stripped.report->find_threat(ThreatId{"IST-s-contacts-db-d-contacts"}) == nullptr);
    CHECK(stripped.report->find_threat(ThreatId{"IS-f-upload-contacts-d-contacts"}) != nullptr);
    CHECK(stripped.report->taint.nodes.at(NodeId{"s-contacts-db"}).level == 0);
  }
}

TEST_CASE("every finding in the notes file appears in the frozen report") {
  std::string notes = read_file(kCorpusDir / "wechat.findings.txt");
  nlohmann::json report =
      nlohmann::json::parse(read_file(kCorpusDir / "golden" / "wechat.report.json"));
  std::set<std::string> reported;
  for (const auto& threat : report["threats"]) {
    reported.insert(threat["id"].get<std::string>());
  }

  std::istringstream lines(notes);
  std::string line;
  size_t checked = 0;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') {
      continue;
    }
    std::string id = line.substr(0, line.find(" |"));
    CAPTURE(id);
    CHECK(reported.count(id) == 1);
    ++checked;
  }
  CHECK(checked >= 9);
}

TEST_CASE("the wechat catalog override maps the observed countermeasures") {
  std::vector<Diagnostic> diagnostics;
  auto catalog =
      Catalog::with_override(read_file(kCorpusDir / "wechat-catalog.json"), diagnostics);
  REQUIRE_MESSAGE(catalog.has_value(), "override must load");

  Model m = load_model(kCorpusDir / "wechat.idpa");
  AnalysisResult result = analyze(m, *catalog);
  REQUIRE(result.ok());
  const ReportedThreat* upload =
      result.report->find_threat(ThreatId{"IS-f-upload-contacts-d-contacts"});
  REQUIRE(upload != nullptr);
  CHECK(upload->mitigation_ids ==
        std::vector<std::string>{"mu-block-lookup", "mu-encrypted-matching", "iu-block-lookup",
                                 "iu-consent-popup", "uu-partial-contact-access",
                                 "uu-privacy-guidance"});

  std::string error;
  auto dot = emit_threat_tree(*result.report, ThreatId{"IS-f-upload-contacts-d-contacts"}, &error);
  REQUIRE_MESSAGE(dot.has_value(), error);
  CHECK(dot->find("block account discovery") != std::string::npos);
  CHECK(dot->find("partial contact access") != std::string::npos);
  CHECK(idpa::testing::dot_is_valid(*dot));
}

TEST_CASE("analyzing a corpus model twice yields byte-identical outputs") {
  for (const fs::path& path : corpus_models()) {
    CAPTURE(path.string());
    auto run = [&path] {
      Model m = load_model(path);
      AnalysisResult result = analyze(m);
      REQUIRE(result.ok());
      std::vector<std::string> outputs;
      outputs.push_back(emit_json(*result.report));
      outputs.push_back(emit_threat_map(*result.report, MapFormat::Csv));
      outputs.push_back(emit_threat_map(*result.report, MapFormat::Markdown));
      for (const ThreatId& id : result.report->threat_ids()) {
        auto dot = emit_threat_tree(*result.report, id);
        REQUIRE(dot.has_value());
        outputs.push_back(*dot);
      }
      return outputs;
    };
    CHECK(run() == run());
  }
}
