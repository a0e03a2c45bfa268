#include <doctest.h>

#include <random>
#include <string>

#include "generators.hpp"
#include "idpa/parser.hpp"

using namespace idpa;

namespace {

constexpr const char* kMinimalProgram =
    "model \"t\"\n"
    "entity u \"User\"\n"
    "process p \"App\"\n"
    "data d \"Contacts\" subjects=includes-others\n"
    "flow f u -> p carries=d\n";

size_t count_errors(const ParseResult& result) {
  size_t n = 0;
  for (const Diagnostic& d : result.diagnostics) {
    if (d.severity == Severity::Error) {
      ++n;
    }
  }
  return n;
}

size_t line_count(const std::string& text) {
  size_t n = 0;
  for (char c : text) {
    if (c == '\n') {
      ++n;
    }
  }
  return n;
}

}  // namespace

TEST_CASE("minimal program parses") {
  ParseResult result = parse(kMinimalProgram);
  REQUIRE(result.ok());
  const Model& m = *result.model;
  CHECK(m.name == "t");
  CHECK(m.nodes.size() == 2);
  CHECK(m.data_objects.size() == 1);
  CHECK(m.flows.size() == 1);
  CHECK(m.flows[0].source == NodeId{"u"});
  CHECK(m.flows[0].destination == NodeId{"p"});
  CHECK(m.data_objects[0].subjects == SubjectsClass::IncludesOthers);
}

TEST_CASE("undeclared references yield one error each") {
  ParseResult result = parse("flow f u -> p carries=d\n");
  CHECK_FALSE(result.ok());
  CHECK(count_errors(result) == 3);
  std::vector<std::string> expected = {"unresolved node reference u",
                                       "unresolved node reference p",
                                       "unresolved data reference d"};
  for (const std::string& message : expected) {
    bool found = false;
    for (const Diagnostic& d : result.diagnostics) {
      if (d.message == message) {
        found = true;
        CHECK(d.span.has_value());
      }
    }
    CAPTURE(message);
    CHECK(found);
  }
}

TEST_CASE("serialize of the minimal program is canonical and idempotent") {
  ParseResult first = parse(kMinimalProgram);
  REQUIRE(first.ok());
  std::string canonical = serialize(*first.model);
  CHECK(line_count(canonical) == 5);

  ParseResult second = parse(canonical);
  REQUIRE(second.ok());
  CHECK(serialize(*second.model) == canonical);
}

TEST_CASE("statement order does not matter; canonical form sorts by kind and id") {
  std::string shuffled =
      "model \"t\"\n"
      "flow f u -> p carries=d\n"
      "data d \"Contacts\" subjects=includes-others\n"
      "process p \"App\"\n"
      "entity u \"User\"\n";
  ParseResult a = parse(kMinimalProgram);
  ParseResult b = parse(shuffled);
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  CHECK(serialize(*a.model) == serialize(*b.model));
}

TEST_CASE("parse recovers per line and reports multiple diagnostics") {
  std::string text =
      "model \"t\"\n"
      "entity u \"User\"\n"
      "wibble x \"Bad keyword\"\n"
      "process p \"App\" speed=fast\n"
      "data d \"D\" subjects=maybe\n"
      "process q \"Ok\"\n";
  ParseResult result = parse(text);
  CHECK_FALSE(result.ok());
  CHECK(count_errors(result) == 3);
  CHECK(result.diagnostics[0].message == "unknown keyword 'wibble'");
  CHECK(result.diagnostics[1].message == "unknown attribute 'speed' for process");
  CHECK(result.diagnostics[2].message == "invalid subjects value 'maybe'");
}

TEST_CASE("parser aborts after fifty diagnostics") {
  std::string text = "model \"t\"\n";
  for (int i = 0; i < 80; ++i) {
    text += "junk\n";
  }
  ParseResult result = parse(text);
  CHECK_FALSE(result.ok());
  CHECK(result.diagnostics.size() == kMaxParseDiagnostics);
}

TEST_CASE("duplicate ids are rejected") {
  std::string text =
      "model \"t\"\n"
      "entity u \"User\"\n"
      "store u \"Same namespace\"\n"
      "data d \"D\" subjects=sender-only\n"
      "data d \"Again\" subjects=sender-only\n";
  ParseResult result = parse(text);
  CHECK_FALSE(result.ok());
  CHECK(count_errors(result) == 2);
  CHECK(result.diagnostics[0].message == "duplicate node id u");
  CHECK(result.diagnostics[1].message == "duplicate data id d");
}

TEST_CASE("unterminated strings are reported with a span") {
  ParseResult result = parse("model \"t\nentity u \"User\"\n");
  CHECK_FALSE(result.ok());
  bool found = false;
  for (const Diagnostic& d : result.diagnostics) {
    if (d.message == "unterminated string") {
      found = true;
      REQUIRE(d.span.has_value());
      CHECK(d.span->line == 1);
      CHECK(d.span->column == 7);
    }
  }
  CHECK(found);
}

TEST_CASE("a BOM is rejected with a clear message") {
  std::string text = "\xEF\xBB\xBFmodel \"t\"\n";
  ParseResult result = parse(text);
  CHECK_FALSE(result.ok());
  CHECK(result.diagnostics[0].message ==
        "byte order mark is not allowed; save the file as plain UTF-8");
}

TEST_CASE("invalid UTF-8 yields a diagnostic, not a crash") {
  std::string text = "model \"t\"\nentity \xFF \"x\"\n";
  ParseResult result = parse(text);
  CHECK_FALSE(result.ok());
  CHECK(result.diagnostics[0].message == "invalid UTF-8 byte");
}

TEST_CASE("comments and blank lines are ignored") {
  std::string text =
      "# header comment\n"
      "model \"t\"   # trailing\n"
      "\n"
      "entity u \"User # not a comment inside strings\"\n";
  ParseResult result = parse(text);
  REQUIRE(result.ok());
  CHECK(result.model->nodes[0].label == "User # not a comment inside strings");
}

TEST_CASE("string escapes round-trip") {
  std::string text = "model \"quote \\\" and backslash \\\\ here\"\n";
  ParseResult result = parse(text);
  REQUIRE(result.ok());
  CHECK(result.model->name == "quote \" and backslash \\ here");
  ParseResult again = parse(serialize(*result.model));
  REQUIRE(again.ok());
  CHECK(again.model->name == result.model->name);
}

TEST_CASE("missing header is a warning, not an error") {
  ParseResult result = parse("entity u \"User\"\n");
  REQUIRE(result.ok());
  REQUIRE(!result.diagnostics.empty());
  CHECK(result.diagnostics[0].severity == Severity::Warning);
  CHECK(result.diagnostics[0].message == "missing model header");
}

TEST_CASE("exclude statement parses misactor list and reason string") {
  std::string text =
      "model \"t\"\n"
      "entity u \"User\"\n"
      "process p \"App\"\n"
      "data d \"Contacts\" subjects=includes-others\n"
      "flow f u -> p carries=d\n"
      "exclude f misactor=UFU,MU reason=\"analyst call\"\n";
  ParseResult result = parse(text);
  REQUIRE(result.ok());
  REQUIRE(result.model->exclusions.size() == 1);
  const MisactorExclusion& e = result.model->exclusions[0];
  CHECK(e.flow == FlowId{"f"});
  REQUIRE(e.excluded.size() == 2);
  CHECK(e.excluded[0] == MisactorKind::MU);  // normalized to misactor order
  CHECK(e.excluded[1] == MisactorKind::UFU);
  CHECK(e.reason == "analyst call");
}

TEST_CASE("annotate parses dotted keys and access-control") {
  std::string text =
      "model \"t\"\n"
      "entity u \"User\"\n"
      "process p \"App\"\n"
      "data d \"Contacts\" subjects=includes-others\n"
      "flow f u -> p carries=d\n"
      "annotate f awareness.sender=yes awareness.stakeholders=no access-control=partial\n";
  ParseResult result = parse(text);
  REQUIRE(result.ok());
  REQUIRE(result.model->aca_annotations.size() == 1);
  const AcaAnnotation& a = result.model->aca_annotations[0];
  CHECK(a.awareness_sender == TriState::Yes);
  CHECK(a.awareness_stakeholders == TriState::No);
  CHECK(a.consent_sender == TriState::Unknown);
  CHECK(a.access_control == AccessControl::Partial);
}

TEST_CASE("likelihood with more than two fraction digits is rejected") {
  std::string text =
      "model \"t\"\n"
      "data d \"Photo\" subjects=may-include-others likelihood=0.125\n";
  ParseResult result = parse(text);
  CHECK_FALSE(result.ok());
  CHECK(result.diagnostics[0].message.find("invalid likelihood") != std::string::npos);
}

TEST_CASE("policy parses and duplicate policy blocks fail") {
  std::string good =
      "model \"t\"\n"
      "policy accountability=yes auditability=unknown alignment=no\n";
  ParseResult result = parse(good);
  REQUIRE(result.ok());
  CHECK(result.model->policy.accountability == TriState::Yes);
  CHECK(result.model->policy.auditability == TriState::Unknown);
  CHECK(result.model->policy.alignment == TriState::No);

  ParseResult dup = parse(good + "policy accountability=no\n");
  CHECK_FALSE(dup.ok());
  CHECK(dup.diagnostics[0].message == "duplicate policy block");
}

TEST_CASE("initiator equal to the source is normalized away") {
  std::string text =
      "model \"t\"\n"
      "entity u \"User\"\n"
      "process p \"App\"\n"
      "data d \"D\" subjects=sender-only\n"
      "flow f u -> p carries=d initiator=u\n";
  ParseResult result = parse(text);
  REQUIRE(result.ok());
  CHECK_FALSE(result.model->flows[0].initiator.has_value());
  CHECK(serialize(*result.model).find("initiator") == std::string::npos);
}

TEST_CASE("roundtrip property: parse after serialize equals the first parse") {
  std::mt19937_64 rng(20240601);
  for (int i = 0; i < 250; ++i) {
    Model generated = idpa::testing::random_model(rng);
    std::string text = serialize(generated);
    ParseResult first = parse(text);
    CAPTURE(i);
    CAPTURE(text);
    REQUIRE(first.ok());
    std::string canonical = serialize(*first.model);
    CHECK(canonical == text);  // generated models are already canonical
    ParseResult second = parse(canonical);
    REQUIRE(second.ok());
    CHECK(serialize(*second.model) == canonical);
  }
}

TEST_CASE("quick fuzz: random bytes never crash the parser") {
  std::mt19937_64 rng(0xFEEDu);
  for (int i = 0; i < 20000; ++i) {
    int length = static_cast<int>(rng() % 160);
    std::string text;
    text.reserve(static_cast<size_t>(length));
    for (int k = 0; k < length; ++k) {
      text += static_cast<char>(rng() & 0xFF);
    }
    ParseResult result = parse(text);
    CHECK(result.diagnostics.size() <= kMaxParseDiagnostics);
  }
}

TEST_CASE("quick fuzz: mutated valid programs never crash the parser") {
  std::mt19937_64 rng(0xBEEFu);
  Model base = idpa::testing::random_model(rng);
  std::string canonical = serialize(base);
  for (int i = 0; i < 20000; ++i) {
    std::string text = canonical;
    int mutations = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < mutations && !text.empty(); ++k) {
      text[rng() % text.size()] = static_cast<char>(rng() & 0xFF);
    }
    ParseResult result = parse(text);
    CHECK(result.diagnostics.size() <= kMaxParseDiagnostics);
  }
}
