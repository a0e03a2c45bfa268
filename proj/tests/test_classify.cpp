#include <doctest.h>

#include <random>
#include <stdexcept>

#include "generators.hpp"
#include "idpa/classify.hpp"
#include "idpa/parser.hpp"
#include "oracle.hpp"

using namespace idpa;

namespace {

Model parse_or_die(const std::string& text) {
  ParseResult result = parse(text);
  REQUIRE_MESSAGE(result.ok(), "fixture must parse");
  return std::move(*result.model);
}

// User uploads contacts; the app stores a derived object.
constexpr const char* kChain =
    "model \"chain\"\n"
    "entity u \"User\"\n"
    "process p \"App\"\n"
    "store s \"Store\"\n"
    "data d-contacts \"Contacts\" subjects=includes-others\n"
    "data d-derived \"Derived\" subjects=sender-only derived-from=d-contacts\n"
    "flow f-upload u -> p carries=d-contacts\n"
    "flow f-store p -> s carries=d-derived\n";

}  // namespace

TEST_CASE("classify_flow takes the max over carried data") {
  Model m = parse_or_die(
      "model \"t\"\n"
      "entity u \"User\"\n"
      "process p \"App\"\n"
      "data contacts \"Contacts\" subjects=includes-others\n"
      "data photo \"Photo\" subjects=may-include-others\n"
      "data own-password \"Password\" subjects=sender-only\n"
      "flow f-a u -> p carries=contacts\n"
      "flow f-b u -> p carries=photo\n"
      "flow f-c u -> p carries=own-password\n"
      "flow f-d u -> p carries=own-password,contacts\n"
      "flow f-e p -> u carries=contacts\n");
  CHECK(classify_flow(*m.find_flow(FlowId{"f-a"}), m) == FlowClass::IDPF);
  CHECK(classify_flow(*m.find_flow(FlowId{"f-b"}), m) == FlowClass::PIDPF);
  CHECK(classify_flow(*m.find_flow(FlowId{"f-c"}), m) == FlowClass::NIDPF);
  CHECK(classify_flow(*m.find_flow(FlowId{"f-d"}), m) == FlowClass::IDPF);
  // Direction-agnostic: a system-to-user flow classifies the same way.
  CHECK(classify_flow(*m.find_flow(FlowId{"f-e"}), m) == FlowClass::IDPF);
}

TEST_CASE("derived data inherits taint across the chain") {
  Model m = parse_or_die(kChain);
  TaintMap taint = propagate(m);
  CHECK(taint.nodes.at(NodeId{"s"}).level == 2);
  CHECK(taint.flows.at(FlowId{"f-store"}).effective == FlowClass::IDPF);
  CHECK(taint.flows.at(FlowId{"f-store"}).declared == FlowClass::NIDPF);
  REQUIRE(taint.nodes.at(NodeId{"s"}).witnesses.size() == 1);
  CHECK(taint.nodes.at(NodeId{"s"}).witnesses[0].data == DataId{"d-derived"});
}

TEST_CASE("strips-others caps the downstream flow at NIDPF") {
  std::string text = kChain;
  text.replace(text.find("flow f-store p -> s carries=d-derived"),
               std::string("flow f-store p -> s carries=d-derived").size(),
               "flow f-store p -> s carries=d-derived transform=strips-others");
  Model m = parse_or_die(text);
  TaintMap taint = propagate(m);
  CHECK(taint.nodes.at(NodeId{"s"}).level == 0);
  CHECK(taint.flows.at(FlowId{"f-store"}).effective == FlowClass::NIDPF);
  CHECK(taint.nodes.at(NodeId{"s"}).witnesses.empty());
  // And the sender-only declaration of the derived object now stands, since
  // a stripped flow feeds its producer.
  CHECK(taint.data_effective.at(DataId{"d-derived"}) == FlowClass::IDPF);  // producer is p, fed by f-upload (unstripped)

  SUBCASE("stripping the upload instead launders the derived object") {
    std::string stripped_upload = kChain;
    stripped_upload.replace(
        stripped_upload.find("flow f-upload u -> p carries=d-contacts"),
        std::string("flow f-upload u -> p carries=d-contacts").size(),
        "flow f-upload u -> p carries=d-contacts transform=strips-others");
    Model m2 = parse_or_die(stripped_upload);
    TaintMap taint2 = propagate(m2);
    CHECK(taint2.data_effective.at(DataId{"d-derived"}) == FlowClass::NIDPF);
    CHECK(taint2.nodes.at(NodeId{"s"}).level == 0);
    CHECK(taint2.nodes.at(NodeId{"p"}).level == 0);
  }
}

TEST_CASE("encrypts does not lower the class") {
  std::string text = kChain;
  text.replace(text.find("flow f-store p -> s carries=d-derived"),
               std::string("flow f-store p -> s carries=d-derived").size(),
               "flow f-store p -> s carries=d-derived transform=encrypts");
  Model m = parse_or_die(text);
  TaintMap taint = propagate(m);
  CHECK(taint.nodes.at(NodeId{"s"}).level == 2);
  CHECK(taint.flows.at(FlowId{"f-store"}).effective == FlowClass::IDPF);
}

TEST_CASE("likelihood_of follows the class") {
  DataObject declared{DataId{"d"}, "Photo", SubjectsClass::MayIncludeOthers,
                      Likelihood::from_hundredths(80), {}, {}};
  DataObject bare{DataId{"d2"}, "Photo", SubjectsClass::MayIncludeOthers, std::nullopt, {}, {}};
  CHECK(likelihood_of(FlowClass::IDPF, declared) == Likelihood::certain());
  CHECK(likelihood_of(FlowClass::IDPF, bare) == Likelihood::certain());
  CHECK(likelihood_of(FlowClass::PIDPF, declared) == Likelihood::from_hundredths(80));
  CHECK(likelihood_of(FlowClass::PIDPF, bare) == kDefaultPidpfLikelihood);
  CHECK(kDefaultPidpfLikelihood == Likelihood::from_hundredths(50));
  CHECK_THROWS_AS(likelihood_of(FlowClass::NIDPF, bare), std::logic_error);
}

TEST_CASE("classify_flow is order-independent over carries") {
  std::mt19937_64 rng(1212);
  for (int i = 0; i < 100; ++i) {
    Model m = idpa::testing::random_model(rng);
    for (Flow f : m.flows) {
      FlowClass sorted_class = classify_flow(f, m);
      std::shuffle(f.carries.begin(), f.carries.end(), rng);
      CHECK(classify_flow(f, m) == sorted_class);
    }
  }
}

TEST_CASE("propagation matches the brute-force oracle") {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 400; ++i) {
    Model m = idpa::testing::random_model(rng);
    TaintMap taint = propagate(m);
    CAPTURE(i);
    for (const Node& n : m.nodes) {
      CAPTURE(n.id.value);
      CHECK(taint.nodes.at(n.id).level == idpa::testing::oracle_node_level(m, n.id));
    }
    for (const Flow& f : m.flows) {
      CAPTURE(f.id.value);
      CHECK(level_of(taint.flows.at(f.id).effective) ==
            idpa::testing::oracle_flow_class(m, f));
      for (const auto& [data_id, cls] : taint.flows.at(f.id).per_data) {
        CHECK(level_of(cls) == idpa::testing::oracle_flow_data_class(m, f, data_id));
      }
    }
    for (const DataObject& d : m.data_objects) {
      CHECK(level_of(taint.data_effective.at(d.id)) ==
            idpa::testing::oracle_data_class(m, d.id));
    }
  }
}

TEST_CASE("propagation is idempotent and deterministic") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 50; ++i) {
    Model m = idpa::testing::random_model(rng);
    TaintMap a = propagate(m);
    TaintMap b = propagate(m);
    CHECK(a.nodes == b.nodes);
    CHECK(a.data_effective == b.data_effective);
    for (const auto& [id, ft] : a.flows) {
      CHECK(ft.effective == b.flows.at(id).effective);
      CHECK(ft.per_data == b.flows.at(id).per_data);
    }
  }
}

TEST_CASE("adding a flow never lowers a node level") {
  std::mt19937_64 rng(303);
  idpa::testing::GenOptions opt;
  opt.allow_strips = false;
  for (int i = 0; i < 100; ++i) {
    Model m = idpa::testing::random_model(rng, opt);
    TaintMap before = propagate(m);

    Flow added;
    added.id = FlowId{"f-zz-added"};
    added.source = m.nodes[idpa::testing::pick(rng, 0, static_cast<int>(m.nodes.size()) - 1)].id;
    added.destination =
        m.nodes[idpa::testing::pick(rng, 0, static_cast<int>(m.nodes.size()) - 1)].id;
    added.carries = {
        m.data_objects[idpa::testing::pick(rng, 0, static_cast<int>(m.data_objects.size()) - 1)]
            .id};
    if (idpa::testing::chance(rng, 0.3)) {
      added.transform = Transform::Encrypts;
    }
    m.flows.push_back(added);

    TaintMap after = propagate(m);
    CAPTURE(i);
    for (const Node& n : m.nodes) {
      CHECK(after.nodes.at(n.id).level >= before.nodes.at(n.id).level);
    }
  }
}
