#include <doctest.h>

#include "roust/encoding.hpp"
#include "roust/projection.hpp"
#include "roust/wellformedness.hpp"
#include "support.hpp"

using namespace roust;

TEST_SUITE("wellformedness") {
  TEST_CASE("centroid") {
    CHECK(is_centroid(rt::travel_routed(), Role("S")).holds);
    auto c = is_centroid(rt::travel(), Role("S"));
    CHECK_FALSE(c.holds);
    CHECK(c.witness == "B -> A : Suggest");
    CHECK(c.path.empty());
    CHECK_FALSE(is_centroid(rt::travel_routed(), Role("A")).holds);
    CHECK(is_centroid(Global::end(), Role("S")).holds);
  }

  TEST_CASE("wf and wf^s reports") {
    CHECK(check_wf(rt::travel()).ok);
    CHECK(check_wf(rt::merge_g1()).ok);
    WfReport bad = check_wf(rt::merge_g2());
    CHECK_FALSE(bad.ok);
    REQUIRE(bad.failures.size() == 1);
    CHECK(bad.failures[0].role() == Role("C"));
    CHECK(bad.to_string().find("C") != std::string::npos);

    WfReport r = check_wf_routed(rt::travel_routed(), Role("S"));
    CHECK(r.ok);
    WfReport nr = check_wf_routed(rt::travel(), Role("S"));
    CHECK_FALSE(nr.ok);
    REQUIRE(nr.centroid.has_value());
    CHECK_FALSE(nr.centroid->holds);
  }

  TEST_CASE("corpus is wf and wf^s after routing") {
    for (const auto& c : rt::corpus()) {
      CAPTURE(c.name);
      Global g = rt::load_protocol(c.name);
      CHECK(check_wf(g).ok);
      CHECK(check_wf_routed(encode_global(g, Role(c.router)), Role(c.router)).ok);
    }
  }
}

TEST_SUITE("encoding") {
  TEST_CASE("global encoding of the reference terms") {
    CHECK(equivalent(encode_global(rt::travel(), Role("S")), rt::travel_routed()));
    CHECK(equivalent(encode_global(rt::enc_example(), Role("s")), rt::enc_example_routed()));
    CHECK(equivalent(encode_global(Global::end(), Role("s")), Global::end()));
  }

  TEST_CASE("routing through a participant of every interaction is the identity") {
    for (const auto& name : {"Game", "PingPong", "Battleships"}) {
      CAPTURE(name);
      Global g = rt::load_protocol(name);
      Role s(std::string(name) == "PingPong" ? "S" : "Svr");
      CHECK(equivalent(encode_global(g, s), g));
    }
  }

  TEST_CASE("encoding rejects non-canonical input") {
    CHECK_THROWS_AS(encode_global(rt::travel_routed(), Role("S")), NotCanonical);
    CHECK_THROWS_AS(encode_label(ActionLabel::routed_send(Role("S"), Role("A"), Role("B"), MsgLabel("M")),
                                 Role("S")),
                    AlreadyRouted);
  }

  TEST_CASE("label encoding") {
    auto l = ActionLabel::send(Role("p"), Role("q"), MsgLabel("M1"));
    CHECK(encode_label(l, Role("s")) == ActionLabel::routed_send(Role("s"), Role("p"), Role("q"), MsgLabel("M1")));
    auto k = ActionLabel::recv(Role("s"), Role("q"), MsgLabel("M2"));
    CHECK(encode_label(k, Role("s")) == k);
  }

  TEST_CASE("local encoding matches projection of the global encoding") {
    Global g = rt::travel();
    for (const char* r : {"A", "B"}) {
      CAPTURE(r);
      Local lhs = project(encode_global(g, Role("S")), Role(r));
      Local rhs = encode_local(project(g, Role(r)), Role(r), Role("S"));
      CHECK(equivalent(lhs, rhs));
    }
    std::vector<std::string> warnings;
    encode_local(project(g, Role("S")), Role("S"), Role("S"), &warnings);
    CHECK(warnings.size() == 1);
  }

  TEST_CASE("state encoding keeps in-transit messages in transit") {
    Global t = Global::transit(Role("p"), Role("q"), "M1", {{"M1", Global::end()}});
    Global e = encode_state(t, Role("s"));
    CHECK(e.kind() == GKind::TransitRouted);
    CHECK(e.via() == Role("s"));
    CHECK(e.chosen() == "M1");
  }
}
