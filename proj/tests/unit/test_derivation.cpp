#include <doctest.h>

#include <random>

#include "satvis/derivation.hpp"
#include "satvis/errors.hpp"
#include "support/oracles.hpp"

using namespace satvis;
using satvis::testing::event;

namespace {

Derivation excerpt() { return build(parse_log(testing::read_fixture("excerpt.log")).events); }

std::size_t count(const std::vector<Violation>& list, Property p) {
  return static_cast<std::size_t>(std::count_if(list.begin(), list.end(), [p](const Violation& v) { return v.property == p; }));
}

}  // namespace

TEST_CASE("build replays new events into nodes and edges") {
  std::vector<SaturationEvent> events{event(EventKind::New, 1), event(EventKind::New, 2),
                                      event(EventKind::New, 3, {1, 2})};
  Derivation d = build(events);
  CHECK(d.nodes.size() == 3);
  CHECK(d.node(3).premises == std::vector<ClauseId>{1, 2});
  CHECK(d.node(1).children == std::vector<ClauseId>{3});
  CHECK(d.node(1).is_root);
  CHECK_FALSE(d.node(3).is_root);
  CHECK(d.violations.empty());
  CHECK(d.event_count() == 3);
  CHECK(d.node(3).new_at == 3u);
  CHECK_FALSE(d.node(3).passive_at);
}

TEST_CASE("build on no events") {
  Derivation d = build({});
  CHECK(d.nodes.empty());
  CHECK(d.violations.empty());
  CHECK(d.event_count() == 0);
}

TEST_CASE("build on the sample excerpt") {
  Derivation d = excerpt();
  CHECK(d.node(164).premises == std::vector<ClauseId>{92, 94});
  CHECK(d.node(164).rule == "resolution");

  REQUIRE(d.contains(92));
  CHECK(d.node(92).origin == NodeOrigin::Inferred);
  CHECK(d.node(92).premises == std::vector<ClauseId>{66, 44});
  CHECK(d.node(92).active_at == 3u);

  REQUIRE(d.contains(94));
  CHECK(d.node(94).origin == NodeOrigin::Placeholder);
  CHECK(d.node(94).is_root);
  auto dangling_94 = std::count_if(d.violations.begin(), d.violations.end(), [](const Violation& v) {
    return v.property == Property::DanglingPremise && v.message.find("clause 94 ") != std::string::npos;
  });
  CHECK(dangling_94 == 1);

  // 163's only premise is missing, so it is a root of what the log shows
  CHECK(d.node(163).is_root);
  CHECK(d.node(164).new_at == 4u);
  CHECK(d.node(164).passive_at == 5u);
}

TEST_CASE("validate examples") {
  CHECK(validate(std::vector{event(EventKind::New, 1), event(EventKind::Passive, 1), event(EventKind::Active, 1)})
            .empty());

  auto v = validate(std::vector{event(EventKind::Active, 5)});
  REQUIRE(v.size() == 1);
  CHECK(v[0].event_index == 1);
  CHECK(v[0].property == Property::ActiveWithoutPrior);

  v = validate(std::vector{event(EventKind::New, 1), event(EventKind::New, 1)});
  REQUIRE(v.size() == 1);
  CHECK(v[0].event_index == 2);
  CHECK(v[0].property == Property::DuplicateEvent);

  v = validate(std::vector{event(EventKind::Passive, 4)});
  REQUIRE(v.size() == 1);
  CHECK(v[0].property == Property::PassiveWithoutNew);

  // activated without ever being passive
  v = validate(std::vector{event(EventKind::New, 2), event(EventKind::Active, 2)});
  REQUIRE(v.size() == 1);
  CHECK(v[0].property == Property::ActiveWithoutPrior);
  CHECK(v[0].event_index == 2);
}

TEST_CASE("passive in a later iteration is a warning, not a violation") {
  std::vector events{event(EventKind::New, 1), event(EventKind::Passive, 1), event(EventKind::New, 2),
                     event(EventKind::Active, 1), event(EventKind::Passive, 2)};
  CHECK(validate(events).empty());
  auto w = adjacency_warnings(events);
  REQUIRE(w.size() == 1);
  CHECK(w[0].event_index == 5);
  Derivation d = build(events);
  CHECK(d.violations.empty());
  CHECK(d.warnings.size() == 1);
}

TEST_CASE("build drops cycle-closing edges") {
  std::vector events{event(EventKind::New, 1, {2}), event(EventKind::New, 2, {1}), event(EventKind::New, 3, {3})};
  Derivation d = build(events);
  CHECK(d.node(1).premises == std::vector<ClauseId>{2});
  CHECK(d.node(2).premises.empty());
  CHECK(d.node(3).premises.empty());
  CHECK(count(d.violations, Property::Cycle) == 2);
  CHECK_NOTHROW(topological_order(d));
}

TEST_CASE("repeated premises are kept in order") {
  Derivation d = build(std::vector{event(EventKind::New, 90), event(EventKind::New, 91, {90, 90})});
  CHECK(d.node(91).premises == std::vector<ClauseId>{90, 90});
  CHECK(d.node(90).children == std::vector<ClauseId>{91});
}

TEST_CASE("state_at replays passive and active events") {
  std::vector events{event(EventKind::New, 1), event(EventKind::Passive, 1), event(EventKind::Active, 1),
                     event(EventKind::New, 2), event(EventKind::Passive, 2)};
  Derivation d = build(events);

  auto s = state_at(d, 5);
  CHECK(s.active == std::set<ClauseId>{1});
  CHECK(s.passive == std::set<ClauseId>{2});
  CHECK(s.event_index == 5);

  s = state_at(d, 0);
  CHECK(s.active.empty());
  CHECK(s.passive.empty());

  s = state_at(d, 3);
  CHECK(s.active == std::set<ClauseId>{1});
  CHECK(s.passive.empty());

  CHECK_THROWS_AS(state_at(d, 6), std::out_of_range);
}

TEST_CASE("find_refutation") {
  std::vector events{event(EventKind::New, 1), event(EventKind::New, 999, {1})};
  events[1].clause_text = "$false";
  CHECK(find_refutation(build(events)) == ClauseId{999});
  CHECK_FALSE(find_refutation(excerpt()));
  CHECK_FALSE(find_refutation(build({})));

  events[1].clause_text = "#";
  CHECK_FALSE(find_refutation(build(events)));
  CHECK(find_refutation(build(events), "#") == ClauseId{999});
}

TEST_CASE("sanitize") {
  SUBCASE("referenced placeholder survives") {
    Derivation d = excerpt();
    Derivation s = sanitize(d);
    CHECK(s.contains(94));
    CHECK(s == d);
  }
  SUBCASE("unreferenced placeholder is removed") {
    Derivation d = build(std::vector{event(EventKind::New, 1), event(EventKind::New, 2, {1, 7})});
    // the edge to 7 was pruned elsewhere
    d.nodes.at(2).premises = {1};
    d.reindex();
    REQUIRE(d.contains(7));
    Derivation s = sanitize(d);
    CHECK_FALSE(s.contains(7));
    CHECK(s.node(2).premises == std::vector<ClauseId>{1});
    CHECK(s.nodes.size() == 2);
  }
  SUBCASE("identical placeholder roots collapse onto the smaller id") {
    Derivation d = build(std::vector{event(EventKind::New, 10, {3, 4})});
    d.nodes.at(3).clause_text = d.nodes.at(4).clause_text = "p(a)";
    d.nodes.at(3).rule = d.nodes.at(4).rule = "input";
    Derivation s = sanitize(d);
    CHECK(s.contains(3));
    CHECK_FALSE(s.contains(4));
    CHECK(s.node(10).premises == std::vector<ClauseId>{3});
    CHECK(sanitize(s) == s);
  }
  SUBCASE("clean derivation is unchanged") {
    Derivation d = build(std::vector{event(EventKind::New, 1), event(EventKind::New, 2, {1})});
    CHECK(sanitize(d) == d);
  }
}

TEST_CASE("random streams: invariants (property)") {
  std::mt19937_64 rng(20240611);
  for (int round = 0; round < 150; ++round) {
    const double noise = round % 3 == 0 ? 0.0 : 0.15;
    auto events = testing::random_stream(rng, 200, noise);
    Derivation d = build(events);
    CAPTURE(round);

    CHECK_NOTHROW(topological_order(d));
    CHECK(sanitize(sanitize(d)) == sanitize(d));

    SaturationState incremental;
    for (std::size_t t = 1; t <= d.event_count(); ++t) {
      SaturationState before = incremental;
      apply_event(incremental, d.timeline[t - 1]);
      REQUIRE(incremental == state_at(d, t));
      for (ClauseId a : before.active) CHECK(incremental.active.contains(a));
      for (ClauseId a : incremental.active) CHECK_FALSE(incremental.passive.contains(a));
    }

    if (noise == 0.0) {
      CHECK(d.violations.empty());
      for (const auto& [id, node] : d.nodes) {
        if (!node.active_at) continue;
        REQUIRE(node.passive_at);
        REQUIRE(node.new_at);
        CHECK(*node.new_at < *node.passive_at);
        CHECK(*node.passive_at < *node.active_at);
      }
    }
  }
}

TEST_CASE("node lookup reports unknown ids") {
  CHECK_THROWS_AS(excerpt().node(12345), NotFoundError);
}
