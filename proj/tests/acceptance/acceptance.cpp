// Acceptance suite: one line per criterion, exit status 1 if any fails.

#include <httplib.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "satvis/derivation.hpp"
#include "satvis/layout.hpp"
#include "satvis/log_parser.hpp"
#include "satvis/serialization.hpp"
#include "satvis/service.hpp"
#include "satvis/transformations.hpp"
#include "support/oracles.hpp"

using namespace satvis;
using nlohmann::json;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
  void expect(bool condition, const std::string& why) {
    if (!condition) fail(why);
  }
};

std::string ids(const IdSet& s) {
  std::string out = "{";
  for (ClauseId id : s) out += (out.size() > 1 ? "," : "") + std::to_string(id);
  return out + "}";
}

// 1. Sample excerpt parses exactly.
Outcome golden_fixture() {
  Outcome o;
  ParseReport report = parse_log(testing::read_fixture("excerpt.log"));
  o.expect(report.events.size() == 12, "expected 12 events, got " + std::to_string(report.events.size()));
  o.expect(report.skipped_lines.size() == 2, "expected 2 skipped lines");
  Derivation d = build(report.events);
  o.expect(d.node(164).rule == "resolution", "164 rule");
  o.expect(d.node(164).premises == std::vector<ClauseId>{92, 94}, "164 premises");
  o.expect(d.node(163).rule == "term algebras distinctness", "163 rule");
  o.expect(d.node(163).premises == std::vector<ClauseId>{162}, "163 premises");
  o.detail = o.ok ? "12 events, 2 skipped, 164/163 match" : o.detail;
  return o;
}

// 2. validate and state_at against the brute-force checkers.
Outcome stream_properties() {
  Outcome o;
  std::mt19937_64 rng(1);
  std::size_t violations = 0;
  for (int round = 0; round < 1000 && o.ok; ++round) {
    auto events = testing::random_stream(rng, 200, round % 2 ? 0.2 : 0.0);
    std::vector<std::pair<std::size_t, std::string>> got;
    for (const auto& v : validate(events)) got.emplace_back(v.event_index, std::string(to_string(v.property)));
    auto expected = testing::brute_force_violations(events);
    std::sort(got.begin(), got.end());
    std::sort(expected.begin(), expected.end());
    violations += expected.size();
    if (got != expected) o.fail("violations differ in stream " + std::to_string(round));

    Derivation d = build(events);
    for (std::size_t t = 0; t <= events.size() && o.ok; ++t) {
      SaturationState s = state_at(d, t);
      auto [active, passive] = testing::brute_force_state(events, t);
      if (s.active != active || s.passive != passive) {
        o.fail("state differs in stream " + std::to_string(round) + " at " + std::to_string(t));
      }
    }
  }
  if (o.ok) o.detail = "1000 streams, " + std::to_string(violations) + " violations matched";
  return o;
}

// 3. Transformations against fixpoint reachability.
Outcome transformation_oracle() {
  Outcome o;
  std::mt19937_64 rng(2);
  for (int round = 0; round < 500 && o.ok; ++round) {
    auto dag = testing::random_dag(rng, 50);
    auto d = std::make_shared<const Derivation>(build(dag.events));
    const std::size_t n = dag.node_count;
    auto reach = testing::reachability(n, dag.edges);
    std::string where = " (dag " + std::to_string(round) + ")";

    for (ClauseId a = 1; a <= n; ++a) {
      IdSet up, down;
      for (ClauseId b = 1; b <= n; ++b) {
        if (reach[b][a]) up.insert(b);
        if (reach[a][b]) down.insert(b);
      }
      o.expect(ancestors(*d, {a}) == up, "ancestors of " + std::to_string(a) + where);
      o.expect(descendants(*d, {a}) == down, "descendants of " + std::to_string(a) + where);
    }

    std::uniform_int_distribution<ClauseId> pick(1, n);
    for (int k = 0; k < 5; ++k) {
      IdSet chosen;
      for (int m = 1 + k % 3; m > 0; --m) chosen.insert(pick(rng));
      IdSet expected;
      for (ClauseId c = 1; c <= n; ++c) {
        if (std::all_of(chosen.begin(), chosen.end(), [&](ClauseId i) { return i == c || reach[i][c]; })) {
          expected.insert(c);
        }
      }
      o.expect(common_consequences(*d, chosen) == expected, "common_consequences of " + ids(chosen) + where);
    }

    IdSet pruned = dag.activated;
    for (ClauseId c = 1; c <= n; ++c) {
      for (ClauseId a : dag.activated) {
        if (reach[c][a]) pruned.insert(c);
      }
    }
    o.expect(prune_to_activated(d).visible == pruned, "prune_to_activated" + where);
  }
  if (o.ok) o.detail = "500 DAGs agree";
  return o;
}

// 4. 5,000-node layered DAG under three seconds, ranks monotone, deterministic.
Outcome layout_performance() {
  Outcome o;
  std::mt19937_64 rng(4);
  const std::size_t layers = 50, width = 100;
  std::vector<SaturationEvent> events;
  std::size_t edges = 0;
  for (std::size_t layer = 0; layer < layers; ++layer) {
    for (std::size_t i = 0; i < width; ++i) {
      ClauseId id = layer * width + i + 1;
      std::vector<ClauseId> premises;
      if (layer > 0) {
        std::uniform_int_distribution<ClauseId> prev((layer - 1) * width + 1, layer * width);
        int count = std::uniform_int_distribution<int>(0, 4)(rng) < 3 ? 2 : 1;
        for (int k = 0; k < count; ++k) premises.push_back(prev(rng));
        if (count == 2 && premises[0] == premises[1]) premises.pop_back();
        edges += premises.size();
      }
      events.push_back(testing::event(EventKind::New, id, premises));
    }
  }
  auto d = std::make_shared<const Derivation>(build(events));
  GraphView view = full_view(d);

  auto hash = [](const Layout& l) {
    std::ostringstream out;
    out.precision(17);
    for (const auto& [id, p] : l.positions) out << id << ':' << p.x << ',' << p.y << ';';
    return std::hash<std::string>{}(out.str());
  };

  auto start = std::chrono::steady_clock::now();
  Layout first = layout(view);
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Layout second = layout(view);

  o.expect(first.positions.size() == 5000, "node count");
  o.expect(seconds < 3.0, "took " + std::to_string(seconds) + " s");
  for (const auto& [u, v] : view.edges()) {
    if (first.rank.at(u) >= first.rank.at(v)) {
      o.fail("rank not increasing on edge " + std::to_string(u) + "->" + std::to_string(v));
      break;
    }
  }
  o.expect(hash(first) == hash(second) && first == second, "two runs differ");
  if (o.ok) {
    std::ostringstream out;
    out.precision(3);
    out << "5000 nodes, " << edges << " edges in " << seconds << " s";
    o.detail = out.str();
  }
  return o;
}

// 5. Document round trip and dot grammar.
Outcome round_trip() {
  Outcome o;
  std::mt19937_64 rng(5);
  for (int round = 0; round < 100 && o.ok; ++round) {
    auto d = std::make_shared<const Derivation>(build(testing::random_stream(rng, 200, 0.1)));
    GraphView view = round % 2 ? prune_to_activated(d) : full_view(d);
    if (!view.visible.empty() && round % 3 == 0) view = highlight(view, {*view.visible.begin()});
    Layout l = layout(view);
    GraphDocument back = from_document(json::parse(to_document(*d, view, l).dump()));
    o.expect(*back.derivation == *d && back.view == view && back.layout == l,
             "round trip differs for derivation " + std::to_string(round));
    std::string dot = to_dot(view);
    testing::DotRecognizer r(dot);
    o.expect(r.accepts() && r.node_statements() == view.visible.size() && r.edge_statements() == view.edges().size(),
             "dot rejected for derivation " + std::to_string(round));
  }
  if (o.ok) o.detail = "100 derivations, dot accepted";
  return o;
}

std::pair<int, std::string> run(const std::string& command) {
  std::string output;
  FILE* pipe = popen((command + " 2>&1").c_str(), "r");
  if (!pipe) return {-1, ""};
  char buffer[4096];
  while (std::size_t n = std::fread(buffer, 1, sizeof buffer, pipe)) output.append(buffer, n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

// 6. The command line tool on the fixtures.
Outcome cli_smoke() {
  Outcome o;
  const std::string cli = SATVIS_CLI;
  const std::string dir = SATVIS_FIXTURE_DIR;
  for (const char* good : {"refutation.log", "saturated.log"}) {
    auto [code, out] = run(cli + " validate " + dir + "/" + good);
    o.expect(code == 0, std::string("validate ") + good + " exited " + std::to_string(code));
  }
  auto [dup, dup_out] = run(cli + " validate " + dir + "/duplicate_new.log");
  o.expect(dup != 0 && dup != -1, "validate duplicate_new.log exited " + std::to_string(dup));

  auto [c1, refuted] = run(cli + " stats " + dir + "/refutation.log");
  o.expect(c1 == 0 && refuted.find("refutation: yes") != std::string::npos, "stats on refutation.log");
  auto [c2, open] = run(cli + " stats " + dir + "/excerpt.log");
  o.expect(c2 == 0 && open.find("refutation: no") != std::string::npos, "stats on excerpt.log");
  if (o.ok) o.detail = "validate 0/0/" + std::to_string(dup) + ", stats yes/no";
  return o;
}

// 7. Endpoint matrix over HTTP, then 16 readers against 1 writer.
Outcome service_contract() {
  Outcome o;
  ServiceConfig config;
  config.max_log_bytes = 4096;
  Service service(config);
  HttpServer server(service);
  int port = server.bind("127.0.0.1", 0);
  if (port <= 0) {
    o.fail("cannot bind");
    return o;
  }
  std::thread listener([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto status = [&](const httplib::Result& r) { return r ? r->status : -1; };
  const std::string sample = testing::read_fixture("excerpt.log");

  auto created = client.Post("/api/sessions", sample, "text/plain");
  o.expect(status(created) == 200, "create session");
  std::string id = created ? json::parse(created->body).value("session_id", "") : "";
  o.expect(created && json::parse(created->body)["node_count"].get<int>() >= 12, "node_count");
  const std::string base = "/api/sessions/" + id;

  struct Case {
    std::string method, path, body;
    int expected;
  };
  const std::vector<Case> matrix{
      {"POST", "/api/sessions", std::string(5000, 'x'), 413},
      {"GET", "/api/sessions", "", 405},
      {"GET", base + "/graph", "", 200},
      {"GET", "/api/sessions/missing/graph", "", 404},
      {"GET", base + "/node/164", "", 200},
      {"GET", base + "/node/2", "", 404},
      {"GET", base + "/search?q=zero", "", 200},
      {"GET", base + "/search?q=92,94&mode=consequences", "", 200},
      {"GET", base + "/search?mode=consequences", "", 400},
      {"GET", base + "/state?event_index=7", "", 200},
      {"GET", base + "/state?event_index=99", "", 400},
      {"POST", base + "/transform", R"({"op":"restrict_ancestors","ids":[164]})", 200},
      {"POST", base + "/transform", R"({"op":"restrict_ancestors","ids":[]})", 400},
      {"POST", base + "/transform", R"({"op":"prune_to_activated"})", 200},
      {"POST", base + "/transform", R"({"op":"merge_preprocessing"})", 200},
      {"POST", base + "/transform", R"({"op":"reset"})", 200},
      {"POST", base + "/transform", "not json", 400},
      {"POST", base + "/highlight", R"({"ids":[164]})", 200},
      {"POST", base + "/highlight", R"({"ids":[2]})", 404},
      {"POST", "/api/sessions/missing/highlight", R"({"ids":[164]})", 404},
  };
  for (const auto& c : matrix) {
    auto r = c.method == "GET" ? client.Get(c.path) : client.Post(c.path, c.body, "application/json");
    o.expect(status(r) == c.expected, c.method + " " + c.path + " gave " + std::to_string(status(r)));
  }

  auto node = client.Get(base + "/node/164");
  if (node) {
    json n = json::parse(node->body);
    o.expect(n["rule"] == "resolution" && n["premises"] == json::array({92, 94}), "node 164 content");
  }
  auto hits = client.Get(base + "/search?q=zero");
  o.expect(hits && json::parse(hits->body)["ids"].size() >= 3, "search zero hits");

  // Readers check each snapshot against the view its own provenance describes.
  auto d = std::make_shared<const Derivation>(build(parse_log(sample).events));
  std::atomic<bool> done{false};
  std::atomic<int> reads{0}, torn{0}, errors{0};
  std::vector<std::thread> readers;
  for (int i = 0; i < 16; ++i) {
    readers.emplace_back([&] {
      httplib::Client c("127.0.0.1", port);
      while (!done) {
        auto r = c.Get(base + "/graph");
        if (!r || r->status != 200) {
          ++errors;
          continue;
        }
        GraphDocument doc = from_document(json::parse(r->body));
        GraphView expected = replay(d, doc.view.provenance);
        bool layout_matches = doc.layout.positions.size() == doc.view.visible.size();
        if (expected.visible != doc.view.visible || !layout_matches) ++torn;
        ++reads;
      }
    });
  }
  httplib::Client writer("127.0.0.1", port);
  const std::vector<std::string> ops{R"({"op":"restrict_ancestors","ids":[164]})", R"({"op":"prune_to_activated"})",
                                     R"({"op":"reset"})", R"({"op":"restrict_descendants","ids":[90]})",
                                     R"({"op":"merge_preprocessing"})", R"({"op":"reset"})"};
  for (int i = 0; i < 60; ++i) {
    auto r = writer.Post(base + "/transform", ops[i % ops.size()], "application/json");
    if (status(r) != 200) ++errors;
  }
  done = true;
  for (auto& t : readers) t.join();
  o.expect(torn == 0, std::to_string(torn) + " torn views");
  o.expect(errors == 0, std::to_string(errors) + " failed requests");

  server.stop();
  listener.join();
  if (o.ok) o.detail = std::to_string(matrix.size()) + " endpoint cases, " + std::to_string(reads) + " concurrent reads";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 golden excerpt fixture", golden_fixture},
      {"2 event-stream properties", stream_properties},
      {"3 transformation oracle", transformation_oracle},
      {"4 layout performance", layout_performance},
      {"5 document round trip", round_trip},
      {"6 cli smoke", cli_smoke},
      {"7 service contract", service_contract},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failed += o.ok ? 0 : 1;
    std::cout << (o.ok ? "PASS" : "FAIL") << "  criterion " << name << ": " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
