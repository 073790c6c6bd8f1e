#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "satvis/derivation.hpp"
#include "satvis/layout.hpp"
#include "satvis/log_parser.hpp"
#include "satvis/serialization.hpp"
#include "satvis/service.hpp"
#include "satvis/transformations.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct Loaded {
  satvis::ParseReport report;
  std::shared_ptr<const satvis::Derivation> derivation;
};

Loaded load(const std::string& path) {
  Loaded loaded;
  loaded.report = satvis::parse_log(read_file(path));
  loaded.derivation = std::make_shared<const satvis::Derivation>(satvis::build(loaded.report.events));
  return loaded;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Saturation attempt explorer: parse, check and serve prover event logs"};
  app.require_subcommand(1);

  std::string file;
  std::string out;
  bool prune = false;
  std::string falsum{satvis::kDefaultFalsum};

  auto* parse = app.add_subcommand("parse", "Write the derivation, view and layout as a JSON document");
  parse->add_option("file", file, "Saturation log")->required()->check(CLI::ExistingFile);
  parse->add_option("--out,-o", out, "Output path (stdout when omitted)");
  parse->add_flag("--prune-activated", prune, "Keep only derivations of activated clauses");

  auto* dot = app.add_subcommand("dot", "Export the derivation as a Graphviz digraph");
  dot->add_option("file", file, "Saturation log")->required()->check(CLI::ExistingFile);
  dot->add_option("--out,-o", out, "Output path (stdout when omitted)");
  dot->add_flag("--prune-activated", prune, "Keep only derivations of activated clauses");

  auto* validate = app.add_subcommand("validate", "Check the event stream; exit 1 on duplicate events or unjustified activations");
  validate->add_option("file", file, "Saturation log")->required()->check(CLI::ExistingFile);

  auto* stats = app.add_subcommand("stats", "Event counts and whether a refutation was found");
  stats->add_option("file", file, "Saturation log")->required()->check(CLI::ExistingFile);
  stats->add_option("--falsum", falsum, "Printed form of the empty clause")->capture_default_str();

  int port = 8080;
  std::string host = "127.0.0.1";
  std::size_t max_log_mb = 64;
  std::size_t max_sessions = 32;
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--port", port, "Listen port (SATVIS_PORT wins if set)")->capture_default_str();
  serve->add_option("--host", host, "Listen address")->capture_default_str();
  serve->add_option("--max-log-mb", max_log_mb, "Largest accepted log upload")->capture_default_str();
  serve->add_option("--max-sessions", max_sessions, "Sessions kept in memory (SATVIS_MAX_SESSIONS wins if set)")
      ->capture_default_str();
  serve->add_option("--falsum", falsum, "Printed form of the empty clause")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*parse || *dot) {
      Loaded loaded = load(file);
      satvis::GraphView view = prune ? satvis::prune_to_activated(loaded.derivation)
                                     : satvis::full_view(loaded.derivation);
      if (*parse) {
        satvis::Layout laid_out = satvis::layout(view);
        write_output(out, satvis::to_document(*loaded.derivation, view, laid_out).dump(2) + "\n");
      } else {
        write_output(out, satvis::to_dot(view));
      }
      for (const auto& skipped : loaded.report.skipped_lines) {
        std::cerr << file << ":" << skipped.line_number << ": " << skipped.reason << "\n";
      }
      return 0;
    }

    if (*validate) {
      Loaded loaded = load(file);
      std::size_t fatal = 0;
      for (const auto& v : loaded.derivation->violations) {
        bool counts = v.property == satvis::Property::DuplicateEvent ||
                      v.property == satvis::Property::ActiveWithoutPrior;
        fatal += counts ? 1 : 0;
        std::cout << "event " << v.event_index << " [" << satvis::to_string(v.property) << "] " << v.message << "\n";
      }
      for (const auto& w : loaded.derivation->warnings) {
        std::cout << "event " << w.event_index << " [warning] " << w.message << "\n";
      }
      std::cout << loaded.report.events.size() << " events, " << loaded.derivation->violations.size()
                << " violations (" << fatal << " of property a/c), " << loaded.derivation->warnings.size()
                << " warnings\n";
      return fatal == 0 ? 0 : 1;
    }

    if (*stats) {
      Loaded loaded = load(file);
      std::size_t counts[3] = {0, 0, 0};
      for (const auto& e : loaded.report.events) ++counts[static_cast<int>(e.kind)];
      auto refutation = satvis::find_refutation(*loaded.derivation, falsum);
      std::cout << "events: " << loaded.report.events.size() << "\n"
                << "new: " << counts[0] << "\n"
                << "passive: " << counts[1] << "\n"
                << "active: " << counts[2] << "\n"
                << "clauses: " << loaded.derivation->nodes.size() << "\n"
                << "skipped lines: " << loaded.report.skipped_lines.size() << "\n"
                << "violations: " << loaded.derivation->violations.size() << "\n";
      if (refutation) {
        std::cout << "refutation: yes (clause " << *refutation << ")\n";
      } else {
        std::cout << "refutation: no\n";
      }
      return 0;
    }

    if (*serve) {
      auto from_env = [](const char* name, auto& value) {
        const char* raw = std::getenv(name);
        if (!raw) return;
        std::string text(raw);
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size()) {
          throw std::runtime_error(std::string(name) + " is not a number: '" + text + "'");
        }
      };
      from_env("SATVIS_PORT", port);
      from_env("SATVIS_MAX_SESSIONS", max_sessions);
      satvis::ServiceConfig config;
      config.max_log_bytes = max_log_mb << 20;
      config.max_sessions = max_sessions;
      config.falsum = falsum;
      satvis::Service service(config);
      satvis::HttpServer server(service);
      int bound = server.bind(host, port);
      if (bound < 0) {
        std::cerr << "cannot listen on " << host << ":" << port << "\n";
        return 2;
      }
      std::cerr << "listening on http://" << host << ":" << bound << "\n";
      return server.listen_after_bind() ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "satvis: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
