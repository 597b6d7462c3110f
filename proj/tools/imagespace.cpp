// SPDX-License-Identifier: Apache-2.0
//
// Command line front end: batch import/export, checks, annotation, queries,
// graph export and the HTTP service.
#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "imagespace/consistency.hpp"
#include "imagespace/daml_io.hpp"
#include "imagespace/error.hpp"
#include "imagespace/json_codec.hpp"
#include "imagespace/query.hpp"
#include "imagespace/service.hpp"
#include "imagespace/store.hpp"
#include "imagespace/viz.hpp"

namespace {

using namespace imagespace;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << text;
}

void print_violations(const std::vector<Violation>& vs) {
  for (const auto& v : vs) std::cout << format_violation(v) << "\n";
}

void print_warnings(const ParseReport& report) {
  for (const auto& w : report.warnings) {
    std::cerr << "warning: line " << w.line << ", column " << w.column << ": " << w.message << "\n";
  }
}

Store open_store(sql::Database& db) {
  Store store(db);
  if (!store.initialized()) {
    throw Error(ErrorCode::ConnectionFailure, "database is not initialized; run init-db first");
  }
  return store;
}

Service* running_service = nullptr;

extern "C" void handle_signal(int) {
  if (running_service) running_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ontology store, annotation and retrieval for image repositories"};
  app.require_subcommand(1);

  std::string db_path = "imagespace.db";
  if (const char* env = std::getenv("IMAGESPACE_DB"); env && *env) db_path = env;
  app.add_option("--db", db_path, "SQLite database file (env IMAGESPACE_DB)");

  auto* init = app.add_subcommand("init-db", "Create the relational schema");
  bool force = false;
  init->add_flag("--force", force, "Drop an existing schema first");

  std::string file;
  bool strict = false;
  auto* import = app.add_subcommand("import", "Import a DAML+OIL document");
  import->add_option("file", file, "DAML+OIL file")->required();
  import->add_flag("--strict", strict, "Reject unsupported constructs");

  std::string ontology;
  std::string output;
  auto* exporter = app.add_subcommand("export", "Write a stored ontology as DAML+OIL");
  exporter->add_option("ontology", ontology, "Ontology identifier")->required();
  exporter->add_option("-o,--output", output, "Output file (default stdout)");

  auto* check = app.add_subcommand("check", "Check a DAML+OIL document for consistency");
  check->add_option("file", file, "DAML+OIL file")->required();
  check->add_flag("--strict", strict, "Reject unsupported constructs");

  std::string annotations;
  auto* annotate = app.add_subcommand("annotate", "Validate and store image annotations");
  annotate->add_option("ontology", ontology, "Ontology identifier")->required();
  annotate->add_option("annotations", annotations, "Annotation JSON file")->required();

  std::string query_file;
  bool no_closure = false;
  auto* query = app.add_subcommand("query", "Run a conjunctive triple query");
  query->add_option("ontology", ontology, "Ontology identifier")->required();
  query->add_option("--query-file", query_file, "File holding the query")->required();
  query->add_flag("--no-closure", no_closure, "Match instanceOf against the named class only");
  query->add_flag("--strict", strict, "Unknown properties are errors");

  std::string view = "class";
  std::string layout = "hierarchical";
  std::string format = "json";
  std::uint64_t seed = 0;
  auto* viz = app.add_subcommand("viz", "Export a graph view with layout");
  viz->add_option("ontology", ontology, "Ontology identifier")->required();
  viz->add_option("--view", view, "class, classWithRestrictions, property or individual");
  viz->add_option("--layout", layout, "hierarchical or organic");
  viz->add_option("--seed", seed, "Seed for the organic layout");
  viz->add_option("--format", format, "json or dot");
  viz->add_option("-o,--output", output, "Output file (default stdout)");

  ServiceConfig config;
  std::string listen;
  std::string images;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--listen", listen, "host:port (env IMAGESPACE_LISTEN)");
  serve->add_option("--images", images, "Directory served under /images (env IMAGESPACE_IMAGES)");
  serve->add_flag("--strict", strict, "Reject unsupported constructs on import");
  serve->add_flag("--no-closure", no_closure, "Default queries to no subclass closure");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*init) {
      sql::Database db(db_path);
      Store(db).init_schema(force);
      return 0;
    }
    if (*check) {
      try {
        const ParseReport report = parse_ontology(read_file(file), strict);
        print_warnings(report);
        const auto violations = check_ontology(report.doc);
        print_violations(violations);
        return violations.empty() ? 0 : 1;
      } catch (const Error& e) {
        if (e.violations().empty()) throw;
        print_violations(e.violations());
        return 1;
      }
    }
    if (*import) {
      const ParseReport report = parse_ontology(read_file(file), strict);
      print_warnings(report);
      sql::Database db(db_path);
      Store store = open_store(db);
      std::cout << store.save_ontology(report.doc) << "\n";
      return 0;
    }
    if (*exporter) {
      sql::Database db(db_path);
      Store store = open_store(db);
      write_output(output, serialize_ontology(store.load_ontology(ontology)));
      return 0;
    }
    if (*annotate) {
      sql::Database db(db_path);
      Store store = open_store(db);
      const OntologyDoc doc = store.load_ontology(ontology);
      const auto graph = json::annotations_from_json(nlohmann::json::parse(read_file(annotations)), doc);
      store.save_instances(ontology, graph);
      return 0;
    }
    if (*query) {
      sql::Database db(db_path);
      Store store = open_store(db);
      CompileOptions options;
      options.closure = !no_closure;
      options.strict = strict;
      const Bindings b = execute_query(store, ontology, parse_query(read_file(query_file)), options);
      for (const auto& row : b.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) std::cout << (i ? "\t" : "") << row[i];
        std::cout << "\n";
      }
      return 0;
    }
    if (*viz) {
      sql::Database db(db_path);
      Store store = open_store(db);
      auto kind = view_kind_from_string(view);
      if (!kind) throw Error(ErrorCode::InvalidArgument, "unknown view " + view);
      const ViewGraph g = build_view(store.load_ontology(ontology), *kind);
      LayoutResult placed;
      if (layout == "hierarchical") {
        placed = layout_hierarchical(g);
      } else if (layout == "organic") {
        placed = layout_organic(g, seed);
      } else {
        throw Error(ErrorCode::InvalidArgument, "unknown layout " + layout);
      }
      if (format != "json" && format != "dot") throw Error(ErrorCode::InvalidArgument, "unknown format " + format);
      write_output(output, export_graph(g, placed, format == "dot" ? GraphFormat::Dot : GraphFormat::Json));
      return 0;
    }
    if (*serve) {
      config.database = db_path;
      apply_environment(config);
      if (app.get_option("--db")->count() > 0) config.database = db_path;
      if (!listen.empty()) {
        const auto colon = listen.rfind(':');
        if (colon == std::string::npos) throw Error(ErrorCode::InvalidArgument, "--listen must be host:port");
        if (colon > 0) config.host = listen.substr(0, colon);
        config.port = std::stoi(listen.substr(colon + 1));
      }
      if (!images.empty()) config.image_base = images;
      config.strict_parse = strict;
      config.closure_default = !no_closure;
      Service service(config);
      const int port = service.bind();
      std::cerr << "listening on " << config.host << ":" << port << "\n";
      running_service = &service;
      std::signal(SIGINT, handle_signal);
      std::signal(SIGTERM, handle_signal);
      service.listen();
      running_service = nullptr;
      return 0;
    }
  } catch (const Error& e) {
    print_violations(e.violations());
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
