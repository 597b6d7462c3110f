// SPDX-License-Identifier: Apache-2.0
#include "imagespace/service.hpp"

#include <httplib.h>

#include <cstdlib>
#include <functional>

#include "imagespace/consistency.hpp"
#include "imagespace/daml_io.hpp"
#include "imagespace/derivations.hpp"
#include "imagespace/error.hpp"
#include "imagespace/json_codec.hpp"
#include "imagespace/query.hpp"
#include "imagespace/store.hpp"
#include "imagespace/viz.hpp"

namespace imagespace {
namespace {

using Json = nlohmann::json;
namespace codec = imagespace::json;

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::MalformedXml:
    case ErrorCode::UnknownConstruct:
    case ErrorCode::DanglingReference:
    case ErrorCode::InvalidEdit:
    case ErrorCode::SyntaxError:
    case ErrorCode::UnsafeQuery:
      return 400;
    case ErrorCode::UnknownClass:
    case ErrorCode::UnknownProperty:
    case ErrorCode::UnknownInstance:
    case ErrorCode::UnknownOntology:
      return 404;
    case ErrorCode::ConstraintViolation:
    case ErrorCode::AlreadyInitialized:
      return 409;
    case ErrorCode::InconsistentDoc:
    case ErrorCode::ValidationFailed:
      return 422;
    default:
      return 500;
  }
}

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", "application/json");
}

void send_error(httplib::Response& res, const Error& e) {
  Json body = {{"error", to_string(e.code())}, {"message", e.what()}};
  if (!e.violations().empty()) body["violations"] = codec::to_json(e.violations());
  send_json(res, status_for(e.code()), body);
}

Json parse_body(const httplib::Request& req) {
  try {
    return Json::parse(req.body);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::InvalidArgument, std::string("request body is not JSON: ") + ex.what());
  }
}

bool flag(const std::string& text) { return text == "1" || text == "true" || text == "yes"; }

}  // namespace

void apply_environment(ServiceConfig& config) {
  if (const char* db = std::getenv("IMAGESPACE_DB"); db && *db) config.database = db;
  if (const char* images = std::getenv("IMAGESPACE_IMAGES"); images && *images) config.image_base = images;
  if (const char* listen = std::getenv("IMAGESPACE_LISTEN"); listen && *listen) {
    const std::string s(listen);
    const auto colon = s.rfind(':');
    if (colon == std::string::npos) throw Error(ErrorCode::InvalidArgument, "IMAGESPACE_LISTEN must be host:port");
    if (colon > 0) config.host = s.substr(0, colon);
    try {
      config.port = std::stoi(s.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "IMAGESPACE_LISTEN has an invalid port");
    }
  }
}

struct Service::Impl {
  ServiceConfig config;
  httplib::Server server;

  using Handler = std::function<void(Store&, const httplib::Request&, httplib::Response&)>;

  // Each request gets its own connection; nothing is cached across requests.
  httplib::Server::Handler wrap(Handler h) {
    return [this, h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      try {
        sql::Database db(config.database);
        Store store(db);
        if (!store.initialized()) throw Error(ErrorCode::ConnectionFailure, "database schema is not initialized");
        h(store, req, res);
      } catch (const Error& e) {
        send_error(res, e);
      } catch (const std::exception& e) {
        send_json(res, 500, {{"error", "Internal"}, {"message", e.what()}});
      }
    };
  }

  void routes() {
    server.Get("/ontologies", wrap([](Store& store, const httplib::Request&, httplib::Response& res) {
      Json out = Json::array();
      for (const auto& s : store.list_ontologies()) {
        out.push_back({{"id", s.id}, {"versionInfo", s.version_info}, {"comment", s.comment}});
      }
      send_json(res, 200, out);
    }));

    server.Post("/ontologies", wrap([this](Store& store, const httplib::Request& req, httplib::Response& res) {
      ParseReport report = parse_ontology(req.body, config.strict_parse);
      if (store.has_ontology(report.doc.id)) {
        throw Error(ErrorCode::ConstraintViolation, "ontology " + report.doc.id + " already exists");
      }
      store.save_ontology(report.doc);
      Json warnings = Json::array();
      for (const auto& w : report.warnings) {
        warnings.push_back({{"line", w.line}, {"column", w.column}, {"message", w.message}});
      }
      res.set_header("Location", "/ontologies/" + report.doc.id);
      send_json(res, 201, {{"id", report.doc.id}, {"warnings", warnings}});
    }));

    server.Get(R"(/ontologies/(.+)/classes/(.+)/form)",
               wrap([](Store& store, const httplib::Request& req, httplib::Response& res) {
                 const OntologyDoc doc = store.load_ontology(req.matches[1].str());
                 send_json(res, 200, codec::to_json(annotation_form_spec(doc, req.matches[2].str())));
               }));

    server.Get(R"(/ontologies/(.+)/classes/(.+)/candidates)",
               wrap([](Store& store, const httplib::Request& req, httplib::Response& res) {
                 const OntologyDoc doc = store.load_ontology(req.matches[1].str());
                 const std::string cid = req.matches[2].str();
                 if (!req.has_param("relation")) throw Error(ErrorCode::InvalidArgument, "missing relation parameter");
                 auto rel = class_relation_from_string(req.get_param_value("relation"));
                 if (!rel) throw Error(ErrorCode::InvalidArgument, "unknown relation " + req.get_param_value("relation"));
                 auto candidates = candidate_classes(doc, cid, *rel);
                 send_json(res, 200,
                           {{"classID", cid},
                            {"relation", to_string(*rel)},
                            {"candidates", std::vector<Identifier>(candidates.begin(), candidates.end())}});
               }));

    server.Post(R"(/ontologies/(.+)/edits)", wrap([](Store& store, const httplib::Request& req, httplib::Response& res) {
      const OntologyDoc doc = store.load_ontology(req.matches[1].str());
      const Edit edit = codec::edit_from_json(parse_body(req), doc);
      const EditOutcome outcome = apply_edit(doc, edit);
      if (std::holds_alternative<Rejected>(outcome)) {
        send_json(res, 409, codec::to_json(outcome));
        return;
      }
      const OntologyDoc& next =
          std::holds_alternative<Applied>(outcome) ? std::get<Applied>(outcome).doc : std::get<Cascaded>(outcome).doc;
      store.replace_ontology(next);
      send_json(res, 200, codec::to_json(outcome));
    }));

    server.Post(R"(/ontologies/(.+)/instances)",
                wrap([](Store& store, const httplib::Request& req, httplib::Response& res) {
                  const std::string oid = req.matches[1].str();
                  const OntologyDoc doc = store.load_ontology(oid);
                  const InstanceGraph graph = codec::annotations_from_json(parse_body(req), doc);
                  store.save_instances(oid, graph);
                  Json saved = Json::array();
                  for (const auto& [id, inst] : graph.instances) saved.push_back(id);
                  send_json(res, 201, {{"saved", saved}});
                }));

    server.Post(R"(/ontologies/(.+)/query)", wrap([this](Store& store, const httplib::Request& req, httplib::Response& res) {
      std::string text = req.body;
      CompileOptions options;
      options.closure = config.closure_default;
      if (req.get_header_value("Content-Type").starts_with("application/json")) {
        const Json body = parse_body(req);
        if (!body.is_object() || !body.contains("query") || !body.at("query").is_string()) {
          throw Error(ErrorCode::InvalidArgument, "JSON query body needs a string field 'query'");
        }
        text = body.at("query").get<std::string>();
        if (body.contains("closure")) options.closure = body.at("closure").get<bool>();
      }
      if (req.has_param("closure")) options.closure = flag(req.get_param_value("closure"));
      const TripleQuery q = parse_query(text);
      const Bindings b = execute_query(store, req.matches[1].str(), q, options);
      Json out = Json::array();
      for (const auto& row : b.rows) {
        if (b.vars.size() == 1) {
          out.push_back(row.front());
        } else {
          out.push_back(row);
        }
      }
      send_json(res, 200, out);
    }));

    server.Get(R"(/ontologies/(.+)/graph)", wrap([](Store& store, const httplib::Request& req, httplib::Response& res) {
      const OntologyDoc doc = store.load_ontology(req.matches[1].str());
      const std::string view_name = req.has_param("view") ? req.get_param_value("view") : "class";
      const std::string layout_name = req.has_param("layout") ? req.get_param_value("layout") : "hierarchical";
      auto view = view_kind_from_string(view_name);
      if (!view) throw Error(ErrorCode::InvalidArgument, "unknown view " + view_name);
      std::uint64_t seed = 0;
      if (req.has_param("seed")) {
        try {
          seed = std::stoull(req.get_param_value("seed"));
        } catch (const std::exception&) {
          throw Error(ErrorCode::InvalidArgument, "seed must be a non-negative integer");
        }
      }
      const ViewGraph g = build_view(doc, *view);
      LayoutResult layout;
      if (layout_name == "hierarchical") {
        layout = layout_hierarchical(g);
      } else if (layout_name == "organic") {
        layout = layout_organic(g, seed);
      } else {
        throw Error(ErrorCode::InvalidArgument, "unknown layout " + layout_name);
      }
      res.status = 200;
      res.set_content(export_graph(g, layout, GraphFormat::Json), "application/json");
    }));

    server.Get(R"(/ontologies/(.+))", wrap([](Store& store, const httplib::Request& req, httplib::Response& res) {
      res.status = 200;
      res.set_content(serialize_ontology(store.load_ontology(req.matches[1].str())), "application/rdf+xml");
    }));

    if (!config.image_base.empty()) server.set_mount_point("/images", config.image_base);
  }
};

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>()) {
  impl_->config = std::move(config);
  impl_->routes();
}

Service::~Service() = default;

int Service::bind() {
  {
    sql::Database db(impl_->config.database);
    Store store(db);
    if (!store.initialized()) {
      throw Error(ErrorCode::ConnectionFailure, "database " + impl_->config.database + " is not initialized");
    }
  }
  const auto& c = impl_->config;
  if (c.port == 0) {
    const int port = impl_->server.bind_to_any_port(c.host);
    if (port < 0) throw Error(ErrorCode::ConnectionFailure, "cannot bind " + c.host);
    return port;
  }
  if (!impl_->server.bind_to_port(c.host, c.port)) {
    throw Error(ErrorCode::ConnectionFailure, "cannot bind " + c.host + ":" + std::to_string(c.port));
  }
  return c.port;
}

void Service::listen() { impl_->server.listen_after_bind(); }

void Service::stop() { impl_->server.stop(); }

}  // namespace imagespace
