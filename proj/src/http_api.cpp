#include "sigloop/http_api.hpp"

#include <httplib.h>

#include <iostream>

namespace sigloop {
namespace {

constexpr const char* kJson = "application/json";

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

Json parse_body(const httplib::Request& req, ErrorKind kind) {
  if (req.body.empty()) return Json::object();
  try {
    return Json::parse(req.body);
  } catch (const Json::exception& e) {
    throw Error(kind, std::string("request body is not JSON: ") + e.what());
  }
}

// Paths supplied over HTTP are resolved inside the data directory.
std::filesystem::path confined_path(const SessionService& service, const std::string& name) {
  const std::filesystem::path p(name);
  if (name.empty() || p.is_absolute() || p.filename() != p || name == "." || name == "..")
    throw Error(ErrorKind::ConfigError, "path must be a plain file name inside the data directory");
  return service.options().data_dir / p;
}

Dataset dataset_from_upload(const std::string& content, const std::string& filename) {
  const auto ext = std::filesystem::path(filename).extension().string();
  const auto stem = filename.empty() ? std::string("upload") : std::filesystem::path(filename).stem().string();
  if (ext == ".json") return parse_json_dataset(content);
  return parse_csv_dataset(content, stem);
}

SessionHandle create_from_request(SessionService& service, const httplib::Request& req) {
  if (req.is_multipart_form_data()) {
    if (!req.has_file("dataset")) throw Error(ErrorKind::MalformedDataset, "multipart field 'dataset' missing");
    const auto file = req.get_file_value("dataset");
    SessionConfig config;
    if (req.has_file("config")) {
      const auto text = req.get_file_value("config").content;
      try {
        config = config_from_json(Json::parse(text));
      } catch (const Json::exception& e) {
        throw Error(ErrorKind::ConfigError, e.what());
      }
    }
    return service.create_session(dataset_from_upload(file.content, file.filename), config);
  }

  const auto type = req.get_header_value("Content-Type");
  if (type.rfind("text/csv", 0) == 0) return service.create_session(parse_csv_dataset(req.body, "upload"), {});

  const Json body = parse_body(req, ErrorKind::MalformedDataset);
  if (!body.is_object() || !body.contains("dataset"))
    throw Error(ErrorKind::MalformedDataset, "expected {\"dataset\": name | dataset object}");
  const SessionConfig config = body.contains("config") ? config_from_json(body["config"]) : SessionConfig{};
  const auto& ds = body["dataset"];
  if (ds.is_string()) return service.create_builtin_session(ds.get<std::string>(), config);
  if (ds.is_object()) return service.create_session(parse_json_dataset(ds.dump()), config);
  throw Error(ErrorKind::MalformedDataset, "dataset must be a builtin name or a dataset object");
}

template <class F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_json(res, http_status_for(e.kind()), error_body(e));
    } catch (const std::exception& e) {
      send_json(res, 500, {{"error", "Internal"}, {"reason", e.what()}});
    }
  };
}

}  // namespace

int http_status_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotFound:
    case ErrorKind::DatasetMissing:
      return 404;
    case ErrorKind::SelectionError:
      return 422;
    case ErrorKind::IterationTimeout:
      return 504;
    case ErrorKind::InvalidMatrix:
    case ErrorKind::FamilyMismatch:
      return 500;
    default:
      return 400;
  }
}

Json error_body(const Error& e) { return {{"error", std::string(to_string(e.kind()))}, {"reason", e.detail()}}; }

void install_routes(httplib::Server& server, SessionService& service) {
  server.Post("/sessions", guarded([&service](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 201, handle_to_json(create_from_request(service, req)));
  }));
  server.Get(R"(/sessions/([^/]+)/state)", guarded([&service](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, service.get_state(req.matches[1]));
  }));
  server.Post(R"(/sessions/([^/]+)/iterations)", guarded([&service](const httplib::Request& req, httplib::Response& res) {
    const auto selection = selection_from_json(parse_body(req, ErrorKind::SelectionError));
    send_json(res, 200, service.post_iteration(req.matches[1], selection));
  }));
  server.Get(R"(/sessions/([^/]+)/report)", guarded([&service](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, service.report(req.matches[1]));
  }));
  server.Post(R"(/sessions/([^/]+)/save)", guarded([&service](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    const Json body = parse_body(req, ErrorKind::ConfigError);
    std::optional<std::filesystem::path> path;
    if (body.is_object() && body.contains("path")) {
      if (!body["path"].is_string()) throw Error(ErrorKind::ConfigError, "path must be a string");
      path = confined_path(service, body["path"].get<std::string>());
    }
    const auto written = service.save_session(id, path);
    auto j = handle_to_json(service.handle(id));
    j["path"] = written.filename().string();
    send_json(res, 200, j);
  }));
  server.Post("/sessions/load", guarded([&service](const httplib::Request& req, httplib::Response& res) {
    const Json body = parse_body(req, ErrorKind::ConfigError);
    if (!body.is_object() || !body.contains("path") || !body["path"].is_string())
      throw Error(ErrorKind::ConfigError, "expected {\"path\": file name}");
    send_json(res, 201, handle_to_json(service.load_session(confined_path(service, body["path"].get<std::string>()))));
  }));
}

void serve(SessionService& service, const std::string& host, int port) {
  httplib::Server server;
  install_routes(server, service);
  std::cerr << "sigloop listening on " << host << ":" << port << '\n';
  if (!server.listen(host, port)) throw Error(ErrorKind::ConfigError, "cannot listen on port " + std::to_string(port));
}

}  // namespace sigloop
