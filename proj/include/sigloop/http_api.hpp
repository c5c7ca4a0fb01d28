#pragma once

#include <memory>
#include <string>

#include "sigloop/error.hpp"
#include "sigloop/session_service.hpp"

namespace httplib {
class Server;
}

namespace sigloop {

int http_status_for(ErrorKind kind) noexcept;

// Error body: {"error": <kind>, "reason": <detail>}
Json error_body(const Error& error);

// Installs the session routes on `server`. `service` must outlive it.
void install_routes(httplib::Server& server, SessionService& service);

// Blocks until the server stops.
void serve(SessionService& service, const std::string& host, int port);

}  // namespace sigloop
