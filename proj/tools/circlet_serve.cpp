// circlet-serve: HTTP session service.

#include <httplib.h>

#include <CLI11.hpp>
#include <iostream>

#include "circlet/service.hpp"

int main(int argc, char** argv) {
  CLI::App app{"HTTP service for circlet proof sessions"};
  std::string listen = "127.0.0.1:8080", cors;
  std::size_t cap = 5000;
  app.add_option("--listen", listen, "host:port to bind");
  app.add_option("--cors-origin", cors, "Origin allowed to call the API (e.g. http://localhost:5173)");
  app.add_option("--step-cap", cap, "Steps per /tactic request before a continuation token is returned")
      ->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  auto colon = listen.rfind(':');
  if (colon == std::string::npos) {
    std::cerr << "circlet-serve: --listen expects host:port\n";
    return 1;
  }
  std::string host = listen.substr(0, colon);
  int port = std::stoi(listen.substr(colon + 1));

  circlet::Service service(cap);
  httplib::Server server;
  auto add_cors = [&](httplib::Response& res) {
    if (cors.empty()) return;
    res.set_header("Access-Control-Allow-Origin", cors);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  };
  auto handler = [&](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query[k] = v;
    circlet::Response r = service.handle(req.method, req.path, query, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
    add_cors(res);
  };
  server.Get(R"(/.*)", handler);
  server.Post(R"(/.*)", handler);
  server.Options(R"(/.*)", [&](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    add_cors(res);
  });
  // Port 0 picks a free port; the chosen address is printed on stdout.
  if (port == 0) {
    port = server.bind_to_any_port(host);
    if (port < 0) {
      std::cerr << "circlet-serve: cannot bind " << host << "\n";
      return 1;
    }
  } else if (!server.bind_to_port(host, port)) {
    std::cerr << "circlet-serve: cannot bind " << listen << "\n";
    return 1;
  }
  std::cout << "listening on " << host << ":" << port << std::endl;
  if (!server.listen_after_bind()) return 1;
  return 0;
}
