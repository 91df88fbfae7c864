#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <string>
#include <thread>

#include "lingua/gateway.hpp"

namespace lingua::server {

struct ServerOptions {
    std::string address = "127.0.0.1";
    unsigned short port = 8080;  // 0 picks a free port
    std::filesystem::path static_dir;
    int default_every_n = 4;
};

struct Response {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

/// HTTP API and `/ws/state` stream for one gateway, one thread per connection.
class Server {
public:
    Server(gateway::Gateway& gateway, ServerOptions options);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    void start();
    void stop();
    unsigned short port() const { return port_; }

    /// Routes one request; used by the socket layer and directly by tests.
    Response handle(const std::string& method, const std::string& target, const std::string& body);

private:
    struct Impl;
    void accept_loop();

    gateway::Gateway& gateway_;
    ServerOptions options_;
    std::unique_ptr<Impl> impl_;
    unsigned short port_ = 0;
    std::atomic<bool> stopping_{false};
    std::thread accept_thread_;
};

}  // namespace lingua::server
