#include "lingua/server.hpp"

#include <fstream>
#include <list>
#include <mutex>
#include <sstream>

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

namespace lingua::server {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using nlohmann::json;

struct Server::Impl {
    asio::io_context io;
    tcp::acceptor acceptor{io};

    struct Connection {
        std::shared_ptr<tcp::socket> socket;
        std::thread thread;
        std::shared_ptr<std::atomic<bool>> done;
    };
    std::mutex mu;
    std::list<Connection> connections;

    void prune() {
        for (auto it = connections.begin(); it != connections.end();) {
            if (it->done->load()) {
                it->thread.join();
                it = connections.erase(it);
            } else {
                ++it;
            }
        }
    }
};

namespace {

Response json_response(int status, const json& body) {
    return {status, "application/json", body.dump()};
}

Response error_response(int status, const std::string& code, const std::string& message,
                        json extra = json::object()) {
    extra["error"] = code;
    extra["message"] = message;
    return json_response(status, extra);
}

std::optional<std::int64_t> stamp(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    if (!j.at(key).is_number()) throw gateway::InvalidRequest(std::string(key) + " must be epoch milliseconds");
    return std::llround(j.at(key).get<double>());
}

gateway::ClientTiming timing_from(const json& j) {
    gateway::ClientTiming t;
    t.input_started_ms = stamp(j, "client_input_started_at");
    t.submitted_ms = stamp(j, "client_submitted_at");
    if (j.contains("task_id") && j.at("task_id").is_string()) t.task_id = j.at("task_id").get<std::string>();
    if (j.contains("session_id") && j.at("session_id").is_string())
        t.session_id = j.at("session_id").get<std::string>();
    return t;
}

std::string split_path(const std::string& target, std::string* query) {
    auto q = target.find('?');
    if (query) *query = q == std::string::npos ? "" : target.substr(q + 1);
    return q == std::string::npos ? target : target.substr(0, q);
}

int query_int(const std::string& query, const std::string& key, int fallback) {
    std::stringstream ss(query);
    for (std::string kv; std::getline(ss, kv, '&');) {
        auto eq = kv.find('=');
        if (eq != std::string::npos && kv.substr(0, eq) == key) {
            try {
                return std::stoi(kv.substr(eq + 1));
            } catch (const std::exception&) {
                return fallback;
            }
        }
    }
    return fallback;
}

std::string mime_for(const std::filesystem::path& p) {
    const auto ext = p.extension().string();
    if (ext == ".html") return "text/html";
    if (ext == ".js" || ext == ".mjs") return "text/javascript";
    if (ext == ".css") return "text/css";
    if (ext == ".json") return "application/json";
    if (ext == ".svg") return "image/svg+xml";
    if (ext == ".png") return "image/png";
    return "application/octet-stream";
}

}  // namespace

Server::Server(gateway::Gateway& gateway, ServerOptions options)
    : gateway_(gateway), options_(std::move(options)), impl_(std::make_unique<Impl>()) {}

Server::~Server() { stop(); }

Response Server::handle(const std::string& method, const std::string& target, const std::string& body) {
    const std::string path = split_path(target, nullptr);
    auto parse_body = [&]() -> json {
        if (body.empty()) return json::object();
        try {
            return json::parse(body);
        } catch (const json::exception&) {
            throw gateway::InvalidRequest("request body is not valid JSON");
        }
    };

    try {
        if (method == "OPTIONS") return {204, "text/plain", ""};
        if (method == "GET" && path == "/api/state") return json_response(200, gateway_.state());
        if (method == "GET" && path == "/api/backends") return json_response(200, gateway_.backends_json());
        if (method == "GET" && path == "/api/timings.csv")
            return {200, "text/csv", gateway_.timings().to_csv()};
        if (method == "GET" && path == "/api/timings") {
            json rows = json::array();
            for (const auto& r : gateway_.timings().rows()) {
                rows.push_back({{"mode", std::string(gateway::to_string(r.mode))},
                                {"command_id", r.command_id},
                                {"operation_seconds", r.operation_seconds ? json(*r.operation_seconds) : json(nullptr)},
                                {"actions", r.actions}});
            }
            return json_response(200, {{"rows", rows}});
        }
        if (method == "POST" && path == "/api/command") {
            json j = parse_body();
            gateway::CommandRequest req;
            if (!j.contains("text") || !j.at("text").is_string())
                throw gateway::InvalidRequest("missing string field 'text'");
            req.text = j.at("text").get<std::string>();
            if (j.contains("robots")) req.robots = j.at("robots").get<std::vector<std::string>>();
            if (j.contains("backend") && j.at("backend").is_string()) req.backend = j.at("backend").get<std::string>();
            req.timing = timing_from(j);
            return json_response(200, gateway::command_result_to_json(gateway_.submit_command(std::move(req))));
        }
        if (method == "POST" && path.rfind("/api/manual/", 0) == 0) {
            const std::string robot = path.substr(std::string("/api/manual/").size());
            json j = parse_body();
            const json& action_json = j.contains("action") ? j.at("action") : j;
            auto action = gateway::manual_action_from_json(action_json);
            auto ack = gateway_.manual_control(robot, action, timing_from(j));
            return json_response(200, {{"action_id", ack.action_id},
                                       {"robot", ack.robot},
                                       {"kind", ack.kind},
                                       {"call", ack.call}});
        }
        if (method == "POST" && path == "/api/scene/load") {
            json j = parse_body();
            world::Scene scene;
            if (j.contains("scene")) scene = world::scene_from_json(j.at("scene"));
            else if (j.contains("path") && j.at("path").is_string())
                scene = world::load_scene_file(j.at("path").get<std::string>());
            else throw gateway::InvalidRequest("expected 'scene' or 'path'");
            gateway_.load_scene(scene);
            return json_response(200, {{"scene", scene.name}, {"robots", scene.robot_ids()}});
        }
        if (method == "GET" && !options_.static_dir.empty() && path.rfind("/api/", 0) != 0) {
            std::filesystem::path rel = path == "/" ? "index.html" : path.substr(1);
            if (rel.string().find("..") != std::string::npos) return error_response(400, "bad_path", "bad path");
            auto file = options_.static_dir / rel;
            std::ifstream in(file, std::ios::binary);
            if (in) {
                std::stringstream buf;
                buf << in.rdbuf();
                return {200, mime_for(file), buf.str()};
            }
        }
        return error_response(404, "not_found", method + " " + path);
    } catch (const gateway::RobotBusy& e) {
        return error_response(409, "robot_busy", e.what(), {{"robot", e.robot()}});
    } catch (const gateway::CapabilityMismatch& e) {
        return error_response(422, "capability_mismatch", e.what());
    } catch (const gateway::LimitsViolation& e) {
        return error_response(422, "limits_violation", e.what());
    } catch (const world::SceneError& e) {
        return error_response(400, "scene_error", e.what(), {{"field", e.field_path()}});
    } catch (const gateway::InvalidRequest& e) {
        return error_response(400, "invalid_request", e.what());
    } catch (const json::exception& e) {
        return error_response(400, "invalid_request", e.what());
    } catch (const std::exception& e) {
        return error_response(500, "internal", e.what());
    }
}

void Server::start() {
    if (accept_thread_.joinable()) return;
    stopping_ = false;
    auto& acc = impl_->acceptor;
    tcp::endpoint ep(asio::ip::make_address(options_.address), options_.port);
    acc.open(ep.protocol());
    acc.set_option(asio::socket_base::reuse_address(true));
    acc.bind(ep);
    acc.listen();
    port_ = acc.local_endpoint().port();
    accept_thread_ = std::thread([this] { accept_loop(); });
}

void Server::stop() {
    if (!accept_thread_.joinable()) return;
    stopping_ = true;
    // wake the blocking accept with a throwaway connection
    try {
        asio::io_context io;
        tcp::socket s(io);
        s.connect({asio::ip::make_address(options_.address == "0.0.0.0" ? "127.0.0.1" : options_.address), port_});
    } catch (const std::exception&) {
    }
    accept_thread_.join();
    boost::system::error_code ec;
    impl_->acceptor.close(ec);

    std::list<Impl::Connection> conns;
    {
        std::lock_guard lk(impl_->mu);
        for (auto& c : impl_->connections) c.socket->shutdown(tcp::socket::shutdown_both, ec);
        conns.splice(conns.end(), impl_->connections);
    }
    for (auto& c : conns) c.thread.join();
}

void Server::accept_loop() {
    while (!stopping_) {
        auto socket = std::make_shared<tcp::socket>(impl_->io);
        boost::system::error_code ec;
        impl_->acceptor.accept(*socket, ec);
        if (stopping_) break;
        if (ec) continue;

        auto done = std::make_shared<std::atomic<bool>>(false);
        std::lock_guard lk(impl_->mu);
        impl_->prune();
        impl_->connections.push_back({socket, std::thread([this, socket, done] {
            beast::flat_buffer buffer;
            boost::system::error_code ec;
            while (!stopping_) {
                http::request<http::string_body> req;
                http::read(*socket, buffer, req, ec);
                if (ec) break;

                if (websocket::is_upgrade(req)) {
                    std::string query;
                    split_path(std::string(req.target()), &query);
                    const int every = std::max(1, query_int(query, "every", options_.default_every_n));
                    websocket::stream<tcp::socket&> ws(*socket);
                    ws.accept(req, ec);
                    if (ec) break;
                    auto sub = gateway_.subscribe(every);
                    while (!stopping_) {
                        if (socket->available(ec) > 0) {
                            beast::flat_buffer inbound;
                            ws.read(inbound, ec);
                            if (ec) break;
                        }
                        auto msg = sub->poll(std::chrono::milliseconds(100));
                        if (!msg) continue;
                        ws.text(true);
                        ws.write(asio::buffer(msg->dump()), ec);
                        if (ec) break;
                    }
                    gateway_.unsubscribe(sub->id());
                    if (ws.is_open()) ws.close(websocket::close_code::normal, ec);
                    break;
                }

                std::string target(req.target());
                Response r = handle(std::string(req.method_string()), target, req.body());
                http::response<http::string_body> res{static_cast<http::status>(r.status), req.version()};
                res.set(http::field::content_type, r.content_type);
                res.set(http::field::access_control_allow_origin, "*");
                res.set(http::field::access_control_allow_methods, "GET, POST, OPTIONS");
                res.set(http::field::access_control_allow_headers, "Content-Type");
                res.keep_alive(req.keep_alive());
                res.body() = std::move(r.body);
                res.prepare_payload();
                http::write(*socket, res, ec);
                if (ec || !res.keep_alive()) break;
            }
            socket->shutdown(tcp::socket::shutdown_both, ec);
            done->store(true);
        }), done});
    }
}

}  // namespace lingua::server
