#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include <httplib.h>

#include "lingua/planner.hpp"

namespace lingua::planner {

using nlohmann::json;

namespace {

std::string env_or(const char* name, std::string fallback) {
    const char* v = std::getenv(name);
    return v && *v ? std::string(v) : fallback;
}

struct Endpoint {
    std::string origin;  // scheme://host[:port]
    std::string path;    // prefix, no trailing slash
};

Endpoint split_url(const std::string& url) {
    auto scheme = url.find("://");
    auto host_start = scheme == std::string::npos ? 0 : scheme + 3;
    auto slash = url.find('/', host_start);
    Endpoint e;
    e.origin = slash == std::string::npos ? url : url.substr(0, slash);
    e.path = slash == std::string::npos ? "" : url.substr(slash);
    while (!e.path.empty() && e.path.back() == '/') e.path.pop_back();
    return e;
}

}  // namespace

HttpChatConfig HttpChatConfig::from_environment() {
    HttpChatConfig c;
    c.base_url = env_or("LINGUA_LLM_BASE_URL", "http://127.0.0.1:11434/v1");
    c.model = env_or("LINGUA_LLM_MODEL", "llama3.1:8b");
    c.key_env_var = env_or("LINGUA_LLM_KEY_VAR", "");
    return c;
}

HttpChatBackend::HttpChatBackend(HttpChatConfig config) : config_(std::move(config)) {
    if (!(config_.timeout_seconds > 0.0)) throw std::invalid_argument("timeout must be > 0");
    if (config_.max_retries < 0) throw std::invalid_argument("retries must be >= 0");
}

json HttpChatBackend::request_body(const HttpChatConfig& config, const ChatRequest& request) {
    return {{"model", config.model},
            {"messages",
             json::array({{{"role", "system"}, {"content", request.prompt.system}},
                          {{"role", "user"}, {"content", request.prompt.user}}})},
            {"temperature", request.temperature}};
}

std::string HttpChatBackend::reply_content(const json& response) {
    const auto& choices = response.at("choices");
    if (!choices.is_array() || choices.empty()) return {};
    const auto& content = choices.at(0).at("message").at("content");
    return content.is_string() ? content.get<std::string>() : std::string{};
}

std::string HttpChatBackend::complete(const ChatRequest& request) {
    const Endpoint ep = split_url(config_.base_url);
    const std::string body = request_body(config_, request).dump();
    std::string token;
    if (!config_.key_env_var.empty()) token = env_or(config_.key_env_var.c_str(), "");

    thread_local std::mt19937_64 rng{std::random_device{}()};
    const int attempts = 1 + config_.max_retries;
    std::string last_error = "no attempt made";
    bool last_was_empty = false;

    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0) {
            double ceiling = std::min(config_.backoff_cap_seconds,
                                      config_.backoff_base_seconds * std::pow(2.0, attempt - 1));
            std::uniform_real_distribution<double> jitter(0.0, std::max(0.0, ceiling));
            std::this_thread::sleep_for(std::chrono::duration<double>(jitter(rng)));
        }

        httplib::Client cli(ep.origin);
        auto secs = static_cast<time_t>(config_.timeout_seconds);
        auto usecs = static_cast<time_t>((config_.timeout_seconds - static_cast<double>(secs)) * 1e6);
        cli.set_connection_timeout(secs, usecs);
        cli.set_read_timeout(secs, usecs);
        cli.set_write_timeout(secs, usecs);
        if (!token.empty()) cli.set_bearer_token_auth(token);

        auto res = cli.Post(ep.path + "/chat/completions", body, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            last_was_empty = false;
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            last_was_empty = false;
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            throw BackendError("HTTP " + std::to_string(res->status) + " from " + config_.base_url +
                               ": " + res->body.substr(0, 200));
        }
        std::string content;
        try {
            content = reply_content(json::parse(res->body));
        } catch (const json::exception& e) {
            throw BackendError(std::string("malformed chat response: ") + e.what());
        }
        if (content.find_first_not_of(" \t\r\n") == std::string::npos) {
            last_error = "empty reply";
            last_was_empty = true;
            continue;
        }
        return content;
    }
    if (last_was_empty)
        throw EmptyReply("backend " + id() + " returned an empty reply after " +
                         std::to_string(attempts) + " attempts");
    throw BackendUnreachable(config_.base_url + " unreachable after " + std::to_string(attempts) +
                                 " attempts (" + last_error + ")",
                             attempts);
}

}  // namespace lingua::planner
