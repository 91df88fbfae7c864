#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lingua/script.hpp"
#include "lingua/world.hpp"

namespace lingua::planner {

struct FewShot {
    std::string instruction;
    std::string script;
};

struct PromptTemplate {
    std::string system_preamble;
    std::map<world::RobotKind, std::string> capability_blurbs;
    std::string output_contract;
    std::vector<FewShot> examples;

    static PromptTemplate default_template();
};

/// Header line plus one line per primitive: name, typed parameters, semantics, units.
std::string render_primitive_reference(const script::Registry& registry);

struct Prompt {
    std::string system;  // preamble, robots, primitive reference, contract, examples
    std::string user;    // the instruction verbatim

    std::string text() const;
};

/// Deterministic rendering. An empty selection addresses every robot in the scene.
/// Throws std::invalid_argument for an empty instruction or an unknown robot id.
Prompt build_prompt_parts(const PromptTemplate& tmpl, const world::Scene& scene,
                          std::span<const std::string> selection, std::string_view instruction,
                          const script::Registry& registry = script::registry_default());
std::string build_prompt(const PromptTemplate& tmpl, const world::Scene& scene,
                         std::span<const std::string> selection, std::string_view instruction);

struct ChatRequest {
    Prompt prompt;
    std::string instruction;
    std::optional<std::string> case_id;  // lets dataset-backed backends answer by id
    double temperature = 0.0;
};

class BackendError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BackendUnreachable : public BackendError {
public:
    BackendUnreachable(const std::string& what, int attempts)
        : BackendError(what), attempts_(attempts) {}
    int attempts() const noexcept { return attempts_; }

private:
    int attempts_;
};

class EmptyReply : public BackendError {
public:
    using BackendError::BackendError;
};

/// A chat model behind a uniform blocking interface. Implementations must be safe to call
/// concurrently from several threads.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual std::string id() const = 0;
    virtual std::string complete(const ChatRequest& request) = 0;
};

struct OracleEntry {
    std::string id;
    std::string instruction;
    std::string script;
};

/// Answers with the stored ground-truth script, looked up by case id or instruction text.
class OracleBackend : public ChatBackend {
public:
    explicit OracleBackend(std::vector<OracleEntry> entries);
    static std::shared_ptr<OracleBackend> from_files(std::span<const std::filesystem::path> paths);

    std::string id() const override { return "oracle"; }
    std::string complete(const ChatRequest& request) override;
    std::size_t size() const { return entries_.size(); }

private:
    std::vector<OracleEntry> entries_;
    std::map<std::string, std::size_t> by_id_;
    std::map<std::string, std::size_t> by_instruction_;
};

/// Corrupts selected replies of an inner backend by renaming the first call to a
/// non-registry token. Selection is an explicit id list or a seeded rate.
class FaultInjectionBackend : public ChatBackend {
public:
    FaultInjectionBackend(std::shared_ptr<ChatBackend> inner, std::set<std::string> corrupt_ids);
    FaultInjectionBackend(std::shared_ptr<ChatBackend> inner, double rate, std::uint64_t seed);

    std::string id() const override;
    std::string complete(const ChatRequest& request) override;
    bool selects(const std::string& key) const;

    static std::string corrupt(const std::string& reply);

private:
    std::shared_ptr<ChatBackend> inner_;
    std::set<std::string> ids_;
    double rate_ = 0.0;
    std::uint64_t seed_ = 0;
    bool by_rate_ = false;
};

struct HttpChatConfig {
    std::string base_url;          // e.g. https://api.groq.com/openai/v1
    std::string model;
    std::string key_env_var;       // name of the variable holding the bearer token
    double timeout_seconds = 60.0;
    int max_retries = 2;
    double backoff_base_seconds = 0.25;
    double backoff_cap_seconds = 2.0;

    /// Reads LINGUA_LLM_BASE_URL, LINGUA_LLM_MODEL and LINGUA_LLM_KEY_VAR.
    static HttpChatConfig from_environment();
};

/// chat-completions client: POST {base_url}/chat/completions, reply at choices[0].message.content.
class HttpChatBackend : public ChatBackend {
public:
    explicit HttpChatBackend(HttpChatConfig config);

    std::string id() const override { return "http:" + config_.model; }
    std::string complete(const ChatRequest& request) override;

    static nlohmann::json request_body(const HttpChatConfig& config, const ChatRequest& request);
    static std::string reply_content(const nlohmann::json& response);

private:
    HttpChatConfig config_;
};

struct BackendConfig {
    enum class Kind { http_chat, oracle, fault_injection };
    Kind kind = Kind::oracle;
    HttpChatConfig http;
    std::vector<std::filesystem::path> oracle_files;
    std::shared_ptr<BackendConfig> inner;  // fault_injection
    std::set<std::string> corrupt_ids;
    double fault_rate = 0.0;
    std::uint64_t fault_seed = 0;

    void validate() const;
};

std::shared_ptr<ChatBackend> make_backend(const BackendConfig& config);

/// Parses `oracle`, `http`, or `fault:cases=a,b,c` / `fault:rate=0.1,seed=7` (inner oracle).
BackendConfig parse_backend_spec(const std::string& spec,
                                 std::vector<std::filesystem::path> oracle_files);

using PlanResult = std::variant<script::MultiRobotPlan, script::ParseError>;

struct PlannerExchange {
    std::string prompt;
    std::string raw_reply;
    std::string script_text;
    PlanResult result;
    std::string backend_id;
    double latency_seconds = 0.0;

    bool parsed() const { return std::holds_alternative<script::MultiRobotPlan>(result); }
    const script::MultiRobotPlan* plan() const { return std::get_if<script::MultiRobotPlan>(&result); }
    const script::ParseError* error() const { return std::get_if<script::ParseError>(&result); }
};

/// One backend round trip followed by code-block extraction and plan parsing. Parse errors are
/// carried in the exchange; BackendUnreachable and EmptyReply propagate.
PlannerExchange plan(std::string_view instruction, const world::Scene& scene,
                     std::span<const std::string> selection, ChatBackend& backend,
                     const PromptTemplate& tmpl = PromptTemplate::default_template(),
                     std::optional<std::string> case_id = std::nullopt);

nlohmann::json exchange_to_json(const PlannerExchange& exchange, bool include_prompt = true);
nlohmann::json parse_error_to_json(const script::ParseError& error);

}  // namespace lingua::planner
