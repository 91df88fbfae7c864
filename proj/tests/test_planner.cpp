#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "lingua/planner.hpp"
#include "support.hpp"

using namespace lingua;
using namespace lingua::planner;

namespace {

std::size_t count_of(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
    return n;
}

std::shared_ptr<OracleBackend> dataset_oracle() {
    std::vector<std::filesystem::path> files{testing::data("datasets/bench108.jsonl"),
                                             testing::data("datasets/scenarios.jsonl")};
    return OracleBackend::from_files(files);
}

// Scripted chat-completions endpoint on an ephemeral port.
struct MockChat {
    httplib::Server server;
    std::thread thread;
    int port = 0;
    std::atomic<int> hits{0};
    std::string last_auth;
    nlohmann::json last_body;
    std::function<void(int hit, httplib::Response&)> reply;

    MockChat() {
        server.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
            last_auth = req.get_header_value("Authorization");
            last_body = nlohmann::json::parse(req.body);
            reply(hits++, res);
        });
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~MockChat() {
        server.stop();
        thread.join();
    }

    HttpChatConfig config() const {
        HttpChatConfig c;
        c.base_url = "http://127.0.0.1:" + std::to_string(port) + "/v1/";
        c.model = "mock-model";
        c.timeout_seconds = 2.0;
        c.max_retries = 2;
        c.backoff_base_seconds = 0.01;
        c.backoff_cap_seconds = 0.02;
        return c;
    }
};

std::string chat_json(const std::string& content) {
    return nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}}.dump();
}

ChatRequest request_for(const std::string& instruction) {
    ChatRequest r;
    r.prompt = build_prompt_parts(PromptTemplate::default_template(), testing::threebot(), {}, instruction);
    r.instruction = instruction;
    return r;
}

}  // namespace

TEST_CASE("prompt lists every selected robot") {
    auto scene = testing::threebot();
    auto tmpl = PromptTemplate::default_template();
    auto all = build_prompt(tmpl, scene, {}, "all robots start action");
    CHECK(count_of(all, "@robot youbot") == 3);
    CHECK(all.find("all robots start action") != std::string::npos);
    CHECK(all.find("parking_arm") != std::string::npos);
    CHECK(all.find("target_cube") != std::string::npos);

    std::vector<std::string> one{"youbot2"};
    auto single = build_prompt(tmpl, scene, one, "go");
    CHECK(count_of(single, "@robot youbot") == 1);
    CHECK(single.find("@robot youbot2") != std::string::npos);
    CHECK(single.find("@robot youbot1") == std::string::npos);

    CHECK(build_prompt(tmpl, scene, {}, "all robots start action") == all);
}

TEST_CASE("prompt parts split system and user text") {
    auto scene = testing::threebot();
    auto tmpl = PromptTemplate::default_template();
    tmpl.examples.push_back({"take a photo", "capturePhoto()"});
    auto p = build_prompt_parts(tmpl, scene, {}, "  spin around ");
    CHECK(p.user == "  spin around ");
    CHECK(p.system.find("Examples:") != std::string::npos);
    CHECK(p.system.find("Available primitives:") != std::string::npos);
    CHECK(p.text() == p.system + "\n" + p.user + "\n");
    CHECK_THROWS_AS(build_prompt_parts(tmpl, scene, {}, "   "), std::invalid_argument);
    std::vector<std::string> ghost{"youbot9"};
    CHECK_THROWS_AS(build_prompt_parts(tmpl, scene, ghost, "go"), std::invalid_argument);
}

TEST_CASE("primitive reference") {
    auto ref = render_primitive_reference(script::registry_default());
    CHECK(count_of(ref, "\n- ") == 13);
    CHECK(ref.rfind("Available primitives:\n", 0) == 0);
    auto xy_line = ref.substr(ref.find("- moveToXY("));
    xy_line = xy_line.substr(0, xy_line.find('\n'));
    CHECK(xy_line.find("xFirst") != std::string::npos);
    CHECK(ref.find("[-180.0, 180.0)") != std::string::npos);
    CHECK(render_primitive_reference(script::Registry{}) == "Available primitives:\n");
}

TEST_CASE("oracle passthrough by case id") {
    auto oracle = dataset_oracle();
    CHECK(oracle->size() == 109);
    auto scene = testing::threebot();
    std::vector<std::string> sel{"youbot1"};
    auto ex = plan("anything at all", scene, sel, *oracle, PromptTemplate::default_template(), "cplx-07");
    REQUIRE(ex.parsed());
    auto expected = std::get<script::MultiRobotPlan>(script::parse_plan(
        "rotateToBeta(-45.0)\ncapturePhoto()\nrotateToBeta(-90.0)\ncapturePhoto()\nrotateToBeta(-135.0)\ncapturePhoto()",
        sel));
    CHECK(*ex.plan() == expected);
    CHECK(ex.backend_id == "oracle");
    CHECK(ex.latency_seconds >= 0.0);
    CHECK(ex.prompt.find("@robot youbot1") != std::string::npos);
}

TEST_CASE("oracle answers by instruction and rejects strangers") {
    auto oracle = dataset_oracle();
    auto scene = testing::threebot();
    auto ex = plan("all robots start action", scene, {}, *oracle);
    REQUIRE(ex.parsed());
    CHECK(ex.plan()->scripts.size() == 3);
    CHECK(ex.plan()->total_calls() == 18);
    CHECK_THROWS_AS(plan("dance the tango", scene, {}, *oracle), BackendError);
}

TEST_CASE("fault injection corrupts exactly the selected cases") {
    auto inner = dataset_oracle();
    FaultInjectionBackend fault(inner, std::set<std::string>{"cplx-07"});
    CHECK(fault.id() == "fault(oracle)");
    auto scene = testing::threebot();
    std::vector<std::string> sel{"youbot1"};
    auto bad = plan("x", scene, sel, fault, PromptTemplate::default_template(), "cplx-07");
    REQUIRE_FALSE(bad.parsed());
    CHECK(bad.error()->kind == script::ErrorKind::unknown_primitive);
    CHECK(bad.error()->line == 1);
    CHECK(bad.raw_reply.find("rotateToBetaNow(") != std::string::npos);
    auto good = plan("x", scene, sel, fault, PromptTemplate::default_template(), "cplx-06");
    CHECK(good.parsed());
}

TEST_CASE("corruption skips fences, headers and comments") {
    CHECK(FaultInjectionBackend::corrupt("```\n# note\n@robot a\n  moveToY(1)\nmoveToY(2)\n```\n") ==
          "```\n# note\n@robot a\n  moveToYNow(1)\nmoveToY(2)\n```\n");
    CHECK(FaultInjectionBackend::corrupt("no calls here") == "no calls here");
}

TEST_CASE("rate-based selection is seeded and order independent") {
    auto inner = dataset_oracle();
    FaultInjectionBackend a(inner, 0.3, 42), b(inner, 0.3, 42), c(inner, 0.3, 43);
    int picked = 0, differs = 0;
    for (int i = 0; i < 1000; ++i) {
        auto key = "case-" + std::to_string(i);
        CHECK(a.selects(key) == b.selects(key));
        picked += a.selects(key);
        differs += a.selects(key) != c.selects(key);
    }
    CHECK(picked > 240);
    CHECK(picked < 360);
    CHECK(differs > 0);
    FaultInjectionBackend none(inner, 0.0, 1), every(inner, 1.0, 1);
    CHECK_FALSE(none.selects("k"));
    CHECK(every.selects("k"));
    CHECK_THROWS_AS(FaultInjectionBackend(inner, 1.5, 1), std::invalid_argument);
}

TEST_CASE("backend specs") {
    std::vector<std::filesystem::path> files{testing::data("datasets/bench108.jsonl")};
    auto o = parse_backend_spec("oracle", files);
    CHECK(o.kind == BackendConfig::Kind::oracle);
    auto f = parse_backend_spec("fault:cases=comp-01, comp-02,cplx-03", files);
    CHECK(f.kind == BackendConfig::Kind::fault_injection);
    CHECK(f.corrupt_ids == std::set<std::string>{"comp-01", "comp-02", "cplx-03"});
    auto r = parse_backend_spec("fault:rate=0.25,seed=9", files);
    CHECK(r.fault_rate == 0.25);
    CHECK(r.fault_seed == 9);
    CHECK(make_backend(f)->id() == "fault(oracle)");
    BackendConfig empty;
    CHECK_THROWS_AS(make_backend(empty), std::invalid_argument);
    CHECK_THROWS(parse_backend_spec("carrier-pigeon", files));
}

TEST_CASE("http backend reads its configuration from the environment") {
    setenv("LINGUA_LLM_BASE_URL", "https://example.invalid/v1", 1);
    setenv("LINGUA_LLM_MODEL", "m1", 1);
    setenv("LINGUA_LLM_KEY_VAR", "MY_TOKEN", 1);
    auto c = HttpChatConfig::from_environment();
    CHECK(c.base_url == "https://example.invalid/v1");
    CHECK(c.model == "m1");
    CHECK(c.key_env_var == "MY_TOKEN");
    unsetenv("LINGUA_LLM_BASE_URL");
    unsetenv("LINGUA_LLM_MODEL");
    unsetenv("LINGUA_LLM_KEY_VAR");
    CHECK(HttpChatConfig::from_environment().base_url == "http://127.0.0.1:11434/v1");
}

TEST_CASE("http backend wire format") {
    MockChat mock;
    mock.reply = [](int, httplib::Response& res) {
        res.set_content(chat_json("```\nmoveToY(1.0)\n```"), "application/json");
    };
    setenv("LINGUA_TEST_TOKEN", "sekret", 1);
    auto cfg = mock.config();
    cfg.key_env_var = "LINGUA_TEST_TOKEN";
    HttpChatBackend backend(cfg);
    CHECK(backend.id() == "http:mock-model");
    auto req = request_for("go to y 1");
    CHECK(backend.complete(req) == "```\nmoveToY(1.0)\n```");
    CHECK(mock.last_auth == "Bearer sekret");
    CHECK(mock.last_body["model"] == "mock-model");
    CHECK(mock.last_body["temperature"] == 0.0);
    REQUIRE(mock.last_body["messages"].size() == 2);
    CHECK(mock.last_body["messages"][0]["role"] == "system");
    CHECK(mock.last_body["messages"][0]["content"] == req.prompt.system);
    CHECK(mock.last_body["messages"][1]["content"] == "go to y 1");
    unsetenv("LINGUA_TEST_TOKEN");
}

TEST_CASE("http backend retries server errors") {
    MockChat mock;
    mock.reply = [](int hit, httplib::Response& res) {
        if (hit < 2) {
            res.status = hit == 0 ? 503 : 429;
            return;
        }
        res.set_content(chat_json("capturePhoto()"), "application/json");
    };
    HttpChatBackend backend(mock.config());
    CHECK(backend.complete(request_for("photo")) == "capturePhoto()");
    CHECK(mock.hits == 3);
}

TEST_CASE("http backend gives up after the configured attempts") {
    MockChat mock;
    mock.reply = [](int, httplib::Response& res) { res.status = 500; };
    HttpChatBackend backend(mock.config());
    try {
        backend.complete(request_for("photo"));
        FAIL("no throw");
    } catch (const BackendUnreachable& e) {
        CHECK(e.attempts() == 3);
    }
    CHECK(mock.hits == 3);
}

TEST_CASE("http backend client errors are not retried") {
    MockChat mock;
    mock.reply = [](int, httplib::Response& res) {
        res.status = 401;
        res.set_content("{\"error\":\"bad key\"}", "application/json");
    };
    HttpChatBackend backend(mock.config());
    CHECK_THROWS_AS(backend.complete(request_for("photo")), BackendError);
    CHECK(mock.hits == 1);
}

TEST_CASE("http backend empty replies") {
    MockChat mock;
    mock.reply = [](int, httplib::Response& res) { res.set_content(chat_json("  \n"), "application/json"); };
    HttpChatBackend backend(mock.config());
    CHECK_THROWS_AS(backend.complete(request_for("photo")), EmptyReply);
    CHECK(mock.hits == 3);
}

TEST_CASE("http backend malformed body") {
    MockChat mock;
    mock.reply = [](int, httplib::Response& res) { res.set_content("not json", "application/json"); };
    HttpChatBackend backend(mock.config());
    CHECK_THROWS_AS(backend.complete(request_for("photo")), BackendError);
}

TEST_CASE("http backend against a closed port") {
    int port = 0;
    {
        httplib::Server probe;
        port = probe.bind_to_any_port("127.0.0.1");
    }
    HttpChatConfig cfg;
    cfg.base_url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
    cfg.model = "nobody";
    cfg.timeout_seconds = 0.5;
    cfg.max_retries = 1;
    cfg.backoff_base_seconds = 0.01;
    HttpChatBackend backend(cfg);
    auto scene = testing::threebot();
    try {
        plan("take a photo", scene, {}, backend);
        FAIL("no throw");
    } catch (const BackendUnreachable& e) {
        CHECK(e.attempts() == 2);
    }
}

TEST_CASE("plan reports empty replies and parse errors") {
    MockChat mock;
    mock.reply = [](int, httplib::Response& res) {
        res.set_content(chat_json("Sure!\n```\n@robot youbot1\ncapturePhoto()\nfly(3)\n```"), "application/json");
    };
    HttpChatBackend backend(mock.config());
    auto ex = plan("photo then fly", testing::threebot(), {}, backend);
    REQUIRE_FALSE(ex.parsed());
    CHECK(ex.script_text == "@robot youbot1\ncapturePhoto()\nfly(3)");
    CHECK(ex.error()->line == 3);
    CHECK(ex.error()->kind == script::ErrorKind::unknown_primitive);
    auto j = exchange_to_json(ex, false);
    CHECK(j["plan"].is_null());
    CHECK(j["error"]["kind"] == "unknown_primitive");
    CHECK(j["error"]["line"] == 3);
    CHECK_FALSE(j.contains("prompt"));
}

TEST_CASE("exchange json for a parsed plan") {
    auto oracle = dataset_oracle();
    auto ex = plan("all robots start action", testing::threebot(), {}, *oracle);
    auto j = exchange_to_json(ex);
    CHECK(j["error"].is_null());
    CHECK(j["plan"]["youbot1"].size() == 9);
    CHECK(j["plan"]["youbot1"][8] == "moveToXY(0.0, 3.0, xFirst)");
    CHECK(j["prompt"].get<std::string>() == ex.prompt);
    CHECK(j["backend_id"] == "oracle");
}
