#include <doctest.h>

#include <atomic>
#include <thread>

#include "lingua/gateway.hpp"
#include "support.hpp"

using namespace lingua;
using namespace lingua::gateway;
using nlohmann::json;

namespace {

std::shared_ptr<planner::ChatBackend> oracle() {
    std::vector<std::filesystem::path> f{testing::data("datasets/bench108.jsonl"),
                                         testing::data("datasets/scenarios.jsonl")};
    return planner::OracleBackend::from_files(f);
}

GatewayConfig config_with(std::shared_ptr<planner::ChatBackend> be = oracle()) {
    GatewayConfig c;
    c.backends["oracle"] = be;
    c.backends["broken"] = std::make_shared<planner::FaultInjectionBackend>(
        be, std::set<std::string>{"all robots start action"});
    c.default_backend = "oracle";
    return c;
}

CommandRequest golden_request() {
    CommandRequest r;
    r.text = "all robots start action";
    return r;
}

std::vector<StreamMessage> of_type(const std::vector<StreamMessage>& ms, const std::string& type) {
    std::vector<StreamMessage> out;
    for (const auto& m : ms)
        if (m.type == type) out.push_back(m);
    return out;
}

}  // namespace

TEST_CASE("command executes the three-robot plan") {
    Gateway gw(testing::threebot(), config_with());
    auto res = gw.submit_command(golden_request());
    CHECK(res.status == PlanStatus::executing);
    CHECK(res.command_id == "cmd-1");
    REQUIRE(res.exchange.has_value());
    REQUIRE(res.exchange->parsed());
    CHECK(res.exchange->plan()->scripts.size() == 3);
    auto j = command_result_to_json(res);
    CHECK(j["status"] == "executing");
    CHECK(j["exchange"]["plan"].size() == 3);
    CHECK(j["exchange"]["script"].get<std::string>().find("@robot youbot3") != std::string::npos);

    auto st = gw.state();
    CHECK(st["busy"]["youbot1"] == true);
    gw.run_until_idle();
    auto w = gw.world();
    CHECK(w.robots.at("youbot1").photo_count == 4);
    CHECK(w.robots.at("youbot3").attached_object == "target_cube");
    for (const auto& e : w.events) CHECK(e.origin == "cmd-1");
}

TEST_CASE("parse failures are reported as a status") {
    Gateway gw(testing::threebot(), config_with());
    auto req = golden_request();
    req.backend = "broken";
    auto res = gw.submit_command(req);
    CHECK(res.status == PlanStatus::parse_failed);
    CHECK(res.detail.rfind("line ", 0) == 0);
    REQUIRE(res.exchange.has_value());
    CHECK(res.exchange->error()->kind == script::ErrorKind::unknown_primitive);
    CHECK_FALSE(gw.state()["busy"]["youbot1"].get<bool>());
    CHECK(command_result_to_json(res)["status"] == "parse_failed");
}

TEST_CASE("backend failures are reported as a status") {
    Gateway gw(testing::threebot(), config_with());
    CommandRequest req;
    req.text = "recite a poem";
    auto res = gw.submit_command(req);
    CHECK(res.status == PlanStatus::backend_unreachable);
    CHECK_FALSE(res.exchange.has_value());
}

TEST_CASE("busy robots reject new commands") {
    Gateway gw(testing::threebot(), config_with());
    gw.submit_command(golden_request());
    gw.tick_once(5);
    CHECK_THROWS_AS(gw.submit_command(golden_request()), RobotBusy);
    CHECK_THROWS_AS(gw.manual_control("youbot1", CapturePhoto{}), RobotBusy);
    gw.run_until_idle();
    CHECK(gw.submit_command(golden_request()).status == PlanStatus::executing);
}

TEST_CASE("request validation") {
    Gateway gw(testing::threebot(), config_with());
    CommandRequest empty;
    empty.text = "  ";
    CHECK_THROWS_AS(gw.submit_command(empty), InvalidRequest);
    auto ghost = golden_request();
    ghost.robots = {"youbot9"};
    CHECK_THROWS_AS(gw.submit_command(ghost), InvalidRequest);
    auto nobackend = golden_request();
    nobackend.backend = "psychic";
    CHECK_THROWS_AS(gw.submit_command(nobackend), InvalidRequest);
    auto narrow = golden_request();
    narrow.robots = {"youbot1"};
    CHECK(gw.submit_command(narrow).status == PlanStatus::bind_failed);
    CHECK_THROWS_AS(gw.manual_control("youbot9", CapturePhoto{}), InvalidRequest);
}

TEST_CASE("capability errors during bind become bind_failed") {
    auto be = std::make_shared<planner::OracleBackend>(
        std::vector<planner::OracleEntry>{{"x", "photo from the box", "@robot youbot2\ncapturePhoto()"}});
    Gateway gw(testing::threebot(), config_with(be));
    CommandRequest req;
    req.text = "photo from the box";
    auto res = gw.submit_command(req);
    CHECK(res.status == PlanStatus::bind_failed);
    CHECK(res.detail.find("no camera") != std::string::npos);
}

TEST_CASE("base jog advances the pose over its duration") {
    Gateway gw(testing::solo_scene(world::RobotKind::camera_bot, world::Pose2D(0, 0, 0)), config_with());
    auto ack = gw.manual_control("r1", BaseJog{0.2, 0.0, 0.0, 1.0});
    CHECK(ack.kind == "base_jog");
    CHECK(ack.action_id == "man-1");
    gw.tick_once(19);
    CHECK(gw.state()["busy"]["r1"] == true);
    gw.tick_once(1);
    auto w = gw.world();
    CHECK(w.robots.at("r1").pose.x == doctest::Approx(0.2));
    CHECK(w.robots.at("r1").pose.y == doctest::Approx(0.0));
    CHECK(gw.state()["busy"]["r1"] == false);
    int started = 0;
    for (const auto& e : w.events) {
        CHECK(e.origin == "man-1");
        started += e.kind == sim::EventKind::call_started;
    }
    CHECK(started == 1);
}

TEST_CASE("jog limits") {
    Gateway gw(testing::solo_scene(world::RobotKind::camera_bot), config_with());
    CHECK_THROWS_AS(gw.manual_control("r1", BaseJog{0.9, 0, 0, 1.0}), LimitsViolation);
    CHECK_THROWS_AS(gw.manual_control("r1", BaseJog{0.1, 0, 90, 1.0}), LimitsViolation);
    CHECK_THROWS_AS(gw.manual_control("r1", BaseJog{0.1, 0, 0, 2.5}), LimitsViolation);
    CHECK_THROWS_AS(gw.manual_control("r1", BaseJog{0.1, 0, 0, 0.0}), LimitsViolation);
}

TEST_CASE("arm preset and gripper on the arm robot") {
    auto scene = testing::threebot();
    Gateway gw(scene, config_with());
    auto ack = gw.manual_control("youbot3", ArmPreset{"extend"});
    CHECK(ack.call == "presetExtend()");
    gw.run_until_idle();
    gw.manual_control("youbot3", ArmPreset{"fold"});
    gw.run_until_idle();
    CHECK(gw.world().robots.at("youbot3").joints == *scene.find_robot("youbot3")->preset("fold"));
    gw.manual_control("youbot3", Gripper{true});
    gw.run_until_idle();
    CHECK(gw.world().robots.at("youbot3").gripper == world::GripperState::closed);
    CHECK_THROWS_AS(gw.manual_control("youbot1", Gripper{true}), CapabilityMismatch);
    CHECK_THROWS_AS(gw.manual_control("youbot2", CapturePhoto{}), CapabilityMismatch);
    CHECK_THROWS_AS(gw.manual_control("youbot3", ArmSet{{0, 120, 0, 0, 0}}), LimitsViolation);
    CHECK_THROWS_AS(gw.manual_control("youbot3", ArmPreset{"wave"}), InvalidRequest);
}

TEST_CASE("base_move accepts one base motion call") {
    Gateway gw(testing::threebot(), config_with());
    auto ack = gw.manual_control("youbot1", BaseMove{"moveToY(2.5)"});
    CHECK(ack.call == "moveToY(2.5)");
    CHECK_THROWS_AS(gw.manual_control("youbot2", BaseMove{"presetFold()"}), InvalidRequest);
    CHECK_THROWS_AS(gw.manual_control("youbot2", BaseMove{"moveToY(1)\nmoveToX(1)"}), InvalidRequest);
    CHECK_THROWS_AS(gw.manual_control("youbot2", BaseMove{"fly(1)"}), InvalidRequest);
    gw.run_until_idle();
    CHECK(gw.world().robots.at("youbot1").pose.y == doctest::Approx(2.5).epsilon(0.01));
}

TEST_CASE("manual actions from json") {
    auto jog = manual_action_from_json(json::parse(R"({"kind":"base_jog","vx":0.1,"omega":5,"duration":0.5})"));
    REQUIRE(std::holds_alternative<BaseJog>(jog));
    CHECK(std::get<BaseJog>(jog).omega_dps == 5.0);
    CHECK(std::get<BaseJog>(jog).duration_s == 0.5);
    auto arm = manual_action_from_json(json::parse(R"({"kind":"arm_set","joints":[1,2,3,4,5]})"));
    CHECK(std::get<ArmSet>(arm).joints[4] == 5.0);
    auto g = manual_action_from_json(json::parse(R"({"kind":"gripper","state":"close"})"));
    CHECK(std::get<Gripper>(g).close);
    CHECK(action_kind(manual_action_from_json(json::parse(R"({"kind":"capture_photo"})"))) == "capture_photo");
    CHECK_THROWS_AS(manual_action_from_json(json::parse(R"({"kind":"arm_set","joints":[1,2]})")), InvalidRequest);
    CHECK_THROWS_AS(manual_action_from_json(json::parse(R"({"kind":"dance"})")), InvalidRequest);
    CHECK_THROWS_AS(manual_action_from_json(json::parse(R"({"kind":"gripper","state":"ajar"})")), InvalidRequest);
}

TEST_CASE("every fourth tick yields five snapshots per simulated second") {
    auto scene = testing::threebot();
    Gateway gw(scene, config_with());
    auto sub = gw.subscribe(4);
    auto initial = sub->drain();
    REQUIRE(initial.size() == 2);
    CHECK(initial[0].type == "events");
    CHECK(initial[1].type == "state");
    const int ticks_per_second = static_cast<int>(std::lround(1.0 / scene.tick_seconds));
    int states = 0;
    for (int i = 0; i < ticks_per_second; ++i) {
        gw.tick_once();
        for (const auto& m : sub->drain()) states += m.type == "state";
    }
    CHECK(states == 5);
    CHECK(sub->dropped() == 0);
}

TEST_CASE("state messages carry the snapshot and new events") {
    Gateway gw(testing::threebot(), config_with());
    auto sub = gw.subscribe(1);
    sub->drain();
    gw.submit_command(golden_request());
    gw.tick_once();
    auto ms = sub->drain();
    auto statuses = of_type(ms, "status");
    REQUIRE(statuses.size() == 1);
    CHECK(statuses[0].body["status"] == "executing");
    CHECK(statuses[0].body["command_id"] == "cmd-1");
    auto states = of_type(ms, "state");
    REQUIRE(states.size() == 1);
    const auto& b = states[0].body;
    CHECK(b["gap"] == false);
    CHECK(b["snapshot"]["tick"] == 1);
    CHECK(b["snapshot"]["robots"].size() == 3);
    CHECK_FALSE(b["snapshot"].contains("events"));
    CHECK(b["events"].size() == gw.world().events.size());
    auto wire = json::parse(states[0].dump());
    CHECK(wire["type"] == "state");

    gw.run_until_idle();
    auto rest = sub->drain();
    auto done = of_type(rest, "status");
    REQUIRE(done.size() == 1);
    CHECK(done[0].body["status"] == "completed");
    CHECK(done[0].body["outcomes"]["youbot1"]["calls_completed"] == 9);
}

TEST_CASE("a slow reader gets one coalesced state with every event in order") {
    Gateway gw(testing::solo_scene(world::RobotKind::camera_bot), config_with());
    auto sub = gw.subscribe(4);
    sub->drain();
    std::string photos;
    for (int i = 0; i < 34; ++i) photos += "capturePhoto()\n";
    gw.manual_control("r1", CapturePhoto{});
    gw.run_until_idle();
    auto be = std::make_shared<planner::OracleBackend>(std::vector<planner::OracleEntry>{{"p", "photos", photos}});
    GatewayConfig cfg;
    cfg.backends["o"] = be;
    Gateway burst(testing::solo_scene(world::RobotKind::camera_bot), cfg);
    auto slow = burst.subscribe(4);
    slow->drain();
    CommandRequest req;
    req.text = "photos";
    REQUIRE(burst.submit_command(req).status == PlanStatus::executing);
    burst.run_until_idle();
    burst.tick_once(4);
    auto ms = slow->drain();
    auto states = of_type(ms, "state");
    REQUIRE(states.size() == 1);
    const auto& events = states[0].body["events"];
    CHECK(events.size() == burst.world().events.size());
    CHECK(events.size() >= 100);
    CHECK(states[0].body["gap"] == true);
    for (std::size_t i = 1; i < events.size(); ++i) CHECK(events[i - 1]["tick"] <= events[i]["tick"]);
    CHECK(events.front()["kind"] == "call_started");
    CHECK(events.back()["kind"] == "call_finished");
    CHECK(slow->dropped() > 0);
}

TEST_CASE("a burst between pushes arrives in a single message") {
    std::string photos;
    for (int i = 0; i < 34; ++i) photos += "capturePhoto()\n";
    auto be = std::make_shared<planner::OracleBackend>(std::vector<planner::OracleEntry>{{"p", "photos", photos}});
    GatewayConfig cfg;
    cfg.backends["o"] = be;
    Gateway gw(testing::solo_scene(world::RobotKind::camera_bot), cfg);
    auto sub = gw.subscribe(40);
    sub->drain();
    CommandRequest req;
    req.text = "photos";
    gw.submit_command(req);
    gw.tick_once(40);
    auto states = of_type(sub->drain(), "state");
    REQUIRE(states.size() == 1);
    CHECK(states[0].body["gap"] == false);
    CHECK(states[0].body["events"].size() == 102);
}

TEST_CASE("subscribers do not perturb the simulation") {
    Gateway plain(testing::threebot(), config_with());
    Gateway watched(testing::threebot(), config_with());
    auto a = watched.subscribe(1), b = watched.subscribe(3);
    plain.submit_command(golden_request());
    watched.submit_command(golden_request());
    plain.run_until_idle();
    watched.run_until_idle();
    CHECK(plain.trajectory_hash() == watched.trajectory_hash());
    CHECK(plain.world() == watched.world());
    watched.unsubscribe(a->id());
    CHECK(watched.subscriber_count() == 1);
}

TEST_CASE("subscribe backlog honours the event window") {
    Gateway gw(testing::threebot(), config_with());
    gw.submit_command(golden_request());
    gw.run_until_idle();
    auto sub = gw.subscribe(1);
    auto ms = sub->drain();
    REQUIRE(ms.size() == 2);
    CHECK(ms[0].body["events"].size() == std::min<std::size_t>(200, gw.world().events.size()));
    CHECK(ms[0].body["backlog"] == true);
    CHECK(gw.state()["events"].size() == ms[0].body["events"].size());
    CHECK_THROWS_AS(gw.subscribe(0), InvalidRequest);
}

TEST_CASE("typing time for a language command") {
    Gateway gw(testing::threebot(), config_with());
    auto req = golden_request();
    req.timing.input_started_ms = 1'700'000'000'000;
    req.timing.submitted_ms = 1'700'000'012'300;
    gw.submit_command(req);
    auto rows = gw.timings().rows();
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].mode == TimingMode::natural_language);
    CHECK(rows[0].command_id == "cmd-1");
    REQUIRE(rows[0].operation_seconds.has_value());
    CHECK(*rows[0].operation_seconds == doctest::Approx(12.3).epsilon(1e-12));
    CHECK(gw.timings().to_csv() == "mode,command_id,operation_seconds\nnatural_language,cmd-1,12.300\n");
}

TEST_CASE("manual actions grouped under one task id are summed") {
    Gateway gw(testing::threebot(), config_with());
    const std::int64_t t0 = 1'700'000'000'000;
    std::int64_t expected_ms = 0;
    for (int i = 0; i < 8; ++i) {
        ClientTiming t;
        t.task_id = "grab";
        t.input_started_ms = t0 + 10'000 * i;
        t.submitted_ms = *t.input_started_ms + 1'000 + 137 * i;
        expected_ms += 1'000 + 137 * i;
        gw.manual_control("youbot3", i % 2 ? ManualAction{ArmPreset{"fold"}} : ManualAction{ArmPreset{"extend"}}, t);
        gw.run_until_idle();
    }
    auto rows = gw.timings().rows();
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].mode == TimingMode::manual);
    CHECK(rows[0].command_id == "task:grab");
    CHECK(rows[0].actions == 8);
    CHECK(*rows[0].operation_seconds == doctest::Approx(expected_ms / 1000.0).epsilon(1e-12));
    CHECK(gw.timings().entries(TimingMode::manual).size() == 8);
    CHECK(gw.timings().entries(TimingMode::natural_language).empty());
}

TEST_CASE("missing or inverted stamps never produce a number") {
    SessionTiming t;
    t.server_submitted_ms = 5'000;
    CHECK_FALSE(t.operation_seconds().has_value());
    t.input_started_ms = 2'000;
    CHECK(*t.operation_seconds() == doctest::Approx(3.0));
    t.client_submitted_ms = 2'250;
    CHECK(*t.operation_seconds() == doctest::Approx(0.25));
    t.client_submitted_ms = 1'000;
    CHECK_FALSE(t.operation_seconds().has_value());

    TimingLog log;
    log.record({"s", "cmd-1", std::nullopt, TimingMode::natural_language, std::nullopt, std::nullopt, 1});
    log.record({"s", "man-1", "t", TimingMode::manual, 0, 500, 1});
    log.record({"s", "man-2", "t", TimingMode::manual, std::nullopt, 500, 1});
    CHECK(log.to_csv() == "mode,command_id,operation_seconds\nnatural_language,cmd-1,\nmanual,task:t,\n");
}

TEST_CASE("scene reload resets the world") {
    Gateway gw(testing::threebot(), config_with());
    auto sub = gw.subscribe(1);
    gw.submit_command(golden_request());
    gw.tick_once(10);
    gw.load_scene(testing::solo_scene(world::RobotKind::arm_bot));
    CHECK(gw.scene().name == "solo");
    CHECK(gw.world().tick == 0);
    CHECK(gw.state()["robots"].size() == 1);
    auto statuses = of_type(sub->drain(), "status");
    CHECK(statuses.back().body["status"] == "scene_loaded");
    gw.tick_once(5);
    CHECK(gw.world().tick == 5);
}

TEST_CASE("backend listing") {
    Gateway gw(testing::threebot(), config_with());
    auto j = gw.backends_json();
    CHECK(j["default"] == "oracle");
    CHECK(j["backends"].size() == 2);
    CHECK(gw.backend_ids() == std::vector<std::string>{"broken", "oracle"});
}

TEST_CASE("the realtime loop completes a command") {
    Gateway gw(testing::threebot(), config_with());
    auto sub = gw.subscribe(20);
    gw.start(0.01);
    CHECK(gw.running());
    CHECK_THROWS_AS(gw.tick_once(), std::logic_error);
    auto res = gw.submit_command(golden_request());
    REQUIRE(res.status == PlanStatus::executing);
    bool completed = false;
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(60);
    while (!completed && std::chrono::steady_clock::now() < deadline) {
        auto m = sub->poll(std::chrono::milliseconds(100));
        if (m && m->type == "status" && m->body["status"] == "completed") completed = true;
    }
    CHECK(completed);
    gw.stop();
    CHECK_FALSE(gw.running());
    auto w = gw.world();
    CHECK(w.robots.at("youbot1").photo_count == 4);

    // identical trajectory to the headless run
    Gateway headless(testing::threebot(), config_with());
    headless.submit_command(golden_request());
    headless.run_until_idle();
    CHECK(headless.trajectory_hash() == gw.trajectory_hash());
}

TEST_CASE("tick cadence holds with ten subscribers") {
    Gateway gw(testing::threebot(), config_with());
    std::atomic<bool> done{false};
    std::vector<std::thread> readers;
    std::vector<std::shared_ptr<Subscriber>> subs;
    for (int i = 0; i < 10; ++i) {
        subs.push_back(gw.subscribe(1 + i % 4));
        if (i % 2 == 0) {
            readers.emplace_back([&, s = subs.back()] {
                while (!done) s->poll(std::chrono::milliseconds(20));
            });
        }
    }
    gw.start(1.0);
    gw.submit_command(golden_request());
    std::this_thread::sleep_for(std::chrono::seconds(3));
    gw.stop();
    done = true;
    for (auto& t : readers) t.join();
    auto st = gw.tick_stats();
    const double dt = gw.scene().tick_seconds;
    CHECK(st.intervals >= 50);
    CHECK(st.max_interval_s <= 2.0 * dt);
    CHECK(st.max_abs_jitter_s <= 2.0 * dt);
    CHECK(st.mean_interval_s == doctest::Approx(dt).epsilon(0.1));
}
