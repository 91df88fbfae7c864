#include <doctest.h>

#include "generators.hpp"
#include "lingua/sim.hpp"
#include "support.hpp"

using namespace lingua;
using testing::Rng;

TEST_CASE("printed scripts parse back to the same calls") {
    Rng rng(0x5eed0001);
    for (int i = 0; i < 500; ++i) {
        auto s = testing::gen_script(rng);
        if (i % 3 == 0) s.robot = "youbot" + std::to_string(1 + i % 3);
        const auto text = script::pretty_print(s);
        auto r = script::parse_script(text);
        REQUIRE_MESSAGE(std::holds_alternative<script::ActionScript>(r), text);
        const auto& back = std::get<script::ActionScript>(r);
        CHECK(back == s);
        CHECK(script::pretty_print(back) == text);
        for (std::size_t k = 0; k < back.calls.size(); ++k)
            CHECK(back.calls[k].line == static_cast<int>(k + 1 + (s.robot ? 1 : 0)));
    }
}

TEST_CASE("single-line mutations are diagnosed on their line") {
    Rng rng(0x5eed0002);
    for (int i = 0; i < 500; ++i) {
        auto m = testing::mutate(rng, testing::gen_script(rng));
        auto r = script::parse_script(m.text);
        REQUIRE_MESSAGE(std::holds_alternative<script::ParseError>(r), m.text);
        const auto& e = std::get<script::ParseError>(r);
        CHECK_MESSAGE(e.kind == m.kind, m.text);
        CHECK_MESSAGE(e.line == m.line, m.text);
        CHECK(e.describe().rfind("line " + std::to_string(m.line) + ": ", 0) == 0);
    }
}

TEST_CASE("deceleration is a monotone staircase of sevenths") {
    Rng rng(0x5eed0003);
    for (int i = 0; i < 2000; ++i) {
        const double w = testing::uniform(rng, 0.05, 3.0);
        const double tol = testing::uniform(rng, 1e-4, w / 4.0);
        const double a = testing::uniform(rng, 0.0, 2.0 * w), b = testing::uniform(rng, 0.0, 2.0 * w);
        const double lo = std::min(a, b), hi = std::max(a, b);
        const double s_lo = motion::decel_scale(lo, w, tol), s_hi = motion::decel_scale(hi, w, tol);
        CHECK(s_lo <= s_hi);
        const double k = s_hi * 7.0;
        CHECK(k == doctest::Approx(std::round(k)).epsilon(1e-12));
        CHECK(s_hi >= 0.0);
        CHECK(s_hi <= 1.0);
        if (hi >= w) CHECK(s_hi == 1.0);
        if (hi <= tol) CHECK(s_hi == 0.0);
        if (hi > tol) CHECK(s_hi >= 1.0 / 7.0);
        CHECK(motion::decel_stage(hi, w, tol) == static_cast<int>(std::lround(k)));
    }
}

TEST_CASE("linear moves settle within the tick bound without overshoot") {
    Rng rng(0x5eed0004);
    for (int i = 0; i < 300; ++i) {
        motion::DecelProfile p{testing::uniform(rng, 0.2, 1.5), testing::uniform(rng, 0.002, 0.02), 7};
        const double v = testing::uniform(rng, 0.1, 1.0), dt = 0.05;
        const double start = testing::uniform(rng, -5, 5), target = testing::uniform(rng, -5, 5);
        const auto bound = testing::convergence_bound(target - start, v, dt, p.slow_window);
        auto r = testing::drive_axis(start, target, v, p, dt, bound + 1000);
        CHECK(r.done);
        CHECK(r.ticks <= bound);
        CHECK(r.final_error <= p.stop_tolerance);
        CHECK(r.max_past <= 1e-12);
    }
}

TEST_CASE("angular moves settle within the tick bound without overshoot") {
    Rng rng(0x5eed0005);
    for (int i = 0; i < 300; ++i) {
        motion::DecelProfile p{40.0, 0.5, 7};
        const double v = testing::uniform(rng, 10.0, 90.0), dt = 0.05;
        const double target = testing::uniform(rng, -180, 180);
        const auto bound = testing::convergence_bound(target, v, dt, p.slow_window);
        auto r = testing::drive_axis(0.0, target, v, p, dt, bound + 1000);
        CHECK(r.done);
        CHECK(r.ticks <= bound);
        CHECK(r.max_past <= 1e-12);
    }
}

TEST_CASE("a disturbance past the target is corrected") {
    Rng rng(0x5eed0006);
    for (int i = 0; i < 200; ++i) {
        motion::DecelProfile p{1.4, 0.01, 7};
        const double target = testing::uniform(rng, 0.5, 4.0);
        const double v = testing::uniform(rng, 0.2, 0.8);
        const long long kick_at = 1 + testing::pick(rng, 5);
        auto r = testing::drive_axis(0.0, target, v, p, 0.05, 100000, kick_at, target + testing::uniform(rng, 0.05, 0.5));
        CHECK(r.done);
        CHECK(r.corrected);
        CHECK(r.final_error <= p.stop_tolerance);
    }
}

TEST_CASE("forward kinematics agrees with the rotation-chain oracle") {
    Rng rng(0x5eed0007);
    const auto cfg = *testing::threebot().find_robot("youbot3");
    for (int i = 0; i < 1000; ++i) {
        world::JointVector q{};
        for (std::size_t j = 0; j < q.size(); ++j)
            q[j] = testing::uniform(rng, cfg.joint_limits[j].min, cfg.joint_limits[j].max);
        auto fk = motion::arm_forward_kinematics(q, cfg.arm);
        auto o = testing::fk_oracle(q, cfg.arm);
        CHECK(std::abs(fk.radial - o.r) <= 1e-9);
        CHECK(std::abs(fk.height - o.z) <= 1e-9);
        CHECK(std::abs(fk.yaw - o.yaw) <= 1e-9);
    }
}

TEST_CASE("heading normalization lands in the half-open circle") {
    Rng rng(0x5eed0008);
    for (int i = 0; i < 5000; ++i) {
        const double h = testing::uniform(rng, -5000, 5000);
        const double n = world::normalize_heading(h);
        CHECK(n >= -180.0);
        CHECK(n < 180.0);
        const double turns = (h - n) / 360.0;
        CHECK(std::abs(turns - std::round(turns)) <= 1e-9);
        CHECK(world::normalize_heading(n) == n);
    }
    CHECK(world::normalize_heading(180.0) == -180.0);
    CHECK(world::normalize_heading(-180.0) == -180.0);
}

TEST_CASE("simulation replays are bit-identical") {
    Rng rng(0x5eed0009);
    const auto scene = testing::solo_scene(world::RobotKind::arm_bot);
    const char* moves[] = {"moveForward", "moveLateral", "moveToX", "moveToY", "rotateToBeta"};
    for (int i = 0; i < 40; ++i) {
        script::ActionScript s;
        const int n = 1 + testing::pick(rng, 4);
        for (int k = 0; k < n; ++k) {
            const std::string name = moves[testing::pick(rng, 5)];
            const double v = name == "rotateToBeta" ? testing::gen_value(rng, -179, 179) : testing::gen_value(rng, -3, 3);
            s.calls.push_back({name, {v}, k + 1});
        }
        if (testing::pick(rng, 2)) s.calls.push_back({"presetExtend", {}, n + 1});
        script::MultiRobotPlan plan;
        plan.scripts["r1"] = s;
        auto a = sim::run_to_completion(scene, plan);
        auto b = sim::run_to_completion(scene, plan);
        CHECK(sim::trajectory_hash(a.world) == sim::trajectory_hash(b.world));
        CHECK(a.world == b.world);
        CHECK(a.outcomes.at("r1").status == sim::OutcomeStatus::completed);
    }
}
