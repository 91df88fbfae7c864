#include <doctest.h>

#include <cmath>
#include <limits>

#include "lingua/world.hpp"
#include "support.hpp"

using namespace lingua::world;

TEST_CASE("normalize_heading wraps into [-180, 180)") {
    CHECK(normalize_heading(0.0) == 0.0);
    CHECK(normalize_heading(270.0) == -90.0);
    CHECK(normalize_heading(-540.0) == -180.0);
    CHECK(normalize_heading(180.0) == -180.0);
    CHECK(normalize_heading(-180.0) == -180.0);
    CHECK(normalize_heading(179.5) == 179.5);
    CHECK(normalize_heading(720.25) == doctest::Approx(0.25));
}

TEST_CASE("normalize_heading rejects non-finite input") {
    CHECK_THROWS_AS(normalize_heading(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
    CHECK_THROWS_AS(normalize_heading(std::numeric_limits<double>::infinity()), std::domain_error);
    CHECK_THROWS_AS(Pose2D(0, 0, -std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("Pose2D stores a normalized heading") {
    Pose2D p(1.0, 2.0, 450.0);
    CHECK(p.heading == 90.0);
    p.set_heading(-190.0);
    CHECK(p.heading == doctest::Approx(170.0));
}

TEST_CASE("in_region is inclusive on the boundary") {
    Region r{"r", {0, 0}, {1, 1}};
    CHECK(in_region({0, 0}, r));
    CHECK(in_region({1, 0}, r));
    CHECK(in_region({-1, 1}, r));
    CHECK_FALSE(in_region({1.001, 0}, r));
    CHECK_FALSE(in_region({0, -1.001}, r));
}

TEST_CASE("bundled threebot scene") {
    auto s = testing::threebot();
    REQUIRE(s.robots.size() == 3);
    CHECK(s.robots[0].kind == RobotKind::camera_bot);
    CHECK(s.robots[1].kind == RobotKind::box_bot);
    CHECK(s.robots[2].kind == RobotKind::arm_bot);
    CHECK(s.tick_seconds == 0.05);
    CHECK(s.find_region("parking_box") != nullptr);
    CHECK(s.find_region("parking_arm") != nullptr);
    CHECK(s.find_object("target_cube") != nullptr);
    CHECK(s.find_robot("nobody") == nullptr);
    for (const auto& r : s.robots) {
        CHECK(r.preset("fold") != nullptr);
        CHECK(r.preset("extend") != nullptr);
    }
}

TEST_CASE("capabilities per kind") {
    CHECK(has_camera(RobotKind::camera_bot));
    CHECK_FALSE(has_camera(RobotKind::box_bot));
    CHECK_FALSE(has_camera(RobotKind::arm_bot));
    CHECK(has_transport_frame(RobotKind::box_bot));
    CHECK_FALSE(has_transport_frame(RobotKind::arm_bot));
    CHECK(has_arm(RobotKind::arm_bot));
    CHECK_FALSE(has_arm(RobotKind::camera_bot));
    CHECK(robot_kind_from_string("arm_bot") == RobotKind::arm_bot);
    CHECK_FALSE(robot_kind_from_string("drone").has_value());
}

TEST_CASE("scene serialization round-trips") {
    auto s = testing::threebot();
    auto again = load_scene(serialize_scene(s));
    CHECK(again == s);
}

namespace {

nlohmann::json threebot_json() { return scene_to_json(testing::threebot()); }

std::string load_error(const nlohmann::json& doc) {
    try {
        load_scene(doc.dump());
    } catch (const SceneError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("scene load errors name the offending field") {
    SUBCASE("duplicate robot id") {
        auto doc = threebot_json();
        doc["robots"][1]["id"] = "youbot1";
        auto msg = load_error(doc);
        CHECK(msg.find("duplicate id") != std::string::npos);
        CHECK(msg.find("robots[1]") != std::string::npos);
    }
    SUBCASE("object sharing a robot id") {
        auto doc = threebot_json();
        doc["objects"][0]["id"] = "youbot3";
        CHECK(load_error(doc).find("duplicate id") != std::string::npos);
    }
    SUBCASE("zero tick") {
        auto doc = threebot_json();
        doc["tick_seconds"] = 0;
        auto msg = load_error(doc);
        CHECK(msg.find("tick_seconds") != std::string::npos);
    }
    SUBCASE("unknown kind") {
        auto doc = threebot_json();
        doc["robots"][0]["kind"] = "drone";
        CHECK(load_error(doc).find("robots[0].kind") != std::string::npos);
    }
    SUBCASE("preset outside joint limits") {
        auto doc = threebot_json();
        doc["robots"][2]["presets"]["extend"][1] = 120;
        CHECK(load_error(doc).find("presets.extend[1]") != std::string::npos);
    }
    SUBCASE("missing field") {
        auto doc = threebot_json();
        doc["robots"][0].erase("pose");
        CHECK(load_error(doc).find("robots[0].pose") != std::string::npos);
    }
    SUBCASE("not json") {
        CHECK_THROWS_AS(load_scene("{robots"), SceneError);
    }
    SUBCASE("no robots") {
        auto doc = threebot_json();
        doc["robots"] = nlohmann::json::array();
        CHECK_FALSE(load_error(doc).empty());
    }
}

TEST_CASE("initial_state mirrors the configuration") {
    auto s = testing::threebot();
    auto st = initial_state(s.robots[2]);
    CHECK(st.id == "youbot3");
    CHECK(st.pose == s.robots[2].initial_pose);
    CHECK(st.joints == s.robots[2].initial_joints);
    CHECK(st.gripper == GripperState::open);
    CHECK(st.photo_count == 0);
    CHECK_FALSE(st.attached_object.has_value());
}
