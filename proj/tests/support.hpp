#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "lingua/script.hpp"
#include "lingua/world.hpp"

namespace testing {

inline std::filesystem::path data(const std::string& rel) {
    return std::filesystem::path(LINGUA_DATA_DIR) / rel;
}

inline lingua::world::Scene threebot() { return lingua::world::load_scene_file(data("scenes/threebot.json")); }

inline lingua::script::MultiRobotPlan golden_plan() {
    std::ifstream in(data("scenes/golden_all_robots.txt"));
    std::stringstream ss;
    ss << in.rdbuf();
    auto ids = threebot().robot_ids();
    auto r = lingua::script::parse_plan(ss.str(), ids);
    return std::get<lingua::script::MultiRobotPlan>(r);
}

// A one-robot scene on an open floor, used when the bundled layout would get in the way.
inline lingua::world::Scene solo_scene(lingua::world::RobotKind kind, lingua::world::Pose2D pose = {}) {
    auto base = threebot();
    lingua::world::Scene s;
    s.name = "solo";
    s.tick_seconds = 0.05;
    for (const auto& r : base.robots) {
        if (r.kind == kind) {
            auto cfg = r;
            cfg.id = "r1";
            cfg.initial_pose = pose;
            s.robots.push_back(cfg);
        }
    }
    s.regions.push_back({"arena", {0, 0}, {20, 20}});
    return s;
}

// Brute-force chained rotations about the pitch axis in the vertical (r, z) plane.
struct FkOracle {
    double r = 0, z = 0, yaw = 0;
};
inline FkOracle fk_oracle(const lingua::world::JointVector& q, const lingua::world::ArmGeometry& g) {
    constexpr double kDeg = 3.14159265358979323846 / 180.0;
    const double lengths[3] = {g.l2, g.l3, g.l4};
    // direction starts vertical: (r, z) = (0, 1)
    double dr = 0.0, dz = 1.0;
    double r = 0.0, z = g.z0;
    for (int i = 0; i < 3; ++i) {
        const double a = q[i + 1] * kDeg;
        // rotate the running direction by a, tipping it forward
        const double nr = dr * std::cos(a) + dz * std::sin(a);
        const double nz = -dr * std::sin(a) + dz * std::cos(a);
        dr = nr;
        dz = nz;
        r += lengths[i] * dr;
        z += lengths[i] * dz;
    }
    return {r, z, q[0]};
}

}  // namespace testing
