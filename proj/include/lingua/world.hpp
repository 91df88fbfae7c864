#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace lingua::world {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Wraps an angle in degrees into the half-open interval [-180, 180).
/// Throws std::domain_error for NaN or infinite input.
double normalize_heading(double degrees);

struct Pose2D {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;  // degrees, always in [-180, 180)

    Pose2D() = default;
    Pose2D(double x_, double y_, double heading_deg);

    void set_heading(double degrees) { heading = normalize_heading(degrees); }
    Vec2 position() const { return {x, y}; }

    friend bool operator==(const Pose2D&, const Pose2D&) = default;
};

inline constexpr std::size_t kJointCount = 5;
using JointVector = std::array<double, kJointCount>;

struct JointRange {
    double min = -180.0;
    double max = 180.0;

    bool contains(double v) const { return v >= min && v <= max; }
    friend bool operator==(const JointRange&, const JointRange&) = default;
};
using JointLimits = std::array<JointRange, kJointCount>;

enum class RobotKind { camera_bot, box_bot, arm_bot };
enum class GripperState { open, closed };
enum class ObjectShape { box, cylinder };

std::string_view to_string(RobotKind kind);
std::string_view to_string(GripperState state);
std::string_view to_string(ObjectShape shape);
std::optional<RobotKind> robot_kind_from_string(std::string_view s);

bool has_camera(RobotKind kind);
bool has_arm(RobotKind kind);
bool has_transport_frame(RobotKind kind);

struct SpeedLimits {
    double linear_mps = 0.5;
    double angular_dps = 45.0;
    double joint_dps = 90.0;

    friend bool operator==(const SpeedLimits&, const SpeedLimits&) = default;
};

// Thresholds for the staged deceleration law; see motion::DecelProfile.
struct DecelConfig {
    double window_m = 1.4;
    double stop_tol_m = 0.01;
    double angular_window_deg = 40.0;
    double angular_stop_tol_deg = 0.5;

    friend bool operator==(const DecelConfig&, const DecelConfig&) = default;
};

// Link lengths of the planar pitch chain and the shoulder height above ground.
struct ArmGeometry {
    double l2 = 0.155;
    double l3 = 0.135;
    double l4 = 0.218;
    double z0 = 0.14;

    friend bool operator==(const ArmGeometry&, const ArmGeometry&) = default;
};

struct RobotConfig {
    std::string id;
    RobotKind kind = RobotKind::camera_bot;
    Pose2D initial_pose;
    JointLimits joint_limits{};
    std::map<std::string, JointVector> presets;  // at least "fold" and "extend"
    JointVector initial_joints{};
    SpeedLimits speed;
    DecelConfig decel;
    ArmGeometry arm;

    const JointVector* preset(std::string_view name) const;
    friend bool operator==(const RobotConfig&, const RobotConfig&) = default;
};

struct SceneObject {
    std::string id;
    ObjectShape shape = ObjectShape::box;
    Vec2 position;
    double extent = 0.05;  // radius for cylinders, half-extent for boxes
    bool movable = true;

    friend bool operator==(const SceneObject&, const SceneObject&) = default;
};

struct Region {
    std::string id;
    Vec2 center;
    Vec2 half_size{1.0, 1.0};

    friend bool operator==(const Region&, const Region&) = default;
};

/// Inclusive axis-aligned membership: |x - cx| <= hx and |y - cy| <= hy.
bool in_region(Vec2 point, const Region& region);

struct Scene {
    std::string name;
    double tick_seconds = 0.05;
    std::vector<RobotConfig> robots;
    std::vector<SceneObject> objects;
    std::vector<Region> regions;

    const RobotConfig* find_robot(std::string_view id) const;
    const SceneObject* find_object(std::string_view id) const;
    const Region* find_region(std::string_view id) const;
    std::vector<std::string> robot_ids() const;

    friend bool operator==(const Scene&, const Scene&) = default;
};

class SceneError : public std::runtime_error {
public:
    SceneError(std::string field_path, const std::string& reason);
    const std::string& field_path() const noexcept { return field_path_; }

private:
    std::string field_path_;
};

Scene load_scene(std::string_view document);
Scene load_scene_file(const std::filesystem::path& path);
Scene scene_from_json(const nlohmann::json& doc);
nlohmann::json scene_to_json(const Scene& scene);
std::string serialize_scene(const Scene& scene);

struct TrajectoryPoint {
    std::int64_t tick = 0;
    Pose2D pose;

    friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

struct RobotState {
    std::string id;
    RobotKind kind = RobotKind::camera_bot;
    Pose2D pose;
    JointVector joints{};
    GripperState gripper = GripperState::open;
    std::optional<std::string> attached_object;
    int photo_count = 0;
    std::vector<TrajectoryPoint> trajectory;

    friend bool operator==(const RobotState&, const RobotState&) = default;
};

RobotState initial_state(const RobotConfig& config);

}  // namespace lingua::world
