#pragma once

#include <vector>

#include "lingua/script.hpp"
#include "lingua/world.hpp"

namespace lingua::motion {

inline constexpr int kDecelStages = 7;

/// Distance-quantized deceleration: inside `slow_window` the commanded speed drops in
/// sevenths of the maximum; within `stop_tolerance` it is zero.
struct DecelProfile {
    double slow_window = 1.4;
    double stop_tolerance = 0.01;
    int stages = kDecelStages;

    static DecelProfile linear(const world::DecelConfig& c);
    static DecelProfile angular(const world::DecelConfig& c);
    bool valid() const { return stages == kDecelStages && slow_window > stop_tolerance && stop_tolerance > 0; }
};

/// ceil(7 * min(remaining / window, 1)) / 7, or 0 inside the stop tolerance.
/// Throws std::domain_error for negative or non-finite `remaining`.
double decel_scale(double remaining, double window, double stop_tolerance);

/// Integer stage in 0..7 behind decel_scale.
int decel_stage(double remaining, double window, double stop_tolerance);

/// True when the projected remaining displacement changed sign and is still outside tolerance.
bool overshoot_detect(double prev_signed_remaining, double curr_signed_remaining,
                      double stop_tolerance);

enum class Axis { world_x, world_y, body_forward, body_lateral, heading };
enum class MoveMode { absolute, relative };

struct AxisMove {
    Axis axis = Axis::world_x;
    double value = 0.0;  // meters, or degrees for the heading axis
    MoveMode mode = MoveMode::absolute;

    friend bool operator==(const AxisMove&, const AxisMove&) = default;
};

/// Base-axis decomposition of a validated call. Arm, gripper and camera calls yield no moves.
/// moveToXWithRotation becomes a heading move followed by an absolute body_forward move
/// whose value is the target world x.
std::vector<AxisMove> decompose(const script::ActionCall& call, const world::RobotState& state);

struct ArmReach {
    double radial = 0.0;  // horizontal distance from the shoulder axis, meters
    double height = 0.0;  // end-effector height above ground, meters
    double yaw = 0.0;     // degrees, relative to the base heading
};

/// Pitch joints j2..j4 are measured from vertical; j1 is yaw and j5 is wrist roll.
ArmReach arm_forward_kinematics(const world::JointVector& joints, const world::ArmGeometry& arm);

/// World-frame ground projection of the end effector for a base pose.
world::Vec2 end_effector_ground_point(const world::Pose2D& base, const world::JointVector& joints,
                                      const world::ArmGeometry& arm);

struct StepResult {
    double next = 0.0;
    bool done = false;
    bool overshoot = false;
};

/// One control tick along a scalar axis. The step is clamped to the remaining distance, so
/// an undisturbed axis never crosses its target.
StepResult step_axis(double curr, double target, double max_speed, const DecelProfile& profile,
                     double dt);

/// Stateful tracker for a single axis move. Detects a sign flip of the remaining displacement
/// between ticks (e.g. after an external disturbance) and then creeps back at stage-1 speed.
class AxisController {
public:
    AxisController() = default;
    AxisController(double target, double max_speed, DecelProfile profile);

    struct Tick {
        double next = 0.0;
        bool done = false;
        bool overshoot_detected = false;  // this tick started a correction
        bool correction_finished = false; // a correction completed this tick
        double overshoot = 0.0;           // magnitude at detection
    };

    Tick update(double curr, double dt);

    double target() const { return target_; }
    bool correcting() const { return correcting_; }

private:
    double target_ = 0.0;
    double max_speed_ = 0.0;
    DecelProfile profile_;
    bool has_prev_ = false;
    double prev_remaining_ = 0.0;
    bool correcting_ = false;
    double last_overshoot_ = 0.0;
};

struct ArmPlan {
    world::JointVector target{};
    double joint_speed_dps = 90.0;
};

struct ArmStep {
    world::JointVector joints{};
    bool done = false;
};

/// Moves every joint toward its target by at most joint_speed * dt; all joints move together.
ArmStep step_arm(const world::JointVector& joints, const ArmPlan& plan, double dt);

}  // namespace lingua::motion
