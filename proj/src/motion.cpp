#include "lingua/motion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lingua::motion {

using world::JointVector;
using world::normalize_heading;

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Absorbs rounding in 7 * remaining / window so that a remaining distance of exactly
// k * window / 7 lands on stage k rather than k + 1.
constexpr double kStageEpsilon = 1e-9;

double sign(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

}  // namespace

DecelProfile DecelProfile::linear(const world::DecelConfig& c) {
    return {c.window_m, c.stop_tol_m, kDecelStages};
}

DecelProfile DecelProfile::angular(const world::DecelConfig& c) {
    return {c.angular_window_deg, c.angular_stop_tol_deg, kDecelStages};
}

int decel_stage(double remaining, double window, double stop_tolerance) {
    if (!std::isfinite(remaining) || remaining < 0.0) {
        throw std::domain_error("decel_scale: remaining must be a finite nonnegative value");
    }
    if (remaining <= stop_tolerance) return 0;
    const double q = kDecelStages * std::min(remaining / window, 1.0);
    const int stage = static_cast<int>(std::ceil(q - kStageEpsilon));
    return std::clamp(stage, 1, kDecelStages);
}

double decel_scale(double remaining, double window, double stop_tolerance) {
    return static_cast<double>(decel_stage(remaining, window, stop_tolerance)) / kDecelStages;
}

bool overshoot_detect(double prev_signed_remaining, double curr_signed_remaining,
                      double stop_tolerance) {
    const bool flipped = (prev_signed_remaining > 0 && curr_signed_remaining < 0) ||
                         (prev_signed_remaining < 0 && curr_signed_remaining > 0);
    return flipped && std::abs(curr_signed_remaining) > stop_tolerance;
}

std::vector<AxisMove> decompose(const script::ActionCall& call, const world::RobotState& state) {
    const auto& n = call.name;
    if (n == "moveForward") return {{Axis::body_forward, call.number(0), MoveMode::relative}};
    if (n == "moveLateral") return {{Axis::world_x, call.number(0), MoveMode::relative}};
    if (n == "moveToX") return {{Axis::world_x, call.number(0), MoveMode::absolute}};
    if (n == "moveToY") return {{Axis::world_y, call.number(0), MoveMode::absolute}};
    if (n == "moveToXY") {
        bool x_first = false;
        if (call.args.size() > 2) {
            const auto& flag = call.args[2];
            if (auto* b = std::get_if<bool>(&flag)) x_first = *b;
            if (auto* k = std::get_if<script::Keyword>(&flag)) x_first = k->name == "xFirst";
        }
        AxisMove mx{Axis::world_x, call.number(0), MoveMode::absolute};
        AxisMove my{Axis::world_y, call.number(1), MoveMode::absolute};
        if (x_first) return {mx, my};
        return {my, mx};
    }
    if (n == "rotateToBeta") return {{Axis::heading, call.number(0), MoveMode::absolute}};
    if (n == "moveToXWithRotation") {
        const double x = call.number(0);
        const double facing = x >= state.pose.x ? 0.0 : -180.0;
        return {{Axis::heading, facing, MoveMode::absolute},
                {Axis::body_forward, x, MoveMode::absolute}};
    }
    if (n == "moveArmSequential" || n == "presetFold" || n == "presetExtend" ||
        n == "openGripper" || n == "closeGripper" || n == "capturePhoto") {
        return {};
    }
    throw std::logic_error("decompose: unvalidated primitive '" + n + "'");
}

ArmReach arm_forward_kinematics(const JointVector& joints, const world::ArmGeometry& arm) {
    const double a = joints[1] * kDegToRad;
    const double b = a + joints[2] * kDegToRad;
    const double c = b + joints[3] * kDegToRad;
    ArmReach out;
    out.radial = arm.l2 * std::sin(a) + arm.l3 * std::sin(b) + arm.l4 * std::sin(c);
    out.height = arm.z0 + arm.l2 * std::cos(a) + arm.l3 * std::cos(b) + arm.l4 * std::cos(c);
    out.yaw = joints[0];
    return out;
}

world::Vec2 end_effector_ground_point(const world::Pose2D& base, const JointVector& joints,
                                      const world::ArmGeometry& arm) {
    const ArmReach reach = arm_forward_kinematics(joints, arm);
    const double dir = (base.heading + reach.yaw) * kDegToRad;
    return {base.x + reach.radial * std::cos(dir), base.y + reach.radial * std::sin(dir)};
}

StepResult step_axis(double curr, double target, double max_speed, const DecelProfile& profile,
                     double dt) {
    const double remaining = target - curr;
    if (std::abs(remaining) <= profile.stop_tolerance) return {curr, true, false};
    const double scale = decel_scale(std::abs(remaining), profile.slow_window, profile.stop_tolerance);
    const double advance = std::min(max_speed * scale * dt, std::abs(remaining));
    StepResult r;
    r.next = curr + sign(remaining) * advance;
    const double after = target - r.next;
    r.done = std::abs(after) <= profile.stop_tolerance;
    r.overshoot = overshoot_detect(remaining, after, profile.stop_tolerance);
    return r;
}

AxisController::AxisController(double target, double max_speed, DecelProfile profile)
    : target_(target), max_speed_(max_speed), profile_(profile) {}

AxisController::Tick AxisController::update(double curr, double dt) {
    Tick t;
    const double remaining = target_ - curr;
    if (has_prev_ && overshoot_detect(prev_remaining_, remaining, profile_.stop_tolerance)) {
        correcting_ = true;
        t.overshoot_detected = true;
        last_overshoot_ = std::abs(remaining);
        t.overshoot = last_overshoot_;
    }

    if (std::abs(remaining) <= profile_.stop_tolerance) {
        t.next = curr;
        t.done = true;
    } else {
        const double scale =
            correcting_ ? 1.0 / kDecelStages
                        : decel_scale(std::abs(remaining), profile_.slow_window,
                                      profile_.stop_tolerance);
        const double advance = std::min(max_speed_ * scale * dt, std::abs(remaining));
        t.next = curr + sign(remaining) * advance;
        t.done = std::abs(target_ - t.next) <= profile_.stop_tolerance;
    }
    if (t.done && correcting_) {
        t.correction_finished = true;
        t.overshoot = last_overshoot_;
        correcting_ = false;
    }
    has_prev_ = true;
    prev_remaining_ = target_ - t.next;
    return t;
}

ArmStep step_arm(const JointVector& joints, const ArmPlan& plan, double dt) {
    const double max_delta = plan.joint_speed_dps * dt;
    ArmStep out{joints, true};
    for (std::size_t i = 0; i < joints.size(); ++i) {
        const double diff = plan.target[i] - joints[i];
        if (std::abs(diff) <= max_delta) {
            out.joints[i] = plan.target[i];
        } else {
            out.joints[i] = joints[i] + sign(diff) * max_delta;
            out.done = false;
        }
    }
    return out;
}

}  // namespace lingua::motion
