#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lingua/motion.hpp"
#include "lingua/script.hpp"
#include "lingua/world.hpp"

namespace lingua::sim {

// Fixed geometry of the executor. The transport frame is expressed in the box robot's body
// frame: `length` along the heading, `width` across it, centered `offset` ahead of the base.
inline constexpr double kGraspRadius = 0.05;
inline constexpr double kTransportFrameLength = 0.35;
inline constexpr double kTransportFrameWidth = 0.30;
inline constexpr double kTransportFrameOffset = 0.30;
inline constexpr double kCameraRange = 3.0;
inline constexpr double kCameraHalfFov = 60.0;
inline constexpr double kMaxJogSeconds = 2.0;

enum class EventKind {
    call_started,
    call_finished,
    snapshot_taken,
    gripper_closed,
    gripper_opened,
    object_attached,
    object_released,
    overshoot_corrected,
    runtime_fault,
};

std::string_view to_string(EventKind kind);

struct Event {
    std::int64_t tick = 0;
    std::string robot;
    EventKind kind = EventKind::call_started;
    std::string payload;  // call text, object id, snapshot summary or fault reason
    std::string origin;   // command/action id that caused the activity, may be empty

    friend bool operator==(const Event&, const Event&) = default;
};

struct SnapshotEntry {
    std::string object_id;
    double range = 0.0;    // meters
    double bearing = 0.0;  // degrees relative to heading, in [-180, 180)

    friend bool operator==(const SnapshotEntry&, const SnapshotEntry&) = default;
};

struct SnapshotRecord {
    std::int64_t tick = 0;
    std::string robot;
    world::Pose2D pose;
    std::vector<SnapshotEntry> entries;

    friend bool operator==(const SnapshotRecord&, const SnapshotRecord&) = default;
};

struct ObjectState {
    world::SceneObject object;              // position is live
    std::optional<std::string> holder;      // robot carrying it
    world::Vec2 offset;                     // position relative to the holder's carry frame

    friend bool operator==(const ObjectState&, const ObjectState&) = default;
};

struct WorldState {
    std::int64_t tick = 0;
    std::map<std::string, world::RobotState> robots;
    std::map<std::string, ObjectState> objects;
    std::vector<Event> events;
    std::vector<SnapshotRecord> snapshots;

    friend bool operator==(const WorldState&, const WorldState&) = default;
};

enum class OutcomeStatus { completed, fault, timeout };
std::string_view to_string(OutcomeStatus status);

struct CallFault {
    std::size_t call_index = 0;
    std::string reason;

    friend bool operator==(const CallFault&, const CallFault&) = default;
};

struct ExecutionOutcome {
    std::string robot;
    OutcomeStatus status = OutcomeStatus::completed;
    std::size_t calls_completed = 0;
    std::size_t script_length = 0;
    std::int64_t ticks_used = 0;
    std::optional<CallFault> fault;

    friend bool operator==(const ExecutionOutcome&, const ExecutionOutcome&) = default;
};

struct RuntimeLimits {
    std::int64_t max_ticks_per_call = 4000;
    std::int64_t max_ticks_per_script = 40000;
};

enum class BindErrorKind { unknown_robot, capability_mismatch, joint_limit, robot_busy };
std::string_view to_string(BindErrorKind kind);

class BindError : public std::runtime_error {
public:
    BindError(BindErrorKind kind, std::string robot, std::string detail);

    BindErrorKind kind() const noexcept { return kind_; }
    const std::string& robot() const noexcept { return robot_; }
    std::size_t joint_index = 0;
    double value = 0.0;
    std::string call;

private:
    BindErrorKind kind_;
    std::string robot_;
};

/// Body-frame teleop velocity held for a bounded duration.
struct JogCommand {
    double vx = 0.0;         // m/s along the heading
    double vy = 0.0;         // m/s to the left of the heading
    double omega_dps = 0.0;  // deg/s, counterclockwise
    double duration_s = 0.0;
};

/// Deterministic fixed-timestep executor. Owns the world state and every robot's call queue;
/// robots advance concurrently, updated in ascending id order each tick.
class Simulator {
public:
    explicit Simulator(world::Scene scene, RuntimeLimits limits = {});

    const world::Scene& scene() const { return scene_; }
    const WorldState& world() const { return world_; }
    double dt() const { return scene_.tick_seconds; }
    const RuntimeLimits& limits() const { return limits_; }
    void set_limits(RuntimeLimits limits) { limits_ = limits; }

    /// Throws BindError without touching any state.
    void validate(const script::MultiRobotPlan& plan) const;
    /// Validates, then queues each script on its robot.
    void bind_plan(const script::MultiRobotPlan& plan, const std::string& origin = {});
    void start_jog(const std::string& robot, const JogCommand& jog, const std::string& origin = {});

    void step();

    bool busy(const std::string& robot) const;
    bool any_running() const;

    /// Outcomes of the most recent script bound to each robot (running scripts excluded).
    std::map<std::string, ExecutionOutcome> outcomes() const;

    /// Records what the robot's camera sees right now. Throws BindError for camera-less robots.
    SnapshotRecord capture_snapshot(const std::string& robot, const std::string& origin = {});

    /// Displaces a robot's base; used to exercise overshoot handling.
    void inject_disturbance(const std::string& robot, double dx, double dy, double dheading);

private:
    enum class TaskStatus { idle, running, completed, fault, timeout };

    struct Task {
        TaskStatus status = TaskStatus::idle;
        script::ActionScript script;
        std::string origin;
        std::size_t call_index = 0;
        bool call_active = false;
        std::vector<motion::AxisMove> moves;
        std::size_t move_index = 0;
        bool move_active = false;
        motion::AxisMove current;
        motion::AxisController controller;
        world::Pose2D move_origin;
        std::optional<motion::ArmPlan> arm;
        std::int64_t ticks_in_call = 0;
        std::int64_t ticks_used = 0;
        std::size_t calls_completed = 0;
        std::optional<CallFault> fault;
    };

    struct Jog {
        JogCommand command;
        std::int64_t ticks_left = 0;
        std::string origin;
        std::string label;
    };

    void step_robot(const std::string& id, std::int64_t tick);
    void begin_call(world::RobotState& robot, Task& task, std::int64_t tick);
    bool advance_base(world::RobotState& robot, Task& task, std::int64_t tick);
    void activate_move(world::RobotState& robot, Task& task);
    double axis_coordinate(const world::RobotState& robot, const Task& task) const;
    void apply_axis(world::RobotState& robot, const Task& task, double from, double to);
    void finish_call(world::RobotState& robot, Task& task, std::int64_t tick);
    void fail_task(world::RobotState& robot, Task& task, TaskStatus status, std::string reason,
                   std::int64_t tick);
    void step_jog(world::RobotState& robot, Jog& jog, std::int64_t tick);

    void close_gripper(world::RobotState& robot, const std::string& origin, std::int64_t tick);
    void open_gripper(world::RobotState& robot, const std::string& origin, std::int64_t tick);
    SnapshotRecord take_snapshot(world::RobotState& robot, const std::string& origin,
                                 std::int64_t tick);
    void update_carried(const world::RobotState& robot);
    void try_transport_capture(world::RobotState& robot, const std::string& origin,
                               std::int64_t tick);
    world::Vec2 carry_origin(const world::RobotState& robot, double* frame_deg) const;

    void emit(std::int64_t tick, const std::string& robot, EventKind kind, std::string payload,
              const std::string& origin);

    const world::RobotConfig& config(const std::string& robot) const;

    world::Scene scene_;
    RuntimeLimits limits_;
    WorldState world_;
    std::map<std::string, Task> tasks_;
    std::map<std::string, Jog> jogs_;
};

struct RunResult {
    WorldState world;
    std::map<std::string, ExecutionOutcome> outcomes;
};

/// Binds the plan on a fresh world and steps until every script has completed, faulted or
/// timed out. BindError propagates.
RunResult run_to_completion(const world::Scene& scene, const script::MultiRobotPlan& plan,
                            RuntimeLimits limits = {});
/// Same, on an existing simulator (its robots must be idle).
std::map<std::string, ExecutionOutcome> run_to_completion(Simulator& sim,
                                                          const script::MultiRobotPlan& plan);

/// Stable hex digest of every robot's trajectory with poses rounded to 1e-9.
std::string trajectory_hash(const WorldState& world);

nlohmann::json event_to_json(const Event& event);
nlohmann::json snapshot_record_to_json(const SnapshotRecord& record);
/// `{tick, robots:[...], objects:[...], events:[...]}` with events[events_from..].
nlohmann::json snapshot_to_json(const WorldState& world, std::size_t events_from = 0);

}  // namespace lingua::sim
