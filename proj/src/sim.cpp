#include "lingua/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace lingua::sim {

using world::normalize_heading;
using world::Pose2D;
using world::RobotState;
using world::Vec2;

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

Vec2 rotate(Vec2 v, double deg) {
    const double c = std::cos(deg * kDegToRad);
    const double s = std::sin(deg * kDegToRad);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

bool is_gripper_call(const std::string& n) { return n == "openGripper" || n == "closeGripper"; }
bool is_arm_motion(const std::string& n) {
    return n == "moveArmSequential" || n == "presetFold" || n == "presetExtend";
}
bool needs_arm(const std::string& n) { return is_arm_motion(n) || is_gripper_call(n); }

std::string format_jog(const JogCommand& j) {
    return "jog(" + script::format_number(j.vx) + ", " + script::format_number(j.vy) + ", " +
           script::format_number(j.omega_dps) + ", " + script::format_number(j.duration_s) + ")";
}

}  // namespace

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::call_started: return "call_started";
        case EventKind::call_finished: return "call_finished";
        case EventKind::snapshot_taken: return "snapshot_taken";
        case EventKind::gripper_closed: return "gripper_closed";
        case EventKind::gripper_opened: return "gripper_opened";
        case EventKind::object_attached: return "object_attached";
        case EventKind::object_released: return "object_released";
        case EventKind::overshoot_corrected: return "overshoot_corrected";
        case EventKind::runtime_fault: return "runtime_fault";
    }
    return "?";
}

std::string_view to_string(OutcomeStatus status) {
    switch (status) {
        case OutcomeStatus::completed: return "completed";
        case OutcomeStatus::fault: return "fault";
        case OutcomeStatus::timeout: return "timeout";
    }
    return "?";
}

std::string_view to_string(BindErrorKind kind) {
    switch (kind) {
        case BindErrorKind::unknown_robot: return "unknown_robot";
        case BindErrorKind::capability_mismatch: return "capability_mismatch";
        case BindErrorKind::joint_limit: return "joint_limit";
        case BindErrorKind::robot_busy: return "robot_busy";
    }
    return "?";
}

BindError::BindError(BindErrorKind kind, std::string robot, std::string detail)
    : std::runtime_error(std::string(to_string(kind)) + " (" + robot + "): " + detail),
      kind_(kind),
      robot_(std::move(robot)) {}

Simulator::Simulator(world::Scene scene, RuntimeLimits limits)
    : scene_(std::move(scene)), limits_(limits) {
    for (const auto& rc : scene_.robots) world_.robots.emplace(rc.id, world::initial_state(rc));
    for (const auto& o : scene_.objects) world_.objects.emplace(o.id, ObjectState{o, std::nullopt, {}});
}

const world::RobotConfig& Simulator::config(const std::string& robot) const {
    const auto* rc = scene_.find_robot(robot);
    if (!rc) throw BindError(BindErrorKind::unknown_robot, robot, "no such robot in scene");
    return *rc;
}

void Simulator::validate(const script::MultiRobotPlan& plan) const {
    for (const auto& [id, script] : plan.scripts) {
        const auto* rc = scene_.find_robot(id);
        if (!rc) throw BindError(BindErrorKind::unknown_robot, id, "no such robot in scene");
        if (busy(id)) throw BindError(BindErrorKind::robot_busy, id, "robot is executing another script");
        for (const auto& call : script.calls) {
            if (call.name == "capturePhoto" && !world::has_camera(rc->kind)) {
                BindError e(BindErrorKind::capability_mismatch, id,
                            std::string(world::to_string(rc->kind)) + " has no camera (line " +
                                std::to_string(call.line) + ")");
                e.call = call.name;
                throw e;
            }
            if (needs_arm(call.name) && !world::has_arm(rc->kind)) {
                BindError e(BindErrorKind::capability_mismatch, id,
                            std::string(world::to_string(rc->kind)) + " has no arm for " +
                                call.name + " (line " + std::to_string(call.line) + ")");
                e.call = call.name;
                throw e;
            }
            if (call.name == "moveArmSequential") {
                for (std::size_t j = 0; j < world::kJointCount; ++j) {
                    const double v = call.number(j);
                    const auto& lim = rc->joint_limits[j];
                    if (!lim.contains(v)) {
                        BindError e(BindErrorKind::joint_limit, id,
                                    "joint j" + std::to_string(j + 1) + " value " +
                                        script::format_number(v) + " outside [" +
                                        script::format_number(lim.min) + ", " +
                                        script::format_number(lim.max) + "] (line " +
                                        std::to_string(call.line) + ")");
                        e.joint_index = j;
                        e.value = v;
                        e.call = call.name;
                        throw e;
                    }
                }
            }
        }
    }
}

void Simulator::bind_plan(const script::MultiRobotPlan& plan, const std::string& origin) {
    validate(plan);
    for (const auto& [id, script] : plan.scripts) {
        Task t;
        t.status = TaskStatus::running;
        t.script = script;
        t.script.robot = id;
        t.origin = origin;
        tasks_[id] = std::move(t);
    }
}

void Simulator::start_jog(const std::string& robot, const JogCommand& jog, const std::string& origin) {
    const auto& rc = config(robot);
    if (busy(robot)) throw BindError(BindErrorKind::robot_busy, robot, "robot is busy");
    if (!(jog.duration_s > 0.0) || jog.duration_s > kMaxJogSeconds) {
        throw std::invalid_argument("jog duration must lie in (0, 2] seconds");
    }
    Jog j;
    j.command = jog;
    j.command.vx = std::clamp(jog.vx, -rc.speed.linear_mps, rc.speed.linear_mps);
    j.command.vy = std::clamp(jog.vy, -rc.speed.linear_mps, rc.speed.linear_mps);
    j.command.omega_dps = std::clamp(jog.omega_dps, -rc.speed.angular_dps, rc.speed.angular_dps);
    j.ticks_left = std::max<std::int64_t>(1, std::llround(jog.duration_s / dt()));
    j.origin = origin;
    j.label = format_jog(j.command);
    jogs_[robot] = std::move(j);
}

bool Simulator::busy(const std::string& robot) const {
    auto t = tasks_.find(robot);
    if (t != tasks_.end() && t->second.status == TaskStatus::running) return true;
    return jogs_.count(robot) > 0;
}

bool Simulator::any_running() const {
    for (const auto& [id, t] : tasks_)
        if (t.status == TaskStatus::running) return true;
    return !jogs_.empty();
}

std::map<std::string, ExecutionOutcome> Simulator::outcomes() const {
    std::map<std::string, ExecutionOutcome> out;
    for (const auto& [id, t] : tasks_) {
        if (t.status == TaskStatus::idle || t.status == TaskStatus::running) continue;
        ExecutionOutcome o;
        o.robot = id;
        o.status = t.status == TaskStatus::completed ? OutcomeStatus::completed
                   : t.status == TaskStatus::fault  ? OutcomeStatus::fault
                                                    : OutcomeStatus::timeout;
        o.calls_completed = t.calls_completed;
        o.script_length = t.script.calls.size();
        o.ticks_used = t.ticks_used;
        o.fault = t.fault;
        out.emplace(id, std::move(o));
    }
    return out;
}

void Simulator::emit(std::int64_t tick, const std::string& robot, EventKind kind,
                     std::string payload, const std::string& origin) {
    world_.events.push_back({tick, robot, kind, std::move(payload), origin});
}

void Simulator::step() {
    const std::int64_t tick = world_.tick + 1;
    for (auto& [id, robot] : world_.robots) step_robot(id, tick);
    world_.tick = tick;
    for (auto& [id, robot] : world_.robots) robot.trajectory.push_back({tick, robot.pose});
}

void Simulator::step_robot(const std::string& id, std::int64_t tick) {
    RobotState& robot = world_.robots.at(id);

    if (auto j = jogs_.find(id); j != jogs_.end()) {
        step_jog(robot, j->second, tick);
        if (j->second.ticks_left <= 0) jogs_.erase(j);
    } else if (auto it = tasks_.find(id); it != tasks_.end() && it->second.status == TaskStatus::running) {
        Task& task = it->second;
        if (!task.call_active) begin_call(robot, task, tick);
        ++task.ticks_in_call;
        ++task.ticks_used;

        const auto& call = task.script.calls[task.call_index];
        if (call.name == "closeGripper") {
            close_gripper(robot, task.origin, tick);
            finish_call(robot, task, tick);
        } else if (call.name == "openGripper") {
            open_gripper(robot, task.origin, tick);
            finish_call(robot, task, tick);
        } else if (call.name == "capturePhoto") {
            take_snapshot(robot, task.origin, tick);
            finish_call(robot, task, tick);
        } else if (task.arm) {
            auto s = motion::step_arm(robot.joints, *task.arm, dt());
            robot.joints = s.joints;
            if (s.done) finish_call(robot, task, tick);
        } else if (advance_base(robot, task, tick)) {
            finish_call(robot, task, tick);
        }

        if (task.status == TaskStatus::running && task.call_active) {
            if (task.ticks_in_call >= limits_.max_ticks_per_call) {
                fail_task(robot, task, TaskStatus::fault, "call timeout", tick);
            } else if (task.ticks_used >= limits_.max_ticks_per_script) {
                fail_task(robot, task, TaskStatus::timeout, "script timeout", tick);
            }
        } else if (task.status == TaskStatus::running && task.ticks_used >= limits_.max_ticks_per_script) {
            fail_task(robot, task, TaskStatus::timeout, "script timeout", tick);
        }
    }

    update_carried(robot);
    if (world::has_transport_frame(robot.kind) && !robot.attached_object) {
        auto t = tasks_.find(id);
        auto j = jogs_.find(id);
        const std::string origin = j != jogs_.end() ? j->second.origin
                                   : t != tasks_.end() ? t->second.origin
                                                       : std::string();
        try_transport_capture(robot, origin, tick);
    }
}

void Simulator::begin_call(RobotState& robot, Task& task, std::int64_t tick) {
    const auto& call = task.script.calls[task.call_index];
    task.call_active = true;
    task.ticks_in_call = 0;
    task.moves = motion::decompose(call, robot);
    task.move_index = 0;
    task.move_active = false;
    task.arm.reset();
    const auto& rc = config(robot.id);
    if (call.name == "moveArmSequential") {
        world::JointVector target{};
        for (std::size_t j = 0; j < world::kJointCount; ++j) target[j] = call.number(j);
        task.arm = motion::ArmPlan{target, rc.speed.joint_dps};
    } else if (call.name == "presetFold" || call.name == "presetExtend") {
        const auto* p = rc.preset(call.name == "presetFold" ? "fold" : "extend");
        task.arm = motion::ArmPlan{p ? *p : robot.joints, rc.speed.joint_dps};
    }
    emit(tick, robot.id, EventKind::call_started, script::format_call(call), task.origin);
}

void Simulator::activate_move(RobotState& robot, Task& task) {
    const auto& rc = config(robot.id);
    const auto& m = task.moves[task.move_index];
    task.current = m;
    task.move_origin = robot.pose;
    const auto linear = motion::DecelProfile::linear(rc.decel);
    double target = 0.0;
    switch (m.axis) {
        case motion::Axis::world_x:
            target = m.mode == motion::MoveMode::absolute ? m.value : robot.pose.x + m.value;
            task.controller = motion::AxisController(target, rc.speed.linear_mps, linear);
            break;
        case motion::Axis::world_y:
            target = m.mode == motion::MoveMode::absolute ? m.value : robot.pose.y + m.value;
            task.controller = motion::AxisController(target, rc.speed.linear_mps, linear);
            break;
        case motion::Axis::body_forward:
            if (m.mode == motion::MoveMode::relative) {
                target = m.value;
            } else {
                // Absolute body-forward moves carry a world-x goal reached by driving ahead.
                const double c = std::cos(robot.pose.heading * kDegToRad);
                target = std::abs(c) > 1e-6 ? (m.value - robot.pose.x) / c : 0.0;
            }
            task.controller = motion::AxisController(target, rc.speed.linear_mps, linear);
            break;
        case motion::Axis::body_lateral:
            target = m.value;
            task.controller = motion::AxisController(target, rc.speed.linear_mps, linear);
            break;
        case motion::Axis::heading:
            task.current.value = normalize_heading(m.value);
            task.controller = motion::AxisController(0.0, rc.speed.angular_dps,
                                                     motion::DecelProfile::angular(rc.decel));
            break;
    }
    task.move_active = true;
}

double Simulator::axis_coordinate(const RobotState& robot, const Task& task) const {
    const auto& o = task.move_origin;
    switch (task.current.axis) {
        case motion::Axis::world_x: return robot.pose.x;
        case motion::Axis::world_y: return robot.pose.y;
        case motion::Axis::body_forward:
        case motion::Axis::body_lateral: {
            const double dir =
                o.heading + (task.current.axis == motion::Axis::body_lateral ? 90.0 : 0.0);
            return (robot.pose.x - o.x) * std::cos(dir * kDegToRad) +
                   (robot.pose.y - o.y) * std::sin(dir * kDegToRad);
        }
        case motion::Axis::heading:
            // Signed shortest-path error mapped so that the controller drives toward zero.
            return -normalize_heading(task.current.value - robot.pose.heading);
    }
    return 0.0;
}

void Simulator::apply_axis(RobotState& robot, const Task& task, double from, double to) {
    const double d = to - from;
    switch (task.current.axis) {
        case motion::Axis::world_x: robot.pose.x = to; break;
        case motion::Axis::world_y: robot.pose.y = to; break;
        case motion::Axis::body_forward:
        case motion::Axis::body_lateral: {
            const double dir = task.move_origin.heading +
                               (task.current.axis == motion::Axis::body_lateral ? 90.0 : 0.0);
            robot.pose.x += d * std::cos(dir * kDegToRad);
            robot.pose.y += d * std::sin(dir * kDegToRad);
            break;
        }
        case motion::Axis::heading: robot.pose.set_heading(robot.pose.heading + d); break;
    }
}

bool Simulator::advance_base(RobotState& robot, Task& task, std::int64_t tick) {
    while (task.move_index < task.moves.size()) {
        if (!task.move_active) activate_move(robot, task);
        const double c = axis_coordinate(robot, task);
        const auto t = task.controller.update(c, dt());
        const bool moved = t.next != c;
        if (moved) apply_axis(robot, task, c, t.next);
        if (t.correction_finished) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "call %zu move %zu overshoot %.4f",
                          task.call_index, task.move_index, t.overshoot);
            emit(tick, robot.id, EventKind::overshoot_corrected, buf, task.origin);
        }
        if (!t.done) return false;
        ++task.move_index;
        task.move_active = false;
        if (moved) break;
    }
    return task.move_index >= task.moves.size();
}

void Simulator::finish_call(RobotState& robot, Task& task, std::int64_t tick) {
    const auto& call = task.script.calls[task.call_index];
    emit(tick, robot.id, EventKind::call_finished, script::format_call(call), task.origin);
    ++task.calls_completed;
    ++task.call_index;
    task.call_active = false;
    if (task.call_index >= task.script.calls.size()) task.status = TaskStatus::completed;
}

void Simulator::fail_task(RobotState& robot, Task& task, TaskStatus status, std::string reason,
                          std::int64_t tick) {
    task.status = status;
    task.fault = CallFault{task.call_index, reason};
    task.call_active = false;
    emit(tick, robot.id, EventKind::runtime_fault, std::move(reason), task.origin);
}

void Simulator::step_jog(RobotState& robot, Jog& jog, std::int64_t tick) {
    const auto& c = jog.command;
    const std::int64_t total = std::max<std::int64_t>(1, std::llround(c.duration_s / dt()));
    if (jog.ticks_left == total) emit(tick, robot.id, EventKind::call_started, jog.label, jog.origin);
    const Vec2 v = rotate({c.vx, c.vy}, robot.pose.heading);
    robot.pose.x += v.x * dt();
    robot.pose.y += v.y * dt();
    robot.pose.set_heading(robot.pose.heading + c.omega_dps * dt());
    if (--jog.ticks_left <= 0) emit(tick, robot.id, EventKind::call_finished, jog.label, jog.origin);
}

Vec2 Simulator::carry_origin(const RobotState& robot, double* frame_deg) const {
    if (world::has_arm(robot.kind)) {
        const auto& rc = config(robot.id);
        *frame_deg = robot.pose.heading + robot.joints[0];
        return motion::end_effector_ground_point(robot.pose, robot.joints, rc.arm);
    }
    *frame_deg = robot.pose.heading;
    return robot.pose.position();
}

void Simulator::update_carried(const RobotState& robot) {
    if (!robot.attached_object) return;
    auto& obj = world_.objects.at(*robot.attached_object);
    double frame = 0.0;
    const Vec2 o = carry_origin(robot, &frame);
    const Vec2 r = rotate(obj.offset, frame);
    obj.object.position = {o.x + r.x, o.y + r.y};
}

void Simulator::close_gripper(RobotState& robot, const std::string& origin, std::int64_t tick) {
    robot.gripper = world::GripperState::closed;
    emit(tick, robot.id, EventKind::gripper_closed, "", origin);
    if (robot.attached_object) return;

    double frame = 0.0;
    const Vec2 ee = carry_origin(robot, &frame);
    ObjectState* best = nullptr;
    double best_d = kGraspRadius;
    for (auto& [oid, obj] : world_.objects) {
        if (!obj.object.movable || obj.holder) continue;
        const double d = distance(obj.object.position, ee);
        if (d <= best_d) {
            if (best && d == best_d) continue;
            best = &obj;
            best_d = d;
        }
    }
    if (!best) return;  // closing on empty space is allowed
    best->holder = robot.id;
    best->offset = rotate({best->object.position.x - ee.x, best->object.position.y - ee.y}, -frame);
    robot.attached_object = best->object.id;
    emit(tick, robot.id, EventKind::object_attached, best->object.id, origin);
}

void Simulator::open_gripper(RobotState& robot, const std::string& origin, std::int64_t tick) {
    robot.gripper = world::GripperState::open;
    emit(tick, robot.id, EventKind::gripper_opened, "", origin);
    if (!robot.attached_object) return;
    auto& obj = world_.objects.at(*robot.attached_object);
    obj.holder.reset();
    obj.offset = {};
    const std::string released = *robot.attached_object;
    robot.attached_object.reset();
    emit(tick, robot.id, EventKind::object_released, released, origin);
}

void Simulator::try_transport_capture(RobotState& robot, const std::string& origin, std::int64_t tick) {
    const double near = kTransportFrameOffset - kTransportFrameLength / 2.0;
    const double far = kTransportFrameOffset + kTransportFrameLength / 2.0;
    const double half_w = kTransportFrameWidth / 2.0;
    for (auto& [oid, obj] : world_.objects) {
        if (!obj.object.movable || obj.holder) continue;
        const Vec2 rel = rotate({obj.object.position.x - robot.pose.x,
                                 obj.object.position.y - robot.pose.y},
                                -robot.pose.heading);
        if (rel.x >= near && rel.x <= far && std::abs(rel.y) <= half_w) {
            obj.holder = robot.id;
            obj.offset = rel;
            robot.attached_object = oid;
            emit(tick, robot.id, EventKind::object_attached, oid, origin);
            return;
        }
    }
}

SnapshotRecord Simulator::take_snapshot(RobotState& robot, const std::string& origin, std::int64_t tick) {
    SnapshotRecord rec;
    rec.tick = tick;
    rec.robot = robot.id;
    rec.pose = robot.pose;
    for (const auto& [oid, obj] : world_.objects) {
        const double dx = obj.object.position.x - robot.pose.x;
        const double dy = obj.object.position.y - robot.pose.y;
        const double range = std::hypot(dx, dy);
        const double bearing =
            range > 0.0 ? normalize_heading(std::atan2(dy, dx) * kRadToDeg - robot.pose.heading) : 0.0;
        if (range <= kCameraRange && std::abs(bearing) <= kCameraHalfFov) {
            rec.entries.push_back({oid, range, bearing});
        }
    }
    ++robot.photo_count;
    world_.snapshots.push_back(rec);
    emit(tick, robot.id, EventKind::snapshot_taken, snapshot_record_to_json(rec).dump(), origin);
    return rec;
}

SnapshotRecord Simulator::capture_snapshot(const std::string& robot, const std::string& origin) {
    const auto& rc = config(robot);
    if (!world::has_camera(rc.kind)) {
        throw BindError(BindErrorKind::capability_mismatch, robot, "robot has no camera");
    }
    return take_snapshot(world_.robots.at(robot), origin, world_.tick);
}

void Simulator::inject_disturbance(const std::string& robot, double dx, double dy, double dheading) {
    auto& r = world_.robots.at(robot);
    r.pose.x += dx;
    r.pose.y += dy;
    r.pose.set_heading(r.pose.heading + dheading);
    update_carried(r);
}

std::map<std::string, ExecutionOutcome> run_to_completion(Simulator& sim,
                                                          const script::MultiRobotPlan& plan) {
    sim.bind_plan(plan);
    while (sim.any_running()) sim.step();
    auto all = sim.outcomes();
    std::map<std::string, ExecutionOutcome> out;
    for (const auto& [id, s] : plan.scripts) out.emplace(id, all.at(id));
    return out;
}

RunResult run_to_completion(const world::Scene& scene, const script::MultiRobotPlan& plan,
                            RuntimeLimits limits) {
    Simulator sim(scene, limits);
    auto outcomes = run_to_completion(sim, plan);
    return {sim.world(), std::move(outcomes)};
}

std::string trajectory_hash(const WorldState& world) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a 64
    auto mix = [&h](const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ULL;
        }
    };
    auto mix_i64 = [&](std::int64_t v) {
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff);
        mix(b, 8);
    };
    for (const auto& [id, robot] : world.robots) {
        mix(id.data(), id.size());
        mix("\x1f", 1);
        for (const auto& pt : robot.trajectory) {
            mix_i64(pt.tick);
            mix_i64(std::llround(pt.pose.x * 1e9));
            mix_i64(std::llround(pt.pose.y * 1e9));
            mix_i64(std::llround(pt.pose.heading * 1e9));
        }
        mix("\x1e", 1);
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

nlohmann::json event_to_json(const Event& e) {
    return {{"tick", e.tick},
            {"robot", e.robot},
            {"kind", to_string(e.kind)},
            {"payload", e.payload},
            {"origin", e.origin}};
}

nlohmann::json snapshot_record_to_json(const SnapshotRecord& r) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : r.entries) {
        entries.push_back({{"object", e.object_id}, {"range", e.range}, {"bearing", e.bearing}});
    }
    return {{"tick", r.tick},
            {"robot", r.robot},
            {"pose", {{"x", r.pose.x}, {"y", r.pose.y}, {"heading", r.pose.heading}}},
            {"entries", entries}};
}

nlohmann::json snapshot_to_json(const WorldState& world, std::size_t events_from) {
    using nlohmann::json;
    json robots = json::array();
    for (const auto& [id, r] : world.robots) {
        json trail = json::array();
        const std::size_t n = r.trajectory.size();
        const std::size_t first = n > 200 ? n - 200 : 0;
        for (std::size_t i = first; i < n; i += 4) {
            trail.push_back({r.trajectory[i].pose.x, r.trajectory[i].pose.y});
        }
        robots.push_back({{"id", id},
                          {"kind", world::to_string(r.kind)},
                          {"x", r.pose.x},
                          {"y", r.pose.y},
                          {"heading", r.pose.heading},
                          {"joints", std::vector<double>(r.joints.begin(), r.joints.end())},
                          {"gripper", world::to_string(r.gripper)},
                          {"attached", r.attached_object ? json(*r.attached_object) : json(nullptr)},
                          {"photo_count", r.photo_count},
                          {"trail", trail}});
    }
    json objects = json::array();
    for (const auto& [id, o] : world.objects) {
        objects.push_back({{"id", id},
                           {"shape", world::to_string(o.object.shape)},
                           {"x", o.object.position.x},
                           {"y", o.object.position.y},
                           {"extent", o.object.extent},
                           {"movable", o.object.movable},
                           {"holder", o.holder ? json(*o.holder) : json(nullptr)}});
    }
    json events = json::array();
    for (std::size_t i = events_from; i < world.events.size(); ++i) {
        events.push_back(event_to_json(world.events[i]));
    }
    return {{"tick", world.tick}, {"robots", robots}, {"objects", objects}, {"events", events}};
}

}  // namespace lingua::sim
