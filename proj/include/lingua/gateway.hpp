#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lingua/planner.hpp"
#include "lingua/sim.hpp"
#include "lingua/world.hpp"

namespace lingua::gateway {

class RobotBusy : public std::runtime_error {
public:
    explicit RobotBusy(std::string robot)
        : std::runtime_error("robot '" + robot + "' is busy"), robot_(std::move(robot)) {}
    const std::string& robot() const noexcept { return robot_; }

private:
    std::string robot_;
};

class CapabilityMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class LimitsViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input from a client: unknown robot, unknown backend, empty text, malformed action.
class InvalidRequest : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Client-side stamps, milliseconds since the epoch as sent by the browser.
struct ClientTiming {
    std::optional<std::int64_t> input_started_ms;
    std::optional<std::int64_t> submitted_ms;
    std::optional<std::string> task_id;
    std::string session_id;
};

struct CommandRequest {
    std::string text;
    std::vector<std::string> robots;  // empty: every robot
    std::string backend;              // empty: the default backend
    ClientTiming timing;
};

enum class PlanStatus { executing, parse_failed, bind_failed, backend_unreachable };
std::string_view to_string(PlanStatus status);

struct CommandResult {
    std::string command_id;
    std::optional<planner::PlannerExchange> exchange;
    PlanStatus status = PlanStatus::executing;
    std::string detail;
};

nlohmann::json command_result_to_json(const CommandResult& result);

struct BaseJog {
    double vx = 0.0;
    double vy = 0.0;
    double omega_dps = 0.0;
    double duration_s = 0.0;
};
struct BaseMove {
    std::string call;  // a single base-motion primitive call, e.g. "moveToY(1.0)"
};
struct ArmSet {
    world::JointVector joints{};
};
struct ArmPreset {
    std::string name;
};
struct Gripper {
    bool close = false;
};
struct CapturePhoto {};

using ManualAction = std::variant<BaseJog, BaseMove, ArmSet, ArmPreset, Gripper, CapturePhoto>;

/// `{kind: base_jog|base_move|arm_set|arm_preset|gripper|capture_photo, ...}`.
ManualAction manual_action_from_json(const nlohmann::json& j);
std::string_view action_kind(const ManualAction& action);

struct ManualAck {
    std::string action_id;
    std::string robot;
    std::string kind;
    std::string call;  // the script call or jog label that was queued
};

enum class TimingMode { manual, natural_language };
std::string_view to_string(TimingMode mode);

struct SessionTiming {
    std::string session_id;
    std::string command_id;
    std::optional<std::string> task_id;
    TimingMode mode = TimingMode::natural_language;
    std::optional<std::int64_t> input_started_ms;
    std::optional<std::int64_t> client_submitted_ms;
    std::int64_t server_submitted_ms = 0;

    /// submitted minus started, using the client submit stamp when present. Empty when the
    /// start stamp is missing or the difference would be negative.
    std::optional<double> operation_seconds() const;
};

struct TimingRow {
    TimingMode mode = TimingMode::natural_language;
    std::string command_id;  // or "task:<id>" for grouped manual sequences
    std::optional<double> operation_seconds;
    std::size_t actions = 1;
};

class TimingLog {
public:
    void record(SessionTiming timing);
    std::vector<SessionTiming> entries() const;
    std::vector<SessionTiming> entries(TimingMode mode) const;
    /// One row per command, with entries sharing a task id merged (times summed).
    std::vector<TimingRow> rows() const;
    /// `mode,command_id,operation_seconds`; null seconds are written as an empty field.
    std::string to_csv() const;
    void clear();

private:
    mutable std::mutex mu_;
    std::vector<SessionTiming> entries_;
};

struct StreamMessage {
    std::string type;  // state | events | status
    nlohmann::json body;

    std::string dump() const;
};

/// A bounded mailbox filled by the step loop. At most one state message is pending at a time;
/// a newer one replaces it and inherits its events, flagged with `gap: true`.
class Subscriber {
public:
    Subscriber(std::uint64_t id, int every_n) : id_(id), every_n_(every_n) {}

    std::uint64_t id() const { return id_; }
    int every_n() const { return every_n_; }

    std::optional<StreamMessage> poll(std::chrono::milliseconds timeout);
    std::vector<StreamMessage> drain();
    std::size_t dropped() const;

    void push_state(nlohmann::json snapshot, nlohmann::json events);
    void push(StreamMessage message);

private:
    std::uint64_t id_;
    int every_n_;
    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::deque<StreamMessage> queue_;
    std::size_t dropped_ = 0;

    friend class Gateway;
    std::size_t event_cursor_ = 0;
};

struct TickStats {
    std::size_t intervals = 0;
    double mean_interval_s = 0.0;
    double max_interval_s = 0.0;
    double max_abs_jitter_s = 0.0;  // largest |interval - dt|
};

struct GatewayConfig {
    std::map<std::string, std::shared_ptr<planner::ChatBackend>> backends;
    std::string default_backend;
    sim::RuntimeLimits limits;
    planner::PromptTemplate prompt = planner::PromptTemplate::default_template();
    std::size_t state_event_window = 200;
};

/// Hosts the live world. One writer steps the simulator; requests reach it through an
/// ordered mailbox, or execute inline while the loop is stopped (deterministic tick_once mode).
class Gateway {
public:
    Gateway(world::Scene scene, GatewayConfig config);
    ~Gateway();
    Gateway(const Gateway&) = delete;
    Gateway& operator=(const Gateway&) = delete;

    /// Starts the realtime loop at one tick per `dt * time_scale` seconds.
    void start(double time_scale = 1.0);
    void stop();
    bool running() const { return running_; }
    /// Steps n ticks on the caller's thread; only valid while the loop is stopped.
    void tick_once(int n = 1);
    /// Steps until nothing is running or `max_ticks` elapse; loop must be stopped.
    std::int64_t run_until_idle(std::int64_t max_ticks = 100000);

    CommandResult submit_command(CommandRequest request);
    ManualAck manual_control(const std::string& robot, const ManualAction& action,
                             const ClientTiming& timing = {});

    nlohmann::json state() const;
    nlohmann::json backends_json() const;
    std::vector<std::string> backend_ids() const;
    void load_scene(world::Scene scene);
    world::Scene scene() const;
    sim::WorldState world() const;
    std::string trajectory_hash() const;

    std::shared_ptr<Subscriber> subscribe(int every_n_ticks);
    void unsubscribe(std::uint64_t id);
    std::size_t subscriber_count() const;

    TimingLog& timings() { return timings_; }
    const TimingLog& timings() const { return timings_; }
    TickStats tick_stats() const;

    static std::int64_t now_ms();

private:
    using Job = std::function<void()>;

    void post(Job job);  // runs on the step loop (or inline when stopped) and waits
    void loop(double time_scale);
    void advance_one();  // caller holds sim_mu_
    void publish();      // caller holds sim_mu_
    void check_commands();
    void record_manual_timing(const std::string& id, const ClientTiming& timing, std::int64_t server_ms);
    ManualAck queue_call(const std::string& robot, const std::string& kind, script::ActionCall call,
                         const ClientTiming& timing);

    GatewayConfig config_;
    mutable std::mutex sim_mu_;
    std::unique_ptr<sim::Simulator> sim_;

    std::mutex mailbox_mu_;
    std::condition_variable mailbox_cv_;
    std::deque<Job> mailbox_;

    std::atomic<bool> running_{false};
    std::atomic<bool> stop_requested_{false};
    std::thread loop_thread_;

    mutable std::mutex sub_mu_;
    std::map<std::uint64_t, std::shared_ptr<Subscriber>> subscribers_;
    std::uint64_t next_subscriber_ = 1;

    std::mutex id_mu_;
    std::uint64_t next_command_ = 1;
    std::uint64_t next_action_ = 1;

    struct ActiveCommand {
        std::vector<std::string> robots;
    };
    std::map<std::string, ActiveCommand> active_;  // guarded by sim_mu_

    TimingLog timings_;

    mutable std::mutex stats_mu_;
    std::vector<double> intervals_;
};

}  // namespace lingua::gateway
