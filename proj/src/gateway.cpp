#include "lingua/gateway.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <set>

namespace lingua::gateway {

using nlohmann::json;

std::string_view to_string(PlanStatus s) {
    switch (s) {
        case PlanStatus::executing: return "executing";
        case PlanStatus::parse_failed: return "parse_failed";
        case PlanStatus::bind_failed: return "bind_failed";
        case PlanStatus::backend_unreachable: return "backend_unreachable";
    }
    return "executing";
}

std::string_view to_string(TimingMode m) {
    return m == TimingMode::manual ? "manual" : "natural_language";
}

json command_result_to_json(const CommandResult& r) {
    json j = {{"command_id", r.command_id},
              {"status", std::string(to_string(r.status))},
              {"detail", r.detail}};
    // the prompt stays available for the UI's disclosure toggle
    j["exchange"] = r.exchange ? planner::exchange_to_json(*r.exchange, true) : json(nullptr);
    return j;
}

// ---- manual actions ------------------------------------------------------------------

namespace {

double number_field(const json& j, const char* key, std::optional<double> fallback = {}) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw InvalidRequest(std::string("missing field '") + key + "'");
    }
    if (!j.at(key).is_number()) throw InvalidRequest(std::string("field '") + key + "' must be a number");
    return j.at(key).get<double>();
}

std::string string_field(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_string())
        throw InvalidRequest(std::string("missing string field '") + key + "'");
    return j.at(key).get<std::string>();
}

bool is_base_motion(const std::string& n) {
    return n == "moveForward" || n == "moveLateral" || n == "moveToX" || n == "moveToY" ||
           n == "moveToXY" || n == "moveToXWithRotation" || n == "rotateToBeta";
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

ManualAction manual_action_from_json(const json& j) {
    if (!j.is_object()) throw InvalidRequest("manual action must be a JSON object");
    const std::string kind = string_field(j, "kind");
    if (kind == "base_jog") {
        return BaseJog{number_field(j, "vx", 0.0), number_field(j, "vy", 0.0),
                       number_field(j, "omega", number_field(j, "omega_dps", 0.0)),
                       number_field(j, "duration")};
    }
    if (kind == "base_move") return BaseMove{string_field(j, "call")};
    if (kind == "arm_set") {
        if (!j.contains("joints") || !j.at("joints").is_array() || j.at("joints").size() != 5)
            throw InvalidRequest("arm_set needs five joint values");
        ArmSet a;
        for (std::size_t i = 0; i < 5; ++i) {
            if (!j.at("joints").at(i).is_number()) throw InvalidRequest("joint values must be numbers");
            a.joints[i] = j.at("joints").at(i).get<double>();
        }
        return a;
    }
    if (kind == "arm_preset") return ArmPreset{string_field(j, "name")};
    if (kind == "gripper") {
        std::string s = string_field(j, "state");
        if (s != "open" && s != "close" && s != "closed")
            throw InvalidRequest("gripper state must be open or close");
        return Gripper{s != "open"};
    }
    if (kind == "capture_photo") return CapturePhoto{};
    throw InvalidRequest("unknown manual action '" + kind + "'");
}

std::string_view action_kind(const ManualAction& a) {
    static constexpr std::string_view names[] = {"base_jog", "base_move", "arm_set",
                                                 "arm_preset", "gripper", "capture_photo"};
    return names[a.index()];
}

// ---- timing -----------------------------------------------------------------------------

std::optional<double> SessionTiming::operation_seconds() const {
    if (!input_started_ms) return std::nullopt;
    const std::int64_t end = client_submitted_ms ? *client_submitted_ms : server_submitted_ms;
    const std::int64_t ms = end - *input_started_ms;
    if (ms < 0) return std::nullopt;
    return static_cast<double>(ms) / 1000.0;
}

void TimingLog::record(SessionTiming t) {
    std::lock_guard lk(mu_);
    entries_.push_back(std::move(t));
}

std::vector<SessionTiming> TimingLog::entries() const {
    std::lock_guard lk(mu_);
    return entries_;
}

std::vector<SessionTiming> TimingLog::entries(TimingMode mode) const {
    std::lock_guard lk(mu_);
    std::vector<SessionTiming> out;
    for (const auto& e : entries_)
        if (e.mode == mode) out.push_back(e);
    return out;
}

std::vector<TimingRow> TimingLog::rows() const {
    std::lock_guard lk(mu_);
    std::vector<TimingRow> out;
    std::map<std::pair<int, std::string>, std::size_t> task_row;
    std::map<std::size_t, std::int64_t> task_ms;
    std::set<std::size_t> task_unknown;
    for (const auto& e : entries_) {
        auto secs = e.operation_seconds();
        if (!e.task_id) {
            out.push_back({e.mode, e.command_id, secs, 1});
            continue;
        }
        auto key = std::make_pair(static_cast<int>(e.mode), *e.task_id);
        auto it = task_row.find(key);
        if (it == task_row.end()) {
            it = task_row.emplace(key, out.size()).first;
            out.push_back({e.mode, "task:" + *e.task_id, std::nullopt, 0});
            task_ms[it->second] = 0;
        }
        auto& row = out[it->second];
        ++row.actions;
        // sum in whole milliseconds so grouped totals stay exact
        if (secs) task_ms[it->second] += std::llround(*secs * 1000.0);
        else task_unknown.insert(it->second);
    }
    for (auto& [idx, ms] : task_ms) {
        if (!task_unknown.count(idx)) out[idx].operation_seconds = static_cast<double>(ms) / 1000.0;
    }
    return out;
}

std::string TimingLog::to_csv() const {
    std::string out = "mode,command_id,operation_seconds\n";
    char buf[64];
    for (const auto& r : rows()) {
        out += std::string(to_string(r.mode)) + "," + r.command_id + ",";
        if (r.operation_seconds) {
            std::snprintf(buf, sizeof buf, "%.3f", *r.operation_seconds);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

void TimingLog::clear() {
    std::lock_guard lk(mu_);
    entries_.clear();
}

// ---- subscribers --------------------------------------------------------------------------

std::string StreamMessage::dump() const {
    json j = body;
    j["type"] = type;
    return j.dump();
}

namespace {
constexpr std::size_t kMaxQueued = 256;
}

std::optional<StreamMessage> Subscriber::poll(std::chrono::milliseconds timeout) {
    std::unique_lock lk(mu_);
    if (!cv_.wait_for(lk, timeout, [&] { return !queue_.empty(); })) return std::nullopt;
    StreamMessage m = std::move(queue_.front());
    queue_.pop_front();
    return m;
}

std::vector<StreamMessage> Subscriber::drain() {
    std::lock_guard lk(mu_);
    std::vector<StreamMessage> out(std::make_move_iterator(queue_.begin()),
                                   std::make_move_iterator(queue_.end()));
    queue_.clear();
    return out;
}

std::size_t Subscriber::dropped() const {
    std::lock_guard lk(mu_);
    return dropped_;
}

void Subscriber::push_state(json snapshot, json events) {
    {
        std::lock_guard lk(mu_);
        auto pending = std::find_if(queue_.begin(), queue_.end(),
                                    [](const StreamMessage& m) { return m.type == "state"; });
        if (pending != queue_.end()) {
            // the reader fell behind: keep only the newest snapshot, carry every event forward
            json merged = std::move(pending->body["events"]);
            for (auto& e : events) merged.push_back(std::move(e));
            queue_.erase(pending);
            ++dropped_;
            queue_.push_back({"state", {{"snapshot", std::move(snapshot)},
                                        {"events", std::move(merged)},
                                        {"gap", true}}});
        } else {
            queue_.push_back({"state", {{"snapshot", std::move(snapshot)},
                                        {"events", std::move(events)},
                                        {"gap", false}}});
        }
    }
    cv_.notify_one();
}

void Subscriber::push(StreamMessage message) {
    {
        std::lock_guard lk(mu_);
        if (queue_.size() >= kMaxQueued) {
            auto victim = std::find_if(queue_.begin(), queue_.end(),
                                       [](const StreamMessage& m) { return m.type != "state"; });
            if (victim != queue_.end()) {
                queue_.erase(victim);
                ++dropped_;
            }
        }
        queue_.push_back(std::move(message));
    }
    cv_.notify_one();
}

// ---- gateway --------------------------------------------------------------------------------

Gateway::Gateway(world::Scene scene, GatewayConfig config)
    : config_(std::move(config)),
      sim_(std::make_unique<sim::Simulator>(std::move(scene), config_.limits)) {
    if (config_.default_backend.empty() && !config_.backends.empty())
        config_.default_backend = config_.backends.begin()->first;
}

Gateway::~Gateway() { stop(); }

std::int64_t Gateway::now_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

void Gateway::start(double time_scale) {
    if (running_) return;
    if (!(time_scale > 0.0)) throw std::invalid_argument("time scale must be positive");
    stop_requested_ = false;
    {
        std::lock_guard lk(stats_mu_);
        intervals_.clear();
    }
    running_ = true;
    loop_thread_ = std::thread([this, time_scale] { loop(time_scale); });
}

void Gateway::stop() {
    if (!running_) return;
    {
        std::lock_guard lk(mailbox_mu_);
        stop_requested_ = true;
    }
    mailbox_cv_.notify_all();
    if (loop_thread_.joinable()) loop_thread_.join();
    running_ = false;
}

void Gateway::loop(double time_scale) {
    using clock = std::chrono::steady_clock;
    const auto period = std::chrono::duration_cast<clock::duration>(
        std::chrono::duration<double>(sim_->dt() * time_scale));
    auto last = clock::now();
    auto next = last + period;

    auto run_jobs = [&](std::unique_lock<std::mutex>& mlk) {
        while (!mailbox_.empty()) {
            Job job = std::move(mailbox_.front());
            mailbox_.pop_front();
            mlk.unlock();
            {
                std::lock_guard slk(sim_mu_);
                job();
            }
            mlk.lock();
        }
    };

    std::unique_lock mlk(mailbox_mu_);
    while (!stop_requested_) {
        mailbox_cv_.wait_until(mlk, next, [&] { return stop_requested_ || !mailbox_.empty(); });
        run_jobs(mlk);
        if (stop_requested_) break;
        const auto now = clock::now();
        if (now < next) continue;

        mlk.unlock();
        {
            std::lock_guard slk(sim_mu_);
            advance_one();
        }
        {
            std::lock_guard lk(stats_mu_);
            intervals_.push_back(std::chrono::duration<double>(now - last).count());
            if (intervals_.size() > 200000) intervals_.erase(intervals_.begin(), intervals_.begin() + 100000);
        }
        last = now;
        next += period;
        if (next < now) next = now + period;  // fell far behind: resynchronize
        mlk.lock();
    }
    // anything posted while stopping still executes, in order
    run_jobs(mlk);
}

void Gateway::post(Job job) {
    std::unique_lock mlk(mailbox_mu_);
    if (!running_ || stop_requested_) {
        mlk.unlock();
        std::lock_guard slk(sim_mu_);
        job();
        return;
    }
    auto done = std::make_shared<std::promise<void>>();
    auto fut = done->get_future();
    mailbox_.push_back([job = std::move(job), done] {
        try {
            job();
            done->set_value();
        } catch (...) {
            done->set_exception(std::current_exception());
        }
    });
    mlk.unlock();
    mailbox_cv_.notify_all();
    fut.get();
}

void Gateway::tick_once(int n) {
    if (running_) throw std::logic_error("tick_once while the step loop is running");
    std::lock_guard slk(sim_mu_);
    for (int i = 0; i < n; ++i) advance_one();
}

std::int64_t Gateway::run_until_idle(std::int64_t max_ticks) {
    if (running_) throw std::logic_error("run_until_idle while the step loop is running");
    std::lock_guard slk(sim_mu_);
    std::int64_t n = 0;
    while (sim_->any_running() && n < max_ticks) {
        advance_one();
        ++n;
    }
    return n;
}

void Gateway::advance_one() {
    sim_->step();
    check_commands();
    publish();
}

void Gateway::check_commands() {
    for (auto it = active_.begin(); it != active_.end();) {
        const auto& robots = it->second.robots;
        bool busy = std::any_of(robots.begin(), robots.end(),
                                [&](const std::string& r) { return sim_->busy(r); });
        if (busy) {
            ++it;
            continue;
        }
        auto outcomes = sim_->outcomes();
        std::string status = "completed";
        json per_robot = json::object();
        for (const auto& r : robots) {
            auto o = outcomes.find(r);
            if (o == outcomes.end()) continue;
            per_robot[r] = {{"status", std::string(sim::to_string(o->second.status))},
                            {"calls_completed", o->second.calls_completed},
                            {"script_length", o->second.script_length},
                            {"ticks_used", o->second.ticks_used},
                            {"fault", o->second.fault ? json(o->second.fault->reason) : json(nullptr)}};
            if (o->second.status != sim::OutcomeStatus::completed && status == "completed")
                status = std::string(sim::to_string(o->second.status));
        }
        StreamMessage m{"status",
                        {{"command_id", it->first},
                         {"status", status},
                         {"tick", sim_->world().tick},
                         {"outcomes", per_robot}}};
        {
            std::lock_guard lk(sub_mu_);
            for (auto& [id, s] : subscribers_) s->push(m);
        }
        it = active_.erase(it);
    }
}

void Gateway::publish() {
    std::vector<std::shared_ptr<Subscriber>> due;
    {
        std::lock_guard lk(sub_mu_);
        const auto tick = sim_->world().tick;
        for (auto& [id, s] : subscribers_)
            if (tick % s->every_n() == 0) due.push_back(s);
    }
    if (due.empty()) return;
    const auto& w = sim_->world();
    json snapshot = sim::snapshot_to_json(w, w.events.size());
    snapshot.erase("events");
    for (auto& s : due) {
        json events = json::array();
        for (std::size_t i = std::min(s->event_cursor_, w.events.size()); i < w.events.size(); ++i)
            events.push_back(sim::event_to_json(w.events[i]));
        s->event_cursor_ = w.events.size();
        s->push_state(snapshot, std::move(events));
    }
}

std::shared_ptr<Subscriber> Gateway::subscribe(int every_n_ticks) {
    if (every_n_ticks < 1) throw InvalidRequest("every_n must be at least 1");
    std::shared_ptr<Subscriber> s;
    json backlog = json::array();
    {
        std::lock_guard slk(sim_mu_);
        std::lock_guard lk(sub_mu_);
        s = std::make_shared<Subscriber>(next_subscriber_++, every_n_ticks);
        const auto& w = sim_->world();
        s->event_cursor_ = w.events.size();
        const std::size_t from =
            w.events.size() > config_.state_event_window ? w.events.size() - config_.state_event_window : 0;
        for (std::size_t i = from; i < w.events.size(); ++i) backlog.push_back(sim::event_to_json(w.events[i]));
        subscribers_[s->id()] = s;
        json snapshot = sim::snapshot_to_json(w, w.events.size());
        snapshot.erase("events");
        s->push({"events", {{"events", backlog}, {"backlog", true}}});
        s->push_state(snapshot, json::array());
    }
    return s;
}

void Gateway::unsubscribe(std::uint64_t id) {
    std::lock_guard lk(sub_mu_);
    subscribers_.erase(id);
}

std::size_t Gateway::subscriber_count() const {
    std::lock_guard lk(sub_mu_);
    return subscribers_.size();
}

TickStats Gateway::tick_stats() const {
    std::lock_guard lk(stats_mu_);
    TickStats st;
    st.intervals = intervals_.size();
    if (intervals_.empty()) return st;
    const double dt = sim_->dt();
    double sum = 0.0;
    for (double v : intervals_) {
        sum += v;
        st.max_interval_s = std::max(st.max_interval_s, v);
        st.max_abs_jitter_s = std::max(st.max_abs_jitter_s, std::fabs(v - dt));
    }
    st.mean_interval_s = sum / static_cast<double>(intervals_.size());
    return st;
}

json Gateway::state() const {
    std::lock_guard slk(sim_mu_);
    const auto& w = sim_->world();
    const std::size_t from =
        w.events.size() > config_.state_event_window ? w.events.size() - config_.state_event_window : 0;
    json j = sim::snapshot_to_json(w, from);
    json busy = json::object();
    for (const auto& id : sim_->scene().robot_ids()) busy[id] = sim_->busy(id);
    j["busy"] = busy;
    j["dt"] = sim_->dt();
    j["scene"] = sim_->scene().name;
    j["running"] = running_.load();
    json regions = json::array();
    for (const auto& r : sim_->scene().regions)
        regions.push_back({{"id", r.id}, {"x", r.center.x}, {"y", r.center.y},
                           {"hx", r.half_size.x}, {"hy", r.half_size.y}});
    j["regions"] = regions;
    return j;
}

std::vector<std::string> Gateway::backend_ids() const {
    std::vector<std::string> ids;
    for (const auto& [k, v] : config_.backends) ids.push_back(k);
    return ids;
}

json Gateway::backends_json() const {
    json list = json::array();
    for (const auto& [k, v] : config_.backends) list.push_back({{"id", k}, {"label", v->id()}});
    return {{"backends", list}, {"default", config_.default_backend}};
}

void Gateway::load_scene(world::Scene scene) {
    post([this, scene = std::move(scene)]() mutable {
        sim_ = std::make_unique<sim::Simulator>(std::move(scene), config_.limits);
        active_.clear();
        std::lock_guard lk(sub_mu_);
        for (auto& [id, s] : subscribers_) {
            s->event_cursor_ = 0;
            s->push({"status", {{"status", "scene_loaded"}, {"scene", sim_->scene().name}}});
        }
    });
}

world::Scene Gateway::scene() const {
    std::lock_guard slk(sim_mu_);
    return sim_->scene();
}

sim::WorldState Gateway::world() const {
    std::lock_guard slk(sim_mu_);
    return sim_->world();
}

std::string Gateway::trajectory_hash() const {
    std::lock_guard slk(sim_mu_);
    return sim::trajectory_hash(sim_->world());
}

CommandResult Gateway::submit_command(CommandRequest req) {
    const std::int64_t server_ms = now_ms();
    if (trim(req.text).empty()) throw InvalidRequest("command text is empty");
    const std::string backend_id = req.backend.empty() ? config_.default_backend : req.backend;
    auto be = config_.backends.find(backend_id);
    if (be == config_.backends.end()) throw InvalidRequest("unknown backend '" + backend_id + "'");

    world::Scene scene;
    {
        std::lock_guard slk(sim_mu_);
        scene = sim_->scene();
        for (const auto& r : req.robots) {
            if (!scene.find_robot(r)) throw InvalidRequest("unknown robot '" + r + "'");
        }
        const auto addressed = req.robots.empty() ? scene.robot_ids() : req.robots;
        for (const auto& r : addressed)
            if (sim_->busy(r)) throw RobotBusy(r);
    }

    CommandResult result;
    {
        std::lock_guard lk(id_mu_);
        result.command_id = "cmd-" + std::to_string(next_command_++);
    }
    timings_.record({req.timing.session_id, result.command_id, req.timing.task_id,
                     TimingMode::natural_language, req.timing.input_started_ms,
                     req.timing.submitted_ms, server_ms});

    // planning happens on the caller's thread, never on the step loop
    try {
        result.exchange = planner::plan(req.text, scene, req.robots, *be->second, config_.prompt);
    } catch (const planner::EmptyReply& e) {
        result.status = PlanStatus::parse_failed;
        result.detail = e.what();
        return result;
    } catch (const planner::BackendError& e) {
        result.status = PlanStatus::backend_unreachable;
        result.detail = e.what();
        return result;
    }
    if (const auto* err = result.exchange->error()) {
        result.status = PlanStatus::parse_failed;
        result.detail = err->describe();
        return result;
    }

    const auto plan = *result.exchange->plan();
    if (!req.robots.empty()) {
        for (const auto& [robot, s] : plan.scripts) {
            if (std::find(req.robots.begin(), req.robots.end(), robot) == req.robots.end()) {
                result.status = PlanStatus::bind_failed;
                result.detail = "plan addresses robot '" + robot + "' outside the selection";
                return result;
            }
        }
    }

    post([&] {
        try {
            sim_->bind_plan(plan, result.command_id);
        } catch (const sim::BindError& e) {
            if (e.kind() == sim::BindErrorKind::robot_busy) throw RobotBusy(e.robot());
            result.status = PlanStatus::bind_failed;
            result.detail = e.what();
            return;
        }
        result.status = PlanStatus::executing;
        ActiveCommand ac;
        for (const auto& [robot, s] : plan.scripts) ac.robots.push_back(robot);
        active_[result.command_id] = ac;
        StreamMessage m{"status", {{"command_id", result.command_id},
                                   {"status", "executing"},
                                   {"tick", sim_->world().tick},
                                   {"script", script::pretty_print(plan)}}};
        std::lock_guard lk(sub_mu_);
        for (auto& [id, s] : subscribers_) s->push(m);
    });
    return result;
}

void Gateway::record_manual_timing(const std::string& id, const ClientTiming& t, std::int64_t server_ms) {
    timings_.record({t.session_id, id, t.task_id, TimingMode::manual, t.input_started_ms,
                     t.submitted_ms, server_ms});
}

ManualAck Gateway::queue_call(const std::string& robot, const std::string& kind,
                              script::ActionCall call, const ClientTiming& timing) {
    const std::int64_t server_ms = now_ms();
    ManualAck ack{.action_id = {}, .robot = robot, .kind = kind, .call = script::format_call(call)};
    script::MultiRobotPlan plan;
    call.line = 1;
    plan.scripts[robot] = script::ActionScript{robot, {call}};
    post([&] {
        try {
            sim_->validate(plan);
        } catch (const sim::BindError& e) {
            switch (e.kind()) {
                case sim::BindErrorKind::robot_busy: throw RobotBusy(robot);
                case sim::BindErrorKind::capability_mismatch: throw CapabilityMismatch(e.what());
                case sim::BindErrorKind::joint_limit: throw LimitsViolation(e.what());
                case sim::BindErrorKind::unknown_robot: throw InvalidRequest(e.what());
            }
        }
        {
            std::lock_guard lk(id_mu_);
            ack.action_id = "man-" + std::to_string(next_action_++);
        }
        sim_->bind_plan(plan, ack.action_id);
    });
    record_manual_timing(ack.action_id, timing, server_ms);
    return ack;
}

ManualAck Gateway::manual_control(const std::string& robot, const ManualAction& action,
                                  const ClientTiming& timing) {
    const world::Scene sc = scene();
    const auto* rc = sc.find_robot(robot);
    if (!rc) throw InvalidRequest("unknown robot '" + robot + "'");
    const std::string kind(action_kind(action));

    auto make_call = [](std::string name, std::vector<script::Literal> args = {}) {
        script::ActionCall c;
        c.name = std::move(name);
        c.args = std::move(args);
        return c;
    };

    if (const auto* jog = std::get_if<BaseJog>(&action)) {
        if (!(jog->duration_s > 0.0) || jog->duration_s > sim::kMaxJogSeconds)
            throw LimitsViolation("jog duration must lie in (0, 2] seconds");
        if (std::fabs(jog->vx) > rc->speed.linear_mps || std::fabs(jog->vy) > rc->speed.linear_mps)
            throw LimitsViolation("jog speed exceeds " + script::format_number(rc->speed.linear_mps) + " m/s");
        if (std::fabs(jog->omega_dps) > rc->speed.angular_dps)
            throw LimitsViolation("jog turn rate exceeds " + script::format_number(rc->speed.angular_dps) +
                                  " deg/s");
        const std::int64_t server_ms = now_ms();
        ManualAck ack{.action_id = {}, .robot = robot, .kind = kind, .call = {}};
        char label[160];
        std::snprintf(label, sizeof label, "jog(vx=%g, vy=%g, omega=%g, duration=%g)", jog->vx, jog->vy,
                      jog->omega_dps, jog->duration_s);
        ack.call = label;
        post([&] {
            if (sim_->busy(robot)) throw RobotBusy(robot);
            {
                std::lock_guard lk(id_mu_);
                ack.action_id = "man-" + std::to_string(next_action_++);
            }
            sim_->start_jog(robot, {jog->vx, jog->vy, jog->omega_dps, jog->duration_s}, ack.action_id);
        });
        record_manual_timing(ack.action_id, timing, server_ms);
        return ack;
    }
    if (const auto* mv = std::get_if<BaseMove>(&action)) {
        auto parsed = script::parse_script(mv->call);
        if (auto* e = std::get_if<script::ParseError>(&parsed)) throw InvalidRequest(e->describe());
        const auto& s = std::get<script::ActionScript>(parsed);
        if (s.calls.size() != 1 || !is_base_motion(s.calls[0].name))
            throw InvalidRequest("base_move takes exactly one base motion call");
        return queue_call(robot, kind, s.calls[0], timing);
    }
    if (const auto* arm = std::get_if<ArmSet>(&action)) {
        std::vector<script::Literal> args(arm->joints.begin(), arm->joints.end());
        return queue_call(robot, kind, make_call("moveArmSequential", std::move(args)), timing);
    }
    if (const auto* preset = std::get_if<ArmPreset>(&action)) {
        if (preset->name == "fold") return queue_call(robot, kind, make_call("presetFold"), timing);
        if (preset->name == "extend") return queue_call(robot, kind, make_call("presetExtend"), timing);
        throw InvalidRequest("unknown arm preset '" + preset->name + "'");
    }
    if (const auto* g = std::get_if<Gripper>(&action)) {
        return queue_call(robot, kind, make_call(g->close ? "closeGripper" : "openGripper"), timing);
    }
    return queue_call(robot, kind, make_call("capturePhoto"), timing);
}

}  // namespace lingua::gateway
