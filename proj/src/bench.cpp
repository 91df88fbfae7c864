#include "lingua/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

namespace lingua::bench {

using nlohmann::json;

std::string_view to_string(Tier tier) {
    switch (tier) {
        case Tier::simple: return "simple";
        case Tier::composite: return "composite";
        case Tier::complex: return "complex";
    }
    return "simple";
}

Tier tier_from_string(std::string_view s) {
    for (Tier t : kTiers)
        if (to_string(t) == s) return t;
    throw std::invalid_argument("unknown tier '" + std::string(s) + "'");
}

std::pair<std::size_t, std::size_t> call_band(Tier tier) {
    switch (tier) {
        case Tier::simple: return {1, 2};
        case Tier::composite: return {3, 4};
        case Tier::complex: return {5, 6};
    }
    return {1, 2};
}

std::string_view to_string(GoalKind kind) {
    switch (kind) {
        case GoalKind::at_xy: return "at_xy";
        case GoalKind::heading_is: return "heading_is";
        case GoalKind::in_region: return "in_region";
        case GoalKind::holding: return "holding";
        case GoalKind::photos_at_least: return "photos_at_least";
        case GoalKind::arm_at: return "arm_at";
        case GoalKind::gripper_is: return "gripper_is";
    }
    return "at_xy";
}

namespace {

GoalKind goal_kind_from_string(std::string_view s) {
    for (auto k : {GoalKind::at_xy, GoalKind::heading_is, GoalKind::in_region, GoalKind::holding,
                   GoalKind::photos_at_least, GoalKind::arm_at, GoalKind::gripper_is})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown goal kind '" + std::string(s) + "'");
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

template <class T>
T field(const json& j, const char* key) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw std::invalid_argument(std::string("field '") + key + "' has the wrong type");
    }
}

double positive_tol(const json& j) {
    double tol = field<double>(j, "tol");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    return tol;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

GoalPredicate goal_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("goal must be an object");
    GoalPredicate g;
    g.kind = goal_kind_from_string(field<std::string>(j, "kind"));
    switch (g.kind) {
        case GoalKind::at_xy:
            g.subject = field<std::string>(j, "robot");
            g.x = field<double>(j, "x");
            g.y = field<double>(j, "y");
            g.tol = positive_tol(j);
            break;
        case GoalKind::heading_is:
            g.subject = field<std::string>(j, "robot");
            g.beta = field<double>(j, "beta");
            g.tol = positive_tol(j);
            break;
        case GoalKind::in_region:
            g.subject = field<std::string>(j, "subject");
            g.region = field<std::string>(j, "region");
            break;
        case GoalKind::holding:
            g.subject = field<std::string>(j, "robot");
            g.object = field<std::string>(j, "object");
            break;
        case GoalKind::photos_at_least:
            g.subject = field<std::string>(j, "robot");
            g.count = field<int>(j, "n");
            break;
        case GoalKind::arm_at:
            g.subject = field<std::string>(j, "robot");
            if (j.contains("preset")) {
                g.preset = field<std::string>(j, "preset");
            } else {
                auto v = field<std::vector<double>>(j, "joints");
                if (v.size() != world::kJointCount)
                    throw std::invalid_argument("joints must have 5 entries");
                world::JointVector jv{};
                std::copy(v.begin(), v.end(), jv.begin());
                g.joints = jv;
            }
            g.tol = positive_tol(j);
            break;
        case GoalKind::gripper_is: {
            g.subject = field<std::string>(j, "robot");
            auto s = field<std::string>(j, "state");
            if (s == "open") g.gripper = world::GripperState::open;
            else if (s == "closed") g.gripper = world::GripperState::closed;
            else throw std::invalid_argument("gripper state must be open or closed");
            break;
        }
    }
    return g;
}

json goal_to_json(const GoalPredicate& g) {
    json j = {{"kind", std::string(to_string(g.kind))}};
    switch (g.kind) {
        case GoalKind::at_xy:
            j.update({{"robot", g.subject}, {"x", g.x}, {"y", g.y}, {"tol", g.tol}});
            break;
        case GoalKind::heading_is:
            j.update({{"robot", g.subject}, {"beta", g.beta}, {"tol", g.tol}});
            break;
        case GoalKind::in_region:
            j.update({{"subject", g.subject}, {"region", g.region}});
            break;
        case GoalKind::holding:
            j.update({{"robot", g.subject}, {"object", g.object}});
            break;
        case GoalKind::photos_at_least:
            j.update({{"robot", g.subject}, {"n", g.count}});
            break;
        case GoalKind::arm_at:
            j["robot"] = g.subject;
            if (g.joints) j["joints"] = *g.joints;
            else j["preset"] = g.preset;
            j["tol"] = g.tol;
            break;
        case GoalKind::gripper_is:
            j.update({{"robot", g.subject}, {"state", std::string(world::to_string(g.gripper))}});
            break;
    }
    return j;
}

std::string GoalPredicate::describe() const {
    switch (kind) {
        case GoalKind::at_xy:
            return subject + " at (" + fmt(x) + ", " + fmt(y) + ") within " + fmt(tol);
        case GoalKind::heading_is:
            return subject + " heading " + fmt(beta) + " within " + fmt(tol);
        case GoalKind::in_region: return subject + " in " + region;
        case GoalKind::holding: return subject + " holding " + object;
        case GoalKind::photos_at_least:
            return subject + " has at least " + std::to_string(count) + " photos";
        case GoalKind::arm_at:
            return subject + " arm at " + (joints ? std::string("joint target") : preset);
        case GoalKind::gripper_is:
            return subject + " gripper " + std::string(world::to_string(gripper));
    }
    return {};
}

bool evaluate(const GoalPredicate& g, const sim::WorldState& w, const world::Scene& scene,
              std::string* why) {
    auto fail = [&](std::string reason) {
        if (why) *why = g.describe() + ": " + reason;
        return false;
    };
    const world::RobotState* robot = nullptr;
    if (auto it = w.robots.find(g.subject); it != w.robots.end()) robot = &it->second;
    if (!robot && g.kind != GoalKind::in_region) return fail("no such robot");

    switch (g.kind) {
        case GoalKind::at_xy: {
            double d = std::hypot(robot->pose.x - g.x, robot->pose.y - g.y);
            return d <= g.tol ? true : fail("off by " + fmt(d) + " m");
        }
        case GoalKind::heading_is: {
            double diff = std::fabs(world::normalize_heading(robot->pose.heading - g.beta));
            return diff <= g.tol ? true : fail("off by " + fmt(diff) + " deg");
        }
        case GoalKind::in_region: {
            const auto* region = scene.find_region(g.region);
            if (!region) return fail("no such region");
            world::Vec2 p;
            if (robot) {
                p = {robot->pose.x, robot->pose.y};
            } else if (auto it = w.objects.find(g.subject); it != w.objects.end()) {
                p = it->second.object.position;
            } else {
                return fail("no such robot or object");
            }
            return world::in_region(p, *region)
                       ? true
                       : fail("at (" + fmt(p.x) + ", " + fmt(p.y) + ")");
        }
        case GoalKind::holding:
            return robot->attached_object == g.object
                       ? true
                       : fail("holding " + robot->attached_object.value_or("nothing"));
        case GoalKind::photos_at_least:
            return robot->photo_count >= g.count
                       ? true
                       : fail("has " + std::to_string(robot->photo_count));
        case GoalKind::arm_at: {
            world::JointVector target{};
            if (g.joints) {
                target = *g.joints;
            } else {
                const auto* cfg = scene.find_robot(g.subject);
                const auto* p = cfg ? cfg->preset(g.preset) : nullptr;
                if (!p) return fail("no such preset");
                target = *p;
            }
            double worst = 0.0;
            for (std::size_t i = 0; i < world::kJointCount; ++i)
                worst = std::max(worst, std::fabs(robot->joints[i] - target[i]));
            return worst <= g.tol ? true : fail("joint error " + fmt(worst) + " deg");
        }
        case GoalKind::gripper_is:
            return robot->gripper == g.gripper
                       ? true
                       : fail("gripper " + std::string(world::to_string(robot->gripper)));
    }
    return fail("unknown goal");
}

// ---- dataset -------------------------------------------------------------------

DatasetError::DatasetError(std::string source, int line, const std::string& reason)
    : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ": " + reason
                                  : source + ": " + reason),
      line_(line) {}

std::vector<BenchCase> parse_dataset(std::string_view text, const world::Scene* scene,
                                     const std::string& source) {
    std::vector<BenchCase> cases;
    std::set<std::string> ids;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto bad = [&](const std::string& reason) { return DatasetError(source, line_no, reason); };

        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception&) {
            throw bad("malformed record: not valid JSON");
        }
        BenchCase c;
        try {
            if (!j.is_object()) throw std::invalid_argument("record must be an object");
            c.id = field<std::string>(j, "id");
            c.tier = tier_from_string(field<std::string>(j, "tier"));
            c.instruction = field<std::string>(j, "instruction");
            c.robots = field<std::vector<std::string>>(j, "robots");
            c.oracle_script = field<std::string>(j, "oracle_script");
            c.timeout_ticks = field<std::int64_t>(j, "timeout_ticks");
            for (const auto& g : field<json>(j, "goals")) c.goals.push_back(goal_from_json(g));
        } catch (const std::invalid_argument& e) {
            throw bad(std::string("malformed record: ") + e.what());
        }
        if (c.id.empty()) throw bad("malformed record: empty id");
        if (!ids.insert(c.id).second) throw bad("duplicate case id '" + c.id + "'");
        if (trim(c.instruction).empty()) throw bad("malformed record: empty instruction");
        if (c.robots.empty()) throw bad("malformed record: no robots");
        if (c.timeout_ticks <= 0) throw bad("malformed record: timeout_ticks must be positive");

        auto parsed = script::parse_plan(c.oracle_script, c.robots);
        if (auto* e = std::get_if<script::ParseError>(&parsed))
            throw bad("unparseable oracle script for '" + c.id + "': " + e->describe());
        const auto& plan = std::get<script::MultiRobotPlan>(parsed);
        auto [lo, hi] = call_band(c.tier);
        auto n = plan.total_calls();
        if (n < lo || n > hi)
            throw bad("tier-band violation: '" + c.id + "' is " + std::string(to_string(c.tier)) +
                      " but has " + std::to_string(n) + " calls (allowed " + std::to_string(lo) +
                      "-" + std::to_string(hi) + ")");
        if (scene) {
            for (const auto& r : c.robots)
                if (!scene->find_robot(r)) throw bad("unknown robot '" + r + "' in '" + c.id + "'");
            try {
                sim::Simulator(*scene).validate(plan);
            } catch (const sim::BindError& e) {
                throw bad("oracle script for '" + c.id + "' does not bind: " + e.what());
            }
        }
        cases.push_back(std::move(c));
    }
    if (cases.empty()) throw DatasetError(source, 0, "no cases");
    return cases;
}

std::vector<BenchCase> load_dataset(const std::filesystem::path& path, const world::Scene* scene) {
    std::ifstream in(path);
    if (!in) throw DatasetError(path.string(), 0, "cannot open file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_dataset(buf.str(), scene, path.string());
}

json case_to_json(const BenchCase& c) {
    json goals = json::array();
    for (const auto& g : c.goals) goals.push_back(goal_to_json(g));
    return {{"id", c.id},
            {"tier", std::string(to_string(c.tier))},
            {"instruction", c.instruction},
            {"robots", c.robots},
            {"oracle_script", c.oracle_script},
            {"goals", goals},
            {"timeout_ticks", c.timeout_ticks}};
}

std::vector<BenchCase> apply_filter(const std::vector<BenchCase>& cases, const std::string& filter) {
    if (trim(filter).empty()) return cases;
    auto eq = filter.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("filter must look like key=value");
    std::string key = trim(filter.substr(0, eq));
    std::set<std::string> values;
    std::stringstream ss(filter.substr(eq + 1));
    for (std::string v; std::getline(ss, v, ',');)
        if (!trim(v).empty()) values.insert(trim(v));

    std::vector<BenchCase> out;
    for (const auto& c : cases) {
        bool keep = false;
        if (key == "tier") keep = values.count(std::string(to_string(c.tier))) > 0;
        else if (key == "id") keep = values.count(c.id) > 0;
        else throw std::invalid_argument("unknown filter key '" + key + "'");
        if (keep) out.push_back(c);
    }
    return out;
}

// ---- verdicts and aggregation ------------------------------------------------------

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::success: return "success";
        case Verdict::parse_failure: return "parse_failure";
        case Verdict::runtime_fault: return "runtime_fault";
        case Verdict::goal_unmet: return "goal_unmet";
        case Verdict::timeout: return "timeout";
    }
    return "success";
}

Verdict verdict_from_string(std::string_view s) {
    for (Verdict v : kVerdicts)
        if (to_string(v) == s) return v;
    throw std::invalid_argument("unknown verdict '" + std::string(s) + "'");
}

std::optional<double> TierSummary::rate() const {
    if (n == 0) return std::nullopt;
    return 100.0 * successes / n;
}

std::string TierSummary::rate_text() const {
    auto r = rate();
    if (!r) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", *r);
    return buf;
}

namespace {

void count(TierSummary& s, Verdict v) {
    ++s.n;
    if (v == Verdict::success) ++s.successes;
    ++s.histogram[v];
}

}  // namespace

BenchReport aggregate(std::vector<CaseResult> rows, Fingerprint fingerprint) {
    BenchReport r;
    for (Tier t : kTiers) r.tiers[t] = {};
    std::sort(rows.begin(), rows.end(), [](const CaseResult& a, const CaseResult& b) {
        return a.tier != b.tier ? a.tier < b.tier : a.case_id < b.case_id;
    });
    for (const auto& row : rows) {
        count(r.tiers[row.tier], row.verdict);
        count(r.overall, row.verdict);
    }
    r.rows = std::move(rows);
    r.fingerprint = std::move(fingerprint);
    return r;
}

CaseResult run_case(const BenchCase& c, const world::Scene& scene, planner::ChatBackend& backend,
                    const planner::PromptTemplate& tmpl) {
    CaseResult result;
    result.case_id = c.id;
    result.tier = c.tier;
    planner::PlannerExchange ex;
    try {
        ex = planner::plan(c.instruction, scene, c.robots, backend, tmpl, c.id);
    } catch (const planner::BackendError& e) {
        result.verdict = Verdict::parse_failure;
        result.details = std::string("no usable reply: ") + e.what();
        return result;
    }
    result.latency_seconds = ex.latency_seconds;
    if (const auto* err = ex.error()) {
        result.verdict = Verdict::parse_failure;
        result.details = err->describe();
        return result;
    }

    sim::RuntimeLimits limits;
    limits.max_ticks_per_script = c.timeout_ticks;
    limits.max_ticks_per_call = std::min(limits.max_ticks_per_call, c.timeout_ticks);
    sim::RunResult run;
    try {
        run = sim::run_to_completion(scene, *ex.plan(), limits);
    } catch (const sim::BindError& e) {
        result.verdict = Verdict::parse_failure;
        result.details = std::string("bind: ") + e.what();
        return result;
    }
    result.ticks_used = run.world.tick;

    std::string fault, timeout;
    for (const auto& [robot, o] : run.outcomes) {
        if (o.status == sim::OutcomeStatus::fault && fault.empty())
            fault = robot + ": " + (o.fault ? o.fault->reason : std::string("fault"));
        if (o.status == sim::OutcomeStatus::timeout && timeout.empty())
            timeout = robot + ": " + (o.fault ? o.fault->reason : std::string("timeout"));
    }
    if (!fault.empty()) {
        result.verdict = Verdict::runtime_fault;
        result.details = fault;
        return result;
    }
    if (!timeout.empty()) {
        result.verdict = Verdict::timeout;
        result.details = timeout;
        return result;
    }
    std::vector<std::string> unmet;
    for (const auto& g : c.goals) {
        std::string why;
        if (!evaluate(g, run.world, scene, &why)) unmet.push_back(why);
    }
    if (!unmet.empty()) {
        result.verdict = Verdict::goal_unmet;
        for (std::size_t i = 0; i < unmet.size(); ++i) result.details += (i ? "; " : "") + unmet[i];
        return result;
    }
    result.verdict = Verdict::success;
    return result;
}

BenchReport run_suite(const std::vector<BenchCase>& cases, const world::Scene& scene,
                      planner::ChatBackend& backend, int parallelism,
                      std::optional<std::uint64_t> seed, const planner::PromptTemplate& tmpl) {
    std::vector<CaseResult> rows(cases.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cases.size(); i = next++)
            rows[i] = run_case(cases[i], scene, backend, tmpl);
    };
    int threads = std::clamp(parallelism, 1, std::max(1, static_cast<int>(cases.size())));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return aggregate(std::move(rows), {backend.id(), scene.name, seed});
}

// ---- reports ------------------------------------------------------------------------

ReportFormat report_format_from_string(std::string_view s) {
    if (s == "table") return ReportFormat::table;
    if (s == "csv") return ReportFormat::csv;
    if (s == "json") return ReportFormat::json;
    throw std::invalid_argument("unknown report format '" + std::string(s) + "'");
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::string rate_number(const TierSummary& s) {
    auto r = s.rate();
    if (!r) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", *r);
    return buf;
}

std::string table(const BenchReport& r) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "backend %s  scene %s\n", r.fingerprint.backend.c_str(),
                  r.fingerprint.scene.c_str());
    out += buf;
    std::snprintf(buf, sizeof buf, "%-10s %9s %7s  %s\n", "tier", "success", "rate",
                  "parse/fault/timeout/goal");
    out += buf;
    auto line = [&](const std::string& name, const TierSummary& s) {
        auto h = [&](Verdict v) {
            auto it = s.histogram.find(v);
            return it == s.histogram.end() ? 0 : it->second;
        };
        std::string counts = std::to_string(s.successes) + "/" + std::to_string(s.n);
        std::snprintf(buf, sizeof buf, "%-10s %9s %7s  %d/%d/%d/%d\n", name.c_str(), counts.c_str(),
                      s.rate_text().c_str(), h(Verdict::parse_failure), h(Verdict::runtime_fault),
                      h(Verdict::timeout), h(Verdict::goal_unmet));
        out += buf;
    };
    for (const auto& [tier, s] : r.tiers) line(std::string(to_string(tier)), s);
    line("overall", r.overall);
    return out;
}

std::string csv(const BenchReport& r) {
    std::string out = "case_id,tier,verdict,ticks,latency\n";
    char buf[64];
    for (const auto& row : r.rows) {
        std::snprintf(buf, sizeof buf, "%.6f", row.latency_seconds);
        out += csv_field(row.case_id) + "," + std::string(to_string(row.tier)) + "," +
               std::string(to_string(row.verdict)) + "," + std::to_string(row.ticks_used) + "," +
               buf + "\n";
    }
    for (const auto& [tier, s] : r.tiers) {
        out += "summary," + std::string(to_string(tier)) + "," + std::to_string(s.successes) + "/" +
               std::to_string(s.n) + ",," + rate_number(s) + "\n";
    }
    return out;
}

json summary_to_json(const TierSummary& s) {
    json h = json::object();
    for (const auto& [v, n] : s.histogram) h[std::string(to_string(v))] = n;
    json j = {{"n", s.n}, {"successes", s.successes}, {"histogram", h}};
    if (auto r = s.rate()) j["rate"] = *r;
    else j["rate"] = nullptr;
    return j;
}

TierSummary summary_from_json(const json& j) {
    TierSummary s;
    s.n = j.at("n").get<int>();
    s.successes = j.at("successes").get<int>();
    for (const auto& [k, v] : j.at("histogram").items()) s.histogram[verdict_from_string(k)] = v.get<int>();
    return s;
}

}  // namespace

json report_to_json(const BenchReport& r) {
    json tiers = json::object();
    for (const auto& [t, s] : r.tiers) tiers[std::string(to_string(t))] = summary_to_json(s);
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"case_id", row.case_id},
                        {"tier", std::string(to_string(row.tier))},
                        {"verdict", std::string(to_string(row.verdict))},
                        {"ticks_used", row.ticks_used},
                        {"latency_seconds", row.latency_seconds},
                        {"details", row.details}});
    }
    json fp = {{"backend", r.fingerprint.backend}, {"scene", r.fingerprint.scene}};
    fp["seed"] = r.fingerprint.seed ? json(*r.fingerprint.seed) : json(nullptr);
    return {{"tiers", tiers}, {"overall", summary_to_json(r.overall)}, {"rows", rows},
            {"fingerprint", fp}};
}

BenchReport report_from_json(const json& j) {
    BenchReport r;
    for (const auto& [k, v] : j.at("tiers").items()) r.tiers[tier_from_string(k)] = summary_from_json(v);
    r.overall = summary_from_json(j.at("overall"));
    for (const auto& row : j.at("rows")) {
        r.rows.push_back({row.at("case_id").get<std::string>(),
                          tier_from_string(row.at("tier").get<std::string>()),
                          verdict_from_string(row.at("verdict").get<std::string>()),
                          row.at("ticks_used").get<std::int64_t>(),
                          row.at("latency_seconds").get<double>(),
                          row.at("details").get<std::string>()});
    }
    const auto& fp = j.at("fingerprint");
    r.fingerprint.backend = fp.at("backend").get<std::string>();
    r.fingerprint.scene = fp.at("scene").get<std::string>();
    if (!fp.at("seed").is_null()) r.fingerprint.seed = fp.at("seed").get<std::uint64_t>();
    return r;
}

std::string emit_report(const BenchReport& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::table: return table(report);
        case ReportFormat::csv: return csv(report);
        case ReportFormat::json: return report_to_json(report).dump(2) + "\n";
    }
    return {};
}

std::string summarize_repeats(const std::vector<BenchReport>& runs) {
    std::string out = std::to_string(runs.size()) + " runs\n";
    char buf[160];
    auto line = [&](const std::string& name, auto pick) {
        std::vector<double> rates;
        for (const auto& r : runs)
            if (auto v = pick(r).rate()) rates.push_back(*v);
        if (rates.empty()) {
            std::snprintf(buf, sizeof buf, "%-10s n/a\n", name.c_str());
        } else {
            double mean = 0.0;
            for (double v : rates) mean += v;
            mean /= static_cast<double>(rates.size());
            auto [lo, hi] = std::minmax_element(rates.begin(), rates.end());
            std::snprintf(buf, sizeof buf, "%-10s mean %.1f%%  range %.1f%% to %.1f%%\n",
                          name.c_str(), mean, *lo, *hi);
        }
        out += buf;
    };
    for (Tier t : kTiers)
        line(std::string(to_string(t)), [t](const BenchReport& r) { return r.tiers.at(t); });
    line("overall", [](const BenchReport& r) { return r.overall; });
    return out;
}

}  // namespace lingua::bench
