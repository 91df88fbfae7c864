#include "lingua/planner.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace lingua::planner {

using nlohmann::json;

PromptTemplate PromptTemplate::default_template() {
    PromptTemplate t;
    t.system_preamble =
        "You plan actions for a team of simulated mobile robots on a flat arena. "
        "Translate the operator's instruction into a sequence of action primitive calls. "
        "Coordinates are world meters; headings are degrees, counterclockwise, 0 along +x.";
    t.capability_blurbs = {
        {world::RobotKind::camera_bot,
         "omnidirectional base with a forward vision sensor (capturePhoto records what it sees)"},
        {world::RobotKind::box_bot,
         "omnidirectional base with a front transport frame; driving onto a movable object "
         "captures it and it is carried from then on"},
        {world::RobotKind::arm_bot,
         "omnidirectional base with a five-joint arm and gripper (presetFold, presetExtend, "
         "moveArmSequential, openGripper, closeGripper)"},
    };
    t.output_contract =
        "Reply with exactly one fenced code block, one call per line. "
        "Prefix each robot's section with `@robot <id>` when multiple robots are addressed. "
        "Use only the primitives listed above, with literal numeric arguments.";
    return t;
}

namespace {

std::string kind_name(script::ParamKind kind) {
    switch (kind) {
        case script::ParamKind::number: return "number";
        case script::ParamKind::boolean: return "bool";
        case script::ParamKind::keyword: return "keyword";
    }
    return "number";
}

std::string render_param(const script::ParamSpec& p) {
    std::string out = p.name;
    if (p.optional) out += "?";
    out += ": ";
    if (p.kind == script::ParamKind::keyword && !p.keywords.empty()) {
        for (std::size_t i = 0; i < p.keywords.size(); ++i) {
            if (i) out += "|";
            out += p.keywords[i];
        }
    } else {
        out += kind_name(p.kind);
    }
    if (!p.unit.empty()) out += " " + p.unit;
    if (p.range) out += " in " + p.range->to_string();
    return out;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::string format_pose(const world::Pose2D& p) {
    std::ostringstream os;
    os << "x=" << script::format_number(p.x) << " y=" << script::format_number(p.y)
       << " heading=" << script::format_number(p.heading);
    return os.str();
}

}  // namespace

std::string render_primitive_reference(const script::Registry& registry) {
    std::string out = "Available primitives:\n";
    for (const auto& sig : registry.signatures()) {
        out += "- " + sig.name + "(";
        for (std::size_t i = 0; i < sig.params.size(); ++i) {
            if (i) out += ", ";
            out += render_param(sig.params[i]);
        }
        out += "): " + sig.summary + "\n";
    }
    return out;
}

std::string Prompt::text() const { return system + "\n" + user + "\n"; }

Prompt build_prompt_parts(const PromptTemplate& tmpl, const world::Scene& scene,
                          std::span<const std::string> selection, std::string_view instruction,
                          const script::Registry& registry) {
    std::string instr = trim(instruction);
    if (instr.empty()) throw std::invalid_argument("instruction is empty");

    std::vector<const world::RobotConfig*> robots;
    if (selection.empty()) {
        for (const auto& r : scene.robots) robots.push_back(&r);
    } else {
        for (const auto& id : selection) {
            const auto* r = scene.find_robot(id);
            if (!r) throw std::invalid_argument("unknown robot '" + id + "'");
            robots.push_back(r);
        }
    }

    std::string s = tmpl.system_preamble + "\n\n";
    s += "Robots:\n";
    for (const auto* r : robots) {
        s += "@robot " + r->id + " (" + std::string(world::to_string(r->kind)) + ", " +
             format_pose(r->initial_pose) + "): ";
        auto it = tmpl.capability_blurbs.find(r->kind);
        s += it != tmpl.capability_blurbs.end() ? it->second : std::string("mobile base");
        s += "\n";
    }
    if (!scene.objects.empty()) {
        s += "\nObjects:\n";
        for (const auto& o : scene.objects) {
            s += "- " + o.id + " (" + std::string(world::to_string(o.shape)) + ", " +
                 (o.movable ? "movable" : "static") + ") at x=" + script::format_number(o.position.x) +
                 " y=" + script::format_number(o.position.y) + "\n";
        }
    }
    if (!scene.regions.empty()) {
        s += "\nRegions:\n";
        for (const auto& g : scene.regions) {
            s += "- " + g.id + " centered at x=" + script::format_number(g.center.x) +
                 " y=" + script::format_number(g.center.y) + ", half size " +
                 script::format_number(g.half_size.x) + " x " +
                 script::format_number(g.half_size.y) + "\n";
        }
    }
    s += "\n" + render_primitive_reference(registry);
    s += "\n" + tmpl.output_contract + "\n";
    if (!tmpl.examples.empty()) {
        s += "\nExamples:\n";
        for (const auto& ex : tmpl.examples) {
            s += "Instruction: " + ex.instruction + "\n```\n" + ex.script + "\n```\n";
        }
    }

    Prompt p;
    p.system = std::move(s);
    p.user = std::string(instruction);
    return p;
}

std::string build_prompt(const PromptTemplate& tmpl, const world::Scene& scene,
                         std::span<const std::string> selection, std::string_view instruction) {
    return build_prompt_parts(tmpl, scene, selection, instruction).text();
}

// ---- oracle ---------------------------------------------------------------

OracleBackend::OracleBackend(std::vector<OracleEntry> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        by_id_.emplace(entries_[i].id, i);
        by_instruction_.emplace(trim(entries_[i].instruction), i);
    }
}

std::shared_ptr<OracleBackend> OracleBackend::from_files(
    std::span<const std::filesystem::path> paths) {
    std::vector<OracleEntry> entries;
    for (const auto& path : paths) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open oracle file " + path.string());
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (trim(line).empty()) continue;
            try {
                auto j = json::parse(line);
                entries.push_back({j.at("id").get<std::string>(),
                                   j.at("instruction").get<std::string>(),
                                   j.at("oracle_script").get<std::string>()});
            } catch (const json::exception& e) {
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                         ": malformed record: " + e.what());
            }
        }
    }
    return std::make_shared<OracleBackend>(std::move(entries));
}

std::string OracleBackend::complete(const ChatRequest& request) {
    const OracleEntry* hit = nullptr;
    if (request.case_id) {
        if (auto it = by_id_.find(*request.case_id); it != by_id_.end()) hit = &entries_[it->second];
    }
    if (!hit) {
        if (auto it = by_instruction_.find(trim(request.instruction)); it != by_instruction_.end())
            hit = &entries_[it->second];
    }
    if (!hit) throw BackendError("oracle has no entry for '" + request.instruction + "'");
    return "```\n" + hit->script + "\n```\n";
}

// ---- fault injection --------------------------------------------------------

FaultInjectionBackend::FaultInjectionBackend(std::shared_ptr<ChatBackend> inner,
                                             std::set<std::string> corrupt_ids)
    : inner_(std::move(inner)), ids_(std::move(corrupt_ids)) {}

FaultInjectionBackend::FaultInjectionBackend(std::shared_ptr<ChatBackend> inner, double rate,
                                             std::uint64_t seed)
    : inner_(std::move(inner)), rate_(rate), seed_(seed), by_rate_(true) {
    if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("fault rate must be in [0, 1]");
}

std::string FaultInjectionBackend::id() const { return "fault(" + inner_->id() + ")"; }

bool FaultInjectionBackend::selects(const std::string& key) const {
    if (!by_rate_) return ids_.count(key) > 0;
    // splitmix64 over (seed, FNV-1a(key)) gives a per-key uniform draw independent of call order
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : key) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::uint64_t z = h + seed_ + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    double u = static_cast<double>(z >> 11) * (1.0 / 9007199254740992.0);
    return u < rate_;
}

std::string FaultInjectionBackend::corrupt(const std::string& reply) {
    std::istringstream in(reply);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);

    for (auto& l : lines) {
        auto b = l.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        if (l.compare(b, 3, "```") == 0 || l[b] == '@' || l[b] == '#') continue;
        auto paren = l.find('(', b);
        if (paren == std::string::npos) continue;
        auto name_end = l.find_last_not_of(" \t", paren - 1);
        if (name_end == std::string::npos || name_end < b) continue;
        l.insert(name_end + 1, "Now");
        break;
    }
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) out += "\n";
        out += lines[i];
    }
    if (!reply.empty() && reply.back() == '\n') out += "\n";
    return out;
}

std::string FaultInjectionBackend::complete(const ChatRequest& request) {
    std::string reply = inner_->complete(request);
    const std::string key = request.case_id ? *request.case_id : trim(request.instruction);
    return selects(key) ? corrupt(reply) : reply;
}

// ---- configuration -----------------------------------------------------------

void BackendConfig::validate() const {
    switch (kind) {
        case Kind::http_chat:
            if (!(http.timeout_seconds > 0.0)) throw std::invalid_argument("timeout must be > 0");
            if (http.max_retries < 0) throw std::invalid_argument("retries must be >= 0");
            if (http.base_url.empty()) throw std::invalid_argument("http backend needs a base URL");
            break;
        case Kind::oracle:
            if (oracle_files.empty()) throw std::invalid_argument("oracle backend needs a dataset");
            break;
        case Kind::fault_injection:
            if (!inner) throw std::invalid_argument("fault injection needs an inner backend");
            if (!(fault_rate >= 0.0 && fault_rate <= 1.0))
                throw std::invalid_argument("fault rate must be in [0, 1]");
            inner->validate();
            break;
    }
}

std::shared_ptr<ChatBackend> make_backend(const BackendConfig& config) {
    config.validate();
    switch (config.kind) {
        case BackendConfig::Kind::http_chat:
            return std::make_shared<HttpChatBackend>(config.http);
        case BackendConfig::Kind::oracle:
            return OracleBackend::from_files(config.oracle_files);
        case BackendConfig::Kind::fault_injection: {
            auto inner = make_backend(*config.inner);
            if (!config.corrupt_ids.empty())
                return std::make_shared<FaultInjectionBackend>(inner, config.corrupt_ids);
            return std::make_shared<FaultInjectionBackend>(inner, config.fault_rate,
                                                           config.fault_seed);
        }
    }
    throw std::invalid_argument("unknown backend kind");
}

BackendConfig parse_backend_spec(const std::string& spec,
                                 std::vector<std::filesystem::path> oracle_files) {
    BackendConfig cfg;
    if (spec == "oracle") {
        cfg.kind = BackendConfig::Kind::oracle;
        cfg.oracle_files = std::move(oracle_files);
        return cfg;
    }
    if (spec == "http") {
        cfg.kind = BackendConfig::Kind::http_chat;
        cfg.http = HttpChatConfig::from_environment();
        return cfg;
    }
    if (spec.rfind("fault", 0) == 0) {
        cfg.kind = BackendConfig::Kind::fault_injection;
        auto inner = std::make_shared<BackendConfig>();
        inner->kind = BackendConfig::Kind::oracle;
        inner->oracle_files = std::move(oracle_files);
        cfg.inner = inner;
        std::string rest = spec.size() > 5 && spec[5] == ':' ? spec.substr(6) : std::string{};
        // `cases=` consumes the remainder since ids are comma separated
        if (rest.rfind("cases=", 0) == 0) {
            std::stringstream ss(rest.substr(6));
            std::string id;
            while (std::getline(ss, id, ',')) {
                id = trim(id);
                if (!id.empty()) cfg.corrupt_ids.insert(id);
            }
            return cfg;
        }
        std::stringstream ss(rest);
        std::string kv;
        while (std::getline(ss, kv, ',')) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("bad fault option '" + kv + "'");
            std::string k = trim(kv.substr(0, eq)), v = trim(kv.substr(eq + 1));
            if (k == "rate") cfg.fault_rate = std::stod(v);
            else if (k == "seed") cfg.fault_seed = std::stoull(v);
            else throw std::invalid_argument("bad fault option '" + k + "'");
        }
        return cfg;
    }
    throw std::invalid_argument("unknown backend '" + spec + "' (expected oracle, http or fault:...)");
}

// ---- planning -------------------------------------------------------------------

PlannerExchange plan(std::string_view instruction, const world::Scene& scene,
                     std::span<const std::string> selection, ChatBackend& backend,
                     const PromptTemplate& tmpl, std::optional<std::string> case_id) {
    ChatRequest req;
    req.prompt = build_prompt_parts(tmpl, scene, selection, instruction);
    req.instruction = std::string(instruction);
    req.case_id = std::move(case_id);

    auto start = std::chrono::steady_clock::now();
    std::string reply = backend.complete(req);
    auto stop = std::chrono::steady_clock::now();
    if (trim(reply).empty()) throw EmptyReply("backend " + backend.id() + " returned an empty reply");

    std::vector<std::string> robots;
    if (selection.empty()) {
        robots = scene.robot_ids();
    } else {
        robots.assign(selection.begin(), selection.end());
    }

    PlannerExchange ex{
        .prompt = req.prompt.text(),
        .raw_reply = reply,
        .script_text = script::extract_code_block(reply),
        .result = script::ParseError{},
        .backend_id = backend.id(),
        .latency_seconds = std::chrono::duration<double>(stop - start).count(),
    };
    auto parsed = script::parse_plan(ex.script_text, robots);
    if (auto* p = std::get_if<script::MultiRobotPlan>(&parsed)) ex.result = std::move(*p);
    else ex.result = std::get<script::ParseError>(parsed);
    return ex;
}

json parse_error_to_json(const script::ParseError& e) {
    json j = {{"kind", std::string(script::to_string(e.kind))},
              {"line", e.line},
              {"message", e.message},
              {"describe", e.describe()}};
    if (!e.primitive.empty()) j["primitive"] = e.primitive;
    return j;
}

json exchange_to_json(const PlannerExchange& ex, bool include_prompt) {
    json j = {{"raw_reply", ex.raw_reply},
              {"script_text", ex.script_text},
              {"backend_id", ex.backend_id},
              {"latency_seconds", ex.latency_seconds}};
    if (include_prompt) j["prompt"] = ex.prompt;
    if (const auto* p = ex.plan()) {
        json scripts = json::object();
        for (const auto& [robot, s] : p->scripts) {
            json calls = json::array();
            for (const auto& c : s.calls) calls.push_back(script::format_call(c));
            scripts[robot] = calls;
        }
        j["plan"] = scripts;
        j["script"] = script::pretty_print(*p);
        j["error"] = nullptr;
    } else {
        j["plan"] = nullptr;
        j["error"] = parse_error_to_json(*ex.error());
    }
    return j;
}

}  // namespace lingua::planner
