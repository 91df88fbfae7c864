#include "lingua/script.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <set>
#include <sstream>

namespace lingua::script {

std::string Range::to_string() const {
    std::ostringstream os;
    os << "[" << format_number(min) << ", " << format_number(max) << (max_inclusive ? "]" : ")");
    return os.str();
}

std::size_t PrimitiveSignature::required_count() const {
    std::size_t n = 0;
    for (const auto& p : params)
        if (!p.optional) ++n;
    return n;
}

Registry::Registry(std::vector<PrimitiveSignature> signatures)
    : signatures_(std::move(signatures)) {}

const PrimitiveSignature* Registry::find(std::string_view name) const {
    for (const auto& s : signatures_)
        if (s.name == name) return &s;
    return nullptr;
}

std::size_t MultiRobotPlan::total_calls() const {
    std::size_t n = 0;
    for (const auto& [id, s] : scripts) n += s.calls.size();
    return n;
}

namespace {

ParamSpec meters(std::string name, std::optional<Range> range = std::nullopt) {
    return {std::move(name), ParamKind::number, range, false, {}, "m"};
}

ParamSpec degrees(std::string name, std::optional<Range> range = std::nullopt) {
    return {std::move(name), ParamKind::number, range, false, {}, "deg"};
}

Registry make_default_registry() {
    const Range ten{-10.0, 10.0, true};
    std::vector<PrimitiveSignature> v;
    v.push_back({"moveForward", {meters("d", ten)}, false,
                 "drive d meters along the current heading"});
    v.push_back({"moveLateral", {meters("dx", ten)}, false,
                 "shift dx meters along the world x axis, heading held"});
    v.push_back({"moveToX", {meters("x")}, false, "move to world x, keeping y and heading"});
    v.push_back({"moveToY", {meters("y")}, false, "move to world y, keeping x and heading"});
    v.push_back({"moveToXY",
                 {meters("x"), meters("y"),
                  {"order", ParamKind::keyword, std::nullopt, true, {"xFirst", "yFirst"}, ""}},
                 false,
                 "move to (x, y) one axis at a time; y first unless the optional xFirst flag is given"});
    v.push_back({"moveToXWithRotation", {meters("x")}, false,
                 "turn to face the target x (0 deg ahead, 180 deg behind), then drive forward to it"});
    v.push_back({"rotateToBeta", {degrees("beta", Range{-180.0, 180.0, false})}, false,
                 "turn in place to absolute heading beta"});
    v.push_back({"moveArmSequential",
                 {degrees("j1"), degrees("j2"), degrees("j3"), degrees("j4"), degrees("j5")},
                 false,
                 "drive the five arm joints to the given angles (checked against the robot's joint limits)"});
    v.push_back({"presetFold", {}, false, "move the arm to its folded travel posture"});
    v.push_back({"presetExtend", {}, false, "move the arm to its extended grasp posture"});
    v.push_back({"openGripper", {}, false, "open the gripper, releasing any held object"});
    v.push_back({"closeGripper", {}, false,
                 "close the gripper, grasping an object at the end effector if one is in reach"});
    v.push_back({"capturePhoto", {}, false, "take a picture with the vision sensor"});
    return Registry(std::move(v));
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool is_robot_id(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!(is_ident_char(c) || c == '-')) return false;
    return true;
}

// [+-]?[0-9]+(\.[0-9]+)?
bool is_numeral(std::string_view s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t digits = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
    if (digits == 0) return false;
    if (i == s.size()) return true;
    if (s[i] != '.') return false;
    ++i;
    std::size_t frac = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++frac;
    return frac > 0 && i == s.size();
}

ParseError make_error(ErrorKind kind, int line, std::string message) {
    ParseError e;
    e.kind = kind;
    e.line = line;
    e.message = std::move(message);
    return e;
}

std::string_view kind_name(ParamKind k) {
    switch (k) {
        case ParamKind::number: return "number";
        case ParamKind::boolean: return "boolean";
        case ParamKind::keyword: return "keyword";
    }
    return "?";
}

bool literal_fits(const Literal& lit, const ParamSpec& p) {
    switch (p.kind) {
        case ParamKind::number: return std::holds_alternative<double>(lit);
        case ParamKind::boolean: return std::holds_alternative<bool>(lit);
        case ParamKind::keyword:
            if (std::holds_alternative<bool>(lit)) return true;
            if (auto* k = std::get_if<Keyword>(&lit)) {
                for (const auto& w : p.keywords)
                    if (w == k->name) return true;
            }
            return false;
    }
    return false;
}

// Parses and validates one call line (comment already stripped, nonempty).
std::variant<ActionCall, ParseError> parse_call(std::string_view text, int line,
                                                const Registry& registry) {
    std::size_t i = 0;
    while (i < text.size() && is_ident_char(text[i])) ++i;
    std::string_view name = text.substr(0, i);
    if (name.empty() || !is_ident_start(name.front())) {
        return make_error(ErrorKind::syntax, line, "expected a primitive name");
    }
    std::string_view rest = trim(text.substr(i));
    if (rest.empty() || rest.front() != '(') {
        return make_error(ErrorKind::syntax, line, "expected '(' after '" + std::string(name) + "'");
    }
    auto close = rest.find(')');
    if (close == std::string_view::npos) {
        return make_error(ErrorKind::syntax, line, "missing ')'");
    }
    if (!trim(rest.substr(close + 1)).empty()) {
        return make_error(ErrorKind::syntax, line, "unexpected text after ')'");
    }
    std::string_view inner = rest.substr(1, close - 1);
    if (inner.find('(') != std::string_view::npos) {
        return make_error(ErrorKind::syntax, line, "nested calls are not allowed");
    }

    ActionCall call;
    call.name = std::string(name);
    call.line = line;
    if (!trim(inner).empty()) {
        std::size_t start = 0;
        while (true) {
            auto comma = inner.find(',', start);
            std::string_view tok = trim(inner.substr(
                start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            if (tok.empty()) {
                return make_error(ErrorKind::syntax, line, "empty argument");
            }
            if (is_numeral(tok)) {
                errno = 0;
                std::string owned(tok);
                double v = std::strtod(owned.c_str(), nullptr);
                if (errno == ERANGE || !std::isfinite(v)) {
                    return make_error(ErrorKind::syntax, line,
                                      "numeral out of range '" + owned + "'");
                }
                call.args.emplace_back(v);
            } else if (tok == "true" || tok == "false") {
                call.args.emplace_back(tok == "true");
            } else if (tok == "xFirst" || tok == "yFirst") {
                call.args.emplace_back(Keyword{std::string(tok)});
            } else {
                return make_error(ErrorKind::syntax, line,
                                  "invalid argument '" + std::string(tok) + "'");
            }
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
    }

    const PrimitiveSignature* sig = registry.find(call.name);
    if (!sig) {
        auto e = make_error(ErrorKind::unknown_primitive, line,
                            "unknown primitive '" + call.name + "'");
        e.primitive = call.name;
        return e;
    }
    const std::size_t lo = sig->required_count();
    const std::size_t hi = sig->params.size();
    if (call.args.size() < lo || call.args.size() > hi) {
        std::ostringstream os;
        os << call.name << " expects ";
        if (lo == hi) {
            os << lo;
        } else {
            os << lo << " to " << hi;
        }
        os << " argument" << (hi == 1 ? "" : "s") << ", got " << call.args.size();
        auto e = make_error(ErrorKind::arity_mismatch, line, os.str());
        e.primitive = call.name;
        e.expected_min = lo;
        e.expected_max = hi;
        e.got = call.args.size();
        return e;
    }
    for (std::size_t k = 0; k < call.args.size(); ++k) {
        const ParamSpec& p = sig->params[k];
        if (!literal_fits(call.args[k], p)) {
            auto e = make_error(ErrorKind::arg_type_mismatch, line,
                                call.name + " argument " + std::to_string(k + 1) + " (" + p.name +
                                    ") must be a " + std::string(kind_name(p.kind)));
            e.primitive = call.name;
            e.arg_index = k;
            return e;
        }
        if (p.range && !p.range->contains(std::get<double>(call.args[k]))) {
            double v = std::get<double>(call.args[k]);
            auto e = make_error(ErrorKind::arg_out_of_range, line,
                                call.name + " argument " + std::to_string(k + 1) + " (" + p.name +
                                    ") value " + format_number(v) + " outside " +
                                    p.range->to_string());
            e.primitive = call.name;
            e.arg_index = k;
            e.value = v;
            e.range = p.range->to_string();
            return e;
        }
    }
    return call;
}

struct Section {
    std::optional<std::string> robot;
    int header_line = 0;
    std::vector<ActionCall> calls;
};

// Splits text into @robot sections and parses every call; fail-fast on the first error.
std::variant<std::vector<Section>, ParseError> parse_sections(std::string_view text,
                                                              const Registry& registry) {
    std::vector<Section> sections(1);
    int line_no = 0;
    std::size_t pos = 0;
    bool any_content = false;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        std::string_view raw =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        auto hash = raw.find('#');
        std::string_view line = trim(hash == std::string_view::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        any_content = true;

        if (line.front() == '@') {
            std::string_view body = trim(line.substr(1));
            auto sp = body.find_first_of(" \t");
            std::string_view directive = body.substr(0, sp);
            std::string_view id =
                sp == std::string_view::npos ? std::string_view{} : trim(body.substr(sp));
            if (directive != "robot") {
                return make_error(ErrorKind::syntax, line_no, "unknown directive '@" +
                                                                   std::string(directive) + "'");
            }
            if (!is_robot_id(id)) {
                return make_error(ErrorKind::syntax, line_no, "expected '@robot <id>'");
            }
            if (!sections.back().robot && sections.back().calls.empty()) {
                sections.back().robot = std::string(id);
                sections.back().header_line = line_no;
            } else {
                if (sections.back().calls.empty()) {
                    return make_error(ErrorKind::empty_script, sections.back().header_line,
                                      "empty script for robot '" + *sections.back().robot + "'");
                }
                sections.push_back({std::string(id), line_no, {}});
            }
            continue;
        }

        auto parsed = parse_call(line, line_no, registry);
        if (auto* err = std::get_if<ParseError>(&parsed)) return *err;
        sections.back().calls.push_back(std::move(std::get<ActionCall>(parsed)));
    }

    if (!any_content) return make_error(ErrorKind::empty_script, 1, "empty script");
    if (sections.back().calls.empty()) {
        return make_error(ErrorKind::empty_script, std::max(1, sections.back().header_line),
                          sections.back().robot
                              ? "empty script for robot '" + *sections.back().robot + "'"
                              : std::string("empty script"));
    }
    return sections;
}

}  // namespace

const Registry& registry_default() {
    static const Registry reg = make_default_registry();
    return reg;
}

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::empty_script: return "empty_script";
        case ErrorKind::syntax: return "syntax";
        case ErrorKind::unknown_primitive: return "unknown_primitive";
        case ErrorKind::arity_mismatch: return "arity_mismatch";
        case ErrorKind::arg_type_mismatch: return "arg_type_mismatch";
        case ErrorKind::arg_out_of_range: return "arg_out_of_range";
        case ErrorKind::missing_robot: return "missing_robot";
        case ErrorKind::duplicate_robot: return "duplicate_robot";
    }
    return "?";
}

std::string ParseError::describe() const {
    return "line " + std::to_string(line) + ": " + message;
}

ParseResult<ActionScript> parse_script(std::string_view text, const Registry& registry) {
    auto res = parse_sections(text, registry);
    if (auto* err = std::get_if<ParseError>(&res)) return *err;
    auto& sections = std::get<std::vector<Section>>(res);
    if (sections.size() > 1) {
        return make_error(ErrorKind::duplicate_robot, sections[1].header_line,
                          "a single script may name only one robot");
    }
    return ActionScript{sections[0].robot, std::move(sections[0].calls)};
}

ParseResult<MultiRobotPlan> parse_plan(std::string_view text,
                                       std::span<const std::string> default_robots,
                                       const Registry& registry) {
    auto res = parse_sections(text, registry);
    if (auto* err = std::get_if<ParseError>(&res)) return *err;
    auto& sections = std::get<std::vector<Section>>(res);

    MultiRobotPlan plan;
    for (auto& s : sections) {
        std::string id;
        if (s.robot) {
            id = *s.robot;
        } else if (default_robots.size() == 1) {
            id = default_robots.front();
        } else {
            return make_error(ErrorKind::missing_robot, s.calls.front().line,
                              "calls must be placed under an '@robot <id>' line when " +
                                  std::string(default_robots.empty() ? "no robot is"
                                                                     : "several robots are") +
                                  " selected");
        }
        if (plan.scripts.count(id)) {
            return make_error(ErrorKind::duplicate_robot, s.header_line,
                              "robot '" + id + "' appears more than once");
        }
        plan.scripts.emplace(id, ActionScript{id, std::move(s.calls)});
    }
    return plan;
}

std::string extract_code_block(std::string_view reply) {
    auto open = reply.find("```");
    if (open == std::string_view::npos) return std::string(trim(reply));
    auto body_start = reply.find('\n', open + 3);
    if (body_start == std::string_view::npos) return std::string();
    ++body_start;
    auto close = reply.find("```", body_start);
    std::string_view body = reply.substr(
        body_start, close == std::string_view::npos ? std::string_view::npos : close - body_start);
    return std::string(trim(body));
}

std::string format_number(double v) {
    if (v == 0.0 || !std::isfinite(v)) return "0.0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.5e", v);
    const double rounded = std::strtod(buf, nullptr);
    const char* e = std::strchr(buf, 'e');
    const int exponent = e ? std::atoi(e + 1) : 0;
    const int decimals = std::max(1, 5 - exponent);
    std::snprintf(buf, sizeof buf, "%.*f", decimals, rounded);
    std::string s(buf);
    auto dot = s.find('.');
    while (s.size() > dot + 2 && s.back() == '0') s.pop_back();
    return s;
}

std::string format_literal(const Literal& lit) {
    if (auto* d = std::get_if<double>(&lit)) return format_number(*d);
    if (auto* b = std::get_if<bool>(&lit)) return *b ? "true" : "false";
    return std::get<Keyword>(lit).name;
}

std::string format_call(const ActionCall& call) {
    std::string out = call.name + "(";
    for (std::size_t i = 0; i < call.args.size(); ++i) {
        if (i) out += ", ";
        out += format_literal(call.args[i]);
    }
    return out + ")";
}

std::string pretty_print(const ActionScript& script) {
    std::string out;
    if (script.robot) out += "@robot " + *script.robot + "\n";
    for (std::size_t i = 0; i < script.calls.size(); ++i) {
        if (i) out += "\n";
        out += format_call(script.calls[i]);
    }
    return out;
}

std::string pretty_print(const MultiRobotPlan& plan) {
    std::string out;
    for (const auto& [id, s] : plan.scripts) {
        if (!out.empty()) out += "\n\n";
        ActionScript named = s;
        named.robot = id;
        out += pretty_print(named);
    }
    return out;
}

}  // namespace lingua::script
