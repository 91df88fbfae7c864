#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lingua::script {

enum class ParamKind { number, boolean, keyword };

struct Range {
    double min = 0.0;
    double max = 0.0;
    bool max_inclusive = true;

    bool contains(double v) const { return v >= min && (max_inclusive ? v <= max : v < max); }
    std::string to_string() const;  // "[-10.0, 10.0]" or "[-180.0, 180.0)"
};

struct ParamSpec {
    std::string name;
    ParamKind kind = ParamKind::number;
    std::optional<Range> range;
    bool optional = false;
    std::vector<std::string> keywords;  // accepted bare tokens for keyword params
    std::string unit;
};

struct PrimitiveSignature {
    std::string name;
    std::vector<ParamSpec> params;
    bool variadic = false;
    std::string summary;

    std::size_t required_count() const;
};

class Registry {
public:
    Registry() = default;
    explicit Registry(std::vector<PrimitiveSignature> signatures);

    const PrimitiveSignature* find(std::string_view name) const;
    const std::vector<PrimitiveSignature>& signatures() const { return signatures_; }
    std::size_t size() const { return signatures_.size(); }

private:
    std::vector<PrimitiveSignature> signatures_;
};

/// The v1 primitive set shared by the planner prompt, parser and simulator.
const Registry& registry_default();

struct Keyword {
    std::string name;
    friend bool operator==(const Keyword&, const Keyword&) = default;
};

using Literal = std::variant<double, bool, Keyword>;

struct ActionCall {
    std::string name;
    std::vector<Literal> args;
    int line = 0;  // 1-based source line; not part of equality

    double number(std::size_t i) const { return std::get<double>(args.at(i)); }

    friend bool operator==(const ActionCall& a, const ActionCall& b) {
        return a.name == b.name && a.args == b.args;
    }
};

struct ActionScript {
    std::optional<std::string> robot;
    std::vector<ActionCall> calls;

    friend bool operator==(const ActionScript&, const ActionScript&) = default;
};

struct MultiRobotPlan {
    std::map<std::string, ActionScript> scripts;  // robot id -> script

    std::size_t total_calls() const;
    friend bool operator==(const MultiRobotPlan&, const MultiRobotPlan&) = default;
};

enum class ErrorKind {
    empty_script,
    syntax,
    unknown_primitive,
    arity_mismatch,
    arg_type_mismatch,
    arg_out_of_range,
    missing_robot,
    duplicate_robot,
};

std::string_view to_string(ErrorKind kind);

struct ParseError {
    ErrorKind kind = ErrorKind::syntax;
    int line = 0;
    std::string message;
    std::string primitive;
    // arity_mismatch
    std::size_t expected_min = 0;
    std::size_t expected_max = 0;
    std::size_t got = 0;
    // arg_out_of_range / arg_type_mismatch
    std::size_t arg_index = 0;
    double value = 0.0;
    std::string range;

    std::string describe() const;  // "line 3: unknown primitive 'selfDestruct'"
};

template <class T>
using ParseResult = std::variant<T, ParseError>;

/// Parses one robot's script. An optional leading `@robot <id>` line names the robot.
ParseResult<ActionScript> parse_script(std::string_view text,
                                       const Registry& registry = registry_default());

/// Parses a plan that may address several robots with `@robot <id>` sections. A script
/// without sections is assigned to the single robot in `default_robots`.
ParseResult<MultiRobotPlan> parse_plan(std::string_view text,
                                       std::span<const std::string> default_robots,
                                       const Registry& registry = registry_default());

/// Contents of the first ``` fence (language tag stripped), else the whole reply trimmed.
std::string extract_code_block(std::string_view reply);

/// Canonical numeral: up to 6 significant digits, at least one decimal place, never an exponent.
std::string format_number(double v);
std::string format_literal(const Literal& lit);
std::string format_call(const ActionCall& call);

std::string pretty_print(const ActionScript& script);
std::string pretty_print(const MultiRobotPlan& plan);

}  // namespace lingua::script
