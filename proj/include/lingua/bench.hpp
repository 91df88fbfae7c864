#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lingua/planner.hpp"
#include "lingua/sim.hpp"
#include "lingua/world.hpp"

namespace lingua::bench {

enum class Tier { simple, composite, complex };
inline constexpr Tier kTiers[] = {Tier::simple, Tier::composite, Tier::complex};

std::string_view to_string(Tier tier);
Tier tier_from_string(std::string_view s);  // throws std::invalid_argument

/// Inclusive range of total call counts allowed for a tier.
std::pair<std::size_t, std::size_t> call_band(Tier tier);

enum class GoalKind { at_xy, heading_is, in_region, holding, photos_at_least, arm_at, gripper_is };
std::string_view to_string(GoalKind kind);

struct GoalPredicate {
    GoalKind kind = GoalKind::at_xy;
    std::string subject;  // robot id, or robot/object id for in_region
    double x = 0.0;
    double y = 0.0;
    double beta = 0.0;
    double tol = 0.0;
    std::string region;
    std::string object;
    std::string preset;
    std::optional<world::JointVector> joints;
    int count = 0;
    world::GripperState gripper = world::GripperState::open;

    std::string describe() const;
    friend bool operator==(const GoalPredicate&, const GoalPredicate&) = default;
};

GoalPredicate goal_from_json(const nlohmann::json& j);  // throws std::invalid_argument
nlohmann::json goal_to_json(const GoalPredicate& goal);

/// True when the predicate holds; otherwise `why` (if given) receives a short reason.
bool evaluate(const GoalPredicate& goal, const sim::WorldState& world, const world::Scene& scene,
              std::string* why = nullptr);

struct BenchCase {
    std::string id;
    Tier tier = Tier::simple;
    std::string instruction;
    std::vector<std::string> robots;
    std::string oracle_script;
    std::vector<GoalPredicate> goals;
    std::int64_t timeout_ticks = 4000;
};

class DatasetError : public std::runtime_error {
public:
    DatasetError(std::string source, int line, const std::string& reason);
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Validates every record; with a scene, oracle scripts must also bind against it.
std::vector<BenchCase> parse_dataset(std::string_view text, const world::Scene* scene = nullptr,
                                     const std::string& source = "<dataset>");
std::vector<BenchCase> load_dataset(const std::filesystem::path& path,
                                    const world::Scene* scene = nullptr);
nlohmann::json case_to_json(const BenchCase& c);

/// `tier=composite`, `id=a,b` or empty (everything).
std::vector<BenchCase> apply_filter(const std::vector<BenchCase>& cases, const std::string& filter);

enum class Verdict { success, parse_failure, runtime_fault, goal_unmet, timeout };
inline constexpr Verdict kVerdicts[] = {Verdict::success, Verdict::parse_failure,
                                        Verdict::runtime_fault, Verdict::goal_unmet,
                                        Verdict::timeout};
std::string_view to_string(Verdict verdict);
Verdict verdict_from_string(std::string_view s);

struct CaseResult {
    std::string case_id;
    Tier tier = Tier::simple;
    Verdict verdict = Verdict::success;
    std::int64_t ticks_used = 0;
    double latency_seconds = 0.0;
    std::string details;

    friend bool operator==(const CaseResult&, const CaseResult&) = default;
};

struct TierSummary {
    int n = 0;
    int successes = 0;
    std::map<Verdict, int> histogram;

    std::optional<double> rate() const;  // percent; empty for n = 0
    std::string rate_text() const;       // "94.4%" or "n/a"
    friend bool operator==(const TierSummary&, const TierSummary&) = default;
};

struct Fingerprint {
    std::string backend;
    std::string scene;
    std::optional<std::uint64_t> seed;
    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

struct BenchReport {
    std::map<Tier, TierSummary> tiers;  // all three tiers always present
    TierSummary overall;
    std::vector<CaseResult> rows;       // ordered by tier, then case id
    Fingerprint fingerprint;

    friend bool operator==(const BenchReport&, const BenchReport&) = default;
};

BenchReport aggregate(std::vector<CaseResult> rows, Fingerprint fingerprint);

/// plan -> bind -> run_to_completion -> goals. Case-level failures become verdicts.
CaseResult run_case(const BenchCase& c, const world::Scene& scene, planner::ChatBackend& backend,
                    const planner::PromptTemplate& tmpl = planner::PromptTemplate::default_template());

/// Runs every case on its own world, up to `parallelism` at a time.
BenchReport run_suite(const std::vector<BenchCase>& cases, const world::Scene& scene,
                      planner::ChatBackend& backend, int parallelism = 1,
                      std::optional<std::uint64_t> seed = std::nullopt,
                      const planner::PromptTemplate& tmpl = planner::PromptTemplate::default_template());

enum class ReportFormat { table, csv, json };
ReportFormat report_format_from_string(std::string_view s);

std::string emit_report(const BenchReport& report, ReportFormat format);
nlohmann::json report_to_json(const BenchReport& report);
BenchReport report_from_json(const nlohmann::json& j);

/// Per-tier mean and range of success rates over repeated runs.
std::string summarize_repeats(const std::vector<BenchReport>& runs);

}  // namespace lingua::bench
