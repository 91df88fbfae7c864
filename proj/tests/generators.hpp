#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "lingua/motion.hpp"
#include "lingua/script.hpp"

namespace testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline int pick(Rng& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

// Multiples of 0.001 so the canonical six-significant-digit printing is exact.
inline double gen_value(Rng& rng, double lo, double hi) {
    const auto a = static_cast<long long>(std::ceil(lo * 1000.0));
    auto b = static_cast<long long>(std::floor(hi * 1000.0));
    return static_cast<double>(std::uniform_int_distribution<long long>(a, b)(rng)) / 1000.0;
}

inline lingua::script::ActionCall gen_call(Rng& rng, const lingua::script::Registry& reg) {
    using namespace lingua::script;
    const auto& sig = reg.signatures()[pick(rng, static_cast<int>(reg.size()))];
    ActionCall c{sig.name, {}, 0};
    for (const auto& p : sig.params) {
        if (p.optional && pick(rng, 2) == 0) break;
        if (p.kind == ParamKind::keyword) {
            c.args.emplace_back(Keyword{p.keywords[pick(rng, static_cast<int>(p.keywords.size()))]});
        } else if (p.kind == ParamKind::boolean) {
            c.args.emplace_back(pick(rng, 2) == 1);
        } else if (p.range) {
            double hi = p.range->max_inclusive ? p.range->max : p.range->max - 0.001;
            c.args.emplace_back(gen_value(rng, p.range->min, hi));
        } else {
            c.args.emplace_back(gen_value(rng, -180.0, 180.0));
        }
    }
    return c;
}

inline lingua::script::ActionScript gen_script(Rng& rng, int max_calls = 12,
                                               const lingua::script::Registry& reg = lingua::script::registry_default()) {
    lingua::script::ActionScript s;
    const int n = 1 + pick(rng, max_calls);
    for (int i = 0; i < n; ++i) {
        auto c = gen_call(rng, reg);
        c.line = i + 1;
        s.calls.push_back(c);
    }
    return s;
}

struct Mutation {
    std::string text;
    lingua::script::ErrorKind kind;
    int line = 0;
};

// Changes one token on one line of a header-less script; the expected diagnosis is known up front.
inline Mutation mutate(Rng& rng, const lingua::script::ActionScript& script,
                       const lingua::script::Registry& reg = lingua::script::registry_default()) {
    using namespace lingua::script;
    const int at = pick(rng, static_cast<int>(script.calls.size()));
    ActionCall c = script.calls[at];
    const auto& sig = *reg.find(c.name);
    Mutation m{"", ErrorKind::syntax, at + 1};
    std::string line;
    int op = pick(rng, 6);
    if (op == 1 && c.args.size() > 1) op = 3;
    if (op == 2) {
        std::vector<std::size_t> ranged;
        for (std::size_t i = 0; i < c.args.size(); ++i)
            if (sig.params[i].range) ranged.push_back(i);
        if (ranged.empty()) {
            op = 0;
        } else {
            const auto i = ranged[pick(rng, static_cast<int>(ranged.size()))];
            const auto& r = *sig.params[i].range;
            c.args[i] = pick(rng, 2) ? (r.max_inclusive ? r.max + 0.5 : r.max) : r.min - 0.5;
            line = format_call(c);
            m.kind = ErrorKind::arg_out_of_range;
        }
    }
    if (op == 4) {
        if (c.args.empty()) {
            op = 0;
        } else {
            auto& a = c.args[pick(rng, static_cast<int>(c.args.size()))];
            if (std::holds_alternative<double>(a)) a = Keyword{"xFirst"};
            else a = 3.0;
            line = format_call(c);
            m.kind = ErrorKind::arg_type_mismatch;
        }
    }
    switch (op) {
        case 0:
            c.name += "Zq";
            line = format_call(c);
            m.kind = ErrorKind::unknown_primitive;
            break;
        case 1:
            if (c.args.empty()) c.args.emplace_back(1.0);
            else c.args.clear();
            line = format_call(c);
            m.kind = ErrorKind::arity_mismatch;
            break;
        case 3:
            line = format_call(c);
            line.pop_back();
            m.kind = ErrorKind::syntax;
            break;
        case 5:
            line = format_call(c) + ";";
            m.kind = ErrorKind::syntax;
            break;
        default:
            break;
    }
    for (int i = 0; i < static_cast<int>(script.calls.size()); ++i)
        m.text += (i == at ? line : format_call(script.calls[i])) + "\n";
    return m;
}

inline long long convergence_bound(double distance, double speed, double dt, double window) {
    const double step = speed * dt;
    return static_cast<long long>(std::ceil(std::abs(distance) / step) +
                                  lingua::motion::kDecelStages * std::ceil(window / (step / lingua::motion::kDecelStages)) +
                                  10);
}

struct MoveRun {
    long long ticks = 0;
    bool done = false;
    double final_error = 0.0;
    double max_past = 0.0;  // furthest travel beyond the target, along the travel direction
    bool corrected = false;
    int overshoot_events = 0;
};

// Drives one axis with the controller; `kick` displaces the axis by that much at `kick_tick`.
inline MoveRun drive_axis(double start, double target, double speed, const lingua::motion::DecelProfile& p,
                          double dt, long long max_ticks, long long kick_tick = -1, double kick = 0.0) {
    lingua::motion::AxisController c(target, speed, p);
    const double dir = target >= start ? 1.0 : -1.0;
    MoveRun r;
    double x = start;
    for (; r.ticks < max_ticks; ++r.ticks) {
        if (r.ticks == kick_tick) x += kick;
        auto t = c.update(x, dt);
        r.corrected |= t.correction_finished;
        r.overshoot_events += t.overshoot_detected;
        x = t.next;
        if (kick_tick < 0) r.max_past = std::max(r.max_past, (x - target) * dir);
        if (t.done) {
            r.done = true;
            ++r.ticks;
            break;
        }
    }
    r.final_error = std::abs(x - target);
    return r;
}

}  // namespace testing
