#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "lingua/bench.hpp"
#include "lingua/motion.hpp"
#include "lingua/planner.hpp"
#include "lingua/script.hpp"
#include "lingua/sim.hpp"
#include "lingua/world.hpp"

namespace py = pybind11;
using namespace lingua;
using nlohmann::json;

namespace {

// Everything crosses the boundary as JSON text; the python layer decodes it.
world::Scene scene_from(const std::string& path_or_json) {
    if (!path_or_json.empty() && path_or_json.front() == '{') return world::scene_from_json(json::parse(path_or_json));
    return world::load_scene_file(path_or_json);
}

std::string scene_json(const std::string& path_or_json) { return world::scene_to_json(scene_from(path_or_json)).dump(); }

std::string parse_plan_json(const std::string& text, const std::vector<std::string>& robots) {
    auto r = script::parse_plan(text, robots);
    if (auto* e = std::get_if<script::ParseError>(&r)) return json{{"error", planner::parse_error_to_json(*e)}}.dump();
    const auto& plan = std::get<script::MultiRobotPlan>(r);
    json scripts = json::object();
    for (const auto& [id, s] : plan.scripts) {
        json calls = json::array();
        for (const auto& c : s.calls) calls.push_back(script::format_call(c));
        scripts[id] = calls;
    }
    return json{{"scripts", scripts}, {"canonical", script::pretty_print(plan)}}.dump();
}

json run_json(const sim::RunResult& run) {
    json outcomes = json::object();
    for (const auto& [id, o] : run.outcomes) {
        outcomes[id] = {{"status", std::string(sim::to_string(o.status))},
                        {"calls_completed", o.calls_completed},
                        {"script_length", o.script_length},
                        {"ticks_used", o.ticks_used},
                        {"fault", o.fault ? json(o.fault->reason) : json(nullptr)}};
    }
    return {{"outcomes", outcomes},
            {"final_tick", run.world.tick},
            {"trajectory_hash", sim::trajectory_hash(run.world)},
            {"final_state", sim::snapshot_to_json(run.world, run.world.events.size())}};
}

std::string run_plan_json(const std::string& scene, const std::string& text) {
    auto s = scene_from(scene);
    auto r = script::parse_plan(text, s.robot_ids());
    if (auto* e = std::get_if<script::ParseError>(&r)) throw std::invalid_argument(e->describe());
    try {
        return run_json(sim::run_to_completion(s, std::get<script::MultiRobotPlan>(r))).dump();
    } catch (const sim::BindError& e) {
        throw std::invalid_argument(e.what());
    }
}

std::string plan_json(const std::string& instruction, const std::string& scene, const std::string& backend_spec,
                      const std::vector<std::filesystem::path>& oracle_files, const std::vector<std::string>& robots) {
    auto s = scene_from(scene);
    auto backend = planner::make_backend(planner::parse_backend_spec(backend_spec, oracle_files));
    auto ex = planner::plan(instruction, s, robots, *backend);
    json out = {{"exchange", planner::exchange_to_json(ex, false)}};
    if (const auto* plan = ex.plan()) {
        try {
            out["run"] = run_json(sim::run_to_completion(s, *plan));
        } catch (const sim::BindError& e) {
            out["bind_error"] = e.what();
        }
    }
    return out.dump();
}

std::string bench_json(const std::filesystem::path& dataset, const std::string& scene, const std::string& backend_spec,
                       const std::vector<std::filesystem::path>& oracle_files, const std::string& filter,
                       int parallel) {
    auto s = scene_from(scene);
    auto cases = bench::apply_filter(bench::load_dataset(dataset, &s), filter);
    auto cfg = planner::parse_backend_spec(backend_spec, oracle_files);
    auto backend = planner::make_backend(cfg);
    std::optional<std::uint64_t> seed;
    if (cfg.kind == planner::BackendConfig::Kind::fault_injection && cfg.corrupt_ids.empty()) seed = cfg.fault_seed;
    py::gil_scoped_release release;
    return bench::report_to_json(bench::run_suite(cases, s, *backend, parallel, seed)).dump();
}

py::tuple fk(const std::array<double, 5>& joints) {
    auto r = motion::arm_forward_kinematics(joints, world::ArmGeometry{});
    return py::make_tuple(r.radial, r.height, r.yaw);
}

}  // namespace

PYBIND11_MODULE(_lingua, m) {
    m.doc() = "lingua core bindings";
    m.def("load_scene", &scene_json, py::arg("scene"));
    m.def("parse_plan", &parse_plan_json, py::arg("text"), py::arg("robots") = std::vector<std::string>{});
    m.def("format_number", &script::format_number);
    m.def("decel_scale", &motion::decel_scale, py::arg("remaining"), py::arg("window") = 1.4,
          py::arg("stop_tolerance") = 0.01);
    m.def("forward_kinematics", &fk, py::arg("joints"));
    m.def("normalize_heading", &world::normalize_heading);
    m.def("run_plan", &run_plan_json, py::arg("scene"), py::arg("text"));
    m.def("plan", &plan_json, py::arg("instruction"), py::arg("scene"), py::arg("backend"), py::arg("oracle_files"),
          py::arg("robots") = std::vector<std::string>{});
    m.def("run_bench", &bench_json, py::arg("dataset"), py::arg("scene"), py::arg("backend"), py::arg("oracle_files"),
          py::arg("filter") = "", py::arg("parallel") = 1);

    py::register_exception<world::SceneError>(m, "SceneError", PyExc_ValueError);
    py::register_exception<planner::BackendError>(m, "BackendError", PyExc_RuntimeError);
    py::register_exception<bench::DatasetError>(m, "DatasetError", PyExc_ValueError);
}
