#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "lingua/bench.hpp"
#include "lingua/gateway.hpp"
#include "lingua/planner.hpp"
#include "lingua/server.hpp"
#include "lingua/sim.hpp"

using namespace lingua;
namespace fs = std::filesystem;

namespace {

std::atomic<bool> g_stop{false};

fs::path data_path(const std::string& rel) {
    if (fs::exists(rel)) return rel;
    fs::path installed = fs::path(LINGUA_DATA_DIR) / rel;
    return fs::exists(installed) ? installed : fs::path(rel);
}

std::vector<fs::path> oracle_files(const std::string& dataset, const std::vector<std::string>& extra) {
    std::vector<fs::path> files{dataset.empty() ? data_path("datasets/bench108.jsonl") : fs::path(dataset)};
    if (extra.empty()) {
        auto scenarios = data_path("datasets/scenarios.jsonl");
        if (fs::exists(scenarios)) files.push_back(scenarios);
    }
    for (const auto& e : extra) files.push_back(e);
    return files;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

int run_bench(const std::string& dataset, const std::string& scene_path, const std::string& backend_spec,
              const std::vector<std::string>& oracle_extra, const std::string& filter,
              const std::string& report_path, const std::string& format, int parallel, int repeat) {
    world::Scene scene;
    std::vector<bench::BenchCase> cases;
    std::shared_ptr<planner::ChatBackend> backend;
    planner::BackendConfig cfg;
    try {
        scene = world::load_scene_file(scene_path);
        cases = bench::apply_filter(bench::load_dataset(dataset, &scene), filter);
        cfg = planner::parse_backend_spec(backend_spec, oracle_files(dataset, oracle_extra));
        backend = planner::make_backend(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::optional<std::uint64_t> seed;
    if (cfg.kind == planner::BackendConfig::Kind::fault_injection && cfg.corrupt_ids.empty())
        seed = cfg.fault_seed;

    std::vector<bench::BenchReport> runs;
    for (int i = 0; i < std::max(1, repeat); ++i)
        runs.push_back(bench::run_suite(cases, scene, *backend, parallel, seed));

    const auto fmt = bench::report_format_from_string(format);
    std::cout << bench::emit_report(runs.back(), fmt);
    if (runs.size() > 1) std::cout << bench::summarize_repeats(runs);

    if (!report_path.empty()) {
        auto ext = fs::path(report_path).extension().string();
        auto file_fmt = ext == ".json" ? bench::ReportFormat::json
                        : ext == ".csv" ? bench::ReportFormat::csv
                                        : bench::ReportFormat::table;
        std::ofstream out(report_path);
        if (!out) {
            std::cerr << "error: cannot write " << report_path << "\n";
            return 2;
        }
        out << bench::emit_report(runs.back(), file_fmt);
    }
    return 0;
}

std::map<std::string, std::shared_ptr<planner::ChatBackend>> make_backends(
    const std::vector<std::string>& specs, const std::vector<fs::path>& oracle) {
    std::map<std::string, std::shared_ptr<planner::ChatBackend>> out;
    for (const auto& spec : specs) out[spec] = planner::make_backend(planner::parse_backend_spec(spec, oracle));
    return out;
}

int run_serve(const std::string& scene_path, const std::string& address, int port,
              std::vector<std::string> backend_specs, const std::string& dataset,
              const std::string& static_dir, double time_scale) {
    try {
        auto scene = world::load_scene_file(scene_path);
        if (backend_specs.empty()) {
            backend_specs.push_back("oracle");
            if (std::getenv("LINGUA_LLM_BASE_URL")) backend_specs.push_back("http");
        }
        gateway::GatewayConfig cfg;
        cfg.backends = make_backends(backend_specs, oracle_files(dataset, {}));
        cfg.default_backend = backend_specs.front();
        gateway::Gateway gw(std::move(scene), std::move(cfg));
        server::ServerOptions opts;
        opts.address = address;
        opts.port = static_cast<unsigned short>(port);
        opts.static_dir = static_dir;
        server::Server srv(gw, opts);
        gw.start(time_scale);
        srv.start();
        std::cout << "listening on http://" << address << ":" << srv.port() << std::endl;

        std::signal(SIGINT, [](int) { g_stop = true; });
        std::signal(SIGTERM, [](int) { g_stop = true; });
        while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
        srv.stop();
        gw.stop();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

int run_once(const std::string& text, const std::string& robots, const std::string& backend_spec,
             const std::string& scene_path, const std::string& dataset, bool show_prompt) {
    try {
        auto scene = world::load_scene_file(scene_path);
        auto backend = planner::make_backend(
            planner::parse_backend_spec(backend_spec, oracle_files(dataset, {})));
        auto selection = split_list(robots);
        auto ex = planner::plan(text, scene, selection, *backend);
        nlohmann::json out = {{"exchange", planner::exchange_to_json(ex, show_prompt)}};
        int code = 0;
        if (const auto* plan = ex.plan()) {
            try {
                auto run = sim::run_to_completion(scene, *plan);
                nlohmann::json outcomes = nlohmann::json::object();
                for (const auto& [id, o] : run.outcomes) {
                    outcomes[id] = {{"status", std::string(sim::to_string(o.status))},
                                    {"calls_completed", o.calls_completed},
                                    {"script_length", o.script_length},
                                    {"ticks_used", o.ticks_used},
                                    {"fault", o.fault ? nlohmann::json(o.fault->reason) : nlohmann::json(nullptr)}};
                    if (o.status != sim::OutcomeStatus::completed) code = 1;
                }
                out["outcomes"] = outcomes;
                out["final_tick"] = run.world.tick;
                out["trajectory_hash"] = sim::trajectory_hash(run.world);
                out["final_state"] = sim::snapshot_to_json(run.world, run.world.events.size());
            } catch (const sim::BindError& e) {
                out["bind_error"] = e.what();
                code = 1;
            }
        } else {
            code = 1;
        }
        std::cout << out.dump(2) << "\n";
        return code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lingua: language-driven multi-robot simulation"};
    app.require_subcommand(1);

    std::string dataset = data_path("datasets/bench108.jsonl").string();
    std::string scene = data_path("scenes/threebot.json").string();
    std::string backend = "oracle";

    auto* bench_cmd = app.add_subcommand("bench", "run the benchmark suite and report per-tier rates");
    std::string filter, report, format = "table";
    std::vector<std::string> oracle_extra;
    int parallel = 1, repeat = 1;
    bench_cmd->add_option("--dataset", dataset, "line-delimited case file");
    bench_cmd->add_option("--scene", scene, "scene JSON");
    bench_cmd->add_option("--backend", backend, "oracle | http | fault:cases=a,b | fault:rate=R,seed=S");
    bench_cmd->add_option("--oracle", oracle_extra, "extra oracle record files");
    bench_cmd->add_option("--filter", filter, "tier=<name> or id=<a,b>");
    bench_cmd->add_option("--report", report, "write report (.csv, .json or table)");
    bench_cmd->add_option("--format", format, "stdout format: table | csv | json");
    bench_cmd->add_option("--parallel", parallel, "worker threads")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--repeat", repeat, "runs per case for variance studies")->check(CLI::PositiveNumber);

    auto* serve_cmd = app.add_subcommand("serve", "host the live world over HTTP and WebSocket");
    std::string address = "127.0.0.1", static_dir;
    int port = 8080;
    double time_scale = 1.0;
    std::vector<std::string> backends;
    serve_cmd->add_option("--scene", scene, "scene JSON");
    serve_cmd->add_option("--port", port, "TCP port (0 picks one)");
    serve_cmd->add_option("--address", address, "bind address");
    serve_cmd->add_option("--backend", backends, "backend specs; the first is the default");
    serve_cmd->add_option("--dataset", dataset, "oracle record file");
    serve_cmd->add_option("--static", static_dir, "directory served at /");
    serve_cmd->add_option("--time-scale", time_scale, "wall seconds per simulated second");

    auto* run_cmd = app.add_subcommand("run", "plan and execute one instruction headlessly");
    std::string text, robots;
    bool show_prompt = false;
    run_cmd->add_option("--text", text, "instruction")->required();
    run_cmd->add_option("--robots", robots, "comma-separated robot ids (default: all)");
    run_cmd->add_option("--backend", backend, "backend spec");
    run_cmd->add_option("--scene", scene, "scene JSON");
    run_cmd->add_option("--dataset", dataset, "oracle record file");
    run_cmd->add_flag("--show-prompt", show_prompt, "include the rendered prompt");

    CLI11_PARSE(app, argc, argv);

    if (bench_cmd->parsed())
        return run_bench(dataset, scene, backend, oracle_extra, filter, report, format, parallel, repeat);
    if (serve_cmd->parsed())
        return run_serve(scene, address, port, backends, dataset, static_dir, time_scale);
    return run_once(text, robots, backend, scene, dataset, show_prompt);
}
