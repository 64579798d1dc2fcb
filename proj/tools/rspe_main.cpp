#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rsp/engine.hpp"
#include "rsp/errors.hpp"
#include "rsp/query_parser.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw rsp::ConfigError("cannot open file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_command(const std::string& config_path, const std::vector<std::string>& query_paths,
                const std::string& source_arg, int windows, const std::string& mode,
                const std::string& metrics_out, bool explain, std::uint64_t seed, bool seed_set,
                bool simulated_clock) {
    rsp::EngineConfig config =
        config_path.empty() ? rsp::EngineConfig{} : rsp::EngineConfig::from_file(config_path);
    if (seed_set) config.seed = seed;
    if (simulated_clock) config.simulated_clock = true;
    if (mode == "static")
        config.mode = rsp::EngineConfig::Mode::Static;
    else if (mode == "adaptive")
        config.mode = rsp::EngineConfig::Mode::Adaptive;
    else if (mode == "auto")
        config.mode = rsp::EngineConfig::Mode::Auto;
    else
        throw rsp::ConfigError("mode must be static, adaptive or auto");

    std::vector<rsp::ContinuousQuerySpec> specs;
    for (const std::string& path : query_paths)
        specs.push_back(rsp::parse_continuous_query(read_file(path)));

    rsp::StreamSource source;
    if (source_arg.starts_with("replay:"))
        source = rsp::StreamSource::replay_file(source_arg.substr(7));
    else if (source_arg.starts_with("generate:"))
        source = rsp::StreamSource::generate(rsp::MixSchedule::parse(read_file(source_arg.substr(9))));
    else
        throw rsp::ConfigError("--source must be replay:<file> or generate:<schedule-file>");

    rsp::RunReport report = rsp::run_engine(config, specs, source, windows);

    for (const rsp::QueryRun& q : report.queries) {
        if (explain) {
            std::cout << "== query " << q.query_id << " static plan ==\n"
                      << q.static_explain << "== query " << q.query_id << " final plan ==\n"
                      << q.final_explain;
        }
        std::cout << "query " << q.query_id << ": " << q.records.size() << " windows";
        if (!q.records.empty()) {
            double tput = 0;
            for (const rsp::MetricsRecord& r : q.records) tput += r.throughput_tps;
            std::cout << ", mean throughput " << tput / q.records.size() << " triples/s";
        }
        std::cout << '\n';
    }
    std::cout << "seed " << report.seed << ", emitted " << report.source_emitted_triples
              << " triples, wall " << report.wall_ms << " ms\n";

    if (!metrics_out.empty()) {
        const bool multi = report.queries.size() > 1;
        for (const rsp::QueryRun& q : report.queries) {
            std::string path = metrics_out;
            if (multi) {
                std::size_t dot = path.rfind('.');
                path = dot == std::string::npos ? path + "." + q.query_id
                                                : path.substr(0, dot) + "." + q.query_id +
                                                      path.substr(dot);
            }
            std::ofstream out(path);
            if (!out) throw rsp::Error("cannot write metrics file: " + path);
            out << q.metrics_csv();
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"In-process adaptive RDF stream processing engine"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run continuous queries over a stream source");
    std::string config_path, source_arg, mode = "auto", metrics_out;
    std::vector<std::string> query_paths;
    int windows = 10;
    bool explain = false, simulated_clock = false;
    std::uint64_t seed = 0;
    run->add_option("--config", config_path, "Engine config file (key = value lines)");
    run->add_option("--query", query_paths, "Continuous query file(s)")->required();
    run->add_option("--source", source_arg, "replay:<file> or generate:<schedule-file>")
        ->required();
    run->add_option("--windows", windows, "Number of windows to execute per query");
    run->add_option("--mode", mode, "static | adaptive | auto");
    run->add_option("--metrics-out", metrics_out, "Metrics CSV output path");
    run->add_flag("--explain", explain, "Print logical plans");
    auto* seed_opt = run->add_option("--seed", seed, "Generator seed");
    run->add_flag("--simulated-clock", simulated_clock, "Deterministic simulated time");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        return run_command(config_path, query_paths, source_arg, windows, mode, metrics_out,
                           explain, seed, seed_opt->count() > 0, simulated_clock);
    } catch (const rsp::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const rsp::SyntaxError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const rsp::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const rsp::UnsupportedFeature& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return 1;
    }
}
