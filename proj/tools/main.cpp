#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "reid/metrics.hpp"
#include "reid/report.hpp"
#include "reid/serde.hpp"
#include "reid/simulator.hpp"
#include "reid/stream.hpp"

namespace {

using nlohmann::json;

json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw reid::IoError("cannot open for reading: " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw reid::ValidationError("malformed JSON in " + path);
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw reid::IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw reid::IoError("write failed: " + path);
}

reid::EngineConfig load_engine_config(const std::string& path, std::int64_t stream_dim) {
    reid::EngineConfig config;
    if (!path.empty()) {
        config = load_json_file(path).get<reid::EngineConfig>();
    } else {
        config.feature_dim = stream_dim;
    }
    return config;
}

std::string decisions_csv(const std::vector<reid::Decision>& decisions) {
    std::string out = "frame,kind,track_id,distance,lambda,blacklist_size\n";
    for (const auto& d : decisions) {
        out += std::to_string(d.frame_index);
        out += ',';
        out += reid::to_string(d.kind);
        out += ',';
        if (d.track_id) out += std::to_string(*d.track_id);
        out += ',';
        if (d.distance) out += reid::format_double(*d.distance);
        out += ',';
        out += reid::format_double(d.lambda_snapshot);
        out += ',';
        out += std::to_string(d.blacklist_size);
        out += '\n';
    }
    return out;
}

std::string decisions_jsonl(const std::vector<reid::Decision>& decisions) {
    std::string out;
    for (const auto& d : decisions) {
        out += json(d).dump();
        out += '\n';
    }
    return out;
}

void write_decisions(const std::vector<reid::Decision>& decisions, const std::string& path,
                     const std::string& format) {
    write_text_file(path, format == "csv" ? decisions_csv(decisions) : decisions_jsonl(decisions));
}

void write_metrics_json(const std::vector<reid::RunMetrics>& metrics, const std::string& path) {
    write_text_file(path, json(metrics).dump(2) + "\n");
}

std::vector<reid::RunMetrics> load_metrics_files(const std::vector<std::string>& paths) {
    std::vector<reid::RunMetrics> all;
    for (const auto& path : paths) {
        const json j = load_json_file(path);
        if (j.is_array()) {
            for (const auto& item : j) all.push_back(item.get<reid::RunMetrics>());
        } else {
            all.push_back(j.get<reid::RunMetrics>());
        }
    }
    return all;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Streaming single-target re-identification engine and benchmark harness"};
    app.require_subcommand(1);

    // simulate
    std::string sim_config_path, sim_out;
    std::optional<std::uint64_t> sim_seed;
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic detection stream");
    simulate->add_option("--config", sim_config_path, "Scenario config JSON")->required();
    simulate->add_option("--seed", sim_seed, "Override the config seed");
    simulate->add_option("--out", sim_out, "Output stream path (JSONL)")->required();

    // run
    std::string run_stream_path, run_engine_path, run_out, run_metrics_out;
    std::string run_format = "jsonl";
    std::int64_t run_person = 0;
    auto* run = app.add_subcommand("run", "Drive one engine over a stream and score it");
    run->add_option("--stream", run_stream_path, "Input stream (JSONL)")->required();
    run->add_option("--engine-config", run_engine_path, "Engine config JSON");
    run->add_option("--person", run_person, "Ground-truth person to bind at stream start")
        ->required();
    run->add_option("--out", run_out, "Decisions output path")->required();
    run->add_option("--format", run_format, "Decisions format")
        ->check(CLI::IsMember({"jsonl", "csv"}));
    run->add_option("--metrics", run_metrics_out, "Metrics output path (JSON)");

    // sweep
    std::string sweep_stream_path, sweep_engine_path, sweep_metrics_out, sweep_decisions_dir;
    std::string sweep_format = "jsonl";
    auto* sweep = app.add_subcommand("sweep", "Evaluate one run per person in the stream");
    sweep->add_option("--stream", sweep_stream_path, "Input stream (JSONL)")->required();
    sweep->add_option("--engine-config", sweep_engine_path, "Engine config JSON");
    sweep->add_option("--metrics", sweep_metrics_out, "Metrics output path (JSON)")->required();
    sweep->add_option("--decisions-dir", sweep_decisions_dir, "Write per-person decision files");
    sweep->add_option("--format", sweep_format, "Decisions format")
        ->check(CLI::IsMember({"jsonl", "csv"}));

    // compare-damping
    std::string cmp_stream_path, cmp_engine_path, cmp_out;
    std::int64_t cmp_person = 0;
    auto* cmp = app.add_subcommand("compare-damping",
                                   "Trace the threshold with and without damping factors");
    cmp->add_option("--stream", cmp_stream_path, "Input stream (JSONL)")->required();
    cmp->add_option("--engine-config", cmp_engine_path, "Engine config JSON");
    cmp->add_option("--person", cmp_person, "Ground-truth person to bind")->required();
    cmp->add_option("--out", cmp_out, "Trace CSV output path")->required();

    // report
    std::vector<std::string> report_metrics_paths;
    std::string report_out, report_plots_dir;
    auto* report = app.add_subcommand("report", "Aggregate run metrics into CSV and plots");
    report->add_option("--metrics", report_metrics_paths, "Metrics JSON file(s)")->required();
    report->add_option("--out", report_out, "Report CSV output path")->required();
    report->add_option("--plots", report_plots_dir, "Directory for SVG plots");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) {
            reid::ScenarioConfig config = load_json_file(sim_config_path).get<reid::ScenarioConfig>();
            if (sim_seed) config.seed = *sim_seed;
            const reid::Scenario scenario = reid::generate(config);
            reid::write_stream_file(scenario, sim_out);
            std::int64_t detections = 0;
            for (const auto& frame : scenario.frames) {
                detections += static_cast<std::int64_t>(frame.size());
            }
            std::cout << "wrote " << sim_out << ": " << config.num_frames << " frames, "
                      << detections << " detections, seed " << config.seed << "\n";
        } else if (*run) {
            const auto stream = reid::read_stream_file(run_stream_path);
            const auto config = load_engine_config(run_engine_path, stream.header.feature_dim);
            const auto result = reid::run_stream(stream, config, run_person);
            write_decisions(result.decisions, run_out, run_format);
            if (!run_metrics_out.empty()) write_metrics_json({result.metrics}, run_metrics_out);
            reid::write_summary({result.metrics}, std::cout);
        } else if (*sweep) {
            const auto stream = reid::read_stream_file(sweep_stream_path);
            const auto config = load_engine_config(sweep_engine_path, stream.header.feature_dim);
            const auto results = reid::sweep_stream(stream, config);
            std::vector<reid::RunMetrics> metrics;
            for (const auto& r : results) metrics.push_back(r.metrics);
            write_metrics_json(metrics, sweep_metrics_out);
            if (!sweep_decisions_dir.empty()) {
                std::filesystem::create_directories(sweep_decisions_dir);
                for (const auto& r : results) {
                    const std::string name = "person_" + std::to_string(r.metrics.person_id) +
                                             (sweep_format == "csv" ? ".csv" : ".jsonl");
                    write_decisions(r.decisions,
                                    (std::filesystem::path(sweep_decisions_dir) / name).string(),
                                    sweep_format);
                }
            }
            reid::write_summary(metrics, std::cout);
        } else if (*cmp) {
            const auto stream = reid::read_stream_file(cmp_stream_path);
            const auto config = load_engine_config(cmp_engine_path, stream.header.feature_dim);
            const auto comparison = reid::compare_damping(stream, config, cmp_person);
            std::ofstream out(cmp_out, std::ios::binary);
            if (!out) throw reid::IoError("cannot open for writing: " + cmp_out);
            reid::write_damping_csv(comparison, out);
            if (!out) throw reid::IoError("write failed: " + cmp_out);
        } else if (*report) {
            const auto metrics = load_metrics_files(report_metrics_paths);
            std::ofstream out(report_out, std::ios::binary);
            if (!out) throw reid::IoError("cannot open for writing: " + report_out);
            reid::write_metrics_csv(metrics, out);
            if (!out) throw reid::IoError("write failed: " + report_out);
            if (!report_plots_dir.empty()) reid::write_plots(metrics, report_plots_dir);
            reid::write_summary(metrics, std::cout);
        }
    } catch (const reid::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const reid::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const reid::ContractViolation& e) {
        std::cerr << "contract violation: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
