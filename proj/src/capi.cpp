#include "marton/marton.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "regions.hpp"
#include "sim.hpp"

using namespace marton;

struct mtn_config {
    SimulationConfig config;
};

namespace {

thread_local std::string g_last_error = "";

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

int run_command(const SimulationConfig& config, const std::string& command,
                const std::filesystem::path& out_dir, int threads) {
    std::filesystem::create_directories(out_dir);
    if (command == "construct") {
        write_file(out_dir / "report.json", construct_document(config, threads));
        return MTN_OK;
    }
    if (command == "simulate") {
        SimulationReport report = run_simulation(config, threads);
        write_file(out_dir / "report.json", report.to_json_text());
        write_file(out_dir / "trials.csv", report.trials_csv());
        return MTN_OK;
    }
    if (command == "region") {
        Channel ch1 = config.channel1.make();
        Channel ch2 = config.channel2.make();
        std::vector<double> grid =
            config.grid.empty() ? default_sweep_grid() : config.grid;
        SweepResult sweep = region_sweep(ch1, ch2, grid);
        write_file(out_dir / "frontier.csv",
                   frontier_csv(sweep, config.channel1.describe(),
                                config.channel2.describe()));
        std::ostringstream report;
        report << "{\n  \"command\": \"region\",\n  \"c1\": " << sweep.c1
               << ",\n  \"c2\": " << sweep.c2
               << ",\n  \"grid_size\": " << grid.size()
               << ",\n  \"config\": " << config.to_json_text() << "\n}\n";
        write_file(out_dir / "report.json", report.str());
        return MTN_OK;
    }
    if (command == "compare") {
        write_file(out_dir / "frontier.csv", compare_csv(config));
        std::ostringstream report;
        report << "{\n  \"command\": \"compare\",\n  \"config\": "
               << config.to_json_text() << "\n}\n";
        write_file(out_dir / "report.json", report.str());
        return MTN_OK;
    }
    throw config_error("unknown command \"" + command + "\"");
}

}  // namespace

extern "C" {

const char* mtn_version(void) { return "1.0.0"; }

const char* mtn_last_error(void) { return g_last_error.c_str(); }

int mtn_config_parse(const char* json_text, mtn_config** out) {
    if (json_text == nullptr || out == nullptr) {
        g_last_error = "null argument";
        return MTN_ERR_CONFIG;
    }
    try {
        auto* handle = new mtn_config{SimulationConfig::from_json_text(json_text)};
        *out = handle;
        return MTN_OK;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return MTN_ERR_CONFIG;
    }
}

int mtn_config_load(const char* path, mtn_config** out) {
    if (path == nullptr || out == nullptr) {
        g_last_error = "null argument";
        return MTN_ERR_CONFIG;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        g_last_error = std::string("cannot open config file: ") + path;
        return MTN_ERR_CONFIG;
    }
    std::ostringstream text;
    text << in.rdbuf();
    return mtn_config_parse(text.str().c_str(), out);
}

void mtn_config_free(mtn_config* config) { delete config; }

int mtn_run(const mtn_config* config, const char* command, const char* out_dir,
            const mtn_run_options* opts) {
    if (config == nullptr || command == nullptr || out_dir == nullptr) {
        g_last_error = "null argument";
        return MTN_ERR_CONFIG;
    }
    SimulationConfig effective = config->config;
    int threads = 1;
    if (opts != nullptr) {
        if (opts->has_seed) effective.seed = opts->seed;
        if (opts->threads > 1) threads = opts->threads;
    }
    try {
        return run_command(effective, command, out_dir, threads);
    } catch (const config_error& e) {
        g_last_error = e.what();
        return MTN_ERR_CONFIG;
    } catch (const rate_infeasible_error& e) {
        g_last_error = e.what();
        return MTN_ERR_INFEASIBLE;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return MTN_ERR_RUNTIME;
    }
}

}  // extern "C"
