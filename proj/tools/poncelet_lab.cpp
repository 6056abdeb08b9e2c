#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "poncelet/experiment.hpp"

namespace fs = std::filesystem;

namespace {

int write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write " << path << "\n";
        return 1;
    }
    out << content;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Poncelet polygon experiment driver"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    bool want_svg = false;
    int samples_override = -1;
    long seed_override = -1;

    CLI::App* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_flag("--svg", want_svg, "also write an SVG figure");
    run->add_option("--samples", samples_override, "override the sample count");
    run->add_option("--seed", seed_override, "override the seed");

    CLI::App* validate = app.add_subcommand("validate", "check a config without running it");
    validate->add_option("config", config_path, "config file")->required();

    CLI11_PARSE(app, argc, argv);

    poncelet::ExperimentConfig cfg;
    try {
        cfg = poncelet::ExperimentConfig::load(config_path);
        if (samples_override >= 0) cfg.entries["samples"] = std::to_string(samples_override);
        if (seed_override >= 0) cfg.entries["seed"] = std::to_string(seed_override);
    } catch (const poncelet::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    if (validate->parsed()) {
        try {
            poncelet::validate_config(cfg);
        } catch (const poncelet::ConfigError& e) {
            std::cerr << "invalid config: " << e.what() << "\n";
            return 1;
        }
        std::cout << "ok " << cfg.hash() << "\n";
        return 0;
    }

    poncelet::RunResult res = poncelet::run_experiment(cfg, want_svg);
    if (res.input_error) {
        std::cerr << res.report_json;
        return 1;  // no partial outputs on input errors
    }

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    int rc = write_file(fs::path(out_dir) / "report.json", res.report_json);
    rc |= write_file(fs::path(out_dir) / "samples.csv", res.csv);
    if (want_svg && !res.svg.empty())
        rc |= write_file(fs::path(out_dir) / "figure.svg", res.svg);
    if (rc != 0) return 1;
    return res.check_failed ? 2 : 0;
}
