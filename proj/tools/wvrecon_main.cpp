#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wvrecon/errors.hpp"
#include "wvrecon/io.hpp"
#include "wvrecon/parallel.hpp"
#include "wvrecon/pipeline.hpp"
#include "wvrecon/version.hpp"
#include "wvrecon/wigner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSupport = 3;
constexpr int kExitReconstruction = 4;

struct Overrides {
    std::optional<double> theta;
    std::optional<std::int64_t> n_runs;
    std::optional<std::uint64_t> seed;
    std::optional<double> bin_width;
    std::optional<double> rotation_angle;
    std::optional<std::string> output_dir;
};

wvrecon::RunConfig load_config(const std::string& path, const Overrides& ov) {
    std::ifstream in(path);
    if (!in) throw wvrecon::ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw wvrecon::ConfigError("bad JSON in " + path + ": " + e.what());
    }
    wvrecon::RunConfig cfg = wvrecon::config_from_json(j);
    if (ov.theta) cfg.theta = *ov.theta;
    if (ov.n_runs) cfg.n_runs = *ov.n_runs;
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.bin_width) cfg.bin_width = *ov.bin_width;
    if (ov.rotation_angle) cfg.rotation_angle = *ov.rotation_angle;
    if (ov.output_dir) cfg.output_dir = *ov.output_dir;
    wvrecon::validate(cfg);
    return cfg;
}

void print_summary(const wvrecon::RunOutput& out) {
    std::cout << out.summary.dump(2) << "\n";
}

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> values;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        const double v = std::stod(item, &pos);
        if (pos != item.size()) throw wvrecon::ConfigError("bad sweep value: " + item);
        values.push_back(v);
    }
    if (values.empty()) throw wvrecon::ConfigError("sweep needs a nonempty --values list");
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Beam-splitter weak-measurement simulator and momentum-wavefunction "
                 "reconstruction toolkit"};
    app.set_version_flag("--version", wvrecon::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string axis_name;
    std::string values_csv;
    std::string state_path;
    std::string wigner_out = "wigner.csv";
    std::size_t wigner_points = 128;
    bool emit_records = false;
    Overrides ov;

    auto add_overrides = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "run configuration JSON")->required();
        cmd->add_option("--theta", [&](const CLI::results_t& r) {
            ov.theta = std::stod(r[0]);
            return true;
        }, "override theta");
        cmd->add_option("--n-runs", [&](const CLI::results_t& r) {
            ov.n_runs = std::stoll(r[0]);
            return true;
        }, "override n_runs");
        cmd->add_option("--seed", [&](const CLI::results_t& r) {
            ov.seed = std::stoull(r[0]);
            return true;
        }, "override seed");
        cmd->add_option("--bin-width", [&](const CLI::results_t& r) {
            ov.bin_width = std::stod(r[0]);
            return true;
        }, "override bin_width");
        cmd->add_option("--rotation-angle", [&](const CLI::results_t& r) {
            ov.rotation_angle = std::stod(r[0]);
            return true;
        }, "override rotation_angle");
        cmd->add_option("--output-dir", [&](const CLI::results_t& r) {
            ov.output_dir = r[0];
            return true;
        }, "override output_dir");
    };

    CLI::App* cmd_exact = app.add_subcommand("exact", "exact-statistics reconstruction");
    add_overrides(cmd_exact);

    CLI::App* cmd_mc = app.add_subcommand("mc", "Monte Carlo reconstruction");
    add_overrides(cmd_mc);
    cmd_mc->add_flag("--emit-records", emit_records, "also write the raw records CSV");

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "run the pipeline over a parameter axis");
    add_overrides(cmd_sweep);
    cmd_sweep->add_option("--axis", axis_name, "sweep axis: theta or n_runs")->required();
    cmd_sweep->add_option("--values", values_csv, "comma-separated axis values")->required();

    CLI::App* cmd_wigner = app.add_subcommand("wigner", "evaluate a state's Wigner function");
    cmd_wigner->add_option("--state", state_path, "state descriptor JSON")->required();
    cmd_wigner->add_option("--out", wigner_out, "output CSV path");
    cmd_wigner->add_option("--points", wigner_points, "momentum axis points (power of two)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*cmd_exact) {
            wvrecon::RunConfig cfg = load_config(config_path, ov);
            if (cfg.n_runs != 0) {
                throw wvrecon::ConfigError("exact pipeline requires n_runs = 0");
            }
            const wvrecon::RunOutput out = wvrecon::run_exact(cfg);
            print_summary(out);
            return out.result.failed ? kExitReconstruction : kExitOk;
        }
        if (*cmd_mc) {
            wvrecon::RunConfig cfg = load_config(config_path, ov);
            cfg.emit_records = emit_records;
            if (cfg.n_runs <= 0) {
                throw wvrecon::ConfigError("mc pipeline requires n_runs > 0");
            }
            const wvrecon::RunOutput out = wvrecon::run_monte_carlo(cfg);
            print_summary(out);
            return out.result.failed ? kExitReconstruction : kExitOk;
        }
        if (*cmd_sweep) {
            wvrecon::RunConfig cfg = load_config(config_path, ov);
            wvrecon::SweepAxis axis;
            if (axis_name == "theta") {
                axis = wvrecon::SweepAxis::Theta;
            } else if (axis_name == "n_runs") {
                axis = wvrecon::SweepAxis::NRuns;
            } else {
                throw wvrecon::ConfigError("unknown sweep axis: " + axis_name);
            }
            const auto entries = wvrecon::sweep(cfg, axis, parse_values(values_csv));
            std::cout << "axis_value,delta,segments,failed\n";
            for (const auto& e : entries) {
                std::cout << wvrecon::format_g17(e.axis_value) << ','
                          << wvrecon::format_g17(e.delta) << ',' << e.segments << ','
                          << (e.failed ? 1 : 0) << "\n";
            }
            return kExitOk;
        }
        if (*cmd_wigner) {
            const wvrecon::StateDescriptor d = wvrecon::load_descriptor(state_path);
            const wvrecon::GridSpec grid = wvrecon::default_grid();
            const wvrecon::Wavefunction psi = wvrecon::realize_state(d, grid);
            const wvrecon::GridSpec paxis =
                wvrecon::make_grid(grid.x_min, grid.x_max, wigner_points);
            const wvrecon::WignerGrid w = wvrecon::wigner(psi, paxis);
            wvrecon::write_file(wigner_out, wvrecon::wigner_csv(w));
            std::cout << "wrote " << wigner_out << "\n";
            return kExitOk;
        }
    } catch (const wvrecon::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const wvrecon::SupportError& e) {
        std::cerr << "numerical-support error: " << e.what() << "\n";
        return kExitSupport;
    } catch (const wvrecon::ReconstructionFailure& e) {
        std::cerr << "reconstruction failed: " << e.what() << "\n";
        return kExitReconstruction;
    } catch (const wvrecon::EmptyBinError& e) {
        std::cerr << "reconstruction failed: " << e.what() << "\n";
        return kExitReconstruction;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
