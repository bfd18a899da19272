#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "snrctl/cli.hpp"
#include "snrctl/errors.hpp"

namespace {

std::vector<double> parse_snr_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"snrctl: LTI encoder/decoder synthesis for SNR-constrained channels"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string snr_list_csv;
    std::string result_path;
    long steps = 1000000;
    std::uint64_t seed = 1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON configuration file")->required();
        cmd->add_option("--out", out_dir, "output directory override");
    };

    CLI::App* stab = app.add_subcommand("stabilizability",
                                        "report the minimum-SNR estimate for the plant");
    add_common(stab);

    CLI::App* synth = app.add_subcommand("synthesize",
                                         "synthesize the optimal encoder/decoder pair");
    add_common(synth);

    CLI::App* sweep = app.add_subcommand("sweep", "synthesize across a list of SNR values");
    add_common(sweep);
    sweep->add_option("--snr-list", snr_list_csv, "comma-separated sigma^2 values")
        ->required();

    CLI::App* sim = app.add_subcommand("simulate",
                                       "Monte-Carlo validation of a synthesized result");
    add_common(sim);
    sim->add_option("--result", result_path, "result.json from synthesize")->required();
    sim->add_option("--steps", steps, "simulation length (>= 10^4)");
    sim->add_option("--seed", seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : snrctl::exit_code::kUsage;
    }

    snrctl::Config config;
    try {
        config = snrctl::load_config(config_path);
        if (!out_dir.empty()) config.out_dir = out_dir;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return snrctl::exit_code::kUsage;
    }

    try {
        if (stab->parsed()) return snrctl::run_stabilizability(config, std::cout);
        if (synth->parsed()) return snrctl::run_synthesize(config, std::cout);
        if (sweep->parsed()) {
            return snrctl::run_sweep(config, parse_snr_list(snr_list_csv), std::cout);
        }
        if (sim->parsed()) {
            return snrctl::run_simulate(config, result_path, steps, seed, std::cout);
        }
    } catch (const snrctl::InternalStabilityFailed& e) {
        std::cerr << "internal stability failure: " << e.what() << "\n";
        return snrctl::exit_code::kUnstable;
    } catch (const snrctl::UnstableLoop& e) {
        std::cerr << "unstable loop: " << e.what() << "\n";
        return snrctl::exit_code::kUnstable;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return snrctl::exit_code::kUsage;
    }
    return snrctl::exit_code::kUsage;
}
