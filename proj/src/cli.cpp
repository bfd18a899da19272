#include "snrctl/cli.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "snrctl/errors.hpp"
#include "snrctl/loop.hpp"
#include "snrctl/norms.hpp"

namespace snrctl {

namespace fs = std::filesystem;

int run_stabilizability(const Config& config, std::ostream& out) {
    const double pole_bound = unstable_pole_product_bound(config.plant.g_yu);
    const double threshold = min_snr_for_stabilization(config.plant, config.h_raw,
                                                       config.opts.fir_order,
                                                       config.opts.n_grid);
    out << "pole_product_lower_bound " << format_sig(pole_bound) << "\n";
    out << "threshold_estimate " << format_sig(threshold) << "\n";
    out << "configured_snr " << format_sig(config.snr) << "\n";
    const bool ok = config.snr > threshold;
    out << "stabilizable " << (ok ? "yes" : "no") << "\n";
    return ok ? exit_code::kOk : exit_code::kInfeasible;
}

namespace {

void ensure_out_dir(const Config& config) {
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + config.out_dir);
}

void write_result_files(const Config& config, const SynthesisResult& result,
                        std::ostream& out) {
    ensure_out_dir(config);
    const fs::path dir(config.out_dir);
    const fs::path doc_path = dir / "result.json";
    std::ofstream doc(doc_path);
    if (!doc) throw ConfigError("cannot write " + doc_path.string());
    doc << result_to_json(result, config).dump(2) << "\n";
    out << "result_document " << doc_path.string() << "\n";
    if (config.emit_csv) {
        const fs::path csv_path = dir / "frequency_response.csv";
        write_frequency_response_csv(csv_path.string(), result, config.opts.n_grid);
        out << "frequency_response " << csv_path.string() << "\n";
    }
}

}  // namespace

int run_synthesize(const Config& config, std::ostream& out) {
    const ChannelSpec channel = make_channel(config.h_raw, config.snr);
    SynthesisResult result;
    try {
        result = synthesize(config.plant, channel, config.opts);
    } catch (const Infeasible& e) {
        out << "status infeasible\n" << e.what() << "\n";
        const double threshold = min_snr_for_stabilization(
            config.plant, config.h_raw, config.opts.fir_order, config.opts.n_grid);
        out << "threshold_estimate " << format_sig(threshold) << "\n";
        return exit_code::kInfeasible;
    } catch (const InternalStabilityFailed& e) {
        out << "status internal_stability_failed\n" << e.what() << "\n";
        return exit_code::kUnstable;
    }
    write_result_files(config, result, out);
    out << "gamma " << format_sig(result.gamma) << "\n";
    out << "j_analytic " << format_sig(result.j_analytic) << "\n";
    out << "channel_power " << format_sig(result.channel_power) << "\n";
    out << "spectral_fit_residual " << format_sig(result.spectral_fit_residual) << "\n";
    if (result.degraded_fit) {
        out << "status degraded_fit\n";
        return exit_code::kDegradedFit;
    }
    out << "status optimal\n";
    return exit_code::kOk;
}

int sweep_thread_cap(int rows) {
    int cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap < 1) cap = 1;
    if (const char* env = std::getenv("SNRCTL_THREADS")) {
        const int requested = std::atoi(env);
        if (requested >= 1) cap = requested;
    }
    return std::min(cap, std::max(rows, 1));
}

int run_sweep(const Config& config, const std::vector<double>& snr_list, std::ostream& out) {
    if (snr_list.empty()) {
        out << "empty snr list\n";
        return exit_code::kUsage;
    }
    const int rows = static_cast<int>(snr_list.size());
    std::vector<SweepRow> table(rows);
    std::atomic<int> next{0};
    const int threads = sweep_thread_cap(rows);
    auto worker = [&]() {
        for (int i = next.fetch_add(1); i < rows; i = next.fetch_add(1)) {
            SweepRow row;
            row.sigma2 = snr_list[i];
            try {
                Config local = config;
                local.snr = snr_list[i];
                const ChannelSpec channel = make_channel(local.h_raw, local.snr);
                const SynthesisResult res = synthesize(local.plant, channel, local.opts);
                row.j = res.j_analytic;
                row.gamma = res.gamma;
                row.channel_power = res.channel_power;
                row.status = res.degraded_fit ? "DegradedFit" : "Optimal";
            } catch (const Infeasible&) {
                row.status = "Infeasible";
            } catch (const std::exception&) {
                row.status = "Error";
            }
            table[i] = row;
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    ensure_out_dir(config);
    const fs::path csv_path = fs::path(config.out_dir) / "cost_by_sigma2.csv";
    write_sweep_csv(csv_path.string(), table);
    out << "sweep_csv " << csv_path.string() << "\n";
    int optimal = 0;
    for (const SweepRow& row : table) {
        out << format_sig(row.sigma2) << " " << row.status << "\n";
        if (row.status == "Optimal" || row.status == "DegradedFit") ++optimal;
    }
    return optimal >= 1 ? exit_code::kOk : exit_code::kInfeasible;
}

int run_simulate(const Config& config, const std::string& result_path, long steps,
                 std::uint64_t seed, std::ostream& out) {
    if (steps < 10000) {
        out << "steps must be at least 10000\n";
        return exit_code::kUsage;
    }
    LoadedResult loaded;
    try {
        loaded = load_result(result_path);
    } catch (const ConfigError& e) {
        out << e.what() << "\n";
        return exit_code::kUsage;
    }
    const ChannelSpec channel = make_channel(config.h_raw, config.snr);
    // Reconstruct the loop through the Youla data for well-conditioned
    // assembly; the factors are deterministic given the plant.
    const CoprimeFactors factors = coprime_factorize(config.plant);
    YoulaLoopData youla{factors, loaded.q_hat};
    const ClosedLoop loop = closed_loop(config.plant, loaded.c, loaded.d, channel.h, &youla);
    if (!check_internal_stability(loop).stable) {
        out << "loop is not internally stable\n";
        return exit_code::kUnstable;
    }
    const AnalyticCost analytic = analytic_cost(loop);
    const SimulationEstimate est = simulate(loop, steps, seed);
    out << "steps " << steps << " seed " << seed << "\n";
    out << "z_variance_simulated " << format_sig(est.z_variance) << " halfwidth "
        << format_sig(est.z_halfwidth) << "\n";
    out << "z_variance_analytic " << format_sig(analytic.j) << "\n";
    out << "t_power_simulated " << format_sig(est.t_power) << " halfwidth "
        << format_sig(est.t_halfwidth) << "\n";
    out << "t_power_analytic " << format_sig(analytic.channel_power) << "\n";
    return exit_code::kOk;
}

}  // namespace snrctl
