#ifndef SNRCTL_RESULT_IO_HPP
#define SNRCTL_RESULT_IO_HPP

#include <json.hpp>
#include <string>

#include "snrctl/plant.hpp"
#include "snrctl/synthesis.hpp"

namespace snrctl {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Parsed tool configuration. `echo` holds the canonical re-serialization
/// of the input document (object keys sorted, lossless numbers).
struct Config {
    GeneralizedPlant plant;
    RationalTransfer h_raw = constant_tf(1.0);
    double snr = 0.0;
    SynthesisOptions opts;
    std::string out_dir = ".";
    bool emit_csv = true;
    nlohmann::json echo;
};

Config parse_config(const nlohmann::json& doc);
Config load_config(const std::string& path);

nlohmann::json result_to_json(const SynthesisResult& result, const Config& config);

struct LoadedResult {
    FirParameter q_hat;
    RationalTransfer k, c, d;
    double j_analytic = 0.0;
    double channel_power = 0.0;
    nlohmann::json config_echo;
};
LoadedResult load_result(const std::string& path);

std::string format_sig(double value);  // >= 12 significant digits

void write_frequency_response_csv(const std::string& path, const SynthesisResult& result,
                                  int n_grid);

struct SweepRow {
    double sigma2 = 0.0;
    double j = 0.0;
    double gamma = 0.0;
    double channel_power = 0.0;
    std::string status;
};
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

}  // namespace snrctl

#endif
