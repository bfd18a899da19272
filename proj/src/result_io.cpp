#include "snrctl/result_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "snrctl/errors.hpp"

namespace snrctl {

namespace {

using nlohmann::json;

ColVec coeffs_from(const json& arr, const std::string& what) {
    if (!arr.is_array() || arr.empty()) {
        throw ConfigError(what + " must be a non-empty array of numbers");
    }
    ColVec c(arr.size());
    for (size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number()) throw ConfigError(what + " must contain numbers only");
        c[i] = arr[i].get<double>();
    }
    return c;
}

RationalTransfer rational_from(const json& obj, const std::string& what) {
    if (!obj.is_object() || !obj.contains("num") || !obj.contains("den")) {
        throw ConfigError(what + " must be an object with num and den arrays");
    }
    return RationalTransfer(Polynomial(coeffs_from(obj["num"], what + ".num")),
                            Polynomial(coeffs_from(obj["den"], what + ".den")));
}

Matrix matrix_from(const json& arr, const std::string& what) {
    if (!arr.is_array()) throw ConfigError(what + " must be a 2-d array");
    const int rows = static_cast<int>(arr.size());
    int cols = -1;
    for (const auto& row : arr) {
        if (!row.is_array()) throw ConfigError(what + " must be a 2-d array");
        if (cols < 0) cols = static_cast<int>(row.size());
        if (static_cast<int>(row.size()) != cols) {
            throw ConfigError(what + " has ragged rows");
        }
    }
    Matrix m(rows, cols < 0 ? 0 : cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < m.cols(); ++j) m(i, j) = arr[i][j].get<double>();
    }
    return m;
}

json rational_to_json(const RationalTransfer& tf) {
    json out;
    out["num"] = std::vector<double>(tf.num.coeffs.data(),
                                     tf.num.coeffs.data() + tf.num.coeffs.size());
    out["den"] = std::vector<double>(tf.den.coeffs.data(),
                                     tf.den.coeffs.data() + tf.den.coeffs.size());
    return out;
}

}  // namespace

Config parse_config(const json& doc) {
    Config cfg;
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    if (!doc.contains("plant")) throw ConfigError("config.plant is required");
    const json& plant = doc["plant"];
    if (plant.contains("siso")) {
        cfg.plant = siso_plant(rational_from(plant["siso"], "plant.siso"));
    } else if (plant.contains("state_space")) {
        const json& ss = plant["state_space"];
        for (const char* key : {"A", "B", "C", "D", "n_v", "n_z"}) {
            if (!ss.contains(key)) {
                throw ConfigError(std::string("plant.state_space.") + key + " is required");
            }
        }
        const int n_v = ss["n_v"].get<int>();
        const int n_z = ss["n_z"].get<int>();
        try {
            cfg.plant = blocks_from_state_space(
                StateSpaceModel(matrix_from(ss["A"], "A"), matrix_from(ss["B"], "B"),
                                matrix_from(ss["C"], "C"), matrix_from(ss["D"], "D")),
                n_v, n_z);
        } catch (const DimensionMismatch& e) {
            throw ConfigError(std::string("plant.state_space: ") + e.what());
        } catch (const NonzeroD22& e) {
            throw ConfigError(std::string("plant.state_space: ") + e.what());
        }
    } else {
        throw ConfigError("config.plant needs either siso or state_space");
    }

    if (!doc.contains("channel") || !doc["channel"].contains("snr")) {
        throw ConfigError("config.channel.snr is required");
    }
    cfg.snr = doc["channel"]["snr"].get<double>();
    if (!(cfg.snr > 0.0)) throw ConfigError("channel.snr must be positive");
    if (doc["channel"].contains("H")) {
        cfg.h_raw = rational_from(doc["channel"]["H"], "channel.H");
    }

    if (doc.contains("solver")) {
        const json& s = doc["solver"];
        if (s.contains("n_grid")) cfg.opts.n_grid = s["n_grid"].get<int>();
        if (s.contains("fir_order")) cfg.opts.fir_order = s["fir_order"].get<int>();
        if (s.contains("tol")) cfg.opts.tol = s["tol"].get<double>();
        if (s.contains("max_iter")) cfg.opts.max_iter = s["max_iter"].get<int>();
        if (s.contains("snr_offset")) cfg.opts.snr_offset = s["snr_offset"].get<int>();
    }
    if (doc.contains("spectral") && doc["spectral"].contains("Nc")) {
        cfg.opts.spectral_order = doc["spectral"]["Nc"].get<int>();
    }
    if (cfg.opts.n_grid < 2 * cfg.opts.fir_order) {
        throw ConfigError("solver.n_grid must be at least 2 * solver.fir_order");
    }
    if (cfg.opts.fir_order < 1 || cfg.opts.spectral_order < 1 || cfg.opts.tol <= 0.0) {
        throw ConfigError("solver parameters must be positive");
    }
    if (cfg.opts.snr_offset != 0 && cfg.opts.snr_offset != 1) {
        throw ConfigError("solver.snr_offset must be 0 or 1");
    }

    if (doc.contains("output")) {
        const json& o = doc["output"];
        if (o.contains("dir")) cfg.out_dir = o["dir"].get<std::string>();
        if (o.contains("emit_csv")) cfg.emit_csv = o["emit_csv"].get<bool>();
    }
    cfg.echo = doc;
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return parse_config(doc);
}

nlohmann::json result_to_json(const SynthesisResult& result, const Config& config) {
    json doc;
    doc["tool"] = {{"name", "snrctl"}, {"version", "0.1.0"}};
    doc["config"] = config.echo;
    json r;
    r["status"] = result.degraded_fit ? "degraded_fit" : "optimal";
    r["gamma"] = result.gamma;
    r["j_analytic"] = result.j_analytic;
    r["channel_power"] = result.channel_power;
    r["spectral_fit_residual"] = result.spectral_fit_residual;
    r["q"] = std::vector<double>(result.q.coeffs.data(),
                                 result.q.coeffs.data() + result.q.coeffs.size());
    r["q_hat"] = std::vector<double>(result.q_hat.coeffs.data(),
                                     result.q_hat.coeffs.data() + result.q_hat.coeffs.size());
    r["k"] = rational_to_json(result.k);
    r["c"] = rational_to_json(result.c);
    r["d"] = rational_to_json(result.d);
    r["solver_report"] = {
        {"iterations", result.solver_report.iterations},
        {"final_gradient_norm", result.solver_report.final_gradient_norm},
        {"barrier_parameter", result.solver_report.barrier_parameter},
        {"lmi_min_eigenvalue", result.solver_report.lmi_min_eigenvalue},
        {"power_slack", result.solver_report.power_slack},
        {"status", result.solver_report.status == SolveStatus::Optimal ? "optimal"
                   : result.solver_report.status == SolveStatus::Infeasible
                       ? "infeasible"
                       : "max_iter"},
    };
    r["stabilizability"] = {
        {"threshold_estimate", result.stabilizability.threshold_estimate},
        {"pole_product_lower_bound", result.stabilizability.pole_product_lower_bound},
    };
    doc["result"] = r;
    return doc;
}

LoadedResult load_result(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open result document: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("result parse error: ") + e.what());
    }
    if (!doc.contains("result") || !doc.contains("config")) {
        throw ConfigError("result document is missing result/config sections");
    }
    LoadedResult out;
    const json& r = doc["result"];
    out.q_hat = FirParameter(coeffs_from(r["q_hat"], "result.q_hat"));
    out.k = rational_from(r["k"], "result.k");
    out.c = rational_from(r["c"], "result.c");
    out.d = rational_from(r["d"], "result.d");
    out.j_analytic = r["j_analytic"].get<double>();
    out.channel_power = r["channel_power"].get<double>();
    out.config_echo = doc["config"];
    return out;
}

std::string format_sig(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12e", value);
    return buf;
}

void write_frequency_response_csv(const std::string& path, const SynthesisResult& result,
                                  int n_grid) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << "omega,abs_K,abs_C,abs_D,phase_K\n";
    const FrequencyGrid grid = FrequencyGrid::uniform(n_grid);
    for (int k = 0; k < grid.n; ++k) {
        const double w = grid.omegas[k];
        const Complex kv = result.k.is_zero() ? Complex(0, 0) : eval_freq(result.k, w);
        const Complex cv = result.c.is_zero() ? Complex(0, 0) : eval_freq(result.c, w);
        const Complex dv = result.d.is_zero() ? Complex(0, 0) : eval_freq(result.d, w);
        out << format_sig(w) << ',' << format_sig(std::abs(kv)) << ','
            << format_sig(std::abs(cv)) << ',' << format_sig(std::abs(dv)) << ','
            << format_sig(std::arg(kv)) << '\n';
    }
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << "sigma2,J,gamma,channel_power,status\n";
    for (const SweepRow& row : rows) {
        out << format_sig(row.sigma2) << ',' << format_sig(row.j) << ','
            << format_sig(row.gamma) << ',' << format_sig(row.channel_power) << ','
            << row.status << '\n';
    }
}

}  // namespace snrctl
