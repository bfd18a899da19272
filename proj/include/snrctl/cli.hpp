#ifndef SNRCTL_CLI_HPP
#define SNRCTL_CLI_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "snrctl/result_io.hpp"

namespace snrctl {

// Exit-code contract shared by all subcommands:
// 0 ok, 2 usage/config, 3 infeasible, 4 degraded fit, 5 internal stability.
namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kUsage = 2;
inline constexpr int kInfeasible = 3;
inline constexpr int kDegradedFit = 4;
inline constexpr int kUnstable = 5;
}  // namespace exit_code

int run_stabilizability(const Config& config, std::ostream& out);

int run_synthesize(const Config& config, std::ostream& out);

int run_sweep(const Config& config, const std::vector<double>& snr_list, std::ostream& out);

int run_simulate(const Config& config, const std::string& result_path, long steps,
                 std::uint64_t seed, std::ostream& out);

// Parallelism cap for sweep rows; reads SNRCTL_THREADS when set.
int sweep_thread_cap(int rows);

}  // namespace snrctl

#endif
