#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stit {

// Log level from STITLAB_LOG (quiet | info | debug, default quiet); messages
// go to stderr so they never disturb file outputs.
int log_level();
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

// Subcommand bodies, callable from tests.  Exit codes: 0 success, 1 runtime
// failure, 2 invalid configuration or arguments (the message names the bad
// field), 3 statistical comparison failure.

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed_override = {}, int jobs = 0);

// Inputs are summary CSVs (or run directories containing summary.csv) and
// oracle CSVs; runs all applicable pairwise tests at the given level and
// writes a JSON report.
int cmd_compare(const std::vector<std::string>& inputs, const std::string& out_path,
                double alpha = 0.01);

int cmd_render(const std::string& traj_path, double t, const std::string& svg_path);

int cmd_oracle(const std::string& config_path, int k_max, std::uint64_t n_samples,
               const std::string& out_path,
               std::optional<std::uint64_t> seed_override = {});

int cmd_bench(const std::string& config_path, const std::string& out_path);

}  // namespace stit
