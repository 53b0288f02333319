#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "stit/construct.hpp"
#include "stit/oracle.hpp"
#include "stit/tess.hpp"

namespace stit {

inline constexpr const char* kToolName = "stitlab";
inline constexpr const char* kToolVersion = "1.0.0";

// --- JSON conversions -------------------------------------------------------
// All parsers throw ConfigError with a message that names the offending
// field, so the CLI can surface it and exit 2.

nlohmann::json cell_to_json(const Cell& cell);
Cell cell_from_json(const nlohmann::json& j, const std::string& field = "cell");

nlohmann::json theta_to_json(const DirectionalDistribution& theta);
DirectionalDistribution theta_from_json(const nlohmann::json& j, int dim);

nlohmann::json config_to_json(const SimConfig& cfg);
SimConfig config_from_json(const nlohmann::json& j);

nlohmann::json tessellation_to_json(const Tessellation& t);
// Rebuilds the state by replaying the recorded history onto the window.
Tessellation tessellation_from_json(const nlohmann::json& j, const HyperplaneMeasure& m);

// Window and raw jump records of a stored tessellation, without binding a
// measure (enough for rendering and replay bookkeeping).
struct ParsedTrajectory {
    Cell window;
    std::vector<JumpRecord> records;
};
ParsedTrajectory trajectory_from_json(const nlohmann::json& j);

// FNV-1a (64-bit) over the canonical key-sorted dump; stable under field
// reordering of the source file.  Returned as fixed-width hex.
std::string config_hash(const nlohmann::json& config);

// --- text formats -----------------------------------------------------------

// Shortest-form %.17g rendering used by every CSV number.
std::string format_g17(double x);

// One JumpRecord per line: {"alpha":..,"label":"..","phi":..,"t":..}.
std::string jump_records_jsonl(const std::vector<JumpRecord>& records);
std::vector<JumpRecord> jump_records_from_jsonl(const std::string& text, int dim);

// rep,seed,cells,zeta_final,boundary_len,proposal_count — fully determined
// by config + seed.  Wall-clock times live in a separate timings file so the
// summary stays byte-reproducible.
std::string summary_csv(const std::vector<Trajectory>& runs);
std::string timings_csv(const std::vector<std::uint64_t>& wall_ns);

// k,estimate,std_error with k equal to the row index.
std::string oracle_csv(const std::vector<MarginalEstimate>& rows);

// --- batch running and output layout ----------------------------------------

struct BatchResult {
    std::vector<Trajectory> runs;        // ordered by replication index
    std::vector<std::uint64_t> wall_ns;  // parallel to runs
};

// Runs cfg.replications replications on up to `jobs` worker threads; results
// are ordered by replication index regardless of completion order.
BatchResult run_batch(const SimConfig& cfg, int jobs);

// Writes rep_NNNN.jsonl + rep_NNNN.json per replication, summary.csv,
// timings.csv and manifest.json into out_dir; returns the paths written
// (manifest last).  The manifest embeds the config, so a run can be
// reproduced from it alone.
std::vector<std::string> write_run_outputs(const SimConfig& cfg,
                                           const nlohmann::json& config_json,
                                           const BatchResult& batch,
                                           const std::string& out_dir);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace stit
