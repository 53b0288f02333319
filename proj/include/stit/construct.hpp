#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stit/rng.hpp"
#include "stit/tess.hpp"

namespace stit {

// The three equivalent ways to run the cell-division process:
//   lifetime  — every live cell carries an independent exponential death
//               clock with its own hit mass as rate; at death it is divided
//               by a rejection-sampled hyperplane from its hitting law.
//   jumpchain — the process jumps at rate zeta; the divided cell is picked
//               with probability proportional to its mass via one uniform
//               over the word-ordered mass intervals, and the hyperplane is
//               taken from a single shared proposal stream, skipping
//               proposals until one hits the selected cell.
//   density   — the process jumps at rate zeta; the hyperplane is drawn
//               directly from the aggregate hitting density of the current
//               state, and the divided cell is picked uniformly among the
//               cells it hits.
// All three induce the same law on tessellation-valued paths.
enum class Construction { lifetime, jumpchain, density };

std::string to_string(Construction c);
Construction construction_from_string(const std::string& s);

struct SimConfig {
    Cell window;
    double gamma = 1.0;
    DirectionalDistribution theta = DirectionalDistribution::isotropic(2);
    double t_end = 1.0;
    std::uint64_t seed = 0;
    Construction construction = Construction::lifetime;
    int replications = 1;
    // Optional jump-count cutoff; used by tests that need uncensored
    // holding-time samples and by benchmarks.
    std::optional<std::uint64_t> max_jumps;

    HyperplaneMeasure measure() const { return HyperplaneMeasure(gamma, theta); }
};

struct Trajectory {
    SimConfig config;
    Tessellation final;
    Construction tag = Construction::lifetime;
    std::uint64_t rng_seed = 0;
    std::uint64_t replication = 0;
    std::uint64_t proposal_count = 0;
    // Proposals consumed by each jump, parallel to final.history().
    std::vector<std::uint32_t> proposals_per_jump;
};

// Runs one replication with the configured construction; the three runners
// can also be called directly.  Streams are split off config.seed and the
// replication index.
Trajectory simulate(const SimConfig& cfg, std::uint64_t replication = 0);

Trajectory run_lifetime(const SimConfig& cfg, RngStreams& streams);
Trajectory run_jumpchain(const SimConfig& cfg, RngStreams& streams);
Trajectory run_density(const SimConfig& cfg, RngStreams& streams);

// As above but starting from an existing state at time t0 (used by the
// regeneration tests); `start` must be a tessellation of cfg.window.
Trajectory run_from(const SimConfig& cfg, RngStreams& streams, const Tessellation& start,
                    double t0);

// One jump from a frozen state: which cell divides, by which hyperplane,
// after how long.  Used by the selection-frequency and conditional-law tests.
struct JumpSample {
    TreeWord divided;
    Hyperplane h;
    double holding = 0.0;
    std::uint64_t proposals = 0;
};
JumpSample sample_one_jump(const Tessellation& state, const HyperplaneMeasure& m,
                           Construction tag, RngStreams& streams);

// State of the trajectory at an intermediate time: replays the history
// prefix with jump times <= t.  Throws OutOfRange unless 0 <= t <= t_end.
Tessellation state_at(const Trajectory& traj, double t);

}  // namespace stit
