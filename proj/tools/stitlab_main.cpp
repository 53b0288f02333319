#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stit/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"stitlab — simulator for cell-division tessellation processes"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string traj_path;
    std::uint64_t seed = 0;
    int jobs = 0;
    double alpha = 0.01;
    double t = 0.0;
    int k_max = 5;
    std::uint64_t samples = 100000;
    std::vector<std::string> inputs;

    CLI::App* sim = app.add_subcommand("simulate", "run a batch of replications");
    sim->add_option("--config", config_path, "JSON run configuration")->required();
    sim->add_option("--out", out_path, "output directory")->required();
    CLI::Option* sim_seed = sim->add_option("--seed", seed, "override the config seed");
    sim->add_option("--jobs", jobs, "parallel workers (default: all cores)");

    CLI::App* cmp = app.add_subcommand("compare", "statistically compare runs");
    cmp->add_option("inputs", inputs, "summary/oracle CSVs or run directories")
        ->required()
        ->expected(-2);
    cmp->add_option("--out", out_path, "JSON report path")->required();
    cmp->add_option("--alpha", alpha, "test level (default 0.01)");

    CLI::App* rnd = app.add_subcommand("render", "render a stored tessellation to SVG");
    rnd->add_option("--traj", traj_path, "stored tessellation JSON")->required();
    rnd->add_option("--t", t, "time to render the state at")->required();
    rnd->add_option("--out", out_path, "SVG path")->required();

    CLI::App* orc = app.add_subcommand("oracle", "tabulate exact cell-count probabilities");
    orc->add_option("--config", config_path, "JSON run configuration")->required();
    orc->add_option("--out", out_path, "CSV output path")->required();
    orc->add_option("--k-max", k_max, "largest division count (default 5)");
    orc->add_option("--samples", samples, "Monte Carlo samples per k (default 100000)");
    CLI::Option* orc_seed = orc->add_option("--seed", seed, "override the config seed");

    CLI::App* ben = app.add_subcommand("bench", "proposal-efficiency benchmark");
    ben->add_option("--config", config_path, "JSON run configuration")->required();
    ben->add_option("--out", out_path, "CSV output path")->required();

    CLI11_PARSE(app, argc, argv);

    if (sim->parsed()) {
        std::optional<std::uint64_t> s;
        if (sim_seed->count() > 0) s = seed;
        return stit::cmd_simulate(config_path, out_path, s, jobs);
    }
    if (cmp->parsed()) return stit::cmd_compare(inputs, out_path, alpha);
    if (rnd->parsed()) return stit::cmd_render(traj_path, t, out_path);
    if (orc->parsed()) {
        std::optional<std::uint64_t> s;
        if (orc_seed->count() > 0) s = seed;
        return stit::cmd_oracle(config_path, k_max, samples, out_path, s);
    }
    if (ben->parsed()) return stit::cmd_bench(config_path, out_path);
    return 1;
}
