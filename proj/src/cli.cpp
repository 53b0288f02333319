#include "stit/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "stit/construct.hpp"
#include "stit/errors.hpp"
#include "stit/io.hpp"
#include "stit/oracle.hpp"
#include "stit/stats.hpp"
#include "stit/svg.hpp"

namespace stit {

namespace {

int parse_log_level() {
    const char* env = std::getenv("STITLAB_LOG");
    if (env == nullptr) return 0;
    const std::string v(env);
    if (v == "debug") return 2;
    if (v == "info") return 1;
    return 0;
}

template <typename F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "stitlab: config error: %s\n", e.what());
        return 2;
    } catch (const InsufficientData& e) {
        std::fprintf(stderr, "stitlab: config error: %s\n", e.what());
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "stitlab: config error: config: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "stitlab: error: %s\n", e.what());
        return 1;
    }
}

SimConfig load_config(const std::string& path, std::optional<std::uint64_t> seed_override,
                      nlohmann::json* canonical) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config: " + std::string(e.what()));
    }
    if (seed_override) {
        if (!j.is_object()) throw ConfigError("config: expected a JSON object");
        j["seed"] = *seed_override;
    }
    const SimConfig cfg = config_from_json(j);
    if (canonical != nullptr) *canonical = config_to_json(cfg);
    return cfg;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) out.push_back(field);
    return out;
}

struct SummaryData {
    std::string path;
    std::vector<double> cells;
    std::vector<double> boundary;
};

struct OracleData {
    std::string path;
    std::vector<MarginalEstimate> rows;
};

nlohmann::json report_to_json(const TestReport& r) {
    return nlohmann::json{{"kind", r.kind},     {"statistic", r.statistic},
                          {"p_value", r.p_value}, {"alpha", r.alpha},
                          {"pass", r.pass},     {"detail", r.detail}};
}

}  // namespace

int log_level() {
    static const int level = parse_log_level();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::fprintf(stderr, "[stitlab] %s\n", msg.c_str());
}

void log_debug(const std::string& msg) {
    if (log_level() >= 2) std::fprintf(stderr, "[stitlab] %s\n", msg.c_str());
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed_override, int jobs) {
    return guarded([&] {
        nlohmann::json canonical;
        const SimConfig cfg = load_config(config_path, seed_override, &canonical);
        log_info("simulate: " + std::to_string(cfg.replications) + " replication(s), " +
                 to_string(cfg.construction));
        const BatchResult batch = run_batch(cfg, jobs);
        const std::vector<std::string> paths =
            write_run_outputs(cfg, canonical, batch, out_dir);
        for (const std::string& p : paths) log_debug("wrote " + p);
        log_info("wrote " + std::to_string(paths.size()) + " file(s) to " + out_dir);
        return 0;
    });
}

int cmd_compare(const std::vector<std::string>& inputs, const std::string& out_path,
                double alpha) {
    return guarded([&] {
        if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha: must lie in (0, 1)");
        std::vector<SummaryData> summaries;
        std::vector<OracleData> oracles;
        for (const std::string& input : inputs) {
            std::string path = input;
            if (std::filesystem::is_directory(path)) path += "/summary.csv";
            const std::string text = read_file(path);
            std::istringstream in(text);
            std::string line;
            if (!std::getline(in, line)) {
                throw ConfigError("inputs: empty table " + path);
            }
            if (line.rfind("rep,", 0) == 0) {
                SummaryData s{path, {}, {}};
                while (std::getline(in, line)) {
                    if (line.empty()) continue;
                    const std::vector<std::string> cols = split(line, ',');
                    if (cols.size() < 6) {
                        throw ConfigError("inputs: malformed row in " + path);
                    }
                    s.cells.push_back(std::strtod(cols[2].c_str(), nullptr));
                    s.boundary.push_back(std::strtod(cols[4].c_str(), nullptr));
                }
                if (s.cells.empty()) throw ConfigError("inputs: no rows in " + path);
                summaries.push_back(std::move(s));
            } else if (line.rfind("k,", 0) == 0) {
                OracleData o{path, {}};
                while (std::getline(in, line)) {
                    if (line.empty()) continue;
                    const std::vector<std::string> cols = split(line, ',');
                    if (cols.size() < 3) {
                        throw ConfigError("inputs: malformed row in " + path);
                    }
                    o.rows.push_back({std::strtod(cols[1].c_str(), nullptr),
                                      std::strtod(cols[2].c_str(), nullptr), 0});
                }
                if (o.rows.empty()) throw ConfigError("inputs: no rows in " + path);
                oracles.push_back(std::move(o));
            } else {
                throw ConfigError("inputs: unrecognized table header in " + path);
            }
        }
        if (summaries.empty() || summaries.size() + oracles.size() < 2) {
            throw ConfigError("inputs: need at least two tables including one summary");
        }

        std::vector<TestReport> tests;
        const auto run_or_skip = [&](const std::string& kind, auto&& fn) {
            try {
                TestReport r = fn();
                r.kind = kind;
                tests.push_back(std::move(r));
            } catch (const InsufficientData& e) {
                // Degenerate but equal-looking data (for example every
                // replication produced the same cell count) is not a failure.
                tests.push_back(TestReport{kind, 0.0, 1.0, alpha, true,
                                           std::string("skipped: ") + e.what()});
            }
        };

        for (std::size_t i = 0; i < summaries.size(); ++i) {
            for (std::size_t j = i + 1; j < summaries.size(); ++j) {
                const std::string pair =
                    " (" + summaries[i].path + " vs " + summaries[j].path + ")";
                run_or_skip("cells chi-square" + pair, [&] {
                    TestReport r = chi_square_two_sample(
                        EmpiricalSummary::from_values(summaries[i].cells),
                        EmpiricalSummary::from_values(summaries[j].cells), 5, alpha);
                    return r;
                });
                run_or_skip("boundary KS" + pair, [&] {
                    return ks_two_sample(summaries[i].boundary, summaries[j].boundary,
                                         alpha);
                });
            }
        }
        for (const OracleData& o : oracles) {
            for (const SummaryData& s : summaries) {
                const std::size_t k_top = std::min<std::size_t>(o.rows.size(), 6);
                for (std::size_t k = 0; k < k_top; ++k) {
                    const double n = static_cast<double>(s.cells.size());
                    double hits = 0.0;
                    for (double c : s.cells) {
                        if (c == static_cast<double>(k + 1)) hits += 1.0;
                    }
                    const double freq = hits / n;
                    const double se_sim = std::sqrt(freq * (1.0 - freq) / n);
                    const double combined = std::hypot(se_sim, o.rows[k].std_error);
                    const double diff = std::abs(freq - o.rows[k].estimate);
                    const double z = combined > 0.0 ? diff / combined
                                                    : (diff > 0.0 ? 1e300 : 0.0);
                    TestReport r;
                    r.kind = "oracle k=" + std::to_string(k) + " (" + o.path + " vs " +
                             s.path + ")";
                    r.statistic = z;
                    r.p_value = std::erfc(z / M_SQRT2);
                    r.alpha = alpha;
                    r.pass = diff <= 3.0 * combined + 1e-12;
                    r.detail = "estimate " + format_g17(o.rows[k].estimate) +
                               ", frequency " + format_g17(freq);
                    tests.push_back(std::move(r));
                }
            }
        }

        bool all_pass = true;
        nlohmann::json jtests = nlohmann::json::array();
        for (const TestReport& r : tests) {
            all_pass = all_pass && r.pass;
            jtests.push_back(report_to_json(r));
            log_debug(r.kind + ": p=" + format_g17(r.p_value) +
                      (r.pass ? " pass" : " FAIL"));
        }
        const nlohmann::json report{
            {"alpha", alpha}, {"all_pass", all_pass}, {"tests", jtests}};
        write_file(out_path, report.dump(2) + "\n");
        if (!all_pass) {
            for (const TestReport& r : tests) {
                if (!r.pass) {
                    std::fprintf(stderr, "stitlab: comparison failed: %s (p=%g)\n",
                                 r.kind.c_str(), r.p_value);
                }
            }
            return 3;
        }
        log_info("compare: all " + std::to_string(tests.size()) + " test(s) passed");
        return 0;
    });
}

int cmd_render(const std::string& traj_path, double t, const std::string& svg_path) {
    return guarded([&] {
        if (t < 0.0) throw ConfigError("t: must be nonnegative");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_file(traj_path));
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError("trajectory: " + std::string(e.what()));
        }
        const ParsedTrajectory traj = trajectory_from_json(j);
        if (traj.window.dim() != 2) {
            throw ConfigError("window: rendering requires a 2D trajectory");
        }
        // Replay with a throwaway axis measure: cut geometry is independent
        // of the measure, which only prices the cells.
        const HyperplaneMeasure m(
            1.0, DirectionalDistribution::discrete(
                     2, {{Direction::from_phi(0.0), 0.5}, {Direction::from_phi(M_PI_2), 0.5}}));
        Tessellation state = Tessellation::initial(traj.window, m);
        for (const JumpRecord& rec : traj.records) {
            if (rec.time > t) break;
            state.divide(rec.divided, rec.h, rec.time, m);
        }
        write_file(svg_path, render_svg(state));
        log_info("rendered " + std::to_string(state.cell_count()) + " cell(s) to " +
                 svg_path);
        return 0;
    });
}

int cmd_oracle(const std::string& config_path, int k_max, std::uint64_t n_samples,
               const std::string& out_path, std::optional<std::uint64_t> seed_override) {
    return guarded([&] {
        const SimConfig cfg = load_config(config_path, seed_override, nullptr);
        if (k_max < 0 || k_max > 12) throw ConfigError("k_max: must lie in [0, 12]");
        const HyperplaneMeasure m = cfg.measure();
        std::vector<MarginalEstimate> rows;
        for (int k = 0; k <= k_max; ++k) {
            RngStreams streams = RngStreams::make(cfg.seed, 900000 + k);
            rows.push_back(
                marginal_count_prob(cfg.window, m, cfg.t_end, k, n_samples, streams.u));
            log_debug("oracle k=" + std::to_string(k) + ": " +
                      format_g17(rows.back().estimate));
        }
        write_file(out_path, oracle_csv(rows));
        return 0;
    });
}

int cmd_bench(const std::string& config_path, const std::string& out_path) {
    return guarded([&] {
        const SimConfig cfg = load_config(config_path, {}, nullptr);
        const std::vector<BenchRow> rows = benchmark_proposals(
            cfg, {Construction::lifetime, Construction::jumpchain, Construction::density},
            cfg.replications);
        std::string out = "construction,cells_lo,cells_hi,jumps,mean_proposals\n";
        for (const BenchRow& r : rows) {
            out += to_string(r.tag);
            out += ',';
            out += std::to_string(r.cells_lo);
            out += ',';
            out += std::to_string(r.cells_hi);
            out += ',';
            out += std::to_string(r.jumps);
            out += ',';
            out += format_g17(r.mean_proposals);
            out += '\n';
        }
        write_file(out_path, out);
        return 0;
    });
}

}  // namespace stit
