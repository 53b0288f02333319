#include "stit/io.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>
#include <utility>

#include "stit/errors.hpp"

namespace stit {

namespace {

const nlohmann::json& require(const nlohmann::json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw ConfigError(std::string(key) + ": missing");
    }
    return j.at(key);
}

double require_number(const nlohmann::json& j, const char* key) {
    const nlohmann::json& v = require(j, key);
    if (!v.is_number()) throw ConfigError(std::string(key) + ": expected a number");
    return v.get<double>();
}

std::uint64_t require_uint(const nlohmann::json& j, const char* key) {
    const nlohmann::json& v = require(j, key);
    if (!v.is_number_unsigned()) {
        throw ConfigError(std::string(key) + ": expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

std::string require_string(const nlohmann::json& j, const char* key) {
    const nlohmann::json& v = require(j, key);
    if (!v.is_string()) throw ConfigError(std::string(key) + ": expected a string");
    return v.get<std::string>();
}

Hyperplane hyperplane_from(int dim, double alpha, double phi) {
    if (dim == 1) return Hyperplane{alpha, Direction::axis_1d()};
    return Hyperplane{alpha, Direction::from_phi(phi)};
}

nlohmann::json record_to_json(const JumpRecord& rec, int dim) {
    return nlohmann::json{{"t", rec.time},
                          {"label", rec.divided.str()},
                          {"alpha", rec.h.alpha},
                          {"phi", dim == 2 ? rec.h.dir.phi() : 0.0}};
}

JumpRecord record_from_json(const nlohmann::json& j, int dim) {
    JumpRecord rec;
    rec.time = require_number(j, "t");
    rec.divided = TreeWord::from_string(require_string(j, "label"));
    rec.h = hyperplane_from(dim, require_number(j, "alpha"),
                            j.contains("phi") ? require_number(j, "phi") : 0.0);
    return rec;
}

}  // namespace

nlohmann::json cell_to_json(const Cell& cell) {
    if (cell.dim() == 1) {
        return nlohmann::json{
            {"dim", 1}, {"label", cell.label.str()}, {"lo", cell.lo()}, {"hi", cell.hi()}};
    }
    nlohmann::json verts = nlohmann::json::array();
    for (const Vec2& v : cell.vertices()) verts.push_back({v.x, v.y});
    return nlohmann::json{{"dim", 2}, {"label", cell.label.str()}, {"vertices", verts}};
}

Cell cell_from_json(const nlohmann::json& j, const std::string& field) {
    try {
        if (!j.is_object()) throw ConfigError(field + ": expected an object");
        const int dim = static_cast<int>(require_number(j, "dim"));
        TreeWord label;
        if (j.contains("label")) label = TreeWord::from_string(require_string(j, "label"));
        if (dim == 1) {
            if (j.contains("interval")) {
                const nlohmann::json& iv = j.at("interval");
                if (!iv.is_array() || iv.size() != 2) {
                    throw ConfigError(field + ": interval must be [lo, hi]");
                }
                return Cell::interval(iv.at(0).get<double>(), iv.at(1).get<double>(), label);
            }
            return Cell::interval(require_number(j, "lo"), require_number(j, "hi"), label);
        }
        if (dim != 2) throw ConfigError(field + ": dim must be 1 or 2");
        if (j.contains("rect")) {
            const nlohmann::json& r = j.at("rect");
            if (!r.is_array() || r.size() != 4) {
                throw ConfigError(field + ": rect must be [x0, y0, x1, y1]");
            }
            return Cell::rect(r.at(0).get<double>(), r.at(1).get<double>(),
                              r.at(2).get<double>(), r.at(3).get<double>(), label);
        }
        const nlohmann::json& vj = require(j, "vertices");
        if (!vj.is_array() || vj.size() < 3) {
            throw ConfigError(field + ": vertices must list at least 3 points");
        }
        std::vector<Vec2> verts;
        for (const nlohmann::json& p : vj) {
            if (!p.is_array() || p.size() != 2) {
                throw ConfigError(field + ": vertices must be [x, y] pairs");
            }
            verts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        }
        return Cell::polygon(std::move(verts), label);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(field + ": " + e.what());
    }
}

nlohmann::json theta_to_json(const DirectionalDistribution& theta) {
    if (theta.kind() == DirectionalDistribution::Kind::isotropic) {
        return nlohmann::json{{"kind", "isotropic"}};
    }
    nlohmann::json atoms = nlohmann::json::array();
    for (const DirAtom& a : theta.atoms()) {
        atoms.push_back({{"phi", a.dir.dim() == 2 ? a.dir.phi() : 0.0}, {"w", a.weight}});
    }
    return nlohmann::json{{"kind", "discrete"}, {"atoms", atoms}};
}

DirectionalDistribution theta_from_json(const nlohmann::json& j, int dim) {
    const std::string kind = require_string(j, "kind");
    if (kind == "isotropic") return DirectionalDistribution::isotropic(dim);
    if (kind != "discrete") {
        throw ConfigError("theta: kind must be \"discrete\" or \"isotropic\"");
    }
    const nlohmann::json& aj = require(j, "atoms");
    if (!aj.is_array() || aj.empty()) {
        throw ConfigError("theta: atoms must be a nonempty array");
    }
    std::vector<DirAtom> atoms;
    for (const nlohmann::json& a : aj) {
        const double w = require_number(a, "w");
        if (dim == 1) {
            atoms.push_back({Direction::axis_1d(), w});
        } else {
            atoms.push_back({Direction::from_phi(require_number(a, "phi")), w});
        }
    }
    return DirectionalDistribution::discrete(dim, std::move(atoms));
}

nlohmann::json config_to_json(const SimConfig& cfg) {
    nlohmann::json j{{"window", cell_to_json(cfg.window)},
                     {"gamma", cfg.gamma},
                     {"theta", theta_to_json(cfg.theta)},
                     {"t_end", cfg.t_end},
                     {"seed", cfg.seed},
                     {"construction", to_string(cfg.construction)},
                     {"replications", cfg.replications}};
    if (cfg.max_jumps) j["max_jumps"] = *cfg.max_jumps;
    return j;
}

SimConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    SimConfig cfg;
    cfg.window = cell_from_json(require(j, "window"), "window");
    cfg.gamma = require_number(j, "gamma");
    cfg.theta = theta_from_json(require(j, "theta"), cfg.window.dim());
    cfg.t_end = require_number(j, "t_end");
    if (!(cfg.t_end > 0.0)) throw ConfigError("t_end: must be positive");
    cfg.seed = require_uint(j, "seed");
    cfg.construction = construction_from_string(require_string(j, "construction"));
    const nlohmann::json& reps = require(j, "replications");
    if (!reps.is_number_integer() || reps.get<long long>() < 1) {
        throw ConfigError("replications: must be a positive integer");
    }
    cfg.replications = reps.get<int>();
    if (j.contains("max_jumps")) cfg.max_jumps = require_uint(j, "max_jumps");
    cfg.measure();  // validates gamma and theta, naming the bad field
    return cfg;
}

nlohmann::json tessellation_to_json(const Tessellation& t) {
    nlohmann::json cells = nlohmann::json::array();
    t.for_each_cell([&](const Cell& c, double) { cells.push_back(cell_to_json(c)); });
    nlohmann::json history = nlohmann::json::array();
    for (const JumpRecord& rec : t.history()) history.push_back(record_to_json(rec, t.dim()));
    return nlohmann::json{
        {"window", cell_to_json(t.window())}, {"cells", cells}, {"history", history}};
}

Tessellation tessellation_from_json(const nlohmann::json& j, const HyperplaneMeasure& m) {
    const Cell window = cell_from_json(require(j, "window"), "window");
    Tessellation t = Tessellation::initial(window, m);
    for (const nlohmann::json& rj : require(j, "history")) {
        const JumpRecord rec = record_from_json(rj, window.dim());
        t.divide(rec.divided, rec.h, rec.time, m);
    }
    if (j.contains("cells") && j.at("cells").size() != t.cell_count()) {
        throw ConfigError("cells: inconsistent with history");
    }
    return t;
}

ParsedTrajectory trajectory_from_json(const nlohmann::json& j) {
    ParsedTrajectory out{cell_from_json(require(j, "window"), "window"), {}};
    for (const nlohmann::json& rj : require(j, "history")) {
        out.records.push_back(record_from_json(rj, out.window.dim()));
    }
    return out;
}

std::string config_hash(const nlohmann::json& config) {
    const std::string canonical = config.dump();
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string jump_records_jsonl(const std::vector<JumpRecord>& records) {
    std::string out;
    const int dim = records.empty() || records.front().h.dir.dim() == 1 ? 1 : 2;
    for (const JumpRecord& rec : records) {
        out += record_to_json(rec, dim).dump();
        out += '\n';
    }
    return out;
}

std::vector<JumpRecord> jump_records_from_jsonl(const std::string& text, int dim) {
    std::vector<JumpRecord> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(record_from_json(nlohmann::json::parse(line), dim));
    }
    return out;
}

std::string summary_csv(const std::vector<Trajectory>& runs) {
    std::string out = "rep,seed,cells,zeta_final,boundary_len,proposal_count\n";
    for (const Trajectory& t : runs) {
        out += std::to_string(t.replication);
        out += ',';
        out += std::to_string(t.rng_seed);
        out += ',';
        out += std::to_string(t.final.cell_count());
        out += ',';
        out += format_g17(t.final.zeta());
        out += ',';
        out += format_g17(t.final.boundary_length());
        out += ',';
        out += std::to_string(t.proposal_count);
        out += '\n';
    }
    return out;
}

std::string timings_csv(const std::vector<std::uint64_t>& wall_ns) {
    std::string out = "rep,wall_time_ns\n";
    for (std::size_t i = 0; i < wall_ns.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += std::to_string(wall_ns[i]);
        out += '\n';
    }
    return out;
}

std::string oracle_csv(const std::vector<MarginalEstimate>& rows) {
    std::string out = "k,estimate,std_error\n";
    for (std::size_t k = 0; k < rows.size(); ++k) {
        out += std::to_string(k);
        out += ',';
        out += format_g17(rows[k].estimate);
        out += ',';
        out += format_g17(rows[k].std_error);
        out += '\n';
    }
    return out;
}

BatchResult run_batch(const SimConfig& cfg, int jobs) {
    const std::size_t n = static_cast<std::size_t>(cfg.replications);
    BatchResult batch;
    batch.runs.resize(n);
    batch.wall_ns.resize(n, 0);
    if (jobs <= 0) {
        jobs = static_cast<int>(std::thread::hardware_concurrency());
        if (jobs <= 0) jobs = 1;
    }
    const auto worker_body = [&](std::size_t i) {
        const auto start = std::chrono::steady_clock::now();
        batch.runs[i] = simulate(cfg, i);
        const auto stop = std::chrono::steady_clock::now();
        batch.wall_ns[i] = static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
    };
    if (jobs == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) worker_body(i);
        return batch;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                worker_body(i);
            }
        });
    }
    for (std::thread& th : pool) th.join();
    return batch;
}

std::vector<std::string> write_run_outputs(const SimConfig& cfg,
                                           const nlohmann::json& config_json,
                                           const BatchResult& batch,
                                           const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < batch.runs.size(); ++i) {
        char base[32];
        std::snprintf(base, sizeof base, "rep_%04zu", i);
        const std::string jsonl_name = std::string(base) + ".jsonl";
        write_file(out_dir + "/" + jsonl_name,
                   jump_records_jsonl(batch.runs[i].final.history()));
        names.push_back(jsonl_name);
        const std::string json_name = std::string(base) + ".json";
        write_file(out_dir + "/" + json_name,
                   tessellation_to_json(batch.runs[i].final).dump() + "\n");
        names.push_back(json_name);
    }
    write_file(out_dir + "/summary.csv", summary_csv(batch.runs));
    names.push_back("summary.csv");
    write_file(out_dir + "/timings.csv", timings_csv(batch.wall_ns));
    names.push_back("timings.csv");

    nlohmann::json manifest{{"config", config_json},
                            {"config_hash", config_hash(config_json)},
                            {"outputs", names},
                            {"seed", cfg.seed},
                            {"tool", {{"name", kToolName}, {"version", kToolVersion}}}};
    write_file(out_dir + "/manifest.json", manifest.dump(2) + "\n");
    names.push_back("manifest.json");

    std::vector<std::string> paths;
    paths.reserve(names.size());
    for (const std::string& name : names) paths.push_back(out_dir + "/" + name);
    return paths;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("failed writing " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace stit
