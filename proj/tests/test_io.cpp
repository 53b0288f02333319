#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "stit/cli.hpp"
#include "stit/construct.hpp"
#include "stit/errors.hpp"
#include "stit/io.hpp"
#include "stit/svg.hpp"

using namespace stit;

namespace {

SimConfig small_config(std::uint64_t seed, Construction tag = Construction::jumpchain,
                       double t_end = 1.5) {
    SimConfig cfg;
    cfg.window = Cell::rect(0.0, 0.0, 1.0, 1.0);
    cfg.gamma = 1.0;
    cfg.theta = DirectionalDistribution::discrete(
        2, {{Direction::from_phi(0.0), 0.5}, {Direction::from_phi(M_PI / 2), 0.5}});
    cfg.t_end = t_end;
    cfg.seed = seed;
    cfg.construction = tag;
    cfg.replications = 1;
    return cfg;
}

std::string temp_dir(const std::string& tag) {
    const std::string path =
        (std::filesystem::temp_directory_path() / ("stitlab_test_" + tag)).string();
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
    return path;
}

std::string contains_field(const std::function<SimConfig()>& parse) {
    try {
        parse();
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("cell JSON round trip") {
    const Cell iv = Cell::interval(-1.5, 2.25, TreeWord::from_string("-+"));
    const Cell iv2 = cell_from_json(cell_to_json(iv));
    CHECK(iv2 == iv);
    CHECK(iv2.label == iv.label);

    const Cell sq = Cell::rect(0.0, 0.0, 2.0, 1.0);
    CHECK(cell_from_json(cell_to_json(sq)) == sq);

    const Cell tri = Cell::polygon({{0.0, 0.0}, {1.0, 0.0}, {0.25, 0.8}});
    CHECK(cell_from_json(cell_to_json(tri)) == tri);

    // Shorthand forms.
    CHECK(cell_from_json(nlohmann::json{{"dim", 1}, {"interval", {0.0, 3.0}}}) ==
          Cell::interval(0.0, 3.0));
    CHECK(cell_from_json(nlohmann::json{{"dim", 2}, {"rect", {0.0, 0.0, 1.0, 2.0}}}) ==
          Cell::rect(0.0, 0.0, 1.0, 2.0));

    CHECK_THROWS_AS(cell_from_json(nlohmann::json{{"dim", 3}}), ConfigError);
    CHECK_THROWS_AS(cell_from_json(nlohmann::json::array()), ConfigError);
    CHECK_THROWS_AS(
        cell_from_json(nlohmann::json{{"dim", 2}, {"vertices", {{0.0, 0.0}, {1.0, 0.0}}}}),
        ConfigError);
}

TEST_CASE("directional distribution JSON round trip") {
    const DirectionalDistribution d = DirectionalDistribution::discrete(
        2, {{Direction::from_phi(0.3), 0.25}, {Direction::from_phi(1.9), 0.75}});
    const DirectionalDistribution d2 = theta_from_json(theta_to_json(d), 2);
    REQUIRE(d2.kind() == DirectionalDistribution::Kind::discrete);
    REQUIRE(d2.atoms().size() == 2);
    CHECK(d2.atoms()[0].dir.phi() == d.atoms()[0].dir.phi());
    CHECK(d2.atoms()[1].weight == d.atoms()[1].weight);

    const DirectionalDistribution iso = theta_from_json(nlohmann::json{{"kind", "isotropic"}}, 2);
    CHECK(iso.kind() == DirectionalDistribution::Kind::isotropic);

    CHECK_THROWS_AS(theta_from_json(nlohmann::json{{"kind", "fancy"}}, 2), ConfigError);
    CHECK_THROWS_AS(theta_from_json(nlohmann::json{{"kind", "discrete"}}, 2), ConfigError);
}

TEST_CASE("config JSON round trip and field-naming errors") {
    SimConfig cfg = small_config(777, Construction::density);
    cfg.replications = 12;
    cfg.max_jumps = 99;
    const nlohmann::json j = config_to_json(cfg);
    const SimConfig back = config_from_json(j);
    CHECK(back.window == cfg.window);
    CHECK(back.gamma == cfg.gamma);
    CHECK(back.t_end == cfg.t_end);
    CHECK(back.seed == cfg.seed);
    CHECK(back.construction == cfg.construction);
    CHECK(back.replications == cfg.replications);
    CHECK(back.max_jumps == cfg.max_jumps);
    CHECK(config_to_json(back) == j);

    // Each rejected config names the offending field.
    const auto expect_field = [&](const char* field, auto&& mutate) {
        nlohmann::json bad = config_to_json(small_config(1));
        mutate(bad);
        const std::string msg = contains_field([&] { return config_from_json(bad); });
        INFO(field, ": ", msg);
        CHECK(msg.find(field) != std::string::npos);
    };
    expect_field("gamma", [](nlohmann::json& j2) { j2["gamma"] = -1.0; });
    expect_field("gamma", [](nlohmann::json& j2) { j2.erase("gamma"); });
    expect_field("t_end", [](nlohmann::json& j2) { j2["t_end"] = 0.0; });
    expect_field("seed", [](nlohmann::json& j2) { j2["seed"] = -4; });
    expect_field("construction", [](nlohmann::json& j2) { j2["construction"] = "magic"; });
    expect_field("replications", [](nlohmann::json& j2) { j2["replications"] = 0; });
    expect_field("theta", [](nlohmann::json& j2) {
        j2["theta"] = {{"kind", "discrete"},
                       {"atoms", {{{"phi", 0.1}, {"w", 0.5}}, {{"phi", 0.2}, {"w", 0.2}}}}};
    });
    expect_field("window", [](nlohmann::json& j2) { j2.erase("window"); });
}

TEST_CASE("config hash is stable under field reordering") {
    const char* ordered =
        R"({"construction":"jumpchain","gamma":1.0,"replications":3,"seed":9,)"
        R"("t_end":1.0,"theta":{"kind":"isotropic"},"window":{"dim":1,"lo":0.0,"hi":1.0}})";
    const char* shuffled =
        R"({"window":{"hi":1.0,"dim":1,"lo":0.0},"seed":9,"theta":{"kind":"isotropic"},)"
        R"("gamma":1.0,"t_end":1.0,"replications":3,"construction":"jumpchain"})";
    const std::string ha = config_hash(nlohmann::json::parse(ordered));
    const std::string hb = config_hash(nlohmann::json::parse(shuffled));
    CHECK(ha == hb);
    CHECK(ha.size() == 16);

    nlohmann::json other = nlohmann::json::parse(ordered);
    other["seed"] = 10;
    CHECK(config_hash(other) != ha);
}

TEST_CASE("tessellation JSON replays to the identical state") {
    SimConfig cfg = small_config(4243);
    cfg.t_end = 2.0;
    const HyperplaneMeasure m = cfg.measure();
    const Trajectory traj = simulate(cfg);
    REQUIRE(traj.final.cell_count() > 2);

    const nlohmann::json j = tessellation_to_json(traj.final);
    const Tessellation back = tessellation_from_json(j, m);
    REQUIRE(back.cell_count() == traj.final.cell_count());
    CHECK(back.labels() == traj.final.labels());
    for (const TreeWord& label : back.labels()) {
        CHECK(back.cell(label) == traj.final.cell(label));
    }
    CHECK(back.zeta() == doctest::Approx(traj.final.zeta()).epsilon(1e-12));

    // The serialized numbers round-trip exactly (shortest-form doubles).
    const nlohmann::json j2 = tessellation_to_json(back);
    CHECK(j2 == j);

    CHECK_THROWS_AS(tessellation_from_json(nlohmann::json{{"history", nlohmann::json::array()}}, m),
                    ConfigError);
}

TEST_CASE("jump record JSONL round trip") {
    SimConfig cfg = small_config(31);
    const Trajectory traj = simulate(cfg);
    REQUIRE_FALSE(traj.final.history().empty());
    const std::string text = jump_records_jsonl(traj.final.history());
    const std::vector<JumpRecord> back = jump_records_from_jsonl(text, 2);
    REQUIRE(back.size() == traj.final.history().size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].time == traj.final.history()[i].time);
        CHECK(back[i].divided == traj.final.history()[i].divided);
        CHECK(back[i].h.alpha == traj.final.history()[i].h.alpha);
        CHECK(back[i].h.dir.phi() == traj.final.history()[i].h.dir.phi());
    }
}

TEST_CASE("summary CSV is deterministic and 17-digit exact") {
    SimConfig cfg = small_config(606, Construction::lifetime);
    cfg.replications = 6;
    const BatchResult a = run_batch(cfg, 1);
    const BatchResult b = run_batch(cfg, 3);  // worker count must not matter
    CHECK(summary_csv(a.runs) == summary_csv(b.runs));

    const std::string csv = summary_csv(a.runs);
    std::size_t lines = 0;
    for (char c : csv) lines += c == '\n' ? 1 : 0;
    CHECK(lines == 7);  // header + one row per replication
    CHECK(csv.rfind("rep,seed,cells,zeta_final,boundary_len,proposal_count\n", 0) == 0);

    // %.17g numbers parse back to the exact double.
    const double z = a.runs[2].final.zeta();
    CHECK(std::stod(format_g17(z)) == z);
    CHECK(format_g17(0.0) == "0");
}

TEST_CASE("run outputs land in the expected files") {
    SimConfig cfg = small_config(99);
    cfg.replications = 3;
    const std::string dir = temp_dir("outputs");
    const BatchResult batch = run_batch(cfg, 1);
    const nlohmann::json cj = config_to_json(cfg);
    const std::vector<std::string> paths = write_run_outputs(cfg, cj, batch, dir);

    CHECK(paths.size() == 3 * 2 + 3);  // per-rep jsonl+json, summary, timings, manifest
    for (const std::string& p : paths) CHECK(std::filesystem::exists(p));

    const nlohmann::json manifest = nlohmann::json::parse(read_file(dir + "/manifest.json"));
    CHECK(manifest.at("config_hash").get<std::string>() == config_hash(cj));
    CHECK(manifest.at("seed").get<std::uint64_t>() == cfg.seed);
    CHECK(manifest.at("config") == cj);
    CHECK(manifest.at("outputs").size() == paths.size() - 1);  // manifest excluded

    // Then the manifest's embedded config reproduces the run byte for byte.
    const SimConfig again = config_from_json(manifest.at("config"));
    const BatchResult batch2 = run_batch(again, 1);
    CHECK(summary_csv(batch2.runs) == summary_csv(batch.runs));
    std::filesystem::remove_all(dir);
}

TEST_CASE("SVG output is deterministic word-ordered closed paths") {
    SimConfig cfg = small_config(11, Construction::density, 2.2);
    const Trajectory traj = simulate(cfg);
    const std::string svg = render_svg(traj.final);
    CHECK(svg == render_svg(traj.final));
    CHECK(svg.rfind("<svg xmlns=\"http://www.w3.org/2000/svg\"", 0) == 0);
    std::size_t paths = 0;
    for (std::size_t pos = svg.find("<path"); pos != std::string::npos;
         pos = svg.find("<path", pos + 1)) {
        ++paths;
    }
    CHECK(paths == traj.final.cell_count());
    CHECK(svg.find("fill=\"none\"") != std::string::npos);
    CHECK(svg.find("stroke-width=\"1\"") != std::string::npos);
    CHECK(svg.find(" Z\"") != std::string::npos);

    const HyperplaneMeasure m1(1.0, DirectionalDistribution::isotropic(1));
    const Tessellation one_d = Tessellation::initial(Cell::interval(0.0, 1.0), m1);
    CHECK_THROWS_AS(render_svg(one_d), ConfigError);
}

TEST_CASE("simulate command writes byte-identical reruns") {
    const std::string dir = temp_dir("cli_sim");
    const std::string cfg_path = dir + "/cfg.json";
    SimConfig cfg = small_config(2718);
    cfg.replications = 5;
    write_file(cfg_path, config_to_json(cfg).dump(2) + "\n");

    REQUIRE(cmd_simulate(cfg_path, dir + "/run1") == 0);
    REQUIRE(cmd_simulate(cfg_path, dir + "/run2", {}, 2) == 0);
    CHECK(read_file(dir + "/run1/summary.csv") == read_file(dir + "/run2/summary.csv"));
    CHECK(read_file(dir + "/run1/rep_0004.jsonl") == read_file(dir + "/run2/rep_0004.jsonl"));
    CHECK(read_file(dir + "/run1/rep_0002.json") == read_file(dir + "/run2/rep_0002.json"));
    CHECK(read_file(dir + "/run1/manifest.json") == read_file(dir + "/run2/manifest.json"));

    // Seed override changes the outputs and is recorded in the manifest.
    REQUIRE(cmd_simulate(cfg_path, dir + "/run3", 999, 1) == 0);
    CHECK(read_file(dir + "/run3/summary.csv") != read_file(dir + "/run1/summary.csv"));
    const nlohmann::json manifest = nlohmann::json::parse(read_file(dir + "/run3/manifest.json"));
    CHECK(manifest.at("seed").get<std::uint64_t>() == 999);

    // Invalid configs exit 2.
    nlohmann::json bad = config_to_json(cfg);
    bad["gamma"] = 0.0;
    write_file(dir + "/bad.json", bad.dump() + "\n");
    CHECK(cmd_simulate(dir + "/bad.json", dir + "/runX") == 2);
    write_file(dir + "/garbled.json", "{not json\n");
    CHECK(cmd_simulate(dir + "/garbled.json", dir + "/runX") == 2);
    CHECK(cmd_simulate(dir + "/missing.json", dir + "/runX") == 1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("render command draws the replayed state") {
    const std::string dir = temp_dir("cli_render");
    const std::string cfg_path = dir + "/cfg.json";
    SimConfig cfg = small_config(5);
    cfg.replications = 1;
    write_file(cfg_path, config_to_json(cfg).dump() + "\n");
    REQUIRE(cmd_simulate(cfg_path, dir + "/run") == 0);

    // At t = 0 nothing has divided yet: a single path.
    REQUIRE(cmd_render(dir + "/run/rep_0000.json", 0.0, dir + "/t0.svg") == 0);
    const std::string svg0 = read_file(dir + "/t0.svg");
    std::size_t paths0 = 0;
    for (std::size_t pos = svg0.find("<path"); pos != std::string::npos;
         pos = svg0.find("<path", pos + 1)) {
        ++paths0;
    }
    CHECK(paths0 == 1);

    // At t_end the path count equals the summary's cell count.
    REQUIRE(cmd_render(dir + "/run/rep_0000.json", cfg.t_end, dir + "/t1.svg") == 0);
    const std::string svg1 = read_file(dir + "/t1.svg");
    std::size_t paths1 = 0;
    for (std::size_t pos = svg1.find("<path"); pos != std::string::npos;
         pos = svg1.find("<path", pos + 1)) {
        ++paths1;
    }
    const Trajectory traj = simulate(cfg);
    CHECK(paths1 == traj.final.cell_count());

    // Re-rendering is byte-identical.
    REQUIRE(cmd_render(dir + "/run/rep_0000.json", cfg.t_end, dir + "/t1b.svg") == 0);
    CHECK(read_file(dir + "/t1.svg") == read_file(dir + "/t1b.svg"));

    // 1D trajectories cannot be rendered.
    SimConfig cfg1 = cfg;
    cfg1.window = Cell::interval(0.0, 1.0);
    cfg1.theta = DirectionalDistribution::isotropic(1);
    write_file(dir + "/cfg1.json", config_to_json(cfg1).dump() + "\n");
    REQUIRE(cmd_simulate(dir + "/cfg1.json", dir + "/run1d") == 0);
    CHECK(cmd_render(dir + "/run1d/rep_0000.json", 1.0, dir + "/bad.svg") == 2);
    std::filesystem::remove_all(dir);
}

TEST_CASE("oracle command tabulates count probabilities") {
    const std::string dir = temp_dir("cli_oracle");
    SimConfig cfg = small_config(17);
    cfg.t_end = 1.0;
    write_file(dir + "/cfg.json", config_to_json(cfg).dump() + "\n");

    REQUIRE(cmd_oracle(dir + "/cfg.json", 2, 2000, dir + "/oracle.csv") == 0);
    const std::string csv = read_file(dir + "/oracle.csv");
    CHECK(csv.rfind("k,estimate,std_error\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : csv) lines += c == '\n' ? 1 : 0;
    CHECK(lines == 4);
    // The k=0 row is exact.
    const std::size_t row0 = csv.find("\n0,") + 3;
    const double p0 = std::stod(csv.substr(row0, csv.find(',', row0) - row0));
    CHECK(p0 == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

    CHECK(cmd_oracle(dir + "/cfg.json", 13, 2000, dir + "/oracle.csv") == 2);
    CHECK(cmd_oracle(dir + "/cfg.json", 2, 10, dir + "/oracle.csv") == 2);
    std::filesystem::remove_all(dir);
}

TEST_CASE("compare command separates agreement from mismatch") {
    const std::string dir = temp_dir("cli_compare");
    SimConfig a = small_config(1001, Construction::jumpchain);
    a.replications = 1200;
    SimConfig b = small_config(2002, Construction::lifetime);
    b.replications = 1200;
    write_file(dir + "/a.json", config_to_json(a).dump() + "\n");
    write_file(dir + "/b.json", config_to_json(b).dump() + "\n");
    REQUIRE(cmd_simulate(dir + "/a.json", dir + "/runA") == 0);
    REQUIRE(cmd_simulate(dir + "/b.json", dir + "/runB") == 0);

    CHECK(cmd_compare({dir + "/runA", dir + "/runB"}, dir + "/report.json") == 0);
    const nlohmann::json report = nlohmann::json::parse(read_file(dir + "/report.json"));
    CHECK(report.at("all_pass").get<bool>());
    CHECK(report.at("tests").size() == 2);

    // A deliberately different stopping time must be detected.
    SimConfig c = small_config(3003, Construction::jumpchain, 0.4);
    c.replications = 1200;
    write_file(dir + "/c.json", config_to_json(c).dump() + "\n");
    REQUIRE(cmd_simulate(dir + "/c.json", dir + "/runC") == 0);
    CHECK(cmd_compare({dir + "/runA", dir + "/runC"}, dir + "/report2.json") == 3);
    const nlohmann::json report2 = nlohmann::json::parse(read_file(dir + "/report2.json"));
    CHECK_FALSE(report2.at("all_pass").get<bool>());

    // Input validation: need at least two tables, one of them a summary.
    CHECK(cmd_compare({dir + "/runA"}, dir + "/report3.json") == 2);
    write_file(dir + "/junk.csv", "who,knows\n1,2\n");
    CHECK(cmd_compare({dir + "/runA", dir + "/junk.csv"}, dir + "/report4.json") == 2);
    std::filesystem::remove_all(dir);
}