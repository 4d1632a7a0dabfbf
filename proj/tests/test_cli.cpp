#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    const fs::path log = fs::temp_directory_path() / "fpcav_cli_log.txt";
    const std::string command = std::string(FPCAV_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int raw = std::system(command.c_str());
    std::ifstream in(log);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return {WEXITSTATUS(raw), buffer.str()};
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    return dir;
}

std::vector<std::vector<double>> parse_csv(const fs::path& path, std::size_t columns) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        std::vector<double> values(columns);
        bool ok = true;
        for (auto& v : values) ok = ok && static_cast<bool>(row >> v);
        if (ok) rows.push_back(values);
    }
    return rows;
}

}  // namespace

TEST_CASE("spectrum of the ideal top mirror is centred at the design wavelength") {
    const auto dir = fresh_dir("fpcav_cli_spectrum");
    const auto result = run_cli("spectrum --out " + dir.string());
    REQUIRE(result.exit_code == 0);
    const auto rows = parse_csv(dir / "spectrum.csv", 4);
    REQUIRE(rows.size() > 100);
    for (const auto& row : rows) {
        CHECK(std::abs(row[1] + row[2] + row[3] - 1.0) < 1e-9);
    }
    // stopband centre from the manifest
    const std::string manifest = slurp(dir / "manifest.json");
    const auto pos = manifest.find("stopband_center_nm");
    REQUIRE(pos != std::string::npos);
    const double center = std::stod(manifest.substr(manifest.find(':', pos) + 1));
    CHECK(std::abs(center - 625.0) < 2.0);
}

TEST_CASE("empty stack gives zero reflectance") {
    const auto dir = fresh_dir("fpcav_cli_empty");
    const fs::path config = dir / "config.json";
    fs::create_directories(dir);
    std::ofstream(config) << R"({"stack": {"incidence": {"n": 1.0}, "layers": [], "exit": {"n": 1.0}}})";
    const auto result = run_cli("spectrum --config " + config.string() + " --out " + dir.string());
    REQUIRE(result.exit_code == 0);
    for (const auto& row : parse_csv(dir / "spectrum.csv", 4)) {
        CHECK(std::abs(row[1]) < 1e-12);
        CHECK(std::abs(row[2] - 1.0) < 1e-12);
    }
}

TEST_CASE("malformed config names the offending field and exits nonzero") {
    const auto dir = fresh_dir("fpcav_cli_bad");
    fs::create_directories(dir);
    const fs::path config = dir / "config.json";
    std::ofstream(config) << R"({"assembly": {"membrane": {"thickness_nm": -5.0}}})";
    const auto result = run_cli("q-scan --config " + config.string() + " --out " + dir.string());
    CHECK(result.exit_code != 0);
    CHECK(result.output.find("thickness_nm") != std::string::npos);
}

TEST_CASE("json syntax errors carry a line number") {
    const auto dir = fresh_dir("fpcav_cli_syntax");
    fs::create_directories(dir);
    const fs::path config = dir / "config.json";
    std::ofstream(config) << "{\n  \"assembly\": {\n  oops\n}\n";
    const auto result = run_cli("spectrum --config " + config.string() + " --out " + dir.string());
    CHECK(result.exit_code != 0);
    CHECK(result.output.find(":3:") != std::string::npos);
}

TEST_CASE("missing fit input reports the path") {
    const auto dir = fresh_dir("fpcav_cli_missing");
    const auto result =
        run_cli("fit crater --input /nonexistent/crater.csv --out " + dir.string());
    CHECK(result.exit_code != 0);
    CHECK(result.output.find("/nonexistent/crater.csv") != std::string::npos);
}

TEST_CASE("identical configuration produces byte-identical outputs") {
    const auto dir1 = fresh_dir("fpcav_cli_det1");
    const auto dir2 = fresh_dir("fpcav_cli_det2");
    const std::string args = "q-scan --q-air 4 --out ";
    REQUIRE(run_cli(args + dir1.string()).exit_code == 0);
    REQUIRE(run_cli(args + dir2.string()).exit_code == 0);
    CHECK(slurp(dir1 / "q_scan.csv") == slurp(dir2 / "q_scan.csv"));
    CHECK(slurp(dir1 / "lambda_scan.csv") == slurp(dir2 / "lambda_scan.csv"));
    CHECK(slurp(dir1 / "manifest.json") == slurp(dir2 / "manifest.json"));

    const fs::path config = dir1 / "map.json";
    std::ofstream(config) << R"({"sweep": {"air_gap_nm": {"min": 900.0, "max": 1300.0},
                                 "map_lambda_nm": {"min": 632.0, "max": 642.0, "samples": 21}}})";
    const std::string map_args = "mode-map --config " + config.string() + " --out ";
    REQUIRE(run_cli(map_args + (dir1 / "m").string()).exit_code == 0);
    REQUIRE(run_cli(map_args + (dir2 / "m").string()).exit_code == 0);
    CHECK(slurp(dir1 / "m" / "mode_map.csv") == slurp(dir2 / "m" / "mode_map.csv"));
}

TEST_CASE("roughness sweep orders the wavelength scans") {
    const auto dir = fresh_dir("fpcav_cli_sweep");
    const fs::path config = dir / "config.json";
    fs::create_directories(dir);
    std::ofstream(config) << R"({"sweep": {"sigma_values_nm": [0.0, 0.3, 0.47],
                                 "scan_lambda_nm": {"min": 628.0, "max": 640.0, "step": 2.0}}})";
    const auto result = run_cli("q-scan --config " + config.string() + " --out " + dir.string());
    REQUIRE(result.exit_code == 0);
    const auto rows = parse_csv(dir / "lambda_scan.csv", 4);
    // group by sigma: rougher surfaces cost Q at every wavelength
    std::map<double, std::map<double, double>> by_sigma;
    for (const auto& row : rows) by_sigma[row[1]][row[0]] = row[3];
    REQUIRE(by_sigma.size() == 3);
    for (const auto& [lambda, q_smooth] : by_sigma[0.0]) {
        CHECK(q_smooth > by_sigma[0.3][lambda]);
        CHECK(by_sigma[0.3][lambda] > by_sigma[0.47][lambda]);
    }
}

TEST_CASE("mode map rows are ordered and labelled") {
    const auto dir = fresh_dir("fpcav_cli_map");
    const fs::path config = dir / "config.json";
    fs::create_directories(dir);
    // a small window keeps the refined map quick
    std::ofstream(config) << R"({"sweep": {"air_gap_nm": {"min": 900.0, "max": 1400.0},
                                 "map_lambda_nm": {"min": 630.0, "max": 645.0, "samples": 31}}})";
    const auto result = run_cli("mode-map --config " + config.string() + " --out " + dir.string());
    REQUIRE(result.exit_code == 0);
    const std::string text = slurp(dir / "mode_map.csv");
    CHECK(text.rfind("t_a_nm,lambda_nm,q_air,confinement", 0) == 0);
    CHECK(text.find("diamond_confined") != std::string::npos);
    const auto rows = parse_csv(dir / "mode_map.csv", 2);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][0] >= rows[i - 1][0]);
}

TEST_CASE("no-membrane map contains only linear air branches") {
    const auto dir = fresh_dir("fpcav_cli_bare_map");
    const fs::path config = dir / "config.json";
    fs::create_directories(dir);
    std::ofstream(config) << R"({"assembly": {"membrane": {"present": false}},
                                 "sweep": {"air_gap_nm": {"min": 900.0, "max": 1400.0},
                                           "map_lambda_nm": {"min": 630.0, "max": 645.0, "samples": 31}}})";
    const auto result = run_cli("mode-map --config " + config.string() + " --out " + dir.string());
    REQUIRE(result.exit_code == 0);
    const std::string text = slurp(dir / "mode_map.csv");
    CHECK(text.find("diamond_confined") == std::string::npos);
    CHECK(text.find("air_confined") != std::string::npos);
}

TEST_CASE("q-scan shows the clipping turnover") {
    const auto dir = fresh_dir("fpcav_cli_qscan");
    const fs::path config = dir / "config.json";
    fs::create_directories(dir);
    std::ofstream(config) << R"({"assembly": {"membrane": {"present": false}, "tilt_deg": 0.25}})";
    const auto result = run_cli("q-scan --config " + config.string() + " --out " + dir.string());
    REQUIRE(result.exit_code == 0);
    const auto rows = parse_csv(dir / "q_scan.csv", 4);
    REQUIRE(rows.size() == 10);
    // rising flank then a drop past the turnover
    CHECK(rows[1][2] > rows[0][2]);
    CHECK(rows.back()[2] < rows[6][2]);
}

TEST_CASE("purcell report reproduces the headline prediction") {
    const auto dir = fresh_dir("fpcav_cli_purcell");
    const fs::path config = dir / "config.json";
    fs::create_directories(dir);
    // canonical diamond-confined geometry carries the published numbers
    std::ofstream(config) << R"({"assembly": {"membrane": {"thickness_nm": 727.666}},
                                 "purcell": {"q_override": 221000.0},
                                 "sweep": {"q_air": {"min": 3, "max": 5}}})";
    const auto result = run_cli("purcell --config " + config.string() + " --out " + dir.string());
    REQUIRE(result.exit_code == 0);
    const std::string report = slurp(dir / "emitter_report.txt");
    auto value_of = [&](const std::string& key) {
        const auto pos = report.find(key + " = ");
        REQUIRE(pos != std::string::npos);
        return std::stod(report.substr(pos + key.size() + 3));
    };
    CHECK(value_of("purcell_factor") == doctest::Approx(309.0).epsilon(0.05));
    CHECK(value_of("eta_zpl") == doctest::Approx(0.89).epsilon(0.01));
    CHECK(value_of("tau_cav") == doctest::Approx(1.42).epsilon(0.05));
    const auto rows = parse_csv(dir / "purcell_vs_q.csv", 6);
    CHECK(rows.size() == 4 * 3);  // two thicknesses x two roughness values x three modes
}

TEST_CASE("q-scan writes the loss-budget document") {
    const auto dir = fresh_dir("fpcav_cli_budget");
    REQUIRE(run_cli("q-scan --out " + dir.string()).exit_code == 0);
    const std::string budget = slurp(dir / "budget.txt");
    for (const char* key : {"transmission_top", "transmission_bottom", "loss_scatter", "loss_clip", "loss_total",
                            "finesse", "q_factor"}) {
        CHECK(budget.find(key) != std::string::npos);
    }
}

TEST_CASE("emitter placement away from the antinode is honoured") {
    const auto dir = fresh_dir("fpcav_cli_emitter_z");
    const fs::path config = dir / "config.json";
    fs::create_directories(dir);
    // first run reports the antinode position
    std::ofstream(config) << R"({"sweep": {"q_air": {"min": 4, "max": 4}}})";
    REQUIRE(run_cli("purcell --config " + config.string() + " --out " + dir.string()).exit_code == 0);
    const std::string base = slurp(dir / "emitter_report.txt");
    const auto pos = base.find("emitter_z = antinode ");
    REQUIRE(pos != std::string::npos);
    const double antinode = std::stod(base.substr(pos + 21));
    const auto v_pos = base.find("v_eff = ");
    const double v_base = std::stod(base.substr(v_pos + 8));
    // second run places the emitter off the antinode
    std::ofstream(config) << R"({"sweep": {"q_air": {"min": 4, "max": 4}},
                                 "emitter": {"z_nm": )"
                          << (antinode - 40.0) << "}}";
    REQUIRE(run_cli("purcell --config " + config.string() + " --out " + dir.string()).exit_code == 0);
    const std::string moved = slurp(dir / "emitter_report.txt");
    const double v_moved = std::stod(moved.substr(moved.find("v_eff = ") + 8));
    CHECK(v_moved > v_base);
}

TEST_CASE("vanishing Q override flags the free-space limit") {
    const auto dir = fresh_dir("fpcav_cli_purcell_free");
    const fs::path config = dir / "config.json";
    fs::create_directories(dir);
    std::ofstream(config) << R"({"sweep": {"q_air": {"min": 4, "max": 4}}})";
    const auto result =
        run_cli("purcell --q-override 1e-6 --config " + config.string() + " --out " + dir.string());
    REQUIRE(result.exit_code == 0);
    const std::string report = slurp(dir / "emitter_report.txt");
    CHECK(report.find("free_space_limit = true") != std::string::npos);
}

TEST_CASE("purcell with the measured Q gives the conservative factor") {
    const auto dir = fresh_dir("fpcav_cli_purcell_meas");
    const fs::path config = dir / "config.json";
    fs::create_directories(dir);
    std::ofstream(config) << R"({"assembly": {"membrane": {"thickness_nm": 727.666}},
                                 "sweep": {"q_air": {"min": 4, "max": 4}}})";
    const auto result =
        run_cli("purcell --q-override 121700 --config " + config.string() + " --out " + dir.string());
    REQUIRE(result.exit_code == 0);
    const std::string report = slurp(dir / "emitter_report.txt");
    const auto pos = report.find("purcell_factor = ");
    const double purcell = std::stod(report.substr(pos + 17));
    CHECK(purcell == doctest::Approx(170.0).epsilon(0.05));
}

TEST_CASE("fit self-tests round-trip") {
    SUBCASE("crater") {
        const auto dir = fresh_dir("fpcav_cli_fit_crater");
        const auto result = run_cli("fit crater --self-test --out " + dir.string());
        REQUIRE(result.exit_code == 0);
        const std::string report = slurp(dir / "fit_result.txt");
        const auto pos = report.find("radius_of_curvature_um = ");
        REQUIRE(pos != std::string::npos);
        CHECK(std::stod(report.substr(pos + 25)) == doctest::Approx(19.7).epsilon(1e-6));
        CHECK(report.find("converged = true") != std::string::npos);
    }

    SUBCASE("linewidth with seeded noise is reproducible") {
        const auto dir1 = fresh_dir("fpcav_cli_fit_lw1");
        const auto dir2 = fresh_dir("fpcav_cli_fit_lw2");
        const std::string args = "fit linewidth --self-test --noise 0.01 --seed 42 --out ";
        REQUIRE(run_cli(args + dir1.string()).exit_code == 0);
        REQUIRE(run_cli(args + dir2.string()).exit_code == 0);
        CHECK(slurp(dir1 / "fit_result.txt") == slurp(dir2 / "fit_result.txt"));
        CHECK(slurp(dir1 / "input_synthetic.csv") == slurp(dir2 / "input_synthetic.csv"));
    }

    SUBCASE("clipping against the bare-cavity scan") {
        const auto dir = fresh_dir("fpcav_cli_fit_clip");
        const fs::path config = dir / "config.json";
        fs::create_directories(dir);
        std::ofstream(config) << R"({"assembly": {"membrane": {"present": false}, "tilt_deg": 0.2}})";
        const auto result =
            run_cli("fit clipping --self-test --config " + config.string() + " --out " + dir.string());
        REQUIRE(result.exit_code == 0);
        const std::string report = slurp(dir / "fit_result.txt");
        const auto pos = report.find("extent_diameter_um = ");
        REQUIRE(pos != std::string::npos);
        CHECK(std::stod(report.substr(pos + 21)) == doctest::Approx(5.9).epsilon(1e-3));
    }
}

TEST_CASE("manifest echoes the fully resolved configuration") {
    const auto dir = fresh_dir("fpcav_cli_manifest");
    REQUIRE(run_cli("spectrum --out " + dir.string()).exit_code == 0);
    const std::string manifest = slurp(dir / "manifest.json");
    // defaults made explicit
    for (const char* key : {"\"pairs\": 14", "\"pairs\": 15", "\"roughness_nm\": 0.3", "\"tau0_ns\": 12.6",
                            "\"lambda0_nm\": 637.7", "\"outputs\"", "\"version\""}) {
        CHECK(manifest.find(key) != std::string::npos);
    }
}
