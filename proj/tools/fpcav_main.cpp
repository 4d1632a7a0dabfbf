// fpcav command-line front end. All physics goes through the C API in
// fpcav.h; this tool owns configuration, validation, CSV/manifest output.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fpcav.h"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[noreturn]] void die(const std::string& message) { throw CliError(message); }

void check_api(fpcav_status status, const std::string& context) {
    if (status != FPCAV_OK) {
        die(context + ": " + fpcav_status_name(status) + ": " + fpcav_last_error());
    }
}

std::string fmt(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.8e", value);
    return buffer;
}

// ---- config handling -------------------------------------------------------

json default_config() {
    json mirror_top = {{"pairs", 14},   {"center_nm", 625.0},    {"n_high", 2.11},
                       {"n_low", 1.46}, {"n_substrate", 1.46},   {"outermost", "high"}};
    json mirror_bottom = mirror_top;
    mirror_bottom["pairs"] = 15;
    return json{
        {"assembly",
         {{"top_mirror", mirror_top},
          {"bottom_mirror", mirror_bottom},
          {"membrane",
           {{"present", true}, {"thickness_nm", 733.0}, {"n", 2.41}, {"kappa", 0.0}, {"roughness_nm", 0.3}}},
          {"crater", {{"radius_of_curvature_um", 21.0}, {"depth_um", 0.64}}},
          {"extent_diameter_um", 5.9},
          {"tilt_deg", 0.0}}},
        {"loss", {{"roughness", true}, {"absorption", true}, {"clipping", true}}},
        {"lambda0_nm", 637.7},
        {"q_air", 4},
        {"sweep",
         {{"lambda_nm", {{"min", 540.0}, {"max", 720.0}, {"step", 0.25}}},
          {"air_gap_nm", {{"min", 600.0}, {"max", 2100.0}}},
          {"map_lambda_nm", {{"min", 612.0}, {"max", 660.0}, {"samples", 193}}},
          {"scan_lambda_nm", {{"min", 626.0}, {"max", 648.0}, {"step", 0.5}}},
          {"q_air", {{"min", 3}, {"max", 12}}},
          {"sigma_values_nm", json::array({0.3})},
          {"kappa_values", json::array({0.0})}}},
        {"emitter", {{"tau0_ns", 12.6}, {"xi0", 0.0255}, {"dipole_nm_over_e", 0.017246444}, {"z_nm", nullptr}}},
        {"purcell", {{"q_override", nullptr}, {"compare_thicknesses_nm", nullptr}}},
        {"fit",
         {{"wavelength_nm", 631.9},
          {"sideband_GHz", 5.0},
          {"q_max_linear", 7},
          {"clipping",
           {{"d_min_um", 5.0}, {"d_max_um", 7.0}, {"theta_min_deg", 0.0}, {"theta_max_deg", 0.5}, {"grid", 41}}}}},
        {"stack", {{"mirror", "top"}}},
    };
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) die("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        die(path + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + e.what());
    }
}

double need_number(const json& config, const std::string& pointer) {
    const json::json_pointer p(pointer);
    if (!config.contains(p) || !config.at(p).is_number()) die("config field '" + pointer + "' must be a number");
    return config.at(p).get<double>();
}

double need_positive(const json& config, const std::string& pointer) {
    const double v = need_number(config, pointer);
    if (!(v > 0.0)) die("config field '" + pointer + "': must be > 0");
    return v;
}

double need_non_negative(const json& config, const std::string& pointer) {
    const double v = need_number(config, pointer);
    if (v < 0.0) die("config field '" + pointer + "': must be >= 0");
    return v;
}

int need_int(const json& config, const std::string& pointer, int minimum) {
    const json::json_pointer p(pointer);
    if (!config.contains(p) || !config.at(p).is_number_integer())
        die("config field '" + pointer + "' must be an integer");
    const int v = config.at(p).get<int>();
    if (v < minimum) die("config field '" + pointer + "': must be >= " + std::to_string(minimum));
    return v;
}

// ---- handles ---------------------------------------------------------------

struct Stack {
    fpcav_stack* ptr = nullptr;
    Stack() = default;
    Stack(const Stack&) = delete;
    Stack& operator=(const Stack&) = delete;
    ~Stack() { fpcav_stack_free(ptr); }
};

struct Assembly {
    fpcav_assembly* ptr = nullptr;
    Assembly() = default;
    Assembly(const Assembly&) = delete;
    Assembly& operator=(const Assembly&) = delete;
    ~Assembly() { fpcav_assembly_free(ptr); }
};

void build_mirror(const json& config, const std::string& pointer, Stack& stack) {
    const int pairs = need_int(config, pointer + "/pairs", 1);
    const double center = need_positive(config, pointer + "/center_nm");
    const double n_high = need_positive(config, pointer + "/n_high");
    const double n_low = need_positive(config, pointer + "/n_low");
    const double n_sub = need_positive(config, pointer + "/n_substrate");
    const std::string outermost = config.at(json::json_pointer(pointer + "/outermost")).get<std::string>();
    if (outermost != "high" && outermost != "low") die("config field '" + pointer + "/outermost': high or low");
    check_api(fpcav_dbr_create(center, pairs, n_high, n_low, 1.0, n_sub, outermost == "high" ? 1 : 0, &stack.ptr),
              "building mirror");
}

void build_assembly(const json& config, Assembly& assembly) {
    Stack top, bottom;
    build_mirror(config, "/assembly/top_mirror", top);
    build_mirror(config, "/assembly/bottom_mirror", bottom);
    check_api(fpcav_assembly_create(top.ptr, bottom.ptr, &assembly.ptr), "building assembly");

    const bool membrane_present = config.at(json::json_pointer("/assembly/membrane/present")).get<bool>();
    if (membrane_present) {
        const double thickness = need_positive(config, "/assembly/membrane/thickness_nm");
        const double n = need_positive(config, "/assembly/membrane/n");
        double kappa = need_non_negative(config, "/assembly/membrane/kappa");
        double roughness = need_non_negative(config, "/assembly/membrane/roughness_nm");
        if (!config.at(json::json_pointer("/loss/roughness")).get<bool>()) roughness = 0.0;
        if (!config.at(json::json_pointer("/loss/absorption")).get<bool>()) kappa = 0.0;
        check_api(fpcav_assembly_set_membrane(assembly.ptr, n, kappa, thickness, roughness), "setting membrane");
    }
    check_api(fpcav_assembly_set_geometry(assembly.ptr, need_positive(config, "/assembly/crater/radius_of_curvature_um"),
                                          need_positive(config, "/assembly/crater/depth_um"),
                                          need_positive(config, "/assembly/extent_diameter_um"),
                                          need_non_negative(config, "/assembly/tilt_deg")),
              "setting geometry");
}

// ---- output ----------------------------------------------------------------

struct RunContext {
    json config;
    fs::path out_dir;
    std::string command;
    json derived = json::object();
    std::vector<std::string> outputs;
};

std::ofstream open_output(RunContext& run, const std::string& name) {
    fs::create_directories(run.out_dir);
    std::ofstream out(run.out_dir / name, std::ios::binary);
    if (!out) die("cannot open output file: " + (run.out_dir / name).string());
    run.outputs.push_back(name);
    return out;
}

void write_manifest(RunContext& run) {
    json manifest = {{"tool", "fpcav"},
                     {"version", fpcav_version()},
                     {"command", run.command},
                     {"config", run.config},
                     {"outputs", run.outputs}};
    if (!run.derived.empty()) manifest["derived"] = run.derived;
    fs::create_directories(run.out_dir);
    std::ofstream out(run.out_dir / "manifest.json", std::ios::binary);
    if (!out) die("cannot open output file: " + (run.out_dir / "manifest.json").string());
    out << manifest.dump(2) << "\n";
}

std::vector<double> lambda_grid(const json& config, const std::string& pointer) {
    const double lo = need_positive(config, pointer + "/min");
    const double hi = need_positive(config, pointer + "/max");
    const double step = need_positive(config, pointer + "/step");
    if (hi <= lo) die("config field '" + pointer + "': max must exceed min");
    std::vector<double> grid;
    for (double w = lo; w <= hi + 1e-9; w += step) grid.push_back(w);
    return grid;
}

// ---- spectrum --------------------------------------------------------------

void build_stack_from_spec(const json& config, const json& spec, Stack& stack) {
    // an explicit stack document wins over the default mirror reference
    if (spec.contains("mirror") && !spec.contains("layers") && !spec.contains("file")) {
        const std::string which = spec.at("mirror").get<std::string>();
        if (which == "top") {
            build_mirror(config, "/assembly/top_mirror", stack);
        } else if (which == "bottom") {
            build_mirror(config, "/assembly/bottom_mirror", stack);
        } else {
            die("config field '/stack/mirror': top or bottom");
        }
        return;
    }
    json doc = spec;
    if (spec.contains("file")) {
        doc = load_config(spec.at("file").get<std::string>());
    }
    if (!doc.contains("incidence") || !doc.contains("layers") || !doc.contains("exit"))
        die("stack specification needs 'incidence', 'layers' and 'exit'");
    auto medium = [&](const json& node, const std::string& where) {
        if (!node.contains("n") || !node.at("n").is_number()) die("stack field '" + where + "/n' must be a number");
        const double n = node.at("n").get<double>();
        const double kappa = node.value("kappa", 0.0);
        if (!(n > 0.0)) die("stack field '" + where + "/n': must be > 0");
        if (kappa < 0.0) die("stack field '" + where + "/kappa': must be >= 0");
        return std::pair<double, double>{n, kappa};
    };
    const auto [n_in, k_in] = medium(doc.at("incidence"), "incidence");
    const auto [n_out, k_out] = medium(doc.at("exit"), "exit");
    check_api(fpcav_stack_create(n_in, k_in, n_out, k_out, &stack.ptr), "building stack");
    std::size_t index = 0;
    for (const auto& layer : doc.at("layers")) {
        const std::string where = "layers/" + std::to_string(index);
        const auto [n, kappa] = medium(layer, where);
        const double thickness = layer.value("thickness_nm", 0.0);
        const double roughness = layer.value("roughness_nm", 0.0);
        if (!(thickness > 0.0)) die("stack field '" + where + "/thickness_nm': must be > 0");
        if (roughness < 0.0) die("stack field '" + where + "/roughness_nm': must be >= 0");
        check_api(fpcav_stack_add_layer(stack.ptr, n, kappa, thickness, roughness), "adding layer");
        ++index;
    }
}

void cmd_spectrum(RunContext& run) {
    if (run.config.at("stack").contains("layers") || run.config.at("stack").contains("file")) {
        run.config["stack"].erase("mirror");  // manifest shows the effective spec
    }
    Stack stack;
    build_stack_from_spec(run.config, run.config.at("stack"), stack);
    const auto grid = lambda_grid(run.config, "/sweep/lambda_nm");
    std::vector<double> reflectance(grid.size()), transmittance(grid.size()), absorptance(grid.size());
    check_api(fpcav_stack_response(stack.ptr, grid.data(), grid.size(), reflectance.data(), transmittance.data(),
                                   absorptance.data()),
              "computing spectrum");

    auto csv = open_output(run, "spectrum.csv");
    csv << "wavelength_nm,reflectance,transmittance,absorptance\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        csv << fmt(grid[i]) << ',' << fmt(reflectance[i]) << ',' << fmt(transmittance[i]) << ','
            << fmt(absorptance[i]) << '\n';
    }

    double center = 0.0;
    if (fpcav_stopband_center(grid.data(), reflectance.data(), grid.size(), 0.99, &center) == FPCAV_OK) {
        run.derived["stopband_center_nm"] = center;
    }
}

// ---- mode map --------------------------------------------------------------

const char* confinement_name(int value) {
    switch (value) {
        case 0: return "diamond_confined";
        case 1: return "air_confined";
        default: return "mixed";
    }
}

void cmd_mode_map(RunContext& run, bool refine) {
    Assembly assembly;
    build_assembly(run.config, assembly);
    const double gap_lo = need_positive(run.config, "/sweep/air_gap_nm/min");
    const double gap_hi = need_positive(run.config, "/sweep/air_gap_nm/max");
    const double wl_lo = need_positive(run.config, "/sweep/map_lambda_nm/min");
    const double wl_hi = need_positive(run.config, "/sweep/map_lambda_nm/max");
    const int samples = need_int(run.config, "/sweep/map_lambda_nm/samples", 2);

    fpcav_mode_map* map = nullptr;
    check_api(fpcav_assembly_mode_map(assembly.ptr, gap_lo, gap_hi, wl_lo, wl_hi, samples, refine ? 1 : 0, &map),
              "solving mode map");
    const std::unique_ptr<fpcav_mode_map, decltype(&fpcav_mode_map_free)> guard(map, &fpcav_mode_map_free);

    size_t count = 0;
    check_api(fpcav_mode_map_size(map, &count), "reading mode map");
    auto csv = open_output(run, "mode_map.csv");
    csv << "t_a_nm,lambda_nm,q_air,confinement\n";
    for (size_t i = 0; i < count; ++i) {
        fpcav_mode_point point{};
        check_api(fpcav_mode_map_entry(map, i, &point), "reading mode map");
        csv << fmt(point.air_gap_nm) << ',' << fmt(point.wavelength_nm) << ',' << point.q_air << ','
            << confinement_name(point.confinement) << '\n';
    }
    run.derived["points"] = count;
}

// ---- q scan ----------------------------------------------------------------

void write_budget_row(std::ofstream& csv, const fpcav_budget& budget) {
    csv << budget.q_air << ',' << fmt(budget.air_gap_nm) << ',' << fmt(budget.q_factor) << ','
        << fmt(budget.finesse) << ',' << fmt(budget.transmission_top) << ',' << fmt(budget.transmission_bottom)
        << ',' << fmt(budget.loss_scatter) << ',' << fmt(budget.loss_absorb) << ',' << fmt(budget.loss_clip) << ','
        << (budget.accessible ? 1 : 0) << '\n';
}

void cmd_q_scan(RunContext& run) {
    const double lambda0 = need_positive(run.config, "/lambda0_nm");
    const int q_min = need_int(run.config, "/sweep/q_air/min", 1);
    const int q_max = need_int(run.config, "/sweep/q_air/max", q_min);
    const bool clipping = run.config.at(json::json_pointer("/loss/clipping")).get<bool>();

    {
        Assembly assembly;
        build_assembly(run.config, assembly);
        std::vector<fpcav_budget> rows(q_max - q_min + 1);
        check_api(fpcav_assembly_q_scan(assembly.ptr, lambda0, q_min, q_max, clipping ? 1 : 0, rows.data()),
                  "scanning mode numbers");
        auto csv = open_output(run, "q_scan.csv");
        csv << "q_air,t_a_nm,q_factor,finesse,transmission_top,transmission_bottom,loss_scatter,loss_absorb,"
               "loss_clip,accessible\n";
        for (const auto& row : rows) write_budget_row(csv, row);
    }

    // loss-budget document for the working mode
    const int q_air = need_int(run.config, "/q_air", 1);
    {
        Assembly assembly;
        build_assembly(run.config, assembly);
        fpcav_budget budget{};
        check_api(fpcav_assembly_budget(assembly.ptr, lambda0, q_air, clipping ? 1 : 0, &budget), "budget");
        auto txt = open_output(run, "budget.txt");
        txt << "wavelength = " << fmt(budget.wavelength_nm) << " (nm)\n";
        txt << "q_air = " << budget.q_air << "\n";
        txt << "air_gap = " << fmt(budget.air_gap_nm) << " (nm)\n";
        txt << "effective_length = " << fmt(budget.effective_length_nm) << " (nm)\n";
        txt << "transmission_top = " << fmt(budget.transmission_top) << " (fraction)\n";
        txt << "transmission_bottom = " << fmt(budget.transmission_bottom) << " (fraction)\n";
        txt << "loss_scatter = " << fmt(budget.loss_scatter) << " (fraction)\n";
        txt << "loss_absorb = " << fmt(budget.loss_absorb) << " (fraction)\n";
        txt << "loss_clip = " << fmt(budget.loss_clip) << " (fraction)\n";
        txt << "loss_total = " << fmt(budget.loss_total) << " (fraction)\n";
        txt << "finesse = " << fmt(budget.finesse) << " (dimensionless)\n";
        txt << "q_factor = " << fmt(budget.q_factor) << " (dimensionless)\n";
        txt << "accessible = " << (budget.accessible ? "true" : "false") << "\n";
    }
    const double wl_lo = need_positive(run.config, "/sweep/scan_lambda_nm/min");
    const double wl_hi = need_positive(run.config, "/sweep/scan_lambda_nm/max");
    const double wl_step = need_positive(run.config, "/sweep/scan_lambda_nm/step");
    auto csv = open_output(run, "lambda_scan.csv");
    csv << "lambda_nm,sigma_nm,kappa,q_factor,finesse\n";
    for (const auto& sigma_node : run.config.at(json::json_pointer("/sweep/sigma_values_nm"))) {
        for (const auto& kappa_node : run.config.at(json::json_pointer("/sweep/kappa_values"))) {
            const double sigma = sigma_node.get<double>();
            const double kappa = kappa_node.get<double>();
            json variant = run.config;
            variant["assembly"]["membrane"]["roughness_nm"] = sigma;
            variant["assembly"]["membrane"]["kappa"] = kappa;
            Assembly assembly;
            build_assembly(variant, assembly);
            for (double wl = wl_lo; wl <= wl_hi + 1e-9; wl += wl_step) {
                fpcav_budget budget{};
                check_api(fpcav_assembly_budget(assembly.ptr, wl, q_air, clipping ? 1 : 0, &budget),
                          "wavelength scan");
                csv << fmt(wl) << ',' << fmt(sigma) << ',' << fmt(kappa) << ',' << fmt(budget.q_factor) << ','
                    << fmt(budget.finesse) << '\n';
            }
        }
    }
}

// ---- purcell ---------------------------------------------------------------

void cmd_purcell(RunContext& run, std::optional<double> q_override_flag) {
    const double lambda0 = need_positive(run.config, "/lambda0_nm");
    const int q_air = need_int(run.config, "/q_air", 1);
    const bool clipping = run.config.at(json::json_pointer("/loss/clipping")).get<bool>();

    Assembly assembly;
    build_assembly(run.config, assembly);

    fpcav_budget budget{};
    check_api(fpcav_assembly_budget(assembly.ptr, lambda0, q_air, clipping ? 1 : 0, &budget), "budget");

    fpcav_quantized quantized{};
    fpcav_field* field = nullptr;
    check_api(fpcav_assembly_quantized_mode(assembly.ptr, lambda0, q_air, 64, &quantized, &field),
              "quantised mode");
    const std::unique_ptr<fpcav_field, decltype(&fpcav_field_free)> field_guard(field, &fpcav_field_free);

    double q_used = budget.q_factor;
    const auto& override_node = run.config.at(json::json_pointer("/purcell/q_override"));
    if (q_override_flag) {
        q_used = *q_override_flag;
        run.config["purcell"]["q_override"] = q_used;
    } else if (!override_node.is_null()) {
        q_used = override_node.get<double>();
    }
    if (!(q_used > 0.0)) die("config field '/purcell/q_override': must be > 0");

    // off-antinode emitter placement, measured from the structure base
    double v_eff = quantized.v_eff_lambda_n3;
    double e_vac_emitter_V_m = quantized.e_vac_max_kV_m * 1e3;
    bool near_node = false;
    const auto& z_node = run.config.at(json::json_pointer("/emitter/z_nm"));
    if (!z_node.is_null()) {
        int node_flag = 0;
        check_api(fpcav_assembly_mode_volume_at(assembly.ptr, lambda0, q_air, 64, z_node.get<double>(), &v_eff,
                                                &e_vac_emitter_V_m, &node_flag),
                  "mode volume at emitter");
        near_node = node_flag != 0;
    }

    double purcell = 0.0, beta = 0.0;
    check_api(fpcav_purcell_factor(q_used, v_eff, &purcell, &beta), "Purcell factor");

    fpcav_emitter_report report{};
    check_api(fpcav_emitter_report_compute(purcell, need_positive(run.config, "/emitter/tau0_ns"),
                                           need_positive(run.config, "/emitter/xi0"),
                                           need_positive(run.config, "/emitter/dipole_nm_over_e"),
                                           e_vac_emitter_V_m, quantized.omega_rad_s, q_used, &report),
              "emitter report");

    const double two_pi = 6.283185307179586;
    auto txt = open_output(run, "emitter_report.txt");
    txt << "q_factor = " << fmt(q_used) << " (dimensionless)\n";
    txt << "v_eff = " << fmt(v_eff) << " ((lambda/n)^3)\n";
    txt << "v_eff_um3 = " << fmt(quantized.v_eff_um3) << " (um^3)\n";
    txt << "e_vac_max = " << fmt(quantized.e_vac_max_kV_m) << " (kV/m)\n";
    txt << "e_vac_at_emitter = " << fmt(e_vac_emitter_V_m * 1e-3) << " (kV/m)\n";
    txt << "emitter_z = " << (z_node.is_null() ? std::string("antinode ") + fmt(quantized.antinode_z_nm)
                                               : fmt(z_node.get<double>()))
        << " (nm)\n";
    if (near_node) txt << "emitter_at_node = true\n";
    txt << "beam_waist = " << fmt(quantized.waist_um) << " (um)\n";
    txt << "purcell_factor = " << fmt(report.purcell_factor) << " (dimensionless)\n";
    txt << "beta = " << fmt(report.beta) << " (dimensionless)\n";
    txt << "tau_cav = " << fmt(report.tau_cav_ns) << " (ns)\n";
    txt << "delta_nu_cav = " << fmt(report.delta_nu_cav_MHz) << " (MHz)\n";
    txt << "eta_zpl = " << fmt(report.eta_zpl) << " (fraction)\n";
    txt << "eta_zpl_jc = " << fmt(report.eta_zpl_jc) << " (fraction)\n";
    txt << "g_zpl = " << fmt(report.g_zpl_rad_s / two_pi / 1e6) << " (2pi MHz)\n";
    txt << "kappa_cav = " << fmt(report.kappa_cav_rad_s / two_pi / 1e9) << " (2pi GHz)\n";
    txt << "gamma0 = " << fmt(report.gamma0_rad_s / two_pi / 1e6) << " (2pi MHz)\n";
    if (report.purcell_factor < 1.001) txt << "free_space_limit = true\n";

    // confinement-class comparison across mode numbers
    const double n_membrane = need_positive(run.config, "/assembly/membrane/n");
    const double sigma = need_non_negative(run.config, "/assembly/membrane/roughness_nm");
    json thicknesses = run.config.at(json::json_pointer("/purcell/compare_thicknesses_nm"));
    if (thicknesses.is_null()) {
        thicknesses = json::array({2.75 * lambda0 / n_membrane, 3.00 * lambda0 / n_membrane});
        run.config["purcell"]["compare_thicknesses_nm"] = thicknesses;
    }
    const int q_min = need_int(run.config, "/sweep/q_air/min", 1);
    const int q_max = need_int(run.config, "/sweep/q_air/max", q_min);

    auto csv = open_output(run, "purcell_vs_q.csv");
    csv << "q_air,thickness_nm,sigma_nm,q_factor,v_eff_lambda_n3,purcell_factor\n";
    for (const auto& thickness_node : thicknesses) {
        const double thickness = thickness_node.get<double>();
        for (const double sigma_variant : {0.0, sigma}) {
            json variant = run.config;
            variant["assembly"]["membrane"]["present"] = true;
            variant["assembly"]["membrane"]["thickness_nm"] = thickness;
            variant["assembly"]["membrane"]["roughness_nm"] = sigma_variant;
            Assembly comparison;
            build_assembly(variant, comparison);
            for (int q = q_min; q <= q_max; ++q) {
                fpcav_budget row{};
                check_api(fpcav_assembly_budget(comparison.ptr, lambda0, q, clipping ? 1 : 0, &row), "budget");
                fpcav_quantized mode{};
                check_api(fpcav_assembly_quantized_mode(comparison.ptr, lambda0, q, 64, &mode, nullptr),
                          "quantised mode");
                double f_p = 0.0, beta_q = 0.0;
                check_api(fpcav_purcell_factor(row.q_factor, mode.v_eff_lambda_n3, &f_p, &beta_q), "Purcell");
                csv << q << ',' << fmt(thickness) << ',' << fmt(sigma_variant) << ',' << fmt(row.q_factor) << ','
                    << fmt(mode.v_eff_lambda_n3) << ',' << fmt(f_p) << '\n';
            }
        }
    }

    run.derived["purcell_factor"] = report.purcell_factor;
    run.derived["eta_zpl"] = report.eta_zpl;
}

// ---- fit -------------------------------------------------------------------

void read_csv_columns(const std::string& path, std::vector<double>& first, std::vector<double>& second) {
    std::ifstream in(path);
    if (!in) die("cannot open input file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double a = 0.0, b = 0.0;
        if (row >> a >> b) {
            first.push_back(a);
            second.push_back(b);
        }  // headers and malformed rows are skipped
    }
    if (first.empty()) die("no numeric rows in input file: " + path);
}

void write_fit_result(std::ofstream& out, const fpcav_fit_result& fit, const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < fit.parameter_count && i < names.size(); ++i) {
        out << names[i] << " = " << fmt(fit.parameters[i]) << " +- " << fmt(fit.uncertainties[i]) << "\n";
    }
    out << "residual_rms = " << fmt(fit.residual_rms) << "\n";
    out << "converged = " << (fit.converged ? "true" : "false") << "\n";
    out << "iterations = " << fit.iterations << "\n";
}

struct FitOptions {
    std::string kind;
    std::string input;
    bool self_test = false;
    double noise = 0.0;
    std::uint64_t seed = 0;
};

void cmd_fit(RunContext& run, const FitOptions& options) {
    const double wavelength = need_positive(run.config, "/fit/wavelength_nm");
    const double sideband = need_positive(run.config, "/fit/sideband_GHz");

    std::vector<double> x, y;
    if (options.self_test) {
        if (options.kind == "crater") {
            x.resize(151);
            y.resize(151);
            check_api(fpcav_synth_crater(19.7, 0.64, x.size(), 8.0, options.noise, options.seed, x.data(), y.data()),
                      "synthesising crater");
        } else if (options.kind == "linewidth") {
            x.resize(1201);
            y.resize(1201);
            check_api(fpcav_synth_linewidth_trace(x.size(), 2.86, sideband, 2.2, 0.6, 0.25, options.noise,
                                                  options.seed, x.data(), y.data()),
                      "synthesising trace");
        } else if (options.kind == "finesse" || options.kind == "clipping") {
            Assembly assembly;
            build_assembly(run.config, assembly);
            const int q_min = need_int(run.config, "/sweep/q_air/min", 1);
            const int q_max = need_int(run.config, "/sweep/q_air/max", q_min);
            std::vector<fpcav_budget> rows(q_max - q_min + 1);
            check_api(fpcav_assembly_q_scan(assembly.ptr, wavelength, q_min, q_max, 1, rows.data()), "q scan");
            for (const auto& row : rows) {
                x.push_back(row.q_air);
                y.push_back(row.q_factor);
            }
        } else {
            die("unknown fit kind: " + options.kind);
        }
        auto csv = open_output(run, "input_synthetic.csv");
        csv << (options.kind == "crater" ? "r_um,z_um" : options.kind == "linewidth" ? "abscissa,signal" : "q_air,Q")
            << "\n";
        for (std::size_t i = 0; i < x.size(); ++i) csv << fmt(x[i]) << ',' << fmt(y[i]) << '\n';
    } else {
        if (options.input.empty()) die("fit needs --input or --self-test");
        read_csv_columns(options.input, x, y);
    }

    auto out = open_output(run, "fit_result.txt");
    out << "kind = " << options.kind << "\n";
    if (options.kind == "crater") {
        fpcav_fit_result fit{};
        check_api(fpcav_fit_crater(x.data(), y.data(), x.size(), &fit), "crater fit");
        write_fit_result(out, fit, {"radius_of_curvature_um", "depth_um"});
        double circle = 0.0;
        if (fpcav_fit_crater_circle(x.data(), y.data(), x.size(), 0.5, &circle) == FPCAV_OK) {
            out << "circle_radius_um = " << fmt(circle) << "\n";
        }
        run.derived["radius_of_curvature_um"] = fit.parameters[0];
    } else if (options.kind == "linewidth") {
        fpcav_fit_result fit{};
        double dnu = 0.0, q_factor = 0.0;
        check_api(fpcav_fit_linewidth(x.data(), y.data(), x.size(), sideband, wavelength, &fit, &dnu, &q_factor),
                  "linewidth fit");
        write_fit_result(out, fit,
                         {"offset", "amp_main", "center", "amp_low", "amp_high", "sideband_offset", "hwhm"});
        out << "linewidth_GHz = " << fmt(dnu) << "\n";
        out << "q_factor = " << fmt(q_factor) << "\n";
        run.derived["q_factor"] = q_factor;
    } else if (options.kind == "finesse") {
        std::vector<int> q(x.begin(), x.end());
        fpcav_fit_result fit{};
        double finesse = 0.0, q0 = 0.0;
        check_api(fpcav_fit_finesse(q.data(), y.data(), q.size(), need_int(run.config, "/fit/q_max_linear", 2), &fit,
                                    &finesse, &q0),
                  "finesse fit");
        write_fit_result(out, fit, {"finesse", "q0"});
        run.derived["finesse"] = finesse;
    } else if (options.kind == "clipping") {
        Assembly assembly;
        build_assembly(run.config, assembly);
        std::vector<int> q(x.begin(), x.end());
        fpcav_clipping_fit fit{};
        check_api(fpcav_fit_clipping(assembly.ptr, wavelength, q.data(), y.data(), q.size(),
                                     need_positive(run.config, "/fit/clipping/d_min_um"),
                                     need_positive(run.config, "/fit/clipping/d_max_um"),
                                     need_non_negative(run.config, "/fit/clipping/theta_min_deg"),
                                     need_positive(run.config, "/fit/clipping/theta_max_deg"),
                                     need_int(run.config, "/fit/clipping/grid", 2), &fit),
                  "clipping fit");
        out << "extent_diameter_um = " << fmt(fit.extent_diameter_um) << "\n";
        out << "tilt_deg = " << fmt(fit.tilt_deg) << "\n";
        out << "d_95_low_um = " << fmt(fit.d_low_um) << "\n";
        out << "d_95_high_um = " << fmt(fit.d_high_um) << "\n";
        out << "theta_95_low_deg = " << fmt(fit.theta_low_deg) << "\n";
        out << "theta_95_high_deg = " << fmt(fit.theta_high_deg) << "\n";
        out << "mse_min = " << fmt(fit.mse_min) << "\n";
        out << "mse_threshold_95 = " << fmt(fit.mse_threshold_95) << "\n";
        out << "boundary_warning = " << (fit.boundary_warning ? "true" : "false") << "\n";
        out << "converged = " << (fit.converged ? "true" : "false") << "\n";
        run.derived["tilt_deg"] = fit.tilt_deg;
    } else {
        die("unknown fit kind: " + options.kind);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fpcav: transfer-matrix toolkit for membrane-loaded Fabry-Perot microcavities"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir = "out";
    app.add_option("--config", config_path, "JSON configuration file (merged over built-in defaults)");
    app.add_option("--out", out_dir, "output directory");

    // overrides, applied after the config file: flags win
    std::optional<double> lambda0, sigma, kappa, thickness, tilt, q_override;
    std::optional<int> q_air;
    bool no_clipping = false;
    app.add_option("--lambda0-nm", lambda0, "working wavelength override");
    app.add_option("--sigma-nm", sigma, "membrane roughness override");
    app.add_option("--kappa", kappa, "membrane extinction override");
    app.add_option("--thickness-nm", thickness, "membrane thickness override");
    app.add_option("--tilt-deg", tilt, "mirror tilt override");
    app.add_option("--q-air", q_air, "working mode number override");
    app.add_flag("--no-clipping", no_clipping, "disable clipping losses");

    auto* spectrum = app.add_subcommand("spectrum", "mirror / stack reflectance and transmittance spectra");
    auto* mode_map_cmd = app.add_subcommand("mode-map", "resonance map over air gap and wavelength");
    bool no_refine = false;
    mode_map_cmd->add_flag("--no-refine", no_refine, "skip the reflectance-dip refinement of each resonance");
    auto* q_scan = app.add_subcommand("q-scan", "Q and finesse versus mode number and wavelength");
    auto* purcell = app.add_subcommand("purcell", "vacuum field, mode volume, Purcell prediction");
    purcell->add_option("--q-override", q_override, "use this Q instead of the simulated one");

    auto* fit = app.add_subcommand("fit", "data-reduction fits");
    FitOptions fit_options;
    fit->add_option("kind", fit_options.kind, "crater | linewidth | finesse | clipping")->required();
    fit->add_option("--input", fit_options.input, "input CSV");
    fit->add_flag("--self-test", fit_options.self_test, "fit a synthetic dataset instead of a file");
    fit->add_option("--noise", fit_options.noise, "noise level for --self-test");
    fit->add_option("--seed", fit_options.seed, "random seed for --self-test noise");

    CLI11_PARSE(app, argc, argv);

    try {
        RunContext run;
        run.config = default_config();
        if (!config_path.empty()) run.config.merge_patch(load_config(config_path));
        if (lambda0) run.config["lambda0_nm"] = *lambda0;
        if (sigma) run.config["assembly"]["membrane"]["roughness_nm"] = *sigma;
        if (kappa) run.config["assembly"]["membrane"]["kappa"] = *kappa;
        if (thickness) run.config["assembly"]["membrane"]["thickness_nm"] = *thickness;
        if (tilt) run.config["assembly"]["tilt_deg"] = *tilt;
        if (q_air) run.config["q_air"] = *q_air;
        if (no_clipping) run.config["loss"]["clipping"] = false;
        run.out_dir = out_dir;

        if (spectrum->parsed()) {
            run.command = "spectrum";
            cmd_spectrum(run);
        } else if (mode_map_cmd->parsed()) {
            run.command = "mode-map";
            cmd_mode_map(run, !no_refine);
        } else if (q_scan->parsed()) {
            run.command = "q-scan";
            cmd_q_scan(run);
        } else if (purcell->parsed()) {
            run.command = "purcell";
            cmd_purcell(run, q_override);
        } else if (fit->parsed()) {
            run.command = "fit " + fit_options.kind;
            cmd_fit(run, fit_options);
        }
        write_manifest(run);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
