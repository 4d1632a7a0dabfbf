#include <doctest.h>

#include <cstring>
#include <string>
#include <vector>

#include "fpcav.h"

namespace {

struct StackHandle {
    fpcav_stack* ptr = nullptr;
    ~StackHandle() { fpcav_stack_free(ptr); }
};

struct AssemblyHandle {
    fpcav_assembly* ptr = nullptr;
    ~AssemblyHandle() { fpcav_assembly_free(ptr); }
};

fpcav_assembly* make_experiment(StackHandle& top, StackHandle& bottom, double t_d, double sigma) {
    REQUIRE(fpcav_dbr_create(625.0, 14, 2.11, 1.46, 1.0, 1.46, 1, &top.ptr) == FPCAV_OK);
    REQUIRE(fpcav_dbr_create(625.0, 15, 2.11, 1.46, 1.0, 1.46, 1, &bottom.ptr) == FPCAV_OK);
    fpcav_assembly* assembly = nullptr;
    REQUIRE(fpcav_assembly_create(top.ptr, bottom.ptr, &assembly) == FPCAV_OK);
    if (t_d > 0) REQUIRE(fpcav_assembly_set_membrane(assembly, 2.41, 0.0, t_d, sigma) == FPCAV_OK);
    REQUIRE(fpcav_assembly_set_geometry(assembly, 21.0, 0.64, 5.9, 0.0) == FPCAV_OK);
    return assembly;
}

}  // namespace

TEST_CASE("version and status names") {
    CHECK(std::string(fpcav_version()) == "0.1.0");
    CHECK(std::string(fpcav_status_name(FPCAV_OK)) == "ok");
    CHECK(std::string(fpcav_status_name(FPCAV_ERR_UNSTABLE)) == "unstable");
}

TEST_CASE("invalid inputs map to error codes with messages") {
    StackHandle stack;
    REQUIRE(fpcav_stack_create(1.0, 0.0, 1.46, 0.0, &stack.ptr) == FPCAV_OK);
    CHECK(fpcav_stack_add_layer(stack.ptr, 1.46, 0.0, -120.0, 0.0) == FPCAV_ERR_INVALID_ARGUMENT);
    CHECK(std::string(fpcav_last_error()).find("thickness") != std::string::npos);
    CHECK(fpcav_stack_add_layer(nullptr, 1.46, 0.0, 120.0, 0.0) == FPCAV_ERR_INVALID_ARGUMENT);

    double waist = 0.0;
    CHECK(fpcav_beam_waist_curved(637.7, 21.0, 25.0, &waist) == FPCAV_ERR_UNSTABLE);

    double center = 0.0;
    const double wl[3] = {600.0, 610.0, 620.0};
    const double low_r[3] = {0.1, 0.2, 0.1};
    CHECK(fpcav_stopband_center(wl, low_r, 3, 0.99, &center) == FPCAV_ERR_NOT_FOUND);
}

TEST_CASE("stack response matches the direct quarter-wave value") {
    StackHandle stack;
    REQUIRE(fpcav_dbr_create(625.0, 14, 2.11, 1.46, 1.0, 1.46, 1, &stack.ptr) == FPCAV_OK);
    std::vector<double> grid;
    for (double w = 540.0; w <= 720.0; w += 0.1) grid.push_back(w);
    std::vector<double> refl(grid.size()), trans(grid.size()), absorb(grid.size());
    REQUIRE(fpcav_stack_response(stack.ptr, grid.data(), grid.size(), refl.data(), trans.data(), absorb.data()) ==
            FPCAV_OK);
    double center = 0.0;
    REQUIRE(fpcav_stopband_center(grid.data(), refl.data(), grid.size(), 0.99, &center) == FPCAV_OK);
    CHECK(center == doctest::Approx(625.0).epsilon(2.0 / 625.0));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(std::abs(refl[i] + trans[i] + absorb[i] - 1.0) < 1e-9);
    }
}

TEST_CASE("assembly pipeline through the C surface") {
    StackHandle top, bottom;
    AssemblyHandle assembly;
    assembly.ptr = make_experiment(top, bottom, 733.0, 0.3);

    double gap = 0.0;
    int accessible = -1;
    REQUIRE(fpcav_resonant_gap(assembly.ptr, 631.9, 4, &gap, &accessible) == FPCAV_OK);
    CHECK(gap == doctest::Approx(1058.2).epsilon(1e-3));
    CHECK(accessible == 1);

    fpcav_budget budget{};
    REQUIRE(fpcav_assembly_budget(assembly.ptr, 631.9, 4, 0, &budget) == FPCAV_OK);
    CHECK(budget.finesse == doctest::Approx(12734.0).epsilon(1e-3));
    CHECK(budget.q_air == 4);

    std::vector<fpcav_budget> rows(6);
    REQUIRE(fpcav_assembly_q_scan(assembly.ptr, 631.9, 3, 8, 1, rows.data()) == FPCAV_OK);
    CHECK(rows[0].q_air == 3);
    CHECK(rows[5].q_air == 8);
    CHECK(rows[5].q_factor > rows[0].q_factor);

    fpcav_mode_map* map = nullptr;
    REQUIRE(fpcav_assembly_mode_map(assembly.ptr, 700.0, 1500.0, 620.0, 650.0, 31, 0, &map) == FPCAV_OK);
    size_t count = 0;
    REQUIRE(fpcav_mode_map_size(map, &count) == FPCAV_OK);
    CHECK(count > 50);
    fpcav_mode_point point{};
    REQUIRE(fpcav_mode_map_entry(map, 0, &point) == FPCAV_OK);
    CHECK(point.air_gap_nm >= 700.0);
    CHECK(fpcav_mode_map_entry(map, count, &point) == FPCAV_ERR_INVALID_ARGUMENT);
    fpcav_mode_map_free(map);

    double slope = 0.0;
    REQUIRE(fpcav_dispersion_slope(assembly.ptr, 637.7, 4, 637.7 / 8.0, &slope) == FPCAV_OK);
    CHECK(slope == doctest::Approx(0.104).epsilon(0.05));

    fpcav_quantized quantized{};
    fpcav_field* field = nullptr;
    REQUIRE(fpcav_assembly_quantized_mode(assembly.ptr, 637.7, 4, 64, &quantized, &field) == FPCAV_OK);
    CHECK(quantized.e_vac_max_kV_m > 40.0);
    CHECK(quantized.v_eff_lambda_n3 > 40.0);
    size_t field_count = 0;
    REQUIRE(fpcav_field_size(field, &field_count) == FPCAV_OK);
    CHECK(field_count > 1000);
    std::vector<double> z(field_count), amp(field_count);
    REQUIRE(fpcav_field_data(field, z.data(), amp.data(), nullptr) == FPCAV_OK);
    CHECK(z.front() == 0.0);
    fpcav_field_free(field);

    // off-antinode placement costs mode volume
    double v_eff_off = 0.0, e_vac_off = 0.0;
    int node_flag = -1;
    REQUIRE(fpcav_assembly_mode_volume_at(assembly.ptr, 637.7, 4, 64, quantized.antinode_z_nm - 30.0, &v_eff_off,
                                          &e_vac_off, &node_flag) == FPCAV_OK);
    CHECK(v_eff_off > quantized.v_eff_lambda_n3);
    CHECK(node_flag == 0);

    double purcell = 0.0, beta = 0.0;
    REQUIRE(fpcav_purcell_factor(221000.0, 54.17, &purcell, &beta) == FPCAV_OK);
    CHECK(purcell == doctest::Approx(309.0).epsilon(0.02));

    fpcav_emitter_report report{};
    REQUIRE(fpcav_emitter_report_compute(purcell, 12.6, 0.0255, 0.017246444, 54730.0, quantized.omega_rad_s, 221000.0,
                                         &report) == FPCAV_OK);
    CHECK(report.tau_cav_ns == doctest::Approx(1.42).epsilon(0.011));
}

TEST_CASE("classification and helpers through the C surface") {
    int confinement = -1;
    double detuning = -1.0;
    REQUIRE(fpcav_classify_confinement(2.75 * 637.7 / 2.41, 2.41, 637.7, &confinement, &detuning) == FPCAV_OK);
    CHECK(confinement == 0);
    CHECK(detuning < 1e-9);
    REQUIRE(fpcav_classify_confinement(3.00 * 637.7 / 2.41, 2.41, 637.7, &confinement, &detuning) == FPCAV_OK);
    CHECK(confinement == 1);

    double l_eff = 0.0;
    REQUIRE(fpcav_effective_length(4, 0, 0, 21.0, 637.7, &l_eff) == FPCAV_OK);
    CHECK(l_eff == doctest::Approx(1.301).epsilon(2e-3));

    double r_scale = 0.0, t_scale = 0.0;
    REQUIRE(fpcav_rough_interface_factors(0.0, 2.41, 1.0, 631.9, &r_scale, &t_scale) == FPCAV_OK);
    CHECK(r_scale == 1.0);
    CHECK(t_scale == 1.0);

    double loss = 0.0;
    REQUIRE(fpcav_clipping_loss(5.9, 21.0, 0.0, 1.05, &loss) == FPCAV_OK);
    CHECK(loss == doctest::Approx(1.39e-7).epsilon(0.01));
}

TEST_CASE("fits through the C surface") {
    std::vector<double> r(101), z(101);
    REQUIRE(fpcav_synth_crater(19.7, 0.64, r.size(), 8.0, 0.0, 0, r.data(), z.data()) == FPCAV_OK);
    fpcav_fit_result crater{};
    REQUIRE(fpcav_fit_crater(r.data(), z.data(), r.size(), &crater) == FPCAV_OK);
    CHECK(crater.converged == 1);
    CHECK(crater.parameters[0] == doctest::Approx(19.7).epsilon(1e-6));
    CHECK(crater.parameters[1] == doctest::Approx(0.64).epsilon(1e-6));
    double circle = 0.0;
    REQUIRE(fpcav_fit_crater_circle(r.data(), z.data(), r.size(), 0.85, &circle) == FPCAV_OK);
    CHECK(circle == doctest::Approx(19.7).epsilon(0.25));

    std::vector<double> x(1201), y(1201);
    REQUIRE(fpcav_synth_linewidth_trace(x.size(), 2.86, 5.0, 2.2, 0.6, 0.25, 0.0, 0, x.data(), y.data()) == FPCAV_OK);
    fpcav_fit_result linewidth{};
    double dnu = 0.0, q_factor = 0.0;
    REQUIRE(fpcav_fit_linewidth(x.data(), y.data(), x.size(), 5.0, 631.9, &linewidth, &dnu, &q_factor) == FPCAV_OK);
    CHECK(dnu == doctest::Approx(2.86).epsilon(1e-6));
    CHECK(q_factor == doctest::Approx(165650.0).epsilon(0.005));

    const int q_air[5] = {3, 4, 5, 6, 7};
    const double q_values[5] = {109404.0, 120904.0, 132404.0, 143904.0, 155404.0};
    fpcav_fit_result finesse_fit{};
    double finesse = 0.0, q0 = 0.0;
    REQUIRE(fpcav_fit_finesse(q_air, q_values, 5, 7, &finesse_fit, &finesse, &q0) == FPCAV_OK);
    CHECK(finesse == doctest::Approx(11500.0).epsilon(1e-9));
    CHECK(q0 == doctest::Approx(74904.0).epsilon(1e-9));

    StackHandle top, bottom;
    AssemblyHandle assembly;
    assembly.ptr = make_experiment(top, bottom, 0.0, 0.0);
    std::vector<int> q_modes;
    std::vector<double> q_meas;
    std::vector<fpcav_budget> rows(10);
    REQUIRE(fpcav_assembly_q_scan(assembly.ptr, 631.9, 3, 12, 1, rows.data()) == FPCAV_OK);
    for (const auto& row : rows) {
        q_modes.push_back(row.q_air);
        q_meas.push_back(row.q_factor);
    }
    fpcav_clipping_fit clip{};
    REQUIRE(fpcav_fit_clipping(assembly.ptr, 631.9, q_modes.data(), q_meas.data(), q_modes.size(), 5.0, 7.0, 0.0,
                               0.4, 21, &clip) == FPCAV_OK);
    CHECK(clip.extent_diameter_um == doctest::Approx(5.9).epsilon(1e-4));
    CHECK(clip.tilt_deg == doctest::Approx(0.0).epsilon(1e-4));

    const double q_exp[3] = {1.0e5, 1.1e5, 1.2e5};
    const double q_sim[3] = {2.0e5, 2.2e5, 2.4e5};
    double per_point[3] = {0, 0, 0};
    double mean = 0.0;
    REQUIRE(fpcav_delta_q0(q_exp, q_sim, 3, per_point, &mean) == FPCAV_OK);
    CHECK(per_point[1] == doctest::Approx(1.1e5));
    CHECK(mean == doctest::Approx(1.1e5));
}

TEST_CASE("synthetic generators are deterministic across calls") {
    std::vector<double> x1(128), y1(128), x2(128), y2(128);
    REQUIRE(fpcav_synth_linewidth_trace(128, 2.0, 5.0, 2.0, 0.5, 0.2, 0.03, 42, x1.data(), y1.data()) == FPCAV_OK);
    REQUIRE(fpcav_synth_linewidth_trace(128, 2.0, 5.0, 2.0, 0.5, 0.2, 0.03, 42, x2.data(), y2.data()) == FPCAV_OK);
    CHECK(std::memcmp(y1.data(), y2.data(), sizeof(double) * 128) == 0);
}
