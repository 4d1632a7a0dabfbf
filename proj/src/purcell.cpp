#include "fpcav/purcell.hpp"

#include <algorithm>
#include <cmath>

namespace fpcav {

namespace {

double max_field_position(const QuantizedMode& mode, double z_start, double z_end) {
    // coarse scan then golden-section polish on the exact per-layer field
    const int samples = 2000;
    double best_z = z_start, best = -1.0;
    for (int i = 0; i <= samples; ++i) {
        const double z = z_start + (z_end - z_start) * i / samples;
        const double a = std::abs(field_at(mode.field, z));
        if (a > best) {
            best = a;
            best_z = z;
        }
    }
    const double h = (z_end - z_start) / samples;
    double lo = std::max(z_start, best_z - h), hi = std::min(z_end, best_z + h);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = -std::abs(field_at(mode.field, x1)), f2 = -std::abs(field_at(mode.field, x2));
    while (hi - lo > 1e-6) {
        if (f1 < f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = -std::abs(field_at(mode.field, x1));
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = -std::abs(field_at(mode.field, x2));
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

QuantizedMode quantize_field(const FieldProfile& profile, double waist_um, double wavelength_nm,
                             double membrane_z_start_nm, double membrane_z_end_nm, double membrane_index) {
    require(waist_um > 0.0, "beam waist must be positive");
    require(wavelength_nm > 0.0, "wavelength must be positive");
    require(!profile.layers.empty(), "field profile is empty");

    const double integral_nm = weighted_intensity_integral_nm(profile);
    require(integral_nm > 0.0, "zero-field profile cannot be quantised");

    const double omega = 2.0 * constants::pi * constants::c0 / (wavelength_nm * 1e-9);
    const double w_m = waist_um * 1e-6;
    const double integral_m = integral_nm * 1e-9;
    // 2 pi (1/4) w^2 . eps0 integral(n^2 |E|^2 dz) = hbar omega / 2
    const double scale2 = (constants::hbar * omega / 2.0) /
                          ((constants::pi / 2.0) * w_m * w_m * constants::eps0 * integral_m);
    const double scale = std::sqrt(scale2);

    QuantizedMode mode;
    mode.field = profile;
    for (auto& a : mode.field.amplitude) a *= scale;
    for (auto& layer : mode.field.layers) {
        layer.forward *= scale;
        layer.backward *= scale;
    }
    mode.waist_um = waist_um;
    mode.omega_rad_s = omega;
    mode.wavelength_nm = wavelength_nm;
    mode.membrane_z_start_nm = membrane_z_start_nm;
    mode.membrane_z_end_nm = membrane_z_end_nm;
    mode.membrane_index = membrane_index;
    mode.antinode_z_nm = max_field_position(mode, membrane_z_start_nm, membrane_z_end_nm);
    mode.e_vac_max_membrane_V_m = std::abs(field_at(mode.field, mode.antinode_z_nm));
    return mode;
}

ModeVolume effective_mode_volume(const QuantizedMode& mode, std::optional<double> emitter_z_nm) {
    const double z0 = emitter_z_nm.value_or(mode.antinode_z_nm);
    require(z0 >= mode.membrane_z_start_nm && z0 <= mode.membrane_z_end_nm, "emitter must sit inside the membrane");
    const double e_vac = std::abs(field_at(mode.field, z0));
    const double n0 = mode.membrane_index;
    ModeVolume volume;
    volume.near_node = e_vac < 1e-3 * mode.e_vac_max_membrane_V_m;
    const double denom = constants::eps0 * n0 * n0 * e_vac * e_vac;
    const double v_m3 = (constants::hbar * mode.omega_rad_s / 2.0) / denom;
    const double unit = std::pow(mode.wavelength_nm * 1e-9 / n0, 3);
    volume.in_um3 = v_m3 * 1e18;
    volume.in_lambda_over_n_cubed = v_m3 / unit;
    return volume;
}

PurcellResult purcell_factor(double q_factor, double v_eff_lambda_over_n_cubed) {
    require(q_factor >= 0.0, "Q must be non-negative");
    require(v_eff_lambda_over_n_cubed > 0.0, "mode volume must be positive");
    PurcellResult result;
    result.purcell_factor = 1.0 + 3.0 / (4.0 * constants::pi * constants::pi) * q_factor / v_eff_lambda_over_n_cubed;
    result.beta = (result.purcell_factor - 1.0) / result.purcell_factor;
    return result;
}

EmitterCouplingReport emitter_report(double purcell, const EmitterSpec& emitter, double e_vac_V_m,
                                     double omega_rad_s, double q_factor) {
    require(emitter.tau0_ns > 0.0, "lifetime must be positive");
    require(emitter.xi0 > 0.0 && emitter.xi0 < 1.0, "branching fraction must lie in (0, 1)");
    require(purcell >= 1.0, "Purcell factor must be at least 1");

    EmitterCouplingReport report;
    report.purcell_factor = purcell;
    report.beta = (purcell - 1.0) / purcell;
    const double gamma0 = 1.0 / (emitter.tau0_ns * 1e-9);  // 1/s
    const double enhancement = 1.0 + emitter.xi0 * (purcell - 1.0);
    report.tau_cav_ns = emitter.tau0_ns / enhancement;
    report.delta_nu_cav_MHz = enhancement * gamma0 / (2.0 * constants::pi) * 1e-6;
    report.eta_zpl = emitter.xi0 * purcell / enhancement;
    report.gamma0_rad_s = gamma0;

    const double dipole_Cm = emitter.dipole_nm_over_e * 1e-9 * constants::elementary_charge;
    report.g_zpl_rad_s = dipole_Cm * e_vac_V_m / constants::hbar;
    report.kappa_cav_rad_s = q_factor > 0.0 ? omega_rad_s / q_factor : 0.0;
    if (report.kappa_cav_rad_s > 0.0) {
        const double cooperativity = 4.0 * report.g_zpl_rad_s * report.g_zpl_rad_s /
                                     (report.kappa_cav_rad_s * report.gamma0_rad_s);
        report.eta_zpl_jc = cooperativity / (cooperativity + 1.0);
    }
    return report;
}

QuantizedMode assembly_quantized_mode(const CavityAssembly& assembly, double wavelength_nm, int q_air,
                                      int sampling_per_layer) {
    require(assembly.membrane.has_value(), "quantised emitter modes need a membrane");
    const CavitySolver solver(assembly);
    const auto res = solver.resonance(wavelength_nm, q_air);
    const FlatStack full = solver.full_stack(res.air_gap_nm);
    const FieldProfile profile = field_distribution(full, wavelength_nm, sampling_per_layer);

    // the membrane is the layer just below the air gap
    const std::size_t n_bottom = solver.bottom_from_gap().layer_count();
    const auto& membrane_layer = profile.layers[n_bottom - 1];
    const double waist = beam_waist_flat_um(wavelength_nm, assembly.crater.radius_of_curvature_um,
                                            solver.geometric_length_um(res.air_gap_nm));
    return quantize_field(profile, waist, wavelength_nm, membrane_layer.z_start_nm,
                          membrane_layer.z_start_nm + membrane_layer.thickness_nm, assembly.membrane->index.n);
}

std::vector<PurcellPoint> purcell_vs_mode_number(const CavityAssembly& assembly, double wavelength_nm, int q_air_min,
                                                 int q_air_max, int sampling_per_layer, bool include_clipping) {
    require(q_air_min >= 1 && q_air_max >= q_air_min, "mode-number range must be ordered and positive");
    const CavitySolver solver(assembly);
    std::vector<PurcellPoint> out;
    for (int q = q_air_min; q <= q_air_max; ++q) {
        const auto budget = solver.budget(wavelength_nm, q, include_clipping);
        const auto mode = assembly_quantized_mode(assembly, wavelength_nm, q, sampling_per_layer);
        const auto volume = effective_mode_volume(mode);
        const auto purcell = purcell_factor(budget.q_factor, volume.in_lambda_over_n_cubed);
        out.push_back({q, budget.q_factor, volume.in_lambda_over_n_cubed, mode.e_vac_max_membrane_V_m * 1e-3,
                       purcell.purcell_factor});
    }
    return out;
}

}  // namespace fpcav
