#include "fpcav.h"

#include <cstring>
#include <string>

#include "fpcav/estimation.hpp"
#include "fpcav/gaussian_cavity.hpp"
#include "fpcav/purcell.hpp"
#include "fpcav/transfer_matrix.hpp"

namespace {

thread_local std::string g_last_error;

fpcav_status to_status(fpcav::Error::Kind kind) {
    using Kind = fpcav::Error::Kind;
    switch (kind) {
        case Kind::invalid_argument: return FPCAV_ERR_INVALID_ARGUMENT;
        case Kind::parse: return FPCAV_ERR_PARSE;
        case Kind::not_found: return FPCAV_ERR_NOT_FOUND;
        case Kind::unstable: return FPCAV_ERR_UNSTABLE;
        case Kind::no_convergence: return FPCAV_ERR_NO_CONVERGENCE;
        case Kind::io: return FPCAV_ERR_IO;
        case Kind::internal: return FPCAV_ERR_INTERNAL;
    }
    return FPCAV_ERR_INTERNAL;
}

template <typename Fn>
fpcav_status guarded(Fn&& fn) {
    try {
        fn();
        return FPCAV_OK;
    } catch (const fpcav::Error& e) {
        g_last_error = e.what();
        return to_status(e.kind);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return FPCAV_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return FPCAV_ERR_INTERNAL;
    }
}

fpcav_status bad_argument(const char* message) {
    g_last_error = message;
    return FPCAV_ERR_INVALID_ARGUMENT;
}

void fill_fit_result(const fpcav::FitResult& fit, fpcav_fit_result* out) {
    std::memset(out, 0, sizeof(*out));
    out->parameter_count = fit.parameters.size();
    for (std::size_t i = 0; i < fit.parameters.size() && i < FPCAV_FIT_MAX_PARAMS; ++i) {
        out->parameters[i] = fit.parameters[i];
        out->uncertainties[i] = i < fit.uncertainties.size() ? fit.uncertainties[i] : 0.0;
    }
    out->residual_rms = fit.residual_rms;
    out->converged = fit.converged ? 1 : 0;
    out->iterations = fit.iterations;
}

void fill_budget(const fpcav::LossBudget& budget, fpcav_budget* out) {
    out->transmission_top = budget.transmission_top;
    out->transmission_bottom = budget.transmission_bottom;
    out->loss_scatter = budget.loss_scatter;
    out->loss_absorb = budget.loss_absorb;
    out->loss_clip = budget.loss_clip;
    out->loss_total = budget.loss_total;
    out->finesse = budget.finesse;
    out->q_factor = budget.q_factor;
    out->wavelength_nm = budget.wavelength_nm;
    out->air_gap_nm = budget.air_gap_nm;
    out->effective_length_nm = budget.effective_length_nm;
    out->q_air = budget.q_air;
    out->accessible = budget.accessible ? 1 : 0;
}

}  // namespace

struct fpcav_stack {
    fpcav::LayerStack stack;
};

struct fpcav_assembly {
    fpcav::CavityAssembly assembly;
};

struct fpcav_field {
    fpcav::FieldProfile profile;
};

struct fpcav_mode_map {
    fpcav::ModeMap map;
};

extern "C" {

const char* fpcav_version(void) { return "0.1.0"; }

const char* fpcav_status_name(fpcav_status status) {
    switch (status) {
        case FPCAV_OK: return "ok";
        case FPCAV_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case FPCAV_ERR_PARSE: return "parse_error";
        case FPCAV_ERR_NOT_FOUND: return "not_found";
        case FPCAV_ERR_UNSTABLE: return "unstable";
        case FPCAV_ERR_NO_CONVERGENCE: return "no_convergence";
        case FPCAV_ERR_IO: return "io_error";
        case FPCAV_ERR_INTERNAL: return "internal_error";
    }
    return "unknown";
}

const char* fpcav_last_error(void) { return g_last_error.c_str(); }

fpcav_status fpcav_stack_create(double n_incidence, double kappa_incidence, double n_exit, double kappa_exit,
                                fpcav_stack** out) {
    if (!out) return bad_argument("out must not be null");
    return guarded([&] {
        fpcav::require(n_incidence > 0.0 && n_exit > 0.0, "media indices must be positive");
        fpcav::require(kappa_incidence >= 0.0 && kappa_exit >= 0.0, "extinction coefficients must be non-negative");
        auto* handle = new fpcav_stack;
        handle->stack.incidence = {n_incidence, kappa_incidence};
        handle->stack.exit = {n_exit, kappa_exit};
        *out = handle;
    });
}

fpcav_status fpcav_stack_add_layer(fpcav_stack* stack, double n, double kappa, double thickness_nm,
                                   double roughness_nm) {
    if (!stack) return bad_argument("stack must not be null");
    return guarded([&] {
        fpcav::require(n > 0.0, "layer index must be positive");
        fpcav::require(kappa >= 0.0, "extinction coefficient must be non-negative");
        fpcav::require(thickness_nm > 0.0, "layer thickness must be positive");
        fpcav::require(roughness_nm >= 0.0, "roughness must be non-negative");
        stack->stack.layers.push_back({{n, kappa}, thickness_nm, roughness_nm});
    });
}

fpcav_status fpcav_dbr_create(double center_nm, int pairs, double n_high, double n_low, double n_incidence,
                              double n_substrate, int outermost_high, fpcav_stack** out) {
    if (!out) return bad_argument("out must not be null");
    return guarded([&] {
        auto* handle = new fpcav_stack;
        handle->stack = fpcav::build_quarter_wave_dbr(
            center_nm, pairs, n_high, n_low, {n_substrate, 0.0},
            outermost_high ? fpcav::DbrOutermost::high : fpcav::DbrOutermost::low, {n_incidence, 0.0});
        *out = handle;
    });
}

void fpcav_stack_free(fpcav_stack* stack) { delete stack; }

fpcav_status fpcav_stack_response(const fpcav_stack* stack, const double* wavelengths_nm, size_t count,
                                  double* reflectance, double* transmittance, double* absorptance) {
    if (!stack || !wavelengths_nm || count == 0) return bad_argument("stack and a non-empty grid are required");
    return guarded([&] {
        const std::vector<double> grid(wavelengths_nm, wavelengths_nm + count);
        const auto response = fpcav::stack_response(stack->stack, grid);
        for (size_t i = 0; i < count; ++i) {
            if (reflectance) reflectance[i] = response.reflectance[i];
            if (transmittance) transmittance[i] = response.transmittance[i];
            if (absorptance) absorptance[i] = response.absorptance[i];
        }
    });
}

fpcav_status fpcav_stopband_center(const double* wavelengths_nm, const double* reflectance, size_t count,
                                   double threshold, double* center_nm) {
    if (!wavelengths_nm || !reflectance || !center_nm || count == 0) return bad_argument("arrays must not be null");
    return guarded([&] {
        fpcav::SpectralResponse response;
        response.wavelength_nm.assign(wavelengths_nm, wavelengths_nm + count);
        response.reflectance.assign(reflectance, reflectance + count);
        *center_nm = fpcav::stopband_center(response, threshold);
    });
}

fpcav_status fpcav_stack_field(const fpcav_stack* stack, double wavelength_nm, int samples_per_layer,
                               fpcav_field** out) {
    if (!stack || !out) return bad_argument("stack and out must not be null");
    return guarded([&] {
        auto* handle = new fpcav_field;
        handle->profile = fpcav::field_distribution(stack->stack, wavelength_nm, samples_per_layer);
        *out = handle;
    });
}

fpcav_status fpcav_field_size(const fpcav_field* field, size_t* count) {
    if (!field || !count) return bad_argument("field and count must not be null");
    *count = field->profile.z_nm.size();
    return FPCAV_OK;
}

fpcav_status fpcav_field_data(const fpcav_field* field, double* z_nm, double* amplitude, double* local_index) {
    if (!field) return bad_argument("field must not be null");
    const auto& profile = field->profile;
    for (size_t i = 0; i < profile.z_nm.size(); ++i) {
        if (z_nm) z_nm[i] = profile.z_nm[i];
        if (amplitude) amplitude[i] = profile.amplitude[i];
        if (local_index) local_index[i] = profile.local_index[i];
    }
    return FPCAV_OK;
}

void fpcav_field_free(fpcav_field* field) { delete field; }

fpcav_status fpcav_assembly_create(const fpcav_stack* top_mirror, const fpcav_stack* bottom_mirror,
                                   fpcav_assembly** out) {
    if (!top_mirror || !bottom_mirror || !out) return bad_argument("mirrors and out must not be null");
    return guarded([&] {
        auto* handle = new fpcav_assembly;
        handle->assembly.top_mirror = top_mirror->stack;
        handle->assembly.bottom_mirror = bottom_mirror->stack;
        *out = handle;
    });
}

fpcav_status fpcav_assembly_set_membrane(fpcav_assembly* assembly, double n, double kappa, double thickness_nm,
                                         double roughness_nm) {
    if (!assembly) return bad_argument("assembly must not be null");
    return guarded([&] {
        fpcav::require(n > 0.0 && kappa >= 0.0 && thickness_nm > 0.0 && roughness_nm >= 0.0,
                       "bad membrane parameters");
        assembly->assembly.membrane = fpcav::Layer{{n, kappa}, thickness_nm, roughness_nm};
    });
}

fpcav_status fpcav_assembly_clear_membrane(fpcav_assembly* assembly) {
    if (!assembly) return bad_argument("assembly must not be null");
    assembly->assembly.membrane.reset();
    return FPCAV_OK;
}

fpcav_status fpcav_assembly_set_geometry(fpcav_assembly* assembly, double radius_of_curvature_um,
                                         double crater_depth_um, double extent_diameter_um, double tilt_deg) {
    if (!assembly) return bad_argument("assembly must not be null");
    return guarded([&] {
        fpcav::require(radius_of_curvature_um > 0.0 && crater_depth_um > 0.0, "crater geometry must be positive");
        fpcav::require(extent_diameter_um > 0.0 && tilt_deg >= 0.0, "extent must be positive, tilt non-negative");
        assembly->assembly.crater = {radius_of_curvature_um, crater_depth_um};
        assembly->assembly.extent_diameter_um = extent_diameter_um;
        assembly->assembly.tilt_deg = tilt_deg;
    });
}

void fpcav_assembly_free(fpcav_assembly* assembly) { delete assembly; }

fpcav_status fpcav_resonant_gap(const fpcav_assembly* assembly, double wavelength_nm, int q_air, double* air_gap_nm,
                                int* accessible) {
    if (!assembly || !air_gap_nm) return bad_argument("assembly and air_gap_nm must not be null");
    return guarded([&] {
        const fpcav::CavitySolver solver(assembly->assembly);
        const auto res = solver.resonance(wavelength_nm, q_air);
        *air_gap_nm = res.air_gap_nm;
        if (accessible) *accessible = res.accessible ? 1 : 0;
    });
}

fpcav_status fpcav_assembly_budget(const fpcav_assembly* assembly, double wavelength_nm, int q_air,
                                   int include_clipping, fpcav_budget* out) {
    if (!assembly || !out) return bad_argument("assembly and out must not be null");
    return guarded([&] {
        const fpcav::CavitySolver solver(assembly->assembly);
        fill_budget(solver.budget(wavelength_nm, q_air, include_clipping != 0), out);
    });
}

fpcav_status fpcav_assembly_q_scan(const fpcav_assembly* assembly, double wavelength_nm, int q_min, int q_max,
                                   int include_clipping, fpcav_budget* out) {
    if (!assembly || !out) return bad_argument("assembly and out must not be null");
    if (q_min < 1 || q_max < q_min) return bad_argument("mode-number range must be ordered and positive");
    return guarded([&] {
        const auto rows =
            fpcav::q_vs_mode_number(assembly->assembly, wavelength_nm, q_min, q_max, include_clipping != 0);
        for (std::size_t i = 0; i < rows.size(); ++i) fill_budget(rows[i].budget, &out[i]);
    });
}

fpcav_status fpcav_assembly_mode_map(const fpcav_assembly* assembly, double gap_min_nm, double gap_max_nm,
                                     double wavelength_min_nm, double wavelength_max_nm, int wavelength_samples,
                                     int refine_dips, fpcav_mode_map** out) {
    if (!assembly || !out) return bad_argument("assembly and out must not be null");
    return guarded([&] {
        auto* handle = new fpcav_mode_map;
        handle->map = fpcav::mode_map(assembly->assembly, gap_min_nm, gap_max_nm, wavelength_min_nm,
                                      wavelength_max_nm, wavelength_samples, refine_dips != 0);
        *out = handle;
    });
}

fpcav_status fpcav_mode_map_size(const fpcav_mode_map* map, size_t* count) {
    if (!map || !count) return bad_argument("map and count must not be null");
    *count = map->map.points.size();
    return FPCAV_OK;
}

fpcav_status fpcav_mode_map_entry(const fpcav_mode_map* map, size_t index, fpcav_mode_point* out) {
    if (!map || !out) return bad_argument("map and out must not be null");
    if (index >= map->map.points.size()) return bad_argument("index out of range");
    const auto& point = map->map.points[index];
    out->air_gap_nm = point.air_gap_nm;
    out->wavelength_nm = point.wavelength_nm;
    out->q_air = point.q_air;
    out->confinement = static_cast<int>(point.confinement);
    return FPCAV_OK;
}

void fpcav_mode_map_free(fpcav_mode_map* map) { delete map; }

fpcav_status fpcav_dispersion_slope(const fpcav_assembly* assembly, double wavelength0_nm, int q_air,
                                    double half_span_nm, double* slope) {
    if (!assembly || !slope) return bad_argument("assembly and slope must not be null");
    return guarded(
        [&] { *slope = fpcav::dispersion_slope(assembly->assembly, wavelength0_nm, q_air, half_span_nm); });
}

fpcav_status fpcav_classify_confinement(double membrane_thickness_nm, double membrane_index, double wavelength0_nm,
                                        int* confinement, double* detuning) {
    if (!confinement) return bad_argument("confinement must not be null");
    return guarded([&] {
        const auto cls = fpcav::classify_confinement(membrane_thickness_nm, membrane_index, wavelength0_nm);
        *confinement = static_cast<int>(cls.kind);
        if (detuning) *detuning = cls.detuning;
    });
}

fpcav_status fpcav_effective_length(int q, int n, int m, double radius_of_curvature_um, double wavelength_nm,
                                    double* effective_length_um) {
    if (!effective_length_um) return bad_argument("out must not be null");
    return guarded([&] {
        *effective_length_um = fpcav::effective_length_um({q, n, m, q}, radius_of_curvature_um, wavelength_nm);
    });
}

fpcav_status fpcav_beam_waist_curved(double wavelength_nm, double radius_of_curvature_um, double cavity_length_um,
                                     double* waist_um) {
    if (!waist_um) return bad_argument("out must not be null");
    return guarded(
        [&] { *waist_um = fpcav::beam_waist_curved_um(wavelength_nm, radius_of_curvature_um, cavity_length_um); });
}

fpcav_status fpcav_beam_waist_flat(double wavelength_nm, double radius_of_curvature_um, double cavity_length_um,
                                   double* waist_um) {
    if (!waist_um) return bad_argument("out must not be null");
    return guarded(
        [&] { *waist_um = fpcav::beam_waist_flat_um(wavelength_nm, radius_of_curvature_um, cavity_length_um); });
}

fpcav_status fpcav_clipping_loss(double extent_diameter_um, double radius_of_curvature_um, double tilt_deg,
                                 double beam_radius_um, double* loss) {
    if (!loss) return bad_argument("out must not be null");
    return guarded([&] {
        *loss = fpcav::clipping_loss({extent_diameter_um, radius_of_curvature_um, tilt_deg, 1.0}, beam_radius_um);
    });
}

fpcav_status fpcav_rough_interface_factors(double sigma_nm, double n_before, double n_after, double wavelength_nm,
                                           double* reflection_scale, double* transmission_scale) {
    if (!reflection_scale || !transmission_scale) return bad_argument("outputs must not be null");
    return guarded([&] {
        const auto scales = fpcav::rough_interface_factors({sigma_nm, n_before, n_after}, wavelength_nm);
        *reflection_scale = scales.reflection_scale;
        *transmission_scale = scales.transmission_scale;
    });
}

fpcav_status fpcav_assembly_quantized_mode(const fpcav_assembly* assembly, double wavelength_nm, int q_air,
                                           int samples_per_layer, fpcav_quantized* out, fpcav_field** field_out) {
    if (!assembly || !out) return bad_argument("assembly and out must not be null");
    return guarded([&] {
        const auto mode =
            fpcav::assembly_quantized_mode(assembly->assembly, wavelength_nm, q_air, samples_per_layer);
        const auto volume = fpcav::effective_mode_volume(mode);
        out->waist_um = mode.waist_um;
        out->e_vac_max_kV_m = mode.e_vac_max_membrane_V_m * 1e-3;
        out->v_eff_lambda_n3 = volume.in_lambda_over_n_cubed;
        out->v_eff_um3 = volume.in_um3;
        out->antinode_z_nm = mode.antinode_z_nm;
        out->omega_rad_s = mode.omega_rad_s;
        if (field_out) {
            auto* handle = new fpcav_field;
            handle->profile = mode.field;
            *field_out = handle;
        }
    });
}

fpcav_status fpcav_assembly_mode_volume_at(const fpcav_assembly* assembly, double wavelength_nm, int q_air,
                                           int samples_per_layer, double emitter_z_nm, double* v_eff_lambda_n3,
                                           double* e_vac_V_m, int* near_node) {
    if (!assembly || !v_eff_lambda_n3) return bad_argument("assembly and v_eff must not be null");
    return guarded([&] {
        const auto mode =
            fpcav::assembly_quantized_mode(assembly->assembly, wavelength_nm, q_air, samples_per_layer);
        const auto volume = fpcav::effective_mode_volume(mode, emitter_z_nm);
        *v_eff_lambda_n3 = volume.in_lambda_over_n_cubed;
        if (e_vac_V_m) *e_vac_V_m = std::abs(fpcav::field_at(mode.field, emitter_z_nm));
        if (near_node) *near_node = volume.near_node ? 1 : 0;
    });
}

fpcav_status fpcav_purcell_factor(double q_factor, double v_eff_lambda_n3, double* purcell, double* beta) {
    if (!purcell) return bad_argument("purcell must not be null");
    return guarded([&] {
        const auto result = fpcav::purcell_factor(q_factor, v_eff_lambda_n3);
        *purcell = result.purcell_factor;
        if (beta) *beta = result.beta;
    });
}

fpcav_status fpcav_emitter_report_compute(double purcell, double tau0_ns, double xi0, double dipole_nm_over_e,
                                          double e_vac_V_m, double omega_rad_s, double q_factor,
                                          fpcav_emitter_report* out) {
    if (!out) return bad_argument("out must not be null");
    return guarded([&] {
        fpcav::EmitterSpec emitter;
        emitter.tau0_ns = tau0_ns;
        emitter.xi0 = xi0;
        emitter.dipole_nm_over_e = dipole_nm_over_e;
        const auto report = fpcav::emitter_report(purcell, emitter, e_vac_V_m, omega_rad_s, q_factor);
        out->purcell_factor = report.purcell_factor;
        out->beta = report.beta;
        out->tau_cav_ns = report.tau_cav_ns;
        out->delta_nu_cav_MHz = report.delta_nu_cav_MHz;
        out->eta_zpl = report.eta_zpl;
        out->eta_zpl_jc = report.eta_zpl_jc;
        out->g_zpl_rad_s = report.g_zpl_rad_s;
        out->kappa_cav_rad_s = report.kappa_cav_rad_s;
        out->gamma0_rad_s = report.gamma0_rad_s;
    });
}

fpcav_status fpcav_fit_crater(const double* r_um, const double* z_um, size_t count, fpcav_fit_result* out) {
    if (!r_um || !z_um || !out) return bad_argument("arrays and out must not be null");
    return guarded([&] {
        const auto fit = fpcav::fit_crater(std::vector<double>(r_um, r_um + count),
                                           std::vector<double>(z_um, z_um + count));
        fill_fit_result(fit.fit, out);
    });
}

fpcav_status fpcav_fit_crater_circle(const double* r_um, const double* z_um, size_t count, double depth_fraction,
                                     double* radius_um) {
    if (!r_um || !z_um || !radius_um) return bad_argument("arrays and out must not be null");
    return guarded([&] {
        *radius_um = fpcav::fit_crater_circle_um(std::vector<double>(r_um, r_um + count),
                                                 std::vector<double>(z_um, z_um + count), depth_fraction);
    });
}

fpcav_status fpcav_fit_linewidth(const double* abscissa, const double* signal, size_t count,
                                 double sideband_spacing_GHz, double wavelength_nm, fpcav_fit_result* out,
                                 double* linewidth_GHz, double* q_factor) {
    if (!abscissa || !signal || !out) return bad_argument("arrays and out must not be null");
    return guarded([&] {
        fpcav::ScanTrace trace;
        trace.abscissa.assign(abscissa, abscissa + count);
        trace.signal.assign(signal, signal + count);
        trace.sideband_spacing_GHz = sideband_spacing_GHz;
        const auto fit = fpcav::fit_linewidth(trace, wavelength_nm);
        fill_fit_result(fit.fit, out);
        if (linewidth_GHz) *linewidth_GHz = fit.linewidth_GHz;
        if (q_factor) *q_factor = fit.q_factor;
    });
}

fpcav_status fpcav_fit_finesse(const int* q_air, const double* q_factor, size_t count, int q_max_linear,
                               fpcav_fit_result* out, double* finesse, double* q0) {
    if (!q_air || !q_factor || !out) return bad_argument("arrays and out must not be null");
    return guarded([&] {
        const auto fit = fpcav::fit_finesse(std::vector<int>(q_air, q_air + count),
                                            std::vector<double>(q_factor, q_factor + count), q_max_linear);
        fill_fit_result(fit.fit, out);
        if (finesse) *finesse = fit.finesse;
        if (q0) *q0 = fit.q0;
    });
}

fpcav_status fpcav_fit_clipping(const fpcav_assembly* assembly, double wavelength_nm, const int* q_air,
                                const double* q_factor, size_t count, double d_min_um, double d_max_um,
                                double theta_min_deg, double theta_max_deg, int grid_points,
                                fpcav_clipping_fit* out) {
    if (!assembly || !q_air || !q_factor || !out) return bad_argument("assembly, arrays and out must not be null");
    return guarded([&] {
        const std::vector<int> modes(q_air, q_air + count);
        int q_lo = modes.front(), q_hi = modes.front();
        for (int q : modes) {
            q_lo = std::min(q_lo, q);
            q_hi = std::max(q_hi, q);
        }
        const auto model = fpcav::make_q_model(assembly->assembly, wavelength_nm, q_lo, q_hi);
        const auto fit = fpcav::fit_clipping(modes, std::vector<double>(q_factor, q_factor + count), model, d_min_um,
                                             d_max_um, theta_min_deg, theta_max_deg, grid_points);
        out->extent_diameter_um = fit.extent_diameter_um;
        out->tilt_deg = fit.tilt_deg;
        out->d_low_um = fit.d_low_um;
        out->d_high_um = fit.d_high_um;
        out->theta_low_deg = fit.theta_low_deg;
        out->theta_high_deg = fit.theta_high_deg;
        out->mse_min = fit.mse_min;
        out->mse_threshold_95 = fit.mse_threshold_95;
        out->boundary_warning = fit.boundary_warning ? 1 : 0;
        out->converged = fit.converged ? 1 : 0;
    });
}

fpcav_status fpcav_delta_q0(const double* q_exp, const double* q_sim, size_t count, double* per_point, double* mean) {
    if (!q_exp || !q_sim || !mean) return bad_argument("arrays and mean must not be null");
    return guarded([&] {
        const std::vector<double> exp_series(q_exp, q_exp + count), sim_series(q_sim, q_sim + count);
        const auto series = fpcav::delta_q0_series(exp_series, sim_series);
        if (per_point) {
            for (size_t i = 0; i < series.size(); ++i) per_point[i] = series[i];
        }
        *mean = fpcav::delta_q0_mean(exp_series, sim_series);
    });
}

fpcav_status fpcav_synth_linewidth_trace(size_t samples, double linewidth_GHz, double sideband_spacing_GHz,
                                         double scale_GHz_per_unit, double dip_depth, double sideband_depth,
                                         double noise_sigma, unsigned long long seed, double* abscissa,
                                         double* signal) {
    if (!abscissa || !signal) return bad_argument("output arrays must not be null");
    return guarded([&] {
        const auto trace = fpcav::synth_linewidth_trace(samples, linewidth_GHz, sideband_spacing_GHz,
                                                        scale_GHz_per_unit, dip_depth, sideband_depth, noise_sigma,
                                                        seed);
        for (size_t i = 0; i < samples; ++i) {
            abscissa[i] = trace.abscissa[i];
            signal[i] = trace.signal[i];
        }
    });
}

fpcav_status fpcav_synth_crater(double radius_of_curvature_um, double depth_um, size_t points, double r_max_um,
                                double noise_sigma_um, unsigned long long seed, double* r_um, double* z_um) {
    if (!r_um || !z_um) return bad_argument("output arrays must not be null");
    return guarded([&] {
        std::vector<double> r, z;
        fpcav::synth_crater(radius_of_curvature_um, depth_um, points, r_max_um, r, z, noise_sigma_um, seed);
        for (size_t i = 0; i < points; ++i) {
            r_um[i] = r[i];
            z_um[i] = z[i];
        }
    });
}

}  // extern "C"
