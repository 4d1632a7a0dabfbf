/*
 * fpcav - transfer-matrix simulator for open Fabry-Perot microcavities with a
 * dielectric membrane: mirror spectra, mode structure, loss budgets, vacuum
 * field quantisation, Purcell prediction and data-reduction fits.
 *
 * C API over the C++ core. All functions return fpcav_status; on failure the
 * thread-local message from fpcav_last_error() describes the problem. Handles
 * are opaque and freed with their matching *_free function.
 *
 * Units: lengths in nm unless the name says _um, angles in degrees, rates in
 * rad/s unless the name says otherwise.
 */
#ifndef FPCAV_H
#define FPCAV_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fpcav_status {
    FPCAV_OK = 0,
    FPCAV_ERR_INVALID_ARGUMENT = 1,
    FPCAV_ERR_PARSE = 2,
    FPCAV_ERR_NOT_FOUND = 3,
    FPCAV_ERR_UNSTABLE = 4,
    FPCAV_ERR_NO_CONVERGENCE = 5,
    FPCAV_ERR_IO = 6,
    FPCAV_ERR_INTERNAL = 7
} fpcav_status;

const char* fpcav_version(void);
const char* fpcav_status_name(fpcav_status status);
/* message from the most recent failing call on this thread */
const char* fpcav_last_error(void);

typedef struct fpcav_stack fpcav_stack;
typedef struct fpcav_assembly fpcav_assembly;
typedef struct fpcav_field fpcav_field;
typedef struct fpcav_mode_map fpcav_mode_map;

/* ---- layered media ---- */

fpcav_status fpcav_stack_create(double n_incidence, double kappa_incidence, double n_exit, double kappa_exit,
                                fpcav_stack** out);
/* roughness_nm applies to the layer's exit interface */
fpcav_status fpcav_stack_add_layer(fpcav_stack* stack, double n, double kappa, double thickness_nm,
                                   double roughness_nm);
/* ideal quarter-wave mirror seen from the incidence side; outermost_high != 0
 * puts the high-index layer next to the incidence medium */
fpcav_status fpcav_dbr_create(double center_nm, int pairs, double n_high, double n_low, double n_incidence,
                              double n_substrate, int outermost_high, fpcav_stack** out);
void fpcav_stack_free(fpcav_stack* stack);

fpcav_status fpcav_stack_response(const fpcav_stack* stack, const double* wavelengths_nm, size_t count,
                                  double* reflectance, double* transmittance, double* absorptance);
/* centre (in optical frequency) of the contiguous region with R > threshold */
fpcav_status fpcav_stopband_center(const double* wavelengths_nm, const double* reflectance, size_t count,
                                   double threshold, double* center_nm);
fpcav_status fpcav_stack_field(const fpcav_stack* stack, double wavelength_nm, int samples_per_layer,
                               fpcav_field** out);

fpcav_status fpcav_field_size(const fpcav_field* field, size_t* count);
/* any output pointer may be NULL */
fpcav_status fpcav_field_data(const fpcav_field* field, double* z_nm, double* amplitude, double* local_index);
void fpcav_field_free(fpcav_field* field);

/* ---- cavity assembly ----
 * Mirror stacks are given as seen from inside the air gap (incidence = air,
 * exit = mirror substrate). The membrane sits on the bottom mirror; its
 * roughness applies to the membrane-air interface. */

fpcav_status fpcav_assembly_create(const fpcav_stack* top_mirror, const fpcav_stack* bottom_mirror,
                                   fpcav_assembly** out);
fpcav_status fpcav_assembly_set_membrane(fpcav_assembly* assembly, double n, double kappa, double thickness_nm,
                                         double roughness_nm);
fpcav_status fpcav_assembly_clear_membrane(fpcav_assembly* assembly);
fpcav_status fpcav_assembly_set_geometry(fpcav_assembly* assembly, double radius_of_curvature_um,
                                         double crater_depth_um, double extent_diameter_um, double tilt_deg);
void fpcav_assembly_free(fpcav_assembly* assembly);

/* air gap of the q_air-th resonance (ordinal, starting at 1); accessible is 0
 * when the gap is shallower than the crater depth */
fpcav_status fpcav_resonant_gap(const fpcav_assembly* assembly, double wavelength_nm, int q_air, double* air_gap_nm,
                                int* accessible);

typedef struct fpcav_budget {
    double transmission_top;
    double transmission_bottom;
    double loss_scatter;
    double loss_absorb;
    double loss_clip;
    double loss_total;
    double finesse;
    double q_factor;
    double wavelength_nm;
    double air_gap_nm;
    double effective_length_nm;
    int q_air;
    int accessible;
} fpcav_budget;

fpcav_status fpcav_assembly_budget(const fpcav_assembly* assembly, double wavelength_nm, int q_air,
                                   int include_clipping, fpcav_budget* out);
/* budgets for q_air = q_min..q_max written to out[0..q_max-q_min] */
fpcav_status fpcav_assembly_q_scan(const fpcav_assembly* assembly, double wavelength_nm, int q_min, int q_max,
                                   int include_clipping, fpcav_budget* out);

typedef struct fpcav_mode_point {
    double air_gap_nm;
    double wavelength_nm;
    int q_air;
    int confinement; /* 0 diamond-confined, 1 air-confined, 2 mixed */
} fpcav_mode_point;

fpcav_status fpcav_assembly_mode_map(const fpcav_assembly* assembly, double gap_min_nm, double gap_max_nm,
                                     double wavelength_min_nm, double wavelength_max_nm, int wavelength_samples,
                                     int refine_dips, fpcav_mode_map** out);
fpcav_status fpcav_mode_map_size(const fpcav_mode_map* map, size_t* count);
fpcav_status fpcav_mode_map_entry(const fpcav_mode_map* map, size_t index, fpcav_mode_point* out);
void fpcav_mode_map_free(fpcav_mode_map* map);

/* d lambda / d t_a of branch q_air at wavelength0, secant over +-half_span_nm */
fpcav_status fpcav_dispersion_slope(const fpcav_assembly* assembly, double wavelength0_nm, int q_air,
                                    double half_span_nm, double* slope);
fpcav_status fpcav_classify_confinement(double membrane_thickness_nm, double membrane_index, double wavelength0_nm,
                                        int* confinement, double* detuning);

/* ---- Gaussian optics ---- */

fpcav_status fpcav_effective_length(int q, int n, int m, double radius_of_curvature_um, double wavelength_nm,
                                    double* effective_length_um);
fpcav_status fpcav_beam_waist_curved(double wavelength_nm, double radius_of_curvature_um, double cavity_length_um,
                                     double* waist_um);
fpcav_status fpcav_beam_waist_flat(double wavelength_nm, double radius_of_curvature_um, double cavity_length_um,
                                   double* waist_um);
fpcav_status fpcav_clipping_loss(double extent_diameter_um, double radius_of_curvature_um, double tilt_deg,
                                 double beam_radius_um, double* loss);
fpcav_status fpcav_rough_interface_factors(double sigma_nm, double n_before, double n_after, double wavelength_nm,
                                           double* reflection_scale, double* transmission_scale);

/* ---- vacuum field and emitter coupling ---- */

typedef struct fpcav_quantized {
    double waist_um;
    double e_vac_max_kV_m;       /* max |E_vac| inside the membrane */
    double v_eff_lambda_n3;      /* effective mode volume in (lambda/n)^3 */
    double v_eff_um3;
    double antinode_z_nm;
    double omega_rad_s;
} fpcav_quantized;

/* quantised mode at the (wavelength, q_air) resonance; field_out (optional)
 * receives the profile scaled to V/m and must be freed by the caller */
fpcav_status fpcav_assembly_quantized_mode(const fpcav_assembly* assembly, double wavelength_nm, int q_air,
                                           int samples_per_layer, fpcav_quantized* out, fpcav_field** field_out);

/* mode volume for an emitter at depth z inside the membrane (z measured like
 * the quantised-mode antinode position); near_node flags a diverging volume */
fpcav_status fpcav_assembly_mode_volume_at(const fpcav_assembly* assembly, double wavelength_nm, int q_air,
                                           int samples_per_layer, double emitter_z_nm, double* v_eff_lambda_n3,
                                           double* e_vac_V_m, int* near_node);

fpcav_status fpcav_purcell_factor(double q_factor, double v_eff_lambda_n3, double* purcell, double* beta);

typedef struct fpcav_emitter_report {
    double purcell_factor;
    double beta;
    double tau_cav_ns;
    double delta_nu_cav_MHz;
    double eta_zpl;
    double eta_zpl_jc;
    double g_zpl_rad_s;
    double kappa_cav_rad_s;
    double gamma0_rad_s;
} fpcav_emitter_report;

fpcav_status fpcav_emitter_report_compute(double purcell, double tau0_ns, double xi0, double dipole_nm_over_e,
                                          double e_vac_V_m, double omega_rad_s, double q_factor,
                                          fpcav_emitter_report* out);

/* ---- estimation ---- */

#define FPCAV_FIT_MAX_PARAMS 8

typedef struct fpcav_fit_result {
    double parameters[FPCAV_FIT_MAX_PARAMS];
    double uncertainties[FPCAV_FIT_MAX_PARAMS];
    size_t parameter_count;
    double residual_rms;
    int converged;
    int iterations;
} fpcav_fit_result;

/* parameters: [radius_of_curvature_um, depth_um] */
fpcav_status fpcav_fit_crater(const double* r_um, const double* z_um, size_t count, fpcav_fit_result* out);
fpcav_status fpcav_fit_crater_circle(const double* r_um, const double* z_um, size_t count, double depth_fraction,
                                     double* radius_um);
/* parameters: [offset, amp_main, center, amp_low, amp_high, sideband_offset, hwhm] */
fpcav_status fpcav_fit_linewidth(const double* abscissa, const double* signal, size_t count,
                                 double sideband_spacing_GHz, double wavelength_nm, fpcav_fit_result* out,
                                 double* linewidth_GHz, double* q_factor);
/* parameters: [finesse, q0] */
fpcav_status fpcav_fit_finesse(const int* q_air, const double* q_factor, size_t count, int q_max_linear,
                               fpcav_fit_result* out, double* finesse, double* q0);

typedef struct fpcav_clipping_fit {
    double extent_diameter_um;
    double tilt_deg;
    double d_low_um;
    double d_high_um;
    double theta_low_deg;
    double theta_high_deg;
    double mse_min;
    double mse_threshold_95;
    int boundary_warning;
    int converged;
} fpcav_clipping_fit;

/* MMSE search against the assembly's simulated Q(q_air) at wavelength_nm */
fpcav_status fpcav_fit_clipping(const fpcav_assembly* assembly, double wavelength_nm, const int* q_air,
                                const double* q_factor, size_t count, double d_min_um, double d_max_um,
                                double theta_min_deg, double theta_max_deg, int grid_points, fpcav_clipping_fit* out);

/* per_point may be NULL */
fpcav_status fpcav_delta_q0(const double* q_exp, const double* q_sim, size_t count, double* per_point, double* mean);

/* ---- deterministic synthetic inputs (fit self-tests) ---- */

fpcav_status fpcav_synth_linewidth_trace(size_t samples, double linewidth_GHz, double sideband_spacing_GHz,
                                         double scale_GHz_per_unit, double dip_depth, double sideband_depth,
                                         double noise_sigma, unsigned long long seed, double* abscissa,
                                         double* signal);
fpcav_status fpcav_synth_crater(double radius_of_curvature_um, double depth_um, size_t points, double r_max_um,
                                double noise_sigma_um, unsigned long long seed, double* r_um, double* z_um);

#ifdef __cplusplus
}
#endif

#endif /* FPCAV_H */
