#pragma once

#include <optional>
#include <vector>

#include "fpcav/gaussian_cavity.hpp"
#include "fpcav/types.hpp"

namespace fpcav {

struct QuantizedMode {
    FieldProfile field;              // amplitude scaled to E_vac in V/m
    double waist_um{0.0};
    double omega_rad_s{0.0};
    double wavelength_nm{0.0};
    double e_vac_max_membrane_V_m{0.0};
    double membrane_z_start_nm{0.0};
    double membrane_z_end_nm{0.0};
    double membrane_index{1.0};
    double antinode_z_nm{0.0};       // position of max |E| inside the membrane
};

// Scales a raw field profile so that 2 pi (1/4) w^2 integral(eps0 n^2 |E|^2 dz)
// equals hbar omega / 2. membrane_span marks where the emitter may sit.
QuantizedMode quantize_field(const FieldProfile& profile, double waist_um, double wavelength_nm,
                             double membrane_z_start_nm, double membrane_z_end_nm, double membrane_index);

struct ModeVolume {
    double in_lambda_over_n_cubed{0.0};
    double in_um3{0.0};
    bool near_node{false};  // emitter at a field node: V_eff diverges
};

// V_eff = (hbar omega / 2) / (eps0 eps_R(z0) |E_vac(z0)|^2). Defaults to the
// antinode inside the membrane when z0 is not given.
ModeVolume effective_mode_volume(const QuantizedMode& mode, std::optional<double> emitter_z_nm = std::nullopt);

struct PurcellResult {
    double purcell_factor{1.0};
    double beta{0.0};
};

// F_P = 1 + (3 / 4 pi^2) Q / V_eff with V_eff in (lambda/n)^3 units.
PurcellResult purcell_factor(double q_factor, double v_eff_lambda_over_n_cubed);

struct EmitterSpec {
    double tau0_ns{12.6};
    double xi0{0.0255};
    double dipole_nm_over_e{0.017246444};  // d/e in nm, Debye-Waller factor included
    std::optional<double> emitter_z_nm;    // default: membrane antinode
};

struct EmitterCouplingReport {
    double purcell_factor{1.0};
    double beta{0.0};
    double tau_cav_ns{0.0};
    double delta_nu_cav_MHz{0.0};
    double eta_zpl{0.0};
    double eta_zpl_jc{0.0};           // 4g^2/(kappa gamma0) route
    double g_zpl_rad_s{0.0};
    double kappa_cav_rad_s{0.0};
    double gamma0_rad_s{0.0};
};

// Rate-equation emitter predictions plus the Jaynes-Cummings cross-check.
// e_vac_V_m is the vacuum field at the emitter, q_factor sets kappa = omega/Q.
EmitterCouplingReport emitter_report(double purcell, const EmitterSpec& emitter, double e_vac_V_m,
                                     double omega_rad_s, double q_factor);

struct PurcellPoint {
    int q_air;
    double q_factor;
    double v_eff_lambda_over_n_cubed;
    double e_vac_max_kV_m;
    double purcell_factor;
};

// Quantized mode + budget for one assembly across longitudinal modes; the
// caller composes assemblies (confinement class, roughness on/off) into the
// comparison table.
std::vector<PurcellPoint> purcell_vs_mode_number(const CavityAssembly& assembly, double wavelength_nm, int q_air_min,
                                                 int q_air_max, int sampling_per_layer = 64,
                                                 bool include_clipping = true);

// Quantized mode of the assembly at (wavelength, q_air) using the flat-mirror
// waist with L = t_a + t_d/n_d.
QuantizedMode assembly_quantized_mode(const CavityAssembly& assembly, double wavelength_nm, int q_air,
                                      int sampling_per_layer = 64);

}  // namespace fpcav
