#pragma once

#include "fpcav/types.hpp"

namespace fpcav {

struct RoughInterface {
    double sigma_q_nm{0.0};
    double n_before{1.0};
    double n_after{1.0};
};

struct RoughnessScales {
    double reflection_scale{1.0};
    double transmission_scale{1.0};
};

// Scalar Debye-Waller modification of the specular Fresnel amplitudes:
//   r -> r * exp(-2 (2 pi sigma n_before / lambda)^2)
//   t -> t * exp(-1/2 (2 pi sigma (n_before - n_after) / lambda)^2)
// sigma = 0 reproduces the smooth coefficients exactly.
RoughnessScales rough_interface_factors(const RoughInterface& iface, double wavelength_nm);

struct ClippingGeometry {
    double extent_diameter_um{0.0};       // D, spherical extent of the curved mirror
    double radius_of_curvature_um{0.0};   // R_cav
    double tilt_deg{0.0};                 // theta
    double crater_depth_um{0.0};          // d
};

// Round-trip clipping loss exp(-D^2 / (2 w_I^2)) [1 + (a D / w_I^2)^2] with
// a = R_cav * theta (theta in radians).
double clipping_loss(const ClippingGeometry& geom, double beam_radius_um);

struct LossBudget {
    double transmission_top{0.0};
    double transmission_bottom{0.0};
    double loss_scatter{0.0};
    double loss_absorb{0.0};
    double loss_clip{0.0};
    double loss_total{0.0};
    double finesse{0.0};
    double q_factor{0.0};
    // resolved resonance context
    double wavelength_nm{0.0};
    double air_gap_nm{0.0};
    double effective_length_nm{0.0};  // group round-trip length / 2, penetration included
    int q_air{0};
    bool accessible{true};
};

// Sum the channels into loss_total and derive finesse = 2 pi / loss_total and
// q_factor = (4 pi L_cav / lambda) / loss_total.
void finalize_budget(LossBudget& budget);

}  // namespace fpcav
