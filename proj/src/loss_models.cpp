#include "fpcav/loss_models.hpp"

#include <cmath>

namespace fpcav {

RoughnessScales rough_interface_factors(const RoughInterface& iface, double wavelength_nm) {
    require(wavelength_nm > 0.0, "wavelength must be positive");
    require(iface.sigma_q_nm >= 0.0, "roughness must be non-negative");
    if (iface.sigma_q_nm == 0.0) return {1.0, 1.0};
    const double k_sigma = 2.0 * constants::pi * iface.sigma_q_nm / wavelength_nm;
    const double phi_r = k_sigma * iface.n_before;
    const double phi_t = k_sigma * (iface.n_before - iface.n_after);
    return {std::exp(-2.0 * phi_r * phi_r), std::exp(-0.5 * phi_t * phi_t)};
}

double clipping_loss(const ClippingGeometry& geom, double beam_radius_um) {
    require(beam_radius_um > 0.0, "beam radius must be positive");
    require(geom.extent_diameter_um > 0.0, "mirror extent must be positive");
    require(geom.radius_of_curvature_um > 0.0, "radius of curvature must be positive");
    require(geom.tilt_deg >= 0.0, "tilt must be non-negative");
    const double w2 = beam_radius_um * beam_radius_um;
    const double a = geom.radius_of_curvature_um * geom.tilt_deg * constants::pi / 180.0;
    const double tilt_term = a * geom.extent_diameter_um / w2;
    return std::exp(-geom.extent_diameter_um * geom.extent_diameter_um / (2.0 * w2)) * (1.0 + tilt_term * tilt_term);
}

void finalize_budget(LossBudget& budget) {
    budget.loss_total = budget.transmission_top + budget.transmission_bottom + budget.loss_scatter +
                        budget.loss_absorb + budget.loss_clip;
    require(budget.loss_total > 0.0, "total round-trip loss must be positive");
    budget.finesse = 2.0 * constants::pi / budget.loss_total;
    if (budget.wavelength_nm > 0.0 && budget.effective_length_nm > 0.0) {
        budget.q_factor = 4.0 * constants::pi * budget.effective_length_nm / budget.wavelength_nm / budget.loss_total;
    }
}

}  // namespace fpcav
