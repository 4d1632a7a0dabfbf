#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "fpcav/loss_models.hpp"
#include "fpcav/transfer_matrix.hpp"
#include "fpcav/types.hpp"

namespace fpcav {

struct CraterProfile {
    double radius_of_curvature_um{0.0};
    double depth_um{0.0};

    // z(r) = -d exp(-r^2 / (2 R d))
    [[nodiscard]] double height_um(double r_um) const;
};

// Planar-concave assembly. Both mirror stacks are stored as seen from inside
// the air gap (incidence = air, exit = mirror substrate). The membrane, when
// present, sits on the bottom mirror; its roughness_rms_nm applies to the
// membrane-air interface.
struct CavityAssembly {
    LayerStack top_mirror;
    LayerStack bottom_mirror;
    std::optional<Layer> membrane;
    CraterProfile crater;
    double tilt_deg{0.0};
    double extent_diameter_um{0.0};

    [[nodiscard]] ClippingGeometry clipping_geometry() const {
        return {extent_diameter_um, crater.radius_of_curvature_um, tilt_deg, crater.depth_um};
    }
};

struct ModeIndex {
    int q{1};       // longitudinal index
    int n{0}, m{0}; // transverse indices
    int q_air{1};   // air-gap longitudinal index, ordinal from the shortest gap
};

// Eq-of-motion for the Gaussian mode: L_eff = [q + (n+m+1)/pi arccos(sqrt g)] lambda/2
// with g = 1 - L_eff/R_cav, solved by fixed-point iteration to |dL| < 1e-6 nm.
double effective_length_um(const ModeIndex& mode, double radius_of_curvature_um, double wavelength_nm);

// w_I = sqrt(lambda R / pi) (R/L - 1)^(-1/4), intensity beam radius at the curved mirror.
double beam_waist_curved_um(double wavelength_nm, double radius_of_curvature_um, double cavity_length_um);

// w_0I = sqrt(lambda / pi) (L R - L^2)^(1/4), waist at the flat mirror.
double beam_waist_flat_um(double wavelength_nm, double radius_of_curvature_um, double cavity_length_um);

enum class Confinement { diamond_confined, air_confined, mixed };

struct ConfinementClass {
    Confinement kind;
    double detuning;  // distance of 4 n t / lambda0 (mod 2) from the nearest class centre, 0..0.5
};

// Classifies the membrane optical thickness in quarter-wave units at lambda0:
// nearest an odd multiple -> diamond_confined, nearest an even multiple ->
// air_confined, detuning beyond 0.25 -> mixed.
ConfinementClass classify_confinement(double membrane_thickness_nm, double membrane_index, double wavelength0_nm);
const char* to_string(Confinement c);

struct Resonance {
    double air_gap_nm{0.0};
    int q_air{0};
    bool accessible{true};  // air gap >= crater depth
};

class CavitySolver {
  public:
    explicit CavitySolver(const CavityAssembly& assembly);

    // All resonant air gaps at the given wavelength, ordered, q_air = 1,2,...
    [[nodiscard]] std::vector<Resonance> resonances(double wavelength_nm, double max_gap_nm = 8000.0) const;
    [[nodiscard]] Resonance resonance(double wavelength_nm, int q_air) const;

    // Golden-section refinement of the reflectance minimum around a solved gap.
    [[nodiscard]] double refine_gap_by_reflectance(double wavelength_nm, double air_gap_guess_nm) const;

    // Per-round-trip budget at the resonant configuration (solves the gap).
    [[nodiscard]] LossBudget budget(double wavelength_nm, int q_air, bool include_clipping = true) const;
    // Budget at an explicitly supplied gap; throws Error{invalid_argument}
    // when the configuration is off resonance.
    [[nodiscard]] LossBudget budget_at_gap(double wavelength_nm, double air_gap_nm, bool include_clipping = true) const;

    // Full-stack reflectance at an arbitrary configuration.
    [[nodiscard]] double assembly_reflectance(double wavelength_nm, double air_gap_nm) const;

    // Flattened full structure, bottom substrate -> top substrate.
    [[nodiscard]] FlatStack full_stack(double air_gap_nm) const;

    // Geometric length entering the Gaussian-beam formulas: t_a (+ t_d/n_d with membrane).
    [[nodiscard]] double geometric_length_um(double air_gap_nm) const;

    [[nodiscard]] const CavityAssembly& assembly() const { return assembly_; }
    [[nodiscard]] const FlatStack& top_from_gap() const { return top_; }
    [[nodiscard]] const FlatStack& bottom_from_gap() const { return bottom_; }

  private:
    CavityAssembly assembly_;
    FlatStack top_;     // air gap -> top mirror -> substrate
    FlatStack bottom_;  // air gap -> (membrane) -> bottom mirror -> substrate
};

struct ModePoint {
    double air_gap_nm;
    double wavelength_nm;
    int q_air;
    Confinement confinement;
};

struct ModeMap {
    std::vector<ModePoint> points;  // ordered by air gap, then wavelength
};

// Resonance curves over the configured window. Branches are tracked through
// the unwrapped round-trip phase, each refined against the full-assembly
// reflectance minimum; empty ranges or windows without resonances give an
// empty map.
ModeMap mode_map(const CavityAssembly& assembly, double air_gap_min_nm, double air_gap_max_nm,
                 double wavelength_min_nm, double wavelength_max_nm, int wavelength_samples = 121,
                 bool refine_dips = false);

// d lambda / d t_a of the branch labelled q_air where it crosses wavelength0,
// measured as the symmetric secant over +-half_span_nm of air gap.
double dispersion_slope(const CavityAssembly& assembly, double wavelength0_nm, int q_air, double half_span_nm);

struct ModeQuality {
    int q_air;
    double air_gap_nm;
    bool accessible;
    LossBudget budget;
};

// Q and finesse per longitudinal mode at fixed wavelength, clipping included
// through the curved-mirror beam waist.
std::vector<ModeQuality> q_vs_mode_number(const CavityAssembly& assembly, double wavelength_nm, int q_air_min,
                                          int q_air_max, bool include_clipping = true);

// Q(q_air) as a function of clipping geometry, with the underlying budget
// cached; drives the MMSE clipping fit.
std::function<double(int, double, double)> make_q_model(const CavityAssembly& assembly, double wavelength_nm,
                                                        int q_air_min, int q_air_max);

}  // namespace fpcav
