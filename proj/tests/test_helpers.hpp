#pragma once

#include <cstdint>

#include "fpcav/gaussian_cavity.hpp"

namespace testutil {

// experimental device: 14-pair top / 15-pair bottom SiO2-Ta2O5 mirrors at
// 625 nm on silica, diamond membrane on the bottom mirror
inline fpcav::CavityAssembly assembly(double membrane_thickness_nm, double roughness_nm, double kappa = 0.0,
                                      double tilt_deg = 0.0) {
    fpcav::CavityAssembly a;
    a.top_mirror = fpcav::build_quarter_wave_dbr(625.0, 14, 2.11, 1.46, {1.46, 0.0});
    a.bottom_mirror = fpcav::build_quarter_wave_dbr(625.0, 15, 2.11, 1.46, {1.46, 0.0});
    if (membrane_thickness_nm > 0.0) a.membrane = fpcav::Layer{{2.41, kappa}, membrane_thickness_nm, roughness_nm};
    a.crater = {21.0, 0.64};
    a.extent_diameter_um = 5.9;
    a.tilt_deg = tilt_deg;
    return a;
}

inline fpcav::CavityAssembly bare_assembly(double tilt_deg = 0.0) { return assembly(0.0, 0.0, 0.0, tilt_deg); }

struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed * 0x9e3779b97f4a7c15ull + 1) {}

    double uniform() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        z = z ^ (z >> 31);
        return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)); }
};

constexpr double kLambdaRed = 631.9;   // Q-factor analysis wavelength
constexpr double kLambdaZpl = 637.7;   // NV zero-phonon line
constexpr double kDiamondIndex = 2.41;

}  // namespace testutil
