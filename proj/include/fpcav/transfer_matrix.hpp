#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "fpcav/types.hpp"

namespace fpcav {

using Mat2c = std::array<std::array<std::complex<double>, 2>, 2>;

// Interface-centric flattening of a LayerStack. media has layers+2 entries
// (incidence first), interface_sigma_nm[i] is the RMS roughness of the
// interface between media[i] and media[i+1].
struct FlatStack {
    std::vector<std::complex<double>> media;
    std::vector<double> thickness_nm;
    std::vector<double> interface_sigma_nm;

    [[nodiscard]] std::size_t layer_count() const { return thickness_nm.size(); }
};

FlatStack flatten(const LayerStack& stack);
FlatStack reversed(const FlatStack& stack);

// Abeles characteristic matrix [[cos d, i sin d / eta], [i eta sin d, cos d]]
// with phase thickness d = 2 pi (n - i kappa) t / lambda and admittance
// eta = n - i kappa (free-space units). det = 1 for every layer.
Mat2c characteristic_matrix(const Layer& layer, double wavelength_nm);

std::complex<double> det(const Mat2c& m);

// Complex reflection and transmission amplitudes of the flattened stack for a
// wave incident from the first medium.
struct Amplitudes {
    std::complex<double> r;
    std::complex<double> t;
};
Amplitudes stack_amplitudes(const FlatStack& stack, double wavelength_nm);

struct ResponsePoint {
    double reflectance;
    double transmittance;
    double absorptance;
};
ResponsePoint response_at(const FlatStack& stack, double wavelength_nm);

SpectralResponse stack_response(const LayerStack& stack, const std::vector<double>& wavelength_grid_nm);

// Backward-propagated standing-wave profile for unit incident amplitude.
// sampling_per_layer >= 16 uniform samples per layer.
FieldProfile field_distribution(const LayerStack& stack, double wavelength_nm, int sampling_per_layer = 64);
FieldProfile field_distribution(const FlatStack& stack, double wavelength_nm, int sampling_per_layer = 64);

// Complex field at depth z_nm (within the layered region) of a solved profile.
std::complex<double> field_at(const FieldProfile& profile, double z_nm);

// Integral of Re(n)^2 |E|^2 dz over all layers, in nm, evaluated from the
// per-layer amplitudes in closed form (independent of the sampling grid).
double weighted_intensity_integral_nm(const FieldProfile& profile);

enum class DbrOutermost { high, low };

// Ideal quarter-wave mirror as seen from the incidence side (air by default):
// alternating layers of physical thickness lambda_c / (4 n).
LayerStack build_quarter_wave_dbr(double center_wavelength_nm, int pairs, double n_high, double n_low,
                                  const OpticalIndex& substrate, DbrOutermost outermost = DbrOutermost::high,
                                  const OpticalIndex& incidence = OpticalIndex{1.0, 0.0});

// Centre of the contiguous high-reflectance region (R above threshold).
// Edges are located by linear interpolation and the midpoint is taken in
// optical frequency, which recovers the design wavelength of a quarter-wave
// stack. Throws Error{not_found} when no grid point exceeds the threshold.
double stopband_center(const SpectralResponse& response, double threshold = 0.99);

// -(c/2) d(arg r)/d(omega) expressed in nm: the one-sided group (penetration)
// length of a mirror stack seen from its incidence medium.
double mirror_group_length_nm(const FlatStack& stack, double wavelength_nm);

}  // namespace fpcav
