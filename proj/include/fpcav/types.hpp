#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpcav {

// Complex-index sign convention used throughout: n_c = n - i*kappa with time
// dependence exp(+i w t), so a forward wave is exp(-i k z) and kappa >= 0
// attenuates it.
struct OpticalIndex {
    double n{1.0};
    double kappa_ext{0.0};

    [[nodiscard]] std::complex<double> value() const { return {n, -kappa_ext}; }
};

struct Layer {
    OpticalIndex index;
    double thickness_nm{0.0};
    double roughness_rms_nm{0.0};  // RMS roughness of the layer's exit interface
};

struct LayerStack {
    OpticalIndex incidence;
    std::vector<Layer> layers;
    OpticalIndex exit;
};

struct SpectralResponse {
    std::vector<double> wavelength_nm;
    std::vector<double> reflectance;
    std::vector<double> transmittance;
    std::vector<double> absorptance;
};

// Per-layer plane-wave amplitudes of a solved field: E(z) = A exp(-ik z') + B exp(+ik z')
// with z' measured from the layer's entry edge. Exact within each layer.
struct LayerField {
    double z_start_nm{0.0};
    double thickness_nm{0.0};
    std::complex<double> index;
    std::complex<double> forward;   // A
    std::complex<double> backward;  // B
};

struct FieldProfile {
    std::vector<double> z_nm;         // depth from the first interface, spans all layers
    std::vector<double> amplitude;    // |E(z)|, arbitrary units until quantized
    std::vector<double> local_index;  // Re n(z)
    std::vector<LayerField> layers;   // exact amplitudes, basis for integrals
    double wavelength_nm{0.0};
};

class Error : public std::runtime_error {
  public:
    enum class Kind {
        invalid_argument,
        parse,
        not_found,
        unstable,
        no_convergence,
        io,
        internal,
    };

    Error(Kind k, const std::string& message) : std::runtime_error(message), kind(k) {}

    Kind kind;
};

[[noreturn]] inline void fail(Error::Kind k, const std::string& message) { throw Error(k, message); }

inline void require(bool ok, const std::string& message, Error::Kind k = Error::Kind::invalid_argument) {
    if (!ok) fail(k, message);
}

namespace constants {
inline constexpr double c0 = 2.99792458e8;           // m/s
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double eps0 = 8.8541878128e-12;     // F/m
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

}  // namespace fpcav
