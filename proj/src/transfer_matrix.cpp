#include "fpcav/transfer_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "fpcav/loss_models.hpp"

namespace fpcav {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

Mat2c mul(const Mat2c& a, const Mat2c& b) {
    Mat2c m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return m;
}

// Interface matrix relating (E+, E-) on the entry side to the exit side,
// built from the (possibly roughness-scaled) Fresnel amplitudes:
//   I = 1/t [[1, -r'], [r, t t' - r r']]
// where r, t act on the entry side and r', t' on the exit side. For smooth
// interfaces this reduces to 1/t [[1, r], [r, 1]].
Mat2c interface_matrix(cd na, cd nb, double sigma_nm, double wavelength_nm) {
    const cd r = (na - nb) / (na + nb);
    const cd tf = 2.0 * na / (na + nb);
    const cd tb = 2.0 * nb / (na + nb);
    cd r_entry = r, r_exit = -r, t_entry = tf, t_exit = tb;
    if (sigma_nm > 0.0) {
        const auto scales_fwd = rough_interface_factors({sigma_nm, na.real(), nb.real()}, wavelength_nm);
        const auto scales_rev = rough_interface_factors({sigma_nm, nb.real(), na.real()}, wavelength_nm);
        r_entry *= scales_fwd.reflection_scale;
        r_exit *= scales_rev.reflection_scale;
        t_entry *= scales_fwd.transmission_scale;
        t_exit *= scales_rev.transmission_scale;
    }
    Mat2c m;
    m[0][0] = 1.0 / t_entry;
    m[0][1] = -r_exit / t_entry;
    m[1][0] = r_entry / t_entry;
    m[1][1] = (t_entry * t_exit - r_entry * r_exit) / t_entry;
    return m;
}

Mat2c propagation_matrix(cd n, double thickness_nm, double wavelength_nm) {
    const cd delta = 2.0 * constants::pi * n * thickness_nm / wavelength_nm;
    Mat2c m{};
    m[0][0] = std::exp(I * delta);
    m[1][1] = std::exp(-I * delta);
    m[0][1] = m[1][0] = 0.0;
    return m;
}

void validate_stack(const LayerStack& stack) {
    require(stack.incidence.n > 0.0 && stack.exit.n > 0.0, "media indices must be positive");
    for (const auto& layer : stack.layers) {
        require(layer.index.n > 0.0, "layer index must be positive");
        require(layer.index.kappa_ext >= 0.0, "extinction coefficient must be non-negative");
        require(layer.thickness_nm > 0.0, "layer thickness must be positive");
        require(layer.roughness_rms_nm >= 0.0, "roughness must be non-negative");
    }
}

}  // namespace

FlatStack flatten(const LayerStack& stack) {
    validate_stack(stack);
    FlatStack flat;
    flat.media.reserve(stack.layers.size() + 2);
    flat.media.push_back(stack.incidence.value());
    flat.interface_sigma_nm.push_back(0.0);
    for (const auto& layer : stack.layers) {
        flat.media.push_back(layer.index.value());
        flat.thickness_nm.push_back(layer.thickness_nm);
        flat.interface_sigma_nm.push_back(layer.roughness_rms_nm);
    }
    flat.media.push_back(stack.exit.value());
    return flat;
}

FlatStack reversed(const FlatStack& stack) {
    FlatStack out;
    out.media.assign(stack.media.rbegin(), stack.media.rend());
    out.thickness_nm.assign(stack.thickness_nm.rbegin(), stack.thickness_nm.rend());
    out.interface_sigma_nm.assign(stack.interface_sigma_nm.rbegin(), stack.interface_sigma_nm.rend());
    return out;
}

Mat2c characteristic_matrix(const Layer& layer, double wavelength_nm) {
    require(wavelength_nm > 0.0, "wavelength must be positive");
    require(layer.thickness_nm >= 0.0, "thickness must be non-negative");  // 0 allowed: identity limit
    require(layer.index.n > 0.0, "layer index must be positive");
    const cd eta = layer.index.value();
    const cd delta = 2.0 * constants::pi * eta * layer.thickness_nm / wavelength_nm;
    Mat2c m;
    m[0][0] = std::cos(delta);
    m[0][1] = I * std::sin(delta) / eta;
    m[1][0] = I * eta * std::sin(delta);
    m[1][1] = std::cos(delta);
    return m;
}

std::complex<double> det(const Mat2c& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

Amplitudes stack_amplitudes(const FlatStack& stack, double wavelength_nm) {
    require(wavelength_nm > 0.0, "wavelength must be positive");
    Mat2c m = interface_matrix(stack.media[0], stack.media[1], stack.interface_sigma_nm[0], wavelength_nm);
    for (std::size_t j = 0; j < stack.layer_count(); ++j) {
        m = mul(m, propagation_matrix(stack.media[j + 1], stack.thickness_nm[j], wavelength_nm));
        m = mul(m, interface_matrix(stack.media[j + 1], stack.media[j + 2], stack.interface_sigma_nm[j + 1],
                                    wavelength_nm));
    }
    return {m[1][0] / m[0][0], 1.0 / m[0][0]};
}

ResponsePoint response_at(const FlatStack& stack, double wavelength_nm) {
    const auto amp = stack_amplitudes(stack, wavelength_nm);
    const double r2 = std::norm(amp.r);
    const double t2 = std::norm(amp.t) * stack.media.back().real() / stack.media.front().real();
    return {r2, t2, 1.0 - r2 - t2};
}

SpectralResponse stack_response(const LayerStack& stack, const std::vector<double>& wavelength_grid_nm) {
    require(!wavelength_grid_nm.empty(), "wavelength grid must be non-empty");
    for (double w : wavelength_grid_nm) require(w > 0.0, "wavelength must be positive");
    const FlatStack flat = flatten(stack);
    SpectralResponse response;
    response.wavelength_nm = wavelength_grid_nm;
    response.reflectance.reserve(wavelength_grid_nm.size());
    response.transmittance.reserve(wavelength_grid_nm.size());
    response.absorptance.reserve(wavelength_grid_nm.size());
    for (double w : wavelength_grid_nm) {
        const auto p = response_at(flat, w);
        response.reflectance.push_back(p.reflectance);
        response.transmittance.push_back(p.transmittance);
        response.absorptance.push_back(p.absorptance);
    }
    return response;
}

FieldProfile field_distribution(const LayerStack& stack, double wavelength_nm, int sampling_per_layer) {
    return field_distribution(flatten(stack), wavelength_nm, sampling_per_layer);
}

FieldProfile field_distribution(const FlatStack& stack, double wavelength_nm, int sampling_per_layer) {
    require(wavelength_nm > 0.0, "wavelength must be positive");
    require(sampling_per_layer >= 16, "sampling must be at least 16 points per layer");
    const std::size_t n_layers = stack.layer_count();

    // Walk backward from unit transmitted amplitude, then rescale so the
    // incident amplitude is one.
    std::vector<std::array<cd, 2>> left_amps(n_layers);  // amplitudes at each layer's entry edge
    std::array<cd, 2> v{1.0, 0.0};
    for (std::size_t j = n_layers; j-- > 0;) {
        const Mat2c iface = interface_matrix(stack.media[j + 1], stack.media[j + 2],
                                             stack.interface_sigma_nm[j + 1], wavelength_nm);
        std::array<cd, 2> right{iface[0][0] * v[0] + iface[0][1] * v[1], iface[1][0] * v[0] + iface[1][1] * v[1]};
        const Mat2c prop = propagation_matrix(stack.media[j + 1], stack.thickness_nm[j], wavelength_nm);
        v = {prop[0][0] * right[0], prop[1][1] * right[1]};
        left_amps[j] = v;
    }
    const Mat2c first = interface_matrix(stack.media[0], stack.media[1], stack.interface_sigma_nm[0], wavelength_nm);
    const cd incident = first[0][0] * v[0] + first[0][1] * v[1];
    const cd scale = 1.0 / incident;

    FieldProfile profile;
    profile.wavelength_nm = wavelength_nm;
    profile.layers.reserve(n_layers);
    double z = 0.0;
    for (std::size_t j = 0; j < n_layers; ++j) {
        profile.layers.push_back(
            {z, stack.thickness_nm[j], stack.media[j + 1], left_amps[j][0] * scale, left_amps[j][1] * scale});
        z += stack.thickness_nm[j];
    }

    for (const auto& layer : profile.layers) {
        const cd k = 2.0 * constants::pi * layer.index / wavelength_nm;
        for (int s = 0; s < sampling_per_layer; ++s) {
            const double zeta = layer.thickness_nm * s / (sampling_per_layer - 1.0);
            const cd e = layer.forward * std::exp(-I * k * zeta) + layer.backward * std::exp(I * k * zeta);
            profile.z_nm.push_back(layer.z_start_nm + zeta);
            profile.amplitude.push_back(std::abs(e));
            profile.local_index.push_back(layer.index.real());
        }
    }
    return profile;
}

std::complex<double> field_at(const FieldProfile& profile, double z_nm) {
    require(!profile.layers.empty(), "field profile has no layers");
    const auto& layers = profile.layers;
    std::size_t j = 0;
    while (j + 1 < layers.size() && z_nm >= layers[j + 1].z_start_nm) ++j;
    const auto& layer = layers[j];
    const double zeta = std::clamp(z_nm - layer.z_start_nm, 0.0, layer.thickness_nm);
    const cd k = 2.0 * constants::pi * layer.index / profile.wavelength_nm;
    return layer.forward * std::exp(-I * k * zeta) + layer.backward * std::exp(I * k * zeta);
}

double weighted_intensity_integral_nm(const FieldProfile& profile) {
    // Per layer: E = A exp(-ikz) + B exp(ikz), k = kr + i ki.
    // integral |E|^2 = |A|^2 (e^{2 ki t}-1)/(2 ki) + |B|^2 (1-e^{-2 ki t})/(2 ki)
    //                + 2 Re[A conj(B) (e^{-2 i kr t}-1)/(-2 i kr)]
    double total = 0.0;
    for (const auto& layer : profile.layers) {
        const cd k = 2.0 * constants::pi * layer.index / profile.wavelength_nm;
        const double kr = k.real(), ki = k.imag();
        const double t = layer.thickness_nm;
        const double a2 = std::norm(layer.forward), b2 = std::norm(layer.backward);
        double direct;
        if (std::abs(ki) < 1e-14) {
            direct = (a2 + b2) * t;
        } else {
            direct = a2 * (std::exp(2.0 * ki * t) - 1.0) / (2.0 * ki) +
                     b2 * (1.0 - std::exp(-2.0 * ki * t)) / (2.0 * ki);
        }
        const cd cross = layer.forward * std::conj(layer.backward);
        double interference;
        if (std::abs(kr) < 1e-14) {
            interference = 2.0 * cross.real() * t;
        } else {
            const cd phase = (std::exp(cd{0.0, -2.0 * kr * t}) - 1.0) / cd{0.0, -2.0 * kr};
            interference = 2.0 * (cross * phase).real();
        }
        const double n2 = layer.index.real() * layer.index.real();
        total += n2 * (direct + interference);
    }
    return total;
}

LayerStack build_quarter_wave_dbr(double center_wavelength_nm, int pairs, double n_high, double n_low,
                                  const OpticalIndex& substrate, DbrOutermost outermost,
                                  const OpticalIndex& incidence) {
    require(center_wavelength_nm > 0.0, "centre wavelength must be positive");
    require(pairs >= 1, "at least one pair required");
    require(n_high > 0.0 && n_low > 0.0, "indices must be positive");
    LayerStack stack;
    stack.incidence = incidence;
    stack.exit = substrate;
    const Layer high{{n_high, 0.0}, center_wavelength_nm / (4.0 * n_high), 0.0};
    const Layer low{{n_low, 0.0}, center_wavelength_nm / (4.0 * n_low), 0.0};
    for (int p = 0; p < pairs; ++p) {
        if (outermost == DbrOutermost::high) {
            stack.layers.push_back(high);
            stack.layers.push_back(low);
        } else {
            stack.layers.push_back(low);
            stack.layers.push_back(high);
        }
    }
    return stack;
}

double stopband_center(const SpectralResponse& response, double threshold) {
    const auto& wl = response.wavelength_nm;
    const auto& refl = response.reflectance;
    require(wl.size() == refl.size() && !wl.empty(), "malformed response");

    // widest contiguous run above threshold
    std::size_t best_lo = 0, best_hi = 0;
    bool found = false;
    std::size_t i = 0;
    while (i < refl.size()) {
        if (refl[i] > threshold) {
            std::size_t j = i;
            while (j + 1 < refl.size() && refl[j + 1] > threshold) ++j;
            if (!found || wl[j] - wl[i] > wl[best_hi] - wl[best_lo]) {
                best_lo = i;
                best_hi = j;
                found = true;
            }
            i = j + 1;
        } else {
            ++i;
        }
    }
    if (!found) fail(Error::Kind::not_found, "no grid point exceeds the reflectance threshold");

    auto edge = [&](std::size_t inside, std::size_t outside) {
        if (inside == outside) return wl[inside];
        const double r1 = refl[outside], r2 = refl[inside];
        const double f = (threshold - r1) / (r2 - r1);
        return wl[outside] + f * (wl[inside] - wl[outside]);
    };
    const double lo = best_lo > 0 ? edge(best_lo, best_lo - 1) : wl[best_lo];
    const double hi = best_hi + 1 < wl.size() ? edge(best_hi, best_hi + 1) : wl[best_hi];
    // midpoint in optical frequency
    return 2.0 / (1.0 / lo + 1.0 / hi);
}

double mirror_group_length_nm(const FlatStack& stack, double wavelength_nm) {
    const double dl = 0.01;
    const cd r_minus = stack_amplitudes(stack, wavelength_nm - dl).r;
    const cd r_plus = stack_amplitudes(stack, wavelength_nm + dl).r;
    const double dpsi_dlambda = std::arg(r_plus / r_minus) / (2.0 * dl);
    // L = -(c/2) dpsi/domega = (lambda^2 / 4 pi) dpsi/dlambda
    return wavelength_nm * wavelength_nm / (4.0 * constants::pi) * dpsi_dlambda;
}

}  // namespace fpcav
