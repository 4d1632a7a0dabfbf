#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fpcav/types.hpp"

namespace fpcav {

struct FitResult {
    std::vector<std::string> parameter_names;
    std::vector<double> parameters;
    std::vector<double> uncertainties;  // 1 sigma from the local quadratic model
    double residual_rms{0.0};
    bool converged{false};
    int iterations{0};
    bool boundary_warning{false};
};

// Damped Gauss-Newton (Levenberg-Marquardt). residuals(p, r) fills r with
// model(p) - data. jacobian is optional; forward differences otherwise.
// Iteration cap 200, relative step tolerance 1e-10.
FitResult levenberg_marquardt(
    const std::function<void(const std::vector<double>&, std::vector<double>&)>& residuals, std::size_t residual_count,
    std::vector<double> initial,
    const std::function<void(const std::vector<double>&, std::vector<std::vector<double>>&)>& jacobian = nullptr,
    int max_iterations = 200, double step_tolerance = 1e-10);

struct CraterFit {
    double radius_of_curvature_um{0.0};
    double depth_um{0.0};
    FitResult fit;
};

// Nonlinear least squares of z(r) = -d exp(-r^2 / (2 R d)); >= 8 points.
CraterFit fit_crater(const std::vector<double>& r_um, const std::vector<double>& z_um);

// Least-squares circle through the crater bottom (points with z below
// fraction*min depth); returns the circle radius for cross-checking R_cav.
double fit_crater_circle_um(const std::vector<double>& r_um, const std::vector<double>& z_um,
                            double depth_fraction = 0.85);

struct ScanTrace {
    std::vector<double> abscissa;  // piezo-proxy units, locally linear in length
    std::vector<double> signal;    // reflected intensity, arbitrary units
    double sideband_spacing_GHz{5.0};
};

struct LinewidthFit {
    double linewidth_GHz{0.0};   // delta nu, FWHM of the central Lorentzian
    double q_factor{0.0};        // nu / delta nu at the supplied wavelength
    double scale_GHz_per_unit{0.0};
    FitResult fit;               // offset, A0, c0, A-, A+, sideband offset, gamma (HWHM)
};

// Triple-Lorentzian fit with the abscissa calibrated so the fitted sideband
// separation equals 2 x sideband_spacing. Throws Error{no_convergence} with a
// calibration message when fewer than three extrema are present.
LinewidthFit fit_linewidth(const ScanTrace& trace, double wavelength_nm);

struct FinesseFit {
    double finesse{0.0};
    double q0{0.0};
    FitResult fit;
};

// Ordinary least squares of Q = F q_air + Q0 over the linear region
// q_air <= q_max_linear; >= 2 usable points.
FinesseFit fit_finesse(const std::vector<int>& q_air, const std::vector<double>& q_factor, int q_max_linear);

struct ClippingFit {
    double extent_diameter_um{0.0};
    double tilt_deg{0.0};
    double d_low_um{0.0}, d_high_um{0.0};        // 95% confidence extents
    double theta_low_deg{0.0}, theta_high_deg{0.0};
    double mse_min{0.0};
    double mse_threshold_95{0.0};
    bool boundary_warning{false};
    bool converged{false};
};

// MMSE grid search over (D, theta) with a local Gauss-Newton polish. q_model
// returns the simulated Q(q_air; D, theta). The 95% region thresholds the MSE
// surface at mse_min (1 + chi2_{2,0.95} / (N - 2)).
ClippingFit fit_clipping(const std::vector<int>& q_air, const std::vector<double>& q_factor,
                         const std::function<double(int, double, double)>& q_model, double d_min_um, double d_max_um,
                         double theta_min_deg, double theta_max_deg, int grid_points = 41);

// Rigid offset between simulation and experiment.
double delta_q0(double q_exp, double q_sim);
std::vector<double> delta_q0_series(const std::vector<double>& q_exp, const std::vector<double>& q_sim);
double delta_q0_mean(const std::vector<double>& q_exp, const std::vector<double>& q_sim);

// Deterministic synthetic inputs for round-trip tests and the CLI self-test.
// Gaussian noise comes from a fixed Box-Muller transform over mt19937_64 so
// identical seeds give identical traces on every platform.
ScanTrace synth_linewidth_trace(std::size_t samples, double linewidth_GHz, double sideband_spacing_GHz,
                                double scale_GHz_per_unit, double dip_depth, double sideband_depth,
                                double noise_sigma = 0.0, std::uint64_t seed = 0);

void synth_crater(double radius_of_curvature_um, double depth_um, std::size_t points, double r_max_um,
                  std::vector<double>& r_um, std::vector<double>& z_um, double noise_sigma_um = 0.0,
                  std::uint64_t seed = 0);

double gaussian_deviate(std::uint64_t& state_word);  // exposed for reuse in tests

}  // namespace fpcav
