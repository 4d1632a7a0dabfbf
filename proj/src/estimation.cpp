#include "fpcav/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fpcav {

namespace {

// dense solve via Gaussian elimination with partial pivoting; a is modified
bool solve_linear(std::vector<std::vector<double>>& a, std::vector<double>& b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row)
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        if (std::abs(a[pivot][col]) < 1e-300) return false;
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t row = col + 1; row < n; ++row) {
            const double f = a[row][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) a[row][k] -= f * a[col][k];
            b[row] -= f * b[col];
        }
    }
    for (std::size_t row = n; row-- > 0;) {
        double s = b[row];
        for (std::size_t k = row + 1; k < n; ++k) s -= a[row][k] * b[k];
        b[row] = s / a[row][row];
    }
    return true;
}

double sum_squares(const std::vector<double>& r) {
    double s = 0.0;
    for (double v : r) {
        if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
        s += v * v;
    }
    return s;
}

double splitmix64_uniform(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z = z ^ (z >> 31);
    return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

double gaussian_deviate(std::uint64_t& state_word) {
    const double u1 = splitmix64_uniform(state_word);
    const double u2 = splitmix64_uniform(state_word);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * constants::pi * u2);
}

FitResult levenberg_marquardt(
    const std::function<void(const std::vector<double>&, std::vector<double>&)>& residuals,
    std::size_t residual_count, std::vector<double> initial,
    const std::function<void(const std::vector<double>&, std::vector<std::vector<double>>&)>& jacobian,
    int max_iterations, double step_tolerance) {
    const std::size_t n_params = initial.size();
    require(n_params > 0 && residual_count >= n_params, "under-determined fit");

    std::vector<double> p = std::move(initial);
    std::vector<double> r(residual_count), r_trial(residual_count);
    std::vector<std::vector<double>> jac(residual_count, std::vector<double>(n_params));

    auto fill_jacobian = [&](const std::vector<double>& at) {
        if (jacobian) {
            jacobian(at, jac);
            return;
        }
        std::vector<double> probe = at;
        std::vector<double> shifted(residual_count);
        residuals(at, r_trial);
        for (std::size_t j = 0; j < n_params; ++j) {
            const double h = std::max(1e-7 * std::abs(at[j]), 1e-9);
            probe[j] = at[j] + h;
            residuals(probe, shifted);
            for (std::size_t i = 0; i < residual_count; ++i) jac[i][j] = (shifted[i] - r_trial[i]) / h;
            probe[j] = at[j];
        }
    };

    residuals(p, r);
    double ssr = sum_squares(r);
    require(std::isfinite(ssr), "residuals not finite at the initial point");

    FitResult result;
    double damping = 1e-3;
    bool converged = false;
    int iteration = 0;
    for (; iteration < max_iterations && !converged; ++iteration) {
        fill_jacobian(p);
        std::vector<std::vector<double>> jtj(n_params, std::vector<double>(n_params, 0.0));
        std::vector<double> jtr(n_params, 0.0);
        for (std::size_t i = 0; i < residual_count; ++i) {
            for (std::size_t a = 0; a < n_params; ++a) {
                jtr[a] += jac[i][a] * r[i];
                for (std::size_t b = a; b < n_params; ++b) jtj[a][b] += jac[i][a] * jac[i][b];
            }
        }
        for (std::size_t a = 0; a < n_params; ++a)
            for (std::size_t b = 0; b < a; ++b) jtj[a][b] = jtj[b][a];

        bool stepped = false;
        for (int attempt = 0; attempt < 40; ++attempt) {
            auto lhs = jtj;
            for (std::size_t a = 0; a < n_params; ++a) lhs[a][a] += damping * std::max(jtj[a][a], 1e-30);
            std::vector<double> step = jtr;
            if (!solve_linear(lhs, step)) {
                damping *= 4.0;
                continue;
            }
            std::vector<double> trial = p;
            double step_norm = 0.0, p_norm = 0.0;
            for (std::size_t a = 0; a < n_params; ++a) {
                trial[a] -= step[a];
                step_norm += step[a] * step[a];
                p_norm += p[a] * p[a];
            }
            residuals(trial, r_trial);
            const double ssr_trial = sum_squares(r_trial);
            if (ssr_trial <= ssr) {
                const double rel_step = std::sqrt(step_norm) / (std::sqrt(p_norm) + step_tolerance);
                const double rel_gain = (ssr - ssr_trial) / std::max(ssr, 1e-300);
                p = std::move(trial);
                r = r_trial;
                ssr = ssr_trial;
                damping = std::max(damping / 3.0, 1e-14);
                stepped = true;
                if (rel_step < step_tolerance || rel_gain < 1e-14) converged = true;
                break;
            }
            damping *= 4.0;
        }
        if (!stepped) {
            // no damping level improves the fit: the current point is a local optimum
            converged = std::isfinite(ssr);
            break;
        }
    }

    // covariance from the undamped normal equations at the optimum
    fill_jacobian(p);
    std::vector<std::vector<double>> jtj(n_params, std::vector<double>(n_params, 0.0));
    for (std::size_t i = 0; i < residual_count; ++i)
        for (std::size_t a = 0; a < n_params; ++a)
            for (std::size_t b = 0; b < n_params; ++b) jtj[a][b] += jac[i][a] * jac[i][b];
    const double dof = static_cast<double>(residual_count) - static_cast<double>(n_params);
    const double sigma2 = dof > 0 ? ssr / dof : 0.0;
    result.uncertainties.assign(n_params, 0.0);
    for (std::size_t a = 0; a < n_params; ++a) {
        auto lhs = jtj;
        std::vector<double> e(n_params, 0.0);
        e[a] = 1.0;
        if (solve_linear(lhs, e) && e[a] > 0.0) result.uncertainties[a] = std::sqrt(sigma2 * e[a]);
    }

    result.parameters = p;
    result.residual_rms = std::sqrt(ssr / static_cast<double>(residual_count));
    result.converged = converged;
    result.iterations = iteration;
    return result;
}

CraterFit fit_crater(const std::vector<double>& r_um, const std::vector<double>& z_um) {
    require(r_um.size() == z_um.size(), "coordinate arrays must have equal length");
    require(r_um.size() >= 8, "need at least 8 profile points");
    const double z_min = *std::min_element(z_um.begin(), z_um.end());
    require(z_min < 0.0, "profile must dip below zero");

    const double d0 = -z_min;
    // seed R from the half-depth radius: z = -d/2 at r^2 = 2 R d ln 2
    double r_half = 0.0;
    for (std::size_t i = 0; i < r_um.size(); ++i)
        if (z_um[i] <= z_min / 2.0) r_half = std::max(r_half, std::abs(r_um[i]));
    double r0 = r_half > 0.0 ? r_half * r_half / (2.0 * d0 * std::log(2.0)) : 10.0;
    if (!(r0 > 0.0) || !std::isfinite(r0)) r0 = 10.0;

    auto model = [&](const std::vector<double>& p, std::vector<double>& out) {
        const double radius = p[0], depth = p[1];
        if (radius <= 0.0 || depth <= 0.0) {
            std::fill(out.begin(), out.end(), std::numeric_limits<double>::infinity());
            return;
        }
        for (std::size_t i = 0; i < r_um.size(); ++i) {
            const double u = r_um[i] * r_um[i] / (2.0 * radius * depth);
            out[i] = -depth * std::exp(-u) - z_um[i];
        }
    };
    auto jacobian = [&](const std::vector<double>& p, std::vector<std::vector<double>>& jac) {
        const double radius = p[0], depth = p[1];
        for (std::size_t i = 0; i < r_um.size(); ++i) {
            const double u = r_um[i] * r_um[i] / (2.0 * radius * depth);
            const double e = std::exp(-u);
            jac[i][0] = -depth * (u / radius) * e;
            jac[i][1] = -(1.0 - u) * e;
        }
    };

    CraterFit out;
    out.fit = levenberg_marquardt(model, r_um.size(), {r0, d0}, jacobian);
    out.fit.parameter_names = {"radius_of_curvature_um", "depth_um"};
    out.radius_of_curvature_um = out.fit.parameters[0];
    out.depth_um = out.fit.parameters[1];
    return out;
}

double fit_crater_circle_um(const std::vector<double>& r_um, const std::vector<double>& z_um, double depth_fraction) {
    require(r_um.size() == z_um.size() && r_um.size() >= 3, "need at least 3 points");
    const double z_min = *std::min_element(z_um.begin(), z_um.end());
    require(z_min < 0.0, "profile must dip below zero");
    // axisymmetric circle (r - 0)^2 + (z - zc)^2 = rho^2, linear in (zc, rho^2 - zc^2)
    double s_zz = 0.0, s_z = 0.0, s_1 = 0.0, s_zy = 0.0, s_y = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < r_um.size(); ++i) {
        if (z_um[i] > z_min * depth_fraction) continue;
        const double y = r_um[i] * r_um[i] + z_um[i] * z_um[i];
        s_zz += 4.0 * z_um[i] * z_um[i];
        s_z += 2.0 * z_um[i];
        s_1 += 1.0;
        s_zy += 2.0 * z_um[i] * y;
        s_y += y;
        ++used;
    }
    require(used >= 3, "too few points in the crater bottom");
    // normal equations for [zc, beta]: [[s_zz, s_z],[s_z, s_1]] [zc; beta] = [s_zy; s_y]
    const double det = s_zz * s_1 - s_z * s_z;
    require(std::abs(det) > 1e-300, "degenerate circle fit");
    const double zc = (s_zy * s_1 - s_z * s_y) / det;
    const double beta = (s_zz * s_y - s_z * s_zy) / det;
    const double rho2 = beta + zc * zc;
    require(rho2 > 0.0, "degenerate circle fit");
    return std::sqrt(rho2);
}

namespace {

struct Extremum {
    double x;
    double height;
};

std::vector<Extremum> prominent_extrema(const std::vector<double>& x, const std::vector<double>& dev,
                                        double min_separation) {
    std::vector<Extremum> found;
    for (std::size_t i = 1; i + 1 < dev.size(); ++i) {
        if (dev[i] >= dev[i - 1] && dev[i] > dev[i + 1] && dev[i] > 0.0) found.push_back({x[i], dev[i]});
    }
    std::sort(found.begin(), found.end(), [](const Extremum& a, const Extremum& b) { return a.height > b.height; });
    std::vector<Extremum> picked;
    for (const auto& c : found) {
        bool clash = false;
        for (const auto& p : picked)
            if (std::abs(p.x - c.x) < min_separation) clash = true;
        if (!clash) picked.push_back(c);
        if (picked.size() == 3) break;
    }
    return picked;
}

}  // namespace

LinewidthFit fit_linewidth(const ScanTrace& trace, double wavelength_nm) {
    const auto& x = trace.abscissa;
    const auto& y = trace.signal;
    require(x.size() == y.size(), "trace arrays must have equal length");
    require(x.size() >= 64, "trace must hold at least 64 samples");
    require(trace.sideband_spacing_GHz > 0.0, "sideband spacing must be positive");
    require(wavelength_nm > 0.0, "wavelength must be positive");

    std::vector<double> sorted_y = y;
    std::nth_element(sorted_y.begin(), sorted_y.begin() + sorted_y.size() / 2, sorted_y.end());
    const double baseline = sorted_y[sorted_y.size() / 2];

    double extreme = 0.0;
    for (double v : y) {
        if (std::abs(v - baseline) > std::abs(extreme)) extreme = v - baseline;
    }
    const double polarity = extreme >= 0.0 ? 1.0 : -1.0;
    std::vector<double> dev(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) dev[i] = polarity * (y[i] - baseline);

    // moving average so noise wiggles on the peak shoulders do not seed as
    // separate extrema
    const std::size_t half_window = std::min<std::size_t>(std::max<std::size_t>(y.size() / 128, 1), 15);
    std::vector<double> smooth(dev.size());
    for (std::size_t i = 0; i < dev.size(); ++i) {
        const std::size_t lo = i > half_window ? i - half_window : 0;
        const std::size_t hi = std::min(dev.size() - 1, i + half_window);
        double sum = 0.0;
        for (std::size_t k = lo; k <= hi; ++k) sum += dev[k];
        smooth[i] = sum / static_cast<double>(hi - lo + 1);
    }

    const double span = *std::max_element(x.begin(), x.end()) - *std::min_element(x.begin(), x.end());
    const auto peaks = prominent_extrema(x, smooth, span / 10.0);
    if (peaks.size() < 3)
        fail(Error::Kind::no_convergence, "sideband calibration failed: fewer than three extrema in the trace");

    std::vector<Extremum> ordered = peaks;
    std::sort(ordered.begin(), ordered.end(), [](const Extremum& a, const Extremum& b) { return a.x < b.x; });
    const double c_left = ordered[0].x, c0 = ordered[1].x, c_right = ordered[2].x;
    const double delta0 = 0.5 * ((c_right - c0) + (c0 - c_left));

    // half-width of the central peak from the half-maximum crossings
    double gamma0 = delta0 / 10.0;
    {
        const double half = ordered[1].height / 2.0;
        double left = c0 - delta0 / 2.0, right = c0 + delta0 / 2.0;
        for (std::size_t i = 1; i < x.size(); ++i) {
            if (x[i] <= c0 && smooth[i - 1] < half && smooth[i] >= half) left = x[i];
            if (x[i - 1] >= c0 && smooth[i - 1] >= half && smooth[i] < half) {
                right = x[i];
                break;
            }
        }
        if (right > left) gamma0 = std::max((right - left) / 2.0, span / static_cast<double>(x.size()));
    }

    const std::size_t n = x.size();
    auto lorentz = [](double xi, double c, double g) {
        const double d = xi - c;
        return g * g / (d * d + g * g);
    };
    auto model = [&](const std::vector<double>& p, std::vector<double>& out) {
        const double b = p[0], a0 = p[1], cc = p[2], am = p[3], ap = p[4], dl = p[5], g = std::abs(p[6]);
        if (g <= 0.0) {
            std::fill(out.begin(), out.end(), std::numeric_limits<double>::infinity());
            return;
        }
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = b + a0 * lorentz(x[i], cc, g) + am * lorentz(x[i], cc - dl, g) + ap * lorentz(x[i], cc + dl, g) -
                     y[i];
        }
    };
    auto jacobian = [&](const std::vector<double>& p, std::vector<std::vector<double>>& jac) {
        const double a0 = p[1], cc = p[2], am = p[3], ap = p[4], dl = p[5], g = std::abs(p[6]);
        for (std::size_t i = 0; i < n; ++i) {
            const double centers[3] = {cc, cc - dl, cc + dl};
            const double amps[3] = {a0, am, ap};
            double dc = 0.0, dd = 0.0, dg = 0.0;
            double l[3];
            for (int k = 0; k < 3; ++k) {
                const double d = x[i] - centers[k];
                const double denom = d * d + g * g;
                l[k] = g * g / denom;
                const double dl_dc = 2.0 * g * g * d / (denom * denom);
                const double dl_dg = 2.0 * g * d * d / (denom * denom);
                dc += amps[k] * dl_dc;
                dg += amps[k] * dl_dg;
                if (k == 1) dd -= amps[k] * dl_dc;
                if (k == 2) dd += amps[k] * dl_dc;
            }
            jac[i][0] = 1.0;
            jac[i][1] = l[0];
            jac[i][2] = dc;
            jac[i][3] = l[1];
            jac[i][4] = l[2];
            jac[i][5] = dd;
            jac[i][6] = dg;
        }
    };

    std::vector<double> seed{baseline, polarity * ordered[1].height, c0, polarity * ordered[0].height,
                             polarity * ordered[2].height, delta0, gamma0};
    LinewidthFit out;
    out.fit = levenberg_marquardt(model, n, seed, jacobian);
    out.fit.parameter_names = {"offset", "amp_main", "center", "amp_low", "amp_high", "sideband_offset", "hwhm"};
    const double delta_fit = std::abs(out.fit.parameters[5]);
    const double gamma_fit = std::abs(out.fit.parameters[6]);
    require(delta_fit > 0.0, "degenerate sideband separation", Error::Kind::no_convergence);
    out.scale_GHz_per_unit = trace.sideband_spacing_GHz / delta_fit;
    out.linewidth_GHz = 2.0 * gamma_fit * out.scale_GHz_per_unit;
    const double nu = constants::c0 / (wavelength_nm * 1e-9);
    out.q_factor = nu / (out.linewidth_GHz * 1e9);
    return out;
}

FinesseFit fit_finesse(const std::vector<int>& q_air, const std::vector<double>& q_factor, int q_max_linear) {
    require(q_air.size() == q_factor.size(), "series arrays must have equal length");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < q_air.size(); ++i) {
        if (q_air[i] <= q_max_linear) {
            xs.push_back(q_air[i]);
            ys.push_back(q_factor[i]);
        }
    }
    require(xs.size() >= 2, "need at least two points in the linear region");
    const double n = static_cast<double>(xs.size());
    const double mean_x = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double mean_y = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
        sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
    }
    require(sxx > 0.0, "degenerate mode-number series");
    const double slope = sxy / sxx;
    const double intercept = mean_y - slope * mean_x;

    double ssr = 0.0, sum_x2 = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (slope * xs[i] + intercept);
        ssr += r * r;
        sum_x2 += xs[i] * xs[i];
    }
    const double sigma2 = xs.size() > 2 ? ssr / (n - 2.0) : 0.0;

    FinesseFit out;
    out.finesse = slope;
    out.q0 = intercept;
    out.fit.parameter_names = {"finesse", "q0"};
    out.fit.parameters = {slope, intercept};
    out.fit.uncertainties = {std::sqrt(sigma2 / sxx), std::sqrt(sigma2 * sum_x2 / (n * sxx))};
    out.fit.residual_rms = std::sqrt(ssr / n);
    out.fit.converged = true;
    out.fit.iterations = 1;
    return out;
}

ClippingFit fit_clipping(const std::vector<int>& q_air, const std::vector<double>& q_factor,
                         const std::function<double(int, double, double)>& q_model, double d_min_um, double d_max_um,
                         double theta_min_deg, double theta_max_deg, int grid_points) {
    require(q_air.size() == q_factor.size(), "series arrays must have equal length");
    require(q_air.size() >= 3, "need at least three points across the turnover");
    require(d_max_um > d_min_um && theta_max_deg >= theta_min_deg && theta_min_deg >= 0.0, "bad search ranges");
    require(grid_points >= 2, "grid must have at least two points");

    const std::size_t n = q_air.size();
    auto mse = [&](double d, double theta) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = q_factor[i] - q_model(q_air[i], d, theta);
            s += r * r;
        }
        return s / static_cast<double>(n);
    };

    std::vector<std::vector<double>> surface(grid_points, std::vector<double>(grid_points));
    double best = std::numeric_limits<double>::infinity();
    int best_i = 0, best_j = 0;
    for (int i = 0; i < grid_points; ++i) {
        const double d = d_min_um + (d_max_um - d_min_um) * i / (grid_points - 1.0);
        for (int j = 0; j < grid_points; ++j) {
            const double theta = theta_min_deg + (theta_max_deg - theta_min_deg) * j / (grid_points - 1.0);
            surface[i][j] = mse(d, theta);
            if (surface[i][j] < best) {
                best = surface[i][j];
                best_i = i;
                best_j = j;
            }
        }
    }

    ClippingFit out;
    out.boundary_warning = best_i == 0 || best_i == grid_points - 1 || best_j == 0 || best_j == grid_points - 1;

    double d_opt = d_min_um + (d_max_um - d_min_um) * best_i / (grid_points - 1.0);
    double theta_opt = theta_min_deg + (theta_max_deg - theta_min_deg) * best_j / (grid_points - 1.0);

    auto residuals = [&](const std::vector<double>& p, std::vector<double>& r) {
        const double d = p[0], theta = p[1];
        const bool in_range =
            d >= d_min_um && d <= d_max_um && theta >= theta_min_deg && theta <= theta_max_deg;
        if (!in_range) {  // also rejects non-finite trial parameters
            std::fill(r.begin(), r.end(), std::numeric_limits<double>::infinity());
            return;
        }
        for (std::size_t i = 0; i < n; ++i) r[i] = q_model(q_air[i], d, theta) - q_factor[i];
    };
    const auto polish = levenberg_marquardt(residuals, n, {d_opt, theta_opt});
    if (polish.converged) {
        d_opt = polish.parameters[0];
        theta_opt = polish.parameters[1];
    }
    out.converged = polish.converged;
    out.extent_diameter_um = d_opt;
    out.tilt_deg = theta_opt;
    out.mse_min = std::min(best, mse(d_opt, theta_opt));

    // 95% region: MSE <= MSE_min (1 + chi2_{2,0.95} / (N - 2))
    const double chi2_95_2dof = 5.991464547107979;
    const double dof = static_cast<double>(n) - 2.0;
    out.mse_threshold_95 = out.mse_min * (1.0 + chi2_95_2dof / std::max(dof, 1.0));

    out.d_low_um = d_opt;
    out.d_high_um = d_opt;
    out.theta_low_deg = theta_opt;
    out.theta_high_deg = theta_opt;
    for (int i = 0; i < grid_points; ++i) {
        const double d = d_min_um + (d_max_um - d_min_um) * i / (grid_points - 1.0);
        for (int j = 0; j < grid_points; ++j) {
            const double theta = theta_min_deg + (theta_max_deg - theta_min_deg) * j / (grid_points - 1.0);
            if (surface[i][j] <= out.mse_threshold_95) {
                out.d_low_um = std::min(out.d_low_um, d);
                out.d_high_um = std::max(out.d_high_um, d);
                out.theta_low_deg = std::min(out.theta_low_deg, theta);
                out.theta_high_deg = std::max(out.theta_high_deg, theta);
            }
        }
    }
    return out;
}

double delta_q0(double q_exp, double q_sim) {
    require(q_exp > 0.0 && q_sim > 0.0, "Q values must be positive");
    return q_sim - q_exp;
}

std::vector<double> delta_q0_series(const std::vector<double>& q_exp, const std::vector<double>& q_sim) {
    require(q_exp.size() == q_sim.size() && !q_exp.empty(), "series must be non-empty and aligned");
    std::vector<double> out(q_exp.size());
    for (std::size_t i = 0; i < q_exp.size(); ++i) out[i] = delta_q0(q_exp[i], q_sim[i]);
    return out;
}

double delta_q0_mean(const std::vector<double>& q_exp, const std::vector<double>& q_sim) {
    const auto series = delta_q0_series(q_exp, q_sim);
    return std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(series.size());
}

ScanTrace synth_linewidth_trace(std::size_t samples, double linewidth_GHz, double sideband_spacing_GHz,
                                double scale_GHz_per_unit, double dip_depth, double sideband_depth,
                                double noise_sigma, std::uint64_t seed) {
    require(samples >= 64, "need at least 64 samples");
    require(linewidth_GHz > 0.0 && sideband_spacing_GHz > 0.0 && scale_GHz_per_unit > 0.0, "rates must be positive");
    ScanTrace trace;
    trace.sideband_spacing_GHz = sideband_spacing_GHz;
    const double center = 17.0;  // arbitrary piezo-proxy origin
    const double delta_units = sideband_spacing_GHz / scale_GHz_per_unit;
    const double gamma_units = 0.5 * linewidth_GHz / scale_GHz_per_unit;
    const double x_lo = center - 2.2 * delta_units, x_hi = center + 2.2 * delta_units;
    std::uint64_t rng = seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull;
    auto lorentz = [&](double xi, double c) {
        const double d = xi - c;
        return gamma_units * gamma_units / (d * d + gamma_units * gamma_units);
    };
    for (std::size_t i = 0; i < samples; ++i) {
        const double xi = x_lo + (x_hi - x_lo) * i / (samples - 1.0);
        double v = 1.0 - dip_depth * lorentz(xi, center) - sideband_depth * lorentz(xi, center - delta_units) -
                   sideband_depth * lorentz(xi, center + delta_units);
        if (noise_sigma > 0.0) v += noise_sigma * gaussian_deviate(rng);
        trace.abscissa.push_back(xi);
        trace.signal.push_back(v);
    }
    return trace;
}

void synth_crater(double radius_of_curvature_um, double depth_um, std::size_t points, double r_max_um,
                  std::vector<double>& r_um, std::vector<double>& z_um, double noise_sigma_um, std::uint64_t seed) {
    require(radius_of_curvature_um > 0.0 && depth_um > 0.0 && points >= 2 && r_max_um > 0.0, "bad crater parameters");
    r_um.clear();
    z_um.clear();
    std::uint64_t rng = seed * 0x9e3779b97f4a7c15ull + 0x853c49e6748fea9bull;
    for (std::size_t i = 0; i < points; ++i) {
        const double r = -r_max_um + 2.0 * r_max_um * i / (points - 1.0);
        double z = -depth_um * std::exp(-r * r / (2.0 * radius_of_curvature_um * depth_um));
        if (noise_sigma_um > 0.0) z += noise_sigma_um * gaussian_deviate(rng);
        r_um.push_back(r);
        z_um.push_back(z);
    }
}

}  // namespace fpcav
