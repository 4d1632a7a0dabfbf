#include "fpcav/gaussian_cavity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

namespace fpcav {

namespace {
using cd = std::complex<double>;

constexpr double kMinGapNm = 1.0;  // gaps below this count as mirrors in contact

double principal(double phase) {
    while (phase > constants::pi) phase -= 2.0 * constants::pi;
    while (phase <= -constants::pi) phase += 2.0 * constants::pi;
    return phase;
}
}  // namespace

double CraterProfile::height_um(double r_um) const {
    return -depth_um * std::exp(-r_um * r_um / (2.0 * radius_of_curvature_um * depth_um));
}

double effective_length_um(const ModeIndex& mode, double radius_of_curvature_um, double wavelength_nm) {
    require(mode.q >= 1 && mode.n >= 0 && mode.m >= 0, "mode indices out of range");
    require(radius_of_curvature_um > 0.0 && wavelength_nm > 0.0, "geometry must be positive");
    const double r_nm = radius_of_curvature_um * 1000.0;
    const double gouy_weight = (mode.n + mode.m + 1) / constants::pi;
    double length = mode.q * wavelength_nm / 2.0;
    for (int it = 0; it < 10000; ++it) {
        if (length >= r_nm)
            fail(Error::Kind::unstable, "no stable solution: effective length reaches the radius of curvature");
        const double g = 1.0 - length / r_nm;
        const double next = (mode.q + gouy_weight * std::acos(std::sqrt(g))) * wavelength_nm / 2.0;
        if (std::abs(next - length) < 1e-6) return next * 1e-3;
        length = next;
    }
    fail(Error::Kind::no_convergence, "effective-length fixed point did not converge");
}

double beam_waist_curved_um(double wavelength_nm, double radius_of_curvature_um, double cavity_length_um) {
    require(wavelength_nm > 0.0 && radius_of_curvature_um > 0.0, "geometry must be positive");
    if (!(cavity_length_um > 0.0 && cavity_length_um < radius_of_curvature_um))
        fail(Error::Kind::unstable, "cavity length must satisfy 0 < L < R_cav");
    const double lambda_um = wavelength_nm * 1e-3;
    return std::sqrt(lambda_um * radius_of_curvature_um / constants::pi) *
           std::pow(radius_of_curvature_um / cavity_length_um - 1.0, -0.25);
}

double beam_waist_flat_um(double wavelength_nm, double radius_of_curvature_um, double cavity_length_um) {
    require(wavelength_nm > 0.0 && radius_of_curvature_um > 0.0, "geometry must be positive");
    if (!(cavity_length_um > 0.0 && cavity_length_um < radius_of_curvature_um))
        fail(Error::Kind::unstable, "cavity length must satisfy 0 < L < R_cav");
    const double lambda_um = wavelength_nm * 1e-3;
    return std::sqrt(lambda_um / constants::pi) *
           std::pow(cavity_length_um * radius_of_curvature_um - cavity_length_um * cavity_length_um, 0.25);
}

ConfinementClass classify_confinement(double membrane_thickness_nm, double membrane_index, double wavelength0_nm) {
    require(membrane_thickness_nm > 0.0 && membrane_index > 0.0 && wavelength0_nm > 0.0, "inputs must be positive");
    const double quarter_waves = 4.0 * membrane_index * membrane_thickness_nm / wavelength0_nm;
    const double folded = std::fmod(quarter_waves, 2.0);
    const double dist_odd = std::abs(folded - 1.0);
    const double dist_even = std::min(folded, 2.0 - folded);
    if (dist_odd <= 0.25) return {Confinement::diamond_confined, dist_odd};
    if (dist_even <= 0.25) return {Confinement::air_confined, dist_even};
    return {Confinement::mixed, std::min(dist_odd, dist_even)};
}

const char* to_string(Confinement c) {
    switch (c) {
        case Confinement::diamond_confined: return "diamond_confined";
        case Confinement::air_confined: return "air_confined";
        case Confinement::mixed: return "mixed";
    }
    return "unknown";
}

CavitySolver::CavitySolver(const CavityAssembly& assembly) : assembly_(assembly) {
    require(assembly.top_mirror.incidence.kappa_ext == 0.0 && assembly.bottom_mirror.incidence.kappa_ext == 0.0,
            "gap medium must be lossless");
    top_ = flatten(assembly.top_mirror);
    if (assembly.membrane) {
        const Layer& mem = *assembly.membrane;
        require(mem.thickness_nm > 0.0, "membrane thickness must be positive");
        FlatStack mirror = flatten(assembly.bottom_mirror);
        bottom_.media.push_back(mirror.media.front());
        bottom_.interface_sigma_nm.push_back(mem.roughness_rms_nm);  // gap-membrane interface
        bottom_.media.push_back(mem.index.value());
        bottom_.thickness_nm.push_back(mem.thickness_nm);
        for (std::size_t j = 1; j < mirror.media.size(); ++j) bottom_.media.push_back(mirror.media[j]);
        for (std::size_t j = 0; j < mirror.thickness_nm.size(); ++j)
            bottom_.thickness_nm.push_back(mirror.thickness_nm[j]);
        for (std::size_t j = 0; j < mirror.interface_sigma_nm.size(); ++j)
            bottom_.interface_sigma_nm.push_back(mirror.interface_sigma_nm[j]);
    } else {
        bottom_ = flatten(assembly.bottom_mirror);
    }
}

std::vector<Resonance> CavitySolver::resonances(double wavelength_nm, double max_gap_nm) const {
    require(wavelength_nm > 0.0, "wavelength must be positive");
    const double psi = std::arg(stack_amplitudes(top_, wavelength_nm).r) +
                       std::arg(stack_amplitudes(bottom_, wavelength_nm).r);
    std::vector<Resonance> out;
    const double depth_nm = assembly_.crater.depth_um * 1000.0;
    const int m_max = static_cast<int>(std::ceil(2.0 * max_gap_nm / wavelength_nm)) + 2;
    for (int m = -2; m <= m_max; ++m) {
        const double gap = wavelength_nm * (psi + 2.0 * constants::pi * m) / (4.0 * constants::pi);
        if (gap > kMinGapNm && gap <= max_gap_nm) out.push_back({gap, 0, gap >= depth_nm});
    }
    std::sort(out.begin(), out.end(), [](const Resonance& a, const Resonance& b) { return a.air_gap_nm < b.air_gap_nm; });
    for (std::size_t i = 0; i < out.size(); ++i) out[i].q_air = static_cast<int>(i) + 1;
    return out;
}

Resonance CavitySolver::resonance(double wavelength_nm, int q_air) const {
    require(q_air >= 1, "q_air must be at least 1");
    const auto all = resonances(wavelength_nm, wavelength_nm * (q_air + 4));
    if (static_cast<std::size_t>(q_air) > all.size())
        fail(Error::Kind::not_found, "no resonance with the requested mode number in range");
    return all[q_air - 1];
}

double CavitySolver::assembly_reflectance(double wavelength_nm, double air_gap_nm) const {
    return response_at(full_stack(air_gap_nm), wavelength_nm).reflectance;
}

double CavitySolver::refine_gap_by_reflectance(double wavelength_nm, double air_gap_guess_nm) const {
    // The phase solution lands within a small fraction of a linewidth of the
    // dip, so a narrow bracket around it is unimodal.
    double lo = air_gap_guess_nm - 0.15, hi = air_gap_guess_nm + 0.15;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = assembly_reflectance(wavelength_nm, x1), f2 = assembly_reflectance(wavelength_nm, x2);
    while (hi - lo > 1e-4) {
        if (f1 < f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = assembly_reflectance(wavelength_nm, x1);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = assembly_reflectance(wavelength_nm, x2);
        }
    }
    return 0.5 * (lo + hi);
}

FlatStack CavitySolver::full_stack(double air_gap_nm) const {
    require(air_gap_nm > 0.0, "air gap must be positive");
    FlatStack bottom_up = reversed(bottom_);
    bottom_up.media.pop_back();  // drop the gap medium, re-added with the gap layer
    bottom_up.interface_sigma_nm.pop_back();

    FlatStack full = bottom_up;
    full.media.push_back(top_.media.front());
    full.thickness_nm.push_back(air_gap_nm);
    full.interface_sigma_nm.push_back(top_.interface_sigma_nm.front());
    for (std::size_t j = 1; j < top_.media.size(); ++j) full.media.push_back(top_.media[j]);
    for (std::size_t j = 0; j < top_.thickness_nm.size(); ++j) full.thickness_nm.push_back(top_.thickness_nm[j]);
    for (std::size_t j = 1; j < top_.interface_sigma_nm.size(); ++j)
        full.interface_sigma_nm.push_back(top_.interface_sigma_nm[j]);
    return full;
}

double CavitySolver::geometric_length_um(double air_gap_nm) const {
    double length_nm = air_gap_nm;
    if (assembly_.membrane) length_nm += assembly_.membrane->thickness_nm / assembly_.membrane->index.n;
    return length_nm * 1e-3;
}

namespace {

LossBudget compute_budget(const CavitySolver& solver, double wavelength_nm, const Resonance& res,
                          bool include_clipping) {
    const FlatStack& top = solver.top_from_gap();
    const FlatStack& bottom = solver.bottom_from_gap();

    const auto pt = response_at(top, wavelength_nm);
    const auto pb = response_at(bottom, wavelength_nm);

    auto absorption_only = [&](const FlatStack& stack) {
        FlatStack smooth = stack;
        std::fill(smooth.interface_sigma_nm.begin(), smooth.interface_sigma_nm.end(), 0.0);
        return response_at(smooth, wavelength_nm).absorptance;
    };

    LossBudget budget;
    budget.wavelength_nm = wavelength_nm;
    budget.air_gap_nm = res.air_gap_nm;
    budget.q_air = res.q_air;
    budget.accessible = res.accessible;
    budget.transmission_top = pt.transmittance;
    budget.transmission_bottom = pb.transmittance;
    budget.loss_absorb = absorption_only(top) + absorption_only(bottom);
    budget.loss_scatter = (pt.absorptance + pb.absorptance) - budget.loss_absorb;
    budget.effective_length_nm = res.air_gap_nm + mirror_group_length_nm(top, wavelength_nm) +
                                 mirror_group_length_nm(bottom, wavelength_nm);
    budget.loss_clip = 0.0;
    if (include_clipping && solver.assembly().extent_diameter_um > 0.0) {
        const double w = beam_waist_curved_um(wavelength_nm, solver.assembly().crater.radius_of_curvature_um,
                                              solver.geometric_length_um(res.air_gap_nm));
        budget.loss_clip = clipping_loss(solver.assembly().clipping_geometry(), w);
    }
    finalize_budget(budget);
    return budget;
}

}  // namespace

LossBudget CavitySolver::budget(double wavelength_nm, int q_air, bool include_clipping) const {
    return compute_budget(*this, wavelength_nm, resonance(wavelength_nm, q_air), include_clipping);
}

LossBudget CavitySolver::budget_at_gap(double wavelength_nm, double air_gap_nm, bool include_clipping) const {
    const auto all = resonances(wavelength_nm, air_gap_nm + wavelength_nm);
    const Resonance* nearest = nullptr;
    for (const auto& r : all) {
        if (!nearest || std::abs(r.air_gap_nm - air_gap_nm) < std::abs(nearest->air_gap_nm - air_gap_nm)) nearest = &r;
    }
    if (!nearest || std::abs(nearest->air_gap_nm - air_gap_nm) > 0.05) {
        fail(Error::Kind::invalid_argument,
             "configuration is off resonance: solve the air gap with the resonance solver first");
    }
    return compute_budget(*this, wavelength_nm, *nearest, include_clipping);
}

ModeMap mode_map(const CavityAssembly& assembly, double air_gap_min_nm, double air_gap_max_nm,
                 double wavelength_min_nm, double wavelength_max_nm, int wavelength_samples, bool refine_dips) {
    require(air_gap_min_nm > 0.0 && air_gap_max_nm > air_gap_min_nm, "air-gap range must be positive and ordered");
    require(wavelength_min_nm > 0.0 && wavelength_max_nm > wavelength_min_nm,
            "wavelength range must be positive and ordered");
    require(wavelength_samples >= 2, "need at least two wavelength samples");

    const CavitySolver solver(assembly);
    const int n = wavelength_samples;
    std::vector<double> lambda(n), psi(n);
    cd prev_top, prev_bottom;
    double accum = 0.0;
    for (int i = 0; i < n; ++i) {
        lambda[i] = wavelength_min_nm + (wavelength_max_nm - wavelength_min_nm) * i / (n - 1.0);
        const cd rt = stack_amplitudes(solver.top_from_gap(), lambda[i]).r;
        const cd rb = stack_amplitudes(solver.bottom_from_gap(), lambda[i]).r;
        if (i == 0) {
            accum = std::arg(rt) + std::arg(rb);
        } else {
            accum += principal(std::arg(rt / prev_top)) + principal(std::arg(rb / prev_bottom));
        }
        prev_top = rt;
        prev_bottom = rb;
        psi[i] = accum;
    }

    auto gap_of = [&](int i, int m) {
        return lambda[i] * (psi[i] + 2.0 * constants::pi * m) / (4.0 * constants::pi);
    };

    // q_air labels fixed per branch at the window centre
    const int ic = n / 2;
    std::map<int, int> branch_q;
    {
        std::vector<std::pair<double, int>> gaps;
        for (int m = -4; m < 4 + static_cast<int>(2.0 * air_gap_max_nm / wavelength_min_nm); ++m) {
            const double g = gap_of(ic, m);
            if (g > kMinGapNm) gaps.emplace_back(g, m);
        }
        std::sort(gaps.begin(), gaps.end());
        for (std::size_t k = 0; k < gaps.size(); ++k) branch_q[gaps[k].second] = static_cast<int>(k) + 1;
    }

    ModeMap map;
    for (const auto& [m, q_air] : branch_q) {
        for (int i = 0; i < n; ++i) {
            double gap = gap_of(i, m);
            if (gap < air_gap_min_nm || gap > air_gap_max_nm) continue;
            if (refine_dips) gap = solver.refine_gap_by_reflectance(lambda[i], gap);
            Confinement cls = Confinement::air_confined;
            if (assembly.membrane) {
                cls = classify_confinement(assembly.membrane->thickness_nm, assembly.membrane->index.n, lambda[i]).kind;
            }
            map.points.push_back({gap, lambda[i], q_air, cls});
        }
    }
    std::sort(map.points.begin(), map.points.end(), [](const ModePoint& a, const ModePoint& b) {
        if (a.air_gap_nm != b.air_gap_nm) return a.air_gap_nm < b.air_gap_nm;
        return a.wavelength_nm < b.wavelength_nm;
    });
    return map;
}

double dispersion_slope(const CavityAssembly& assembly, double wavelength0_nm, int q_air, double half_span_nm) {
    require(half_span_nm > 0.0, "span must be positive");
    const CavitySolver solver(assembly);
    const double gap0 = solver.resonance(wavelength0_nm, q_air).air_gap_nm;

    // march along the branch, carrying the unwrapped mirror phase
    auto trace_to = [&](double gap_target) {
        const double direction = gap_target > gap0 ? 1.0 : -1.0;
        double lam = wavelength0_nm;
        cd rt = stack_amplitudes(solver.top_from_gap(), lam).r;
        cd rb = stack_amplitudes(solver.bottom_from_gap(), lam).r;
        double psi = std::arg(rt) + std::arg(rb);
        const int m = static_cast<int>(std::lround((4.0 * constants::pi * gap0 / lam - psi) / (2.0 * constants::pi)));
        double gap = lam * (psi + 2.0 * constants::pi * m) / (4.0 * constants::pi);
        double prev_lam = lam, prev_gap = gap;
        const double dl = 0.05 * direction;
        for (int step = 0; step < 40000; ++step) {
            prev_lam = lam;
            prev_gap = gap;
            lam += dl;
            const cd rt2 = stack_amplitudes(solver.top_from_gap(), lam).r;
            const cd rb2 = stack_amplitudes(solver.bottom_from_gap(), lam).r;
            psi += principal(std::arg(rt2 / rt)) + principal(std::arg(rb2 / rb));
            rt = rt2;
            rb = rb2;
            gap = lam * (psi + 2.0 * constants::pi * m) / (4.0 * constants::pi);
            if ((gap - gap_target) * direction >= 0.0) {
                const double f = (gap_target - prev_gap) / (gap - prev_gap);
                return prev_lam + f * (lam - prev_lam);
            }
        }
        fail(Error::Kind::no_convergence, "branch trace did not reach the requested air gap");
    };

    const double lambda_minus = trace_to(gap0 - half_span_nm);
    const double lambda_plus = trace_to(gap0 + half_span_nm);
    return (lambda_plus - lambda_minus) / (2.0 * half_span_nm);
}

std::vector<ModeQuality> q_vs_mode_number(const CavityAssembly& assembly, double wavelength_nm, int q_air_min,
                                          int q_air_max, bool include_clipping) {
    require(q_air_min >= 1 && q_air_max >= q_air_min, "mode-number range must be ordered and positive");
    const CavitySolver solver(assembly);
    std::vector<ModeQuality> out;
    for (int q = q_air_min; q <= q_air_max; ++q) {
        const auto budget = solver.budget(wavelength_nm, q, include_clipping);
        out.push_back({q, budget.air_gap_nm, budget.accessible, budget});
    }
    return out;
}

std::function<double(int, double, double)> make_q_model(const CavityAssembly& assembly, double wavelength_nm,
                                                        int q_air_min, int q_air_max) {
    struct Cached {
        double loss_no_clip;
        double effective_length_nm;
        double waist_um;
    };
    auto cache = std::make_shared<std::map<int, Cached>>();
    const CavitySolver solver(assembly);
    for (int q = q_air_min; q <= q_air_max; ++q) {
        const auto budget = solver.budget(wavelength_nm, q, false);
        const double w = beam_waist_curved_um(wavelength_nm, assembly.crater.radius_of_curvature_um,
                                              solver.geometric_length_um(budget.air_gap_nm));
        (*cache)[q] = {budget.loss_total, budget.effective_length_nm, w};
    }
    const double r_cav = assembly.crater.radius_of_curvature_um;
    const double depth = assembly.crater.depth_um;
    return [cache, wavelength_nm, r_cav, depth](int q, double extent_um, double tilt_deg) {
        const auto it = cache->find(q);
        require(it != cache->end(), "mode number outside the cached range");
        const auto& c = it->second;
        const double clip = clipping_loss({extent_um, r_cav, tilt_deg, depth}, c.waist_um);
        return 4.0 * constants::pi * c.effective_length_nm / wavelength_nm / (c.loss_no_clip + clip);
    };
}

}  // namespace fpcav
