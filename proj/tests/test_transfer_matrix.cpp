#include <doctest.h>

#include <cmath>
#include <complex>

#include "fpcav/transfer_matrix.hpp"
#include "test_helpers.hpp"

using namespace fpcav;
using cd = std::complex<double>;

namespace {

LayerStack random_lossless_stack(testutil::Rng& rng, int max_layers = 8) {
    LayerStack stack;
    stack.incidence = {rng.uniform(1.0, 1.8), 0.0};
    stack.exit = {rng.uniform(1.0, 2.4), 0.0};
    const int n = rng.integer(1, max_layers);
    for (int i = 0; i < n; ++i) {
        stack.layers.push_back({{rng.uniform(1.2, 2.5), 0.0}, rng.uniform(40.0, 500.0), 0.0});
    }
    return stack;
}

}  // namespace

TEST_CASE("characteristic matrix analytic cases") {
    const double lambda = 600.0;

    SUBCASE("quarter-wave lossless layer") {
        const double n = 2.11;
        const Layer layer{{n, 0.0}, lambda / (4.0 * n), 0.0};
        const auto m = characteristic_matrix(layer, lambda);
        CHECK(std::abs(m[0][0]) < 1e-12);
        CHECK(std::abs(m[1][1]) < 1e-12);
        CHECK(std::abs(m[0][1] - cd{0.0, 1.0 / n}) < 1e-12);
        CHECK(std::abs(m[1][0] - cd{0.0, n}) < 1e-12);
    }

    SUBCASE("zero-thickness limit is the identity") {
        const Layer layer{{1.7, 0.0}, 0.0, 0.0};
        const auto m = characteristic_matrix(layer, lambda);
        CHECK(std::abs(m[0][0] - 1.0) < 1e-12);
        CHECK(std::abs(m[1][1] - 1.0) < 1e-12);
        CHECK(std::abs(m[0][1]) < 1e-12);
        CHECK(std::abs(m[1][0]) < 1e-12);
    }

    SUBCASE("half-wave layer is minus the identity") {
        const double n = 1.46;
        const Layer layer{{n, 0.0}, lambda / (2.0 * n), 0.0};
        const auto m = characteristic_matrix(layer, lambda);
        CHECK(std::abs(m[0][0] + 1.0) < 1e-12);
        CHECK(std::abs(m[1][1] + 1.0) < 1e-12);
        CHECK(std::abs(m[0][1]) < 1e-12);
        CHECK(std::abs(m[1][0]) < 1e-12);
    }

    SUBCASE("non-positive wavelength rejected") {
        CHECK_THROWS_AS(characteristic_matrix({{1.5, 0.0}, 100.0, 0.0}, 0.0), Error);
        CHECK_THROWS_AS(characteristic_matrix({{1.5, 0.0}, -5.0, 0.0}, 500.0), Error);
    }
}

TEST_CASE("determinant is unity for lossy and lossless layers") {
    testutil::Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const Layer layer{{rng.uniform(1.0, 3.0), rng.uniform(0.0, 0.05)}, rng.uniform(1.0, 1500.0), 0.0};
        const auto m = characteristic_matrix(layer, rng.uniform(450.0, 900.0));
        CHECK(std::abs(det(m) - 1.0) < 1e-12);
    }
}

TEST_CASE("bare interface matches the Fresnel coefficient") {
    LayerStack stack;
    stack.incidence = {1.0, 0.0};
    stack.exit = {2.41, 0.0};
    const auto resp = stack_response(stack, {600.0});
    const double r = (2.41 - 1.0) / (2.41 + 1.0);
    CHECK(resp.reflectance[0] == doctest::Approx(r * r).epsilon(1e-12));
    CHECK(resp.reflectance[0] == doctest::Approx(0.1710).epsilon(5e-4));
}

TEST_CASE("empty stack with identical media is transparent") {
    LayerStack stack;
    stack.incidence = {1.33, 0.0};
    stack.exit = {1.33, 0.0};
    const auto resp = stack_response(stack, {450.0, 600.0, 750.0});
    for (std::size_t i = 0; i < resp.wavelength_nm.size(); ++i) {
        CHECK(std::abs(resp.reflectance[i]) < 1e-14);
        CHECK(std::abs(resp.transmittance[i] - 1.0) < 1e-14);
    }
}

TEST_CASE("energy conservation and passivity") {
    testutil::Rng rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        LayerStack stack = random_lossless_stack(rng);
        const bool lossy = trial % 2 == 0;
        if (lossy) {
            for (auto& layer : stack.layers) layer.index.kappa_ext = rng.uniform(0.0, 1e-3);
            stack.layers.front().roughness_rms_nm = rng.uniform(0.0, 1.0);
        }
        std::vector<double> grid;
        for (int i = 0; i < 12; ++i) grid.push_back(rng.uniform(420.0, 900.0));
        const auto resp = stack_response(stack, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(resp.reflectance[i] >= 0.0);
            CHECK(resp.reflectance[i] <= 1.0 + 1e-12);
            CHECK(resp.transmittance[i] >= 0.0);
            CHECK(resp.transmittance[i] <= 1.0 + 1e-12);
            CHECK(std::abs(resp.reflectance[i] + resp.transmittance[i] + resp.absorptance[i] - 1.0) < 1e-9);
            if (lossy) {
                CHECK(resp.absorptance[i] > -1e-12);
            } else {
                CHECK(std::abs(resp.absorptance[i]) < 1e-9);
            }
        }
    }
}

TEST_CASE("reciprocity: lossless transmission is direction independent") {
    testutil::Rng rng(37);
    for (int trial = 0; trial < 40; ++trial) {
        const LayerStack stack = random_lossless_stack(rng);
        LayerStack swapped;
        swapped.incidence = stack.exit;
        swapped.exit = stack.incidence;
        swapped.layers.assign(stack.layers.rbegin(), stack.layers.rend());
        const double lambda = rng.uniform(420.0, 900.0);
        const auto fwd = stack_response(stack, {lambda});
        const auto rev = stack_response(swapped, {lambda});
        CHECK(fwd.transmittance[0] == doctest::Approx(rev.transmittance[0]).epsilon(1e-9));
    }
}

TEST_CASE("two-interface slab matches the analytic Airy formula") {
    testutil::Rng rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        const double n1 = rng.uniform(1.0, 1.6), n2 = rng.uniform(1.6, 2.8), n3 = rng.uniform(1.0, 1.9);
        const double thickness = rng.uniform(80.0, 600.0);
        const double lambda = rng.uniform(450.0, 850.0);

        const double r1 = (n1 - n2) / (n1 + n2), r2 = (n2 - n3) / (n2 + n3);
        const cd phase = std::exp(cd{0.0, -4.0 * constants::pi * n2 * thickness / lambda});
        const cd r_airy = (r1 + r2 * phase) / (1.0 + r1 * r2 * phase);
        const cd t_airy = (2.0 * n1 / (n1 + n2)) * (2.0 * n2 / (n2 + n3)) *
                          std::exp(cd{0.0, -2.0 * constants::pi * n2 * thickness / lambda}) /
                          (1.0 + r1 * r2 * phase);
        const double r_expected = std::norm(r_airy);
        const double t_expected = std::norm(t_airy) * n3 / n1;

        LayerStack stack;
        stack.incidence = {n1, 0.0};
        stack.exit = {n3, 0.0};
        stack.layers.push_back({{n2, 0.0}, thickness, 0.0});
        const auto resp = stack_response(stack, {lambda});
        CHECK(std::abs(resp.reflectance[0] - r_expected) <= 1e-8 * std::max(r_expected, 1e-4));
        CHECK(std::abs(resp.transmittance[0] - t_expected) <= 1e-8 * t_expected);
    }
}

TEST_CASE("quarter-wave stack matches the closed-form admittance formula") {
    const double lambda_c = 625.0, n_h = 2.11, n_l = 1.46, n_sub = 1.46;
    for (int pairs : {4, 8, 14}) {
        const auto stack = build_quarter_wave_dbr(lambda_c, pairs, n_h, n_l, {n_sub, 0.0});
        const auto resp = stack_response(stack, {lambda_c});
        const double admittance = std::pow(n_h / n_l, 2.0 * pairs) * n_sub;
        const double t_expected = 4.0 * admittance / ((1.0 + admittance) * (1.0 + admittance));
        CHECK(resp.transmittance[0] == doctest::Approx(t_expected).epsilon(1e-6));
    }
}

TEST_CASE("quarter-wave mirror construction") {
    SUBCASE("single pair has the two quarter-wave layers") {
        const auto stack = build_quarter_wave_dbr(625.0, 1, 2.11, 1.46, {1.46, 0.0});
        REQUIRE(stack.layers.size() == 2);
        CHECK(stack.layers[0].index.n == doctest::Approx(2.11));
        CHECK(stack.layers[0].thickness_nm == doctest::Approx(625.0 / (4.0 * 2.11)));
        CHECK(stack.layers[1].index.n == doctest::Approx(1.46));
        CHECK(stack.layers[1].thickness_nm == doctest::Approx(625.0 / (4.0 * 1.46)));
    }

    SUBCASE("centre reflectance grows with pair count") {
        double previous = 0.0;
        for (int pairs : {4, 8, 14}) {
            const auto stack = build_quarter_wave_dbr(625.0, pairs, 2.11, 1.46, {1.46, 0.0});
            const double r = stack_response(stack, {625.0}).reflectance[0];
            CHECK(r > previous);
            previous = r;
        }
    }

    SUBCASE("pair count must be positive") {
        CHECK_THROWS_AS(build_quarter_wave_dbr(625.0, 0, 2.11, 1.46, {1.46, 0.0}), Error);
    }
}

TEST_CASE("stopband centre") {
    SUBCASE("ideal 14-pair design is centred at the design wavelength") {
        const auto stack = build_quarter_wave_dbr(625.0, 14, 2.11, 1.46, {1.46, 0.0});
        std::vector<double> grid;
        for (double w = 540.0; w <= 720.0; w += 0.05) grid.push_back(w);
        const double center = stopband_center(stack_response(stack, grid));
        CHECK(center == doctest::Approx(625.0).epsilon(2.0 / 625.0));
    }

    SUBCASE("synthetic rectangular plateau returns its exact midpoint") {
        // plateau symmetric in optical frequency around 625 nm
        const double nu_center = 1.0 / 625.0, half = 0.08 * nu_center;
        SpectralResponse resp;
        for (int i = 0; i <= 400; ++i) {
            const double nu = nu_center * (1.0 - 0.2) + i * (0.4 * nu_center) / 400.0;
            resp.wavelength_nm.push_back(1.0 / nu);
            resp.reflectance.push_back(std::abs(nu - nu_center) <= half ? 0.9999 : 0.1);
        }
        std::reverse(resp.wavelength_nm.begin(), resp.wavelength_nm.end());
        std::reverse(resp.reflectance.begin(), resp.reflectance.end());
        CHECK(stopband_center(resp) == doctest::Approx(625.0).epsilon(1e-3));
    }

    SUBCASE("grid below threshold raises not-found") {
        SpectralResponse resp;
        resp.wavelength_nm = {600.0, 610.0, 620.0};
        resp.reflectance = {0.5, 0.6, 0.55};
        CHECK_THROWS_AS(stopband_center(resp), Error);
        try {
            stopband_center(resp);
        } catch (const Error& e) {
            CHECK(e.kind == Error::Kind::not_found);
        }
    }
}

TEST_CASE("field profiles") {
    SUBCASE("half-wave layer between identical media is symmetric") {
        const double lambda = 600.0, n = 1.8;
        LayerStack stack;
        stack.incidence = {1.0, 0.0};
        stack.exit = {1.0, 0.0};
        stack.layers.push_back({{n, 0.0}, lambda / (2.0 * n), 0.0});
        const auto profile = field_distribution(stack, lambda, 128);
        CHECK(profile.amplitude.front() == doctest::Approx(profile.amplitude.back()).epsilon(1e-9));
    }

    SUBCASE("|E| is continuous across every interface of a smooth stack") {
        testutil::Rng rng(53);
        for (int trial = 0; trial < 20; ++trial) {
            const LayerStack stack = random_lossless_stack(rng, 6);
            const auto profile = field_distribution(stack, rng.uniform(450.0, 800.0), 32);
            for (std::size_t j = 0; j + 1 < profile.layers.size(); ++j) {
                const double z_boundary = profile.layers[j + 1].z_start_nm;
                const double below = std::abs(field_at(profile, z_boundary - 1e-9));
                const double above = std::abs(field_at(profile, z_boundary + 1e-9));
                CHECK(std::abs(below - above) <= 1e-6 * std::max(below, 1e-6));
            }
        }
    }

    SUBCASE("sampling below 16 points per layer is rejected") {
        LayerStack stack;
        stack.incidence = {1.0, 0.0};
        stack.exit = {1.0, 0.0};
        stack.layers.push_back({{1.5, 0.0}, 200.0, 0.0});
        CHECK_THROWS_AS(field_distribution(stack, 600.0, 8), Error);
    }
}

TEST_CASE("input validation propagates as invalid-argument errors") {
    LayerStack stack;
    stack.incidence = {1.0, 0.0};
    stack.exit = {1.5, 0.0};
    stack.layers.push_back({{1.5, 0.0}, -10.0, 0.0});
    CHECK_THROWS_AS(stack_response(stack, {500.0}), Error);

    LayerStack good;
    good.incidence = {1.0, 0.0};
    good.exit = {1.5, 0.0};
    CHECK_THROWS_AS(stack_response(good, {}), Error);
    CHECK_THROWS_AS(stack_response(good, {-1.0}), Error);
}
