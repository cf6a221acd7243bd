#include "coldcloud/saturation.hpp"
#include "support.hpp"

#include <doctest.h>

#include <numbers>
#include <stdexcept>

using namespace coldcloud;
using std::numbers::pi;
using testing::rel;

namespace {

const CloudParams mot(1e6, 1e-3, 0.1, 9.81);

BeamParams beam_with(double waist, double rayleigh) { return BeamParams(waist, pi * waist * waist / rayleigh); }

// w0 / sigma_r = 1e-2 and sigma_r / l_R = 1e-3.
const EffNumInputs joint{mot, beam_with(1e-5, 1.0)};

} // namespace

TEST_CASE("polarizability")
{
    CHECK(polarizability({0.0, 0.0}, 0.0) == std::complex<double>(1.0, 0.0));
    const auto a = polarizability({1.0, 0.0}, 0.0);
    CHECK(std::abs(a - std::complex<double>(0.5, -0.5)) < 1e-16);
    CHECK(polarizability({0.0, 0.0}, 0.5) == std::complex<double>(0.5, 0.0));
    CHECK_THROWS_AS((void)polarizability({0.0, 0.0}, -0.1), std::invalid_argument);
}

TEST_CASE("optical parameters are validated")
{
    CHECK_THROWS_AS((OpticalParams{0.0, -1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((OpticalParams{std::nan(""), 0.0}.validate()), std::invalid_argument);
    CHECK_NOTHROW((OpticalParams{-4.0, 0.0}.validate()));
}

TEST_CASE("on-axis saturation")
{
    const BeamParams b(100e-6, 852e-9);
    const OpticalParams opt{0.0, 0.4};
    CHECK(saturation_on_axis(opt, b, 0.0) == 0.4);
    CHECK(rel(saturation_on_axis(opt, b, b.rayleigh_length()), 0.2) < 1e-15);
    CHECK(saturation_on_axis(opt, b, 1e12) < 1e-20);
}

TEST_CASE("closed saturated sigma")
{
    for (double t : {0.0, 4e-3, 25e-3}) {
        const double sigma = sigma_long_rayleigh(joint, t);
        CHECK(sigma_saturated_closed(joint, {0.0, 0.0}, t) == sigma);
        CHECK(rel(sigma_saturated_closed(joint, {0.0, 1e-9}, t), sigma) < 1e-8);
        CHECK(rel(sigma_saturated_closed(joint, {0.0, 0.5}, t), sigma * std::log(2.0)) < 1e-15);
    }
    for (double s : {0.1, 1.0, 7.0}) {
        const OpticalParams opt{0.0, s};
        const double r0 = sigma_saturated_closed(joint, opt, 0.0) / sigma_long_rayleigh(joint, 0.0);
        for (double t : {5e-3, 2e-2})
            CHECK(rel(sigma_saturated_closed(joint, opt, t) / sigma_long_rayleigh(joint, t), r0) < 1e-14);
    }
}

TEST_CASE("general saturated sigma without saturation is sigma")
{
    const EffNumInputs in{mot, BeamParams(100e-6, 852e-9)};
    for (double t : {0.0, 1e-2})
        CHECK(rel(sigma_saturated_general(in, {0.0, 0.0}, t), sigma_general(in, t)) < 1e-9);
}

TEST_CASE("series path matches the closed form in the joint limit")
{
    for (double s : {0.1, 0.3})
        for (double t : {0.0, 1e-2, 3e-2})
            CHECK(rel(sigma_saturated_general(joint, {0.0, s}, t), sigma_saturated_closed(joint, {0.0, s}, t))
                  < 1e-4);
}

TEST_CASE("uniform layer reduces to the log factor")
{
    // w / sigma = 1e-3: transverse quadrature against rho_axis S ln(1 + 2 s) / (2 s).
    const CloudParams flat(1e6, 1e-2, 0.1, 0.0);
    const EffNumInputs in{flat, beam_with(1e-5, 1e3)};
    const double rho_axis = column_number_density(in, 0.0, 0.0) / (2 * pi * 1e-4);
    for (double s : {0.2, 1.0, 5.0}) {
        const auto layer = saturated_layer_quadrature(in, {0.0, s}, 0.0, 0.0);
        CHECK(layer.method == SaturatedLayerMethod::quadrature);
        CHECK(rel(layer.value, rho_axis * beam_section(in.beam, 0.0) * saturation_log_factor(s)) < 1e-6);
    }
    // A much wider cloud switches to the exact reduction.
    const EffNumInputs wider{CloudParams(1e6, 1.0, 1.0, 0.0), beam_with(1e-5, 1e3)};
    const auto reduced = saturated_layer_density(wider, {0.0, 2.0}, 0.0, 0.0);
    CHECK(reduced.method == SaturatedLayerMethod::log_reduction);
    const double rho = column_number_density(wider, 0.0, 0.0) / (2 * pi);
    CHECK(rel(reduced.value, rho * beam_section(wider.beam, 0.0) * std::log(5.0) / 4.0) < 1e-14);
}

TEST_CASE("series and transverse quadrature agree below the series limit")
{
    testing::Gen gen(41);
    for (int i = 0; i < 10; ++i) {
        const CloudParams c(1e6, gen.log_uniform(1e-4, 1e-3), gen.log_uniform(0.02, 0.2), gen.coin() ? 9.81 : 0.0);
        const EffNumInputs in{c, BeamParams(gen.log_uniform(3e-5, 1e-3), 852e-9)};
        const OpticalParams opt{0.0, gen.uniform(0.01, 0.39)};
        const double t = gen.uniform(0, 1.5) * ballistic_time(c);
        const double x = gen.uniform(-1, 1) * std::sqrt(c.spread_squared(t));
        const auto series = saturated_layer_series(in, opt, x, t);
        const auto direct = saturated_layer_quadrature(in, opt, x, t);
        CHECK(series.method == SaturatedLayerMethod::series);
        CHECK(series.terms <= 200);
        if (direct.value > 1e-250)
            CHECK(rel(series.value, direct.value) < 1e-8);
    }
}

TEST_CASE("series refuses a divergent expansion")
{
    try {
        (void)saturated_layer_series(joint, {0.0, 0.75}, 0.0, 0.0);
        FAIL("expected SeriesError");
    } catch (const SeriesError& e) {
        CHECK(e.terms() == 200);
    }
    // The dispatcher falls back to quadrature instead.
    CHECK(saturated_layer_density(joint, {0.0, 0.75}, 0.0, 0.0).method == SaturatedLayerMethod::quadrature);
}

TEST_CASE("order-j layer density is the layer density of a narrower beam")
{
    testing::Gen gen(42);
    for (int i = 0; i < 100; ++i) {
        const CloudParams c(1e6, gen.log_uniform(1e-4, 1e-2), gen.log_uniform(0.01, 1.0), gen.coin() ? 9.81 : 0.0);
        const BeamParams b(gen.log_uniform(1e-6, 1e-3), gen.log_uniform(4e-7, 2e-6));
        const double t = gen.uniform(0, 2) * ballistic_time(c);
        const double x = gen.uniform(-2, 2) * std::sqrt(c.spread_squared(t));
        for (int j = 1; j <= 6; ++j) {
            // w0^2 / j at unchanged l_R.
            const EffNumInputs narrow{c, BeamParams(b.waist() / std::sqrt(j), b.wavelength() / j)};
            CHECK(rel(layer_number_density({c, b}, x, t, j), layer_number_density(narrow, x, t)) < 1e-13);
        }
    }
}

TEST_CASE("small-waist order-j identity")
{
    const EffNumInputs in{mot, beam_with(1e-6, 1.0)};
    for (double t : {0.0, 1e-2})
        for (int j = 2; j <= 6; ++j)
            CHECK(rel(layer_number_density(in, 2e-4, t, j), layer_number_density(in, 2e-4, t) / j) < 1e-6);
}

TEST_CASE("nonlinear field shift")
{
    const EffNumInputs in{mot, BeamParams(100e-6, 852e-9)};
    const auto lin = linear_field_shift(in, {2.0, 0.0}, 5e-3);
    const auto nl0 = nonlinear_field_shift(in, {2.0, 0.0}, 5e-3);
    CHECK(std::abs(nl0 - lin) <= 1e-9 * std::abs(lin));
    for (double s : {0.05, 0.3, 1.0})
        CHECK(std::abs(nonlinear_field_shift(in, {2.0, s}, 5e-3)) <= std::abs(lin));

    // Joint limit, delta = 2, s_m0 = 1/2: closed product against the general path.
    const OpticalParams opt{2.0, 0.5};
    const auto closed = field_shift(joint.beam, opt, sigma_saturated_closed(joint, opt, 0.0));
    const auto general = nonlinear_field_shift(joint, opt, 0.0);
    CHECK(std::abs(general - closed) < 1e-4 * std::abs(closed));
}

TEST_CASE("property: saturated sigma does not increase with saturation")
{
    const EffNumInputs in{mot, BeamParams(300e-6, 852e-9)};
    double prev = sigma_saturated_general(in, {0.0, 0.0}, 5e-3);
    for (double s : {0.05, 0.2, 0.39, 0.6, 1.5}) {
        const double now = sigma_saturated_general(in, {0.0, s}, 5e-3, 1e-7);
        CHECK(now <= prev);
        prev = now;
    }
}
