#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dumbbell/quadrature.hpp"

using namespace dumbbell;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("polynomial and trig integrals") {
    QuadratureConfig cfg;
    auto r = integrate_adaptive([](double x) { return x * x; }, 0.0, 3.0, cfg);
    CHECK(r.value == doctest::Approx(9.0).epsilon(1e-12));

    r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, kPi, cfg);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.error < 1e-8);
}

TEST_CASE("damped oscillation against the closed form") {
    // int_0^inf e^{-a x} sin(w x) dx = w / (a^2 + w^2)
    QuadratureConfig cfg;
    const double a = 0.5, w = 7.0;
    const double upper = cfg.envelope_cutoff / a;
    const auto r = integrate_adaptive(
        [&](double x) { return std::exp(-a * x) * std::sin(w * x); }, 0.0,
        upper, cfg, kPi / w);
    CHECK(r.value == doctest::Approx(w / (a * a + w * w)).epsilon(1e-10));
}

TEST_CASE("error estimate bounds the true error") {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-6;
    const auto r = integrate_adaptive(
        [](double x) { return std::exp(-x) * std::cos(10.0 * x); }, 0.0, 40.0,
        cfg, kPi / 10.0);
    const double exact = 1.0 / 101.0;
    CHECK(std::abs(r.value - exact) <= std::max(r.error, 1e-12));
}

TEST_CASE("panel budget violation throws") {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-14;
    cfg.abs_tol = 1e-16;
    cfg.max_subdivisions = 4;
    CHECK_THROWS_AS(integrate_adaptive(
                        [](double x) { return std::sin(200.0 * x) / (1e-4 + x); },
                        0.0, 10.0, cfg),
                    QuadratureBudgetExceeded);
}

TEST_CASE("degenerate interval") {
    QuadratureConfig cfg;
    const auto r =
        integrate_adaptive([](double x) { return x; }, 2.0, 2.0, cfg);
    CHECK(r.value == 0.0);
    CHECK(r.error == 0.0);
}
