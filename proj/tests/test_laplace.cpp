#include <doctest.h>

#include "fracpearson/errors.hpp"
#include "fracpearson/laplace.hpp"
#include "fracpearson/mlf.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <complex>
#include <functional>

using namespace fracpearson;
using cd = std::complex<double>;

namespace {

// Numerical forward transform F(s) = int_0^inf f(t) e^{-st} dt, valid for
// Re(s) > 0. Only usable with the Bromwich-line inverter; the deformed
// contour visits Re(s) < 0 where this integral diverges.
laplace::LaplaceImage forward_transform(std::function<double(double)> f) {
    auto eval = [f](cd s) {
        boost::math::quadrature::exp_sinh<double> integrator;
        const double re = integrator.integrate(
            [&](double t) { return f(t) * std::exp(-s.real() * t) * std::cos(s.imag() * t); },
            1e-9);
        const double im = integrator.integrate(
            [&](double t) { return -f(t) * std::exp(-s.real() * t) * std::sin(s.imag() * t); },
            1e-9);
        return cd(re, im);
    };
    return {eval, 0.0};
}

} // namespace

TEST_SUITE("laplace") {

TEST_CASE("known transform pairs") {
    laplace::LaplaceImage exp_img{[](cd s) { return 1.0 / (s + 1.0); }, 0.0};
    CHECK(laplace::invert(exp_img, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-8));
    CHECK(laplace::invert(exp_img, 4.0) == doctest::Approx(std::exp(-4.0)).epsilon(1e-6));

    laplace::LaplaceImage ramp{[](cd s) { return 1.0 / (s * s); }, 0.0};
    CHECK(laplace::invert(ramp, 3.0) == doctest::Approx(3.0).epsilon(1e-8));

    // relaxation image of the two-parameter Mittag-Leffler decay
    const double b = 0.8;
    laplace::LaplaceImage ml_img{
        [=](cd s) { return std::pow(s, b - 1.0) / (std::pow(s, b) + 1.0); }, 0.0};
    CHECK(laplace::invert(ml_img, 2.0)
          == doctest::Approx(mlf::ml(b, 1.0, -std::pow(2.0, b))).epsilon(1e-8));
}

TEST_CASE("both algorithms agree on a smooth image") {
    laplace::LaplaceImage img{[](cd s) { return 1.0 / ((s + 0.5) * (s + 2.0)); }, 0.0};
    auto exact = [](double t) { return (std::exp(-0.5 * t) - std::exp(-2.0 * t)) / 1.5; };
    for (double t : {0.1, 1.0, 5.0}) {
        CHECK(laplace::invert_talbot(img, t, 32) == doctest::Approx(exact(t)).epsilon(1e-8));
        CHECK(laplace::invert_dehoog(img, t, 32) == doctest::Approx(exact(t)).epsilon(1e-7));
    }
}

TEST_CASE("round trip through a numerical forward transform") {
    struct Probe {
        std::function<double(double)> f;
        double tol;
    };
    const Probe probes[] = {
        {[](double t) { return std::exp(-t); }, 1e-6},
        {[](double t) { return t; }, 1e-6},
        {[](double t) { return std::cos(t); }, 1e-5},
    };
    for (const auto& p : probes) {
        const auto img = forward_transform(p.f);
        for (double t : {0.1, 1.0, 10.0}) {
            // Bromwich-line method only; see forward_transform
            CHECK(laplace::invert_dehoog(img, t, 32)
                  == doctest::Approx(p.f(t)).epsilon(p.tol));
        }
    }
}

TEST_CASE("shifted abscissa") {
    // f(t) = e^{2t}: image 1/(s-2) analytic only right of 2
    laplace::LaplaceImage img{[](cd s) { return 1.0 / (s - 2.0); }, 2.0};
    CHECK(laplace::invert(img, 1.0) == doctest::Approx(std::exp(2.0)).epsilon(1e-7));
}

TEST_CASE("guards") {
    laplace::LaplaceImage img{[](cd s) { return 1.0 / (s + 1.0); }, 0.0};
    CHECK_THROWS_AS(laplace::invert(img, 0.001), DomainError);
    CHECK_THROWS_AS(laplace::invert(img, -1.0), DomainError);
    laplace::InversionPolicy p;
    p.nodes = 8;
    CHECK_THROWS_AS(laplace::invert(img, 1.0, p), DomainError);
}

TEST_CASE("cross-checked inversion flags disagreement") {
    // poles at +-i sit outside the deformed contour at large t, so the two
    // algorithms produce incompatible answers for cos(t)
    laplace::LaplaceImage img{[](cd s) { return s / (s * s + 1.0); }, 0.0};
    CHECK_THROWS_AS(laplace::invert(img, 40.0), InversionUnstable);
}

} // TEST_SUITE
