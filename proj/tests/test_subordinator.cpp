#include <doctest.h>

#include "fracpearson/errors.hpp"
#include "fracpearson/subordinator.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>

using namespace fracpearson;
using subordinator::StableMixture;

namespace {

StableMixture two_term() { return StableMixture({0.3, 0.8}, {0.5, 0.5}); }

} // namespace

TEST_SUITE("subordinator") {

TEST_CASE("mixture validation") {
    CHECK_THROWS_WITH_AS(StableMixture({1.2}, {1.0}),
                         doctest::Contains("orders must lie in (0,1)"), DomainError);
    CHECK_THROWS_AS(StableMixture({0.8, 0.3}, {0.5, 0.5}), DomainError);
    CHECK_THROWS_AS(StableMixture({0.3, 0.3}, {0.5, 0.5}), DomainError);
    CHECK_THROWS_AS(StableMixture({0.3}, {-0.1}), DomainError);
    CHECK_THROWS_AS(StableMixture({0.3}, {0.0}), DomainError);
    CHECK_THROWS_AS(StableMixture({0.3, 0.8}, {0.5}), DomainError);
    CHECK_THROWS_AS(StableMixture({0.3, 0.8}, {0.4, 0.4}, true), DomainError);

    // zero-weight components are dropped so the c1 = 0 edge degenerates cleanly
    StableMixture m({0.3, 0.8}, {0.0, 1.0});
    CHECK(m.size() == 1);
    CHECK(m.orders()[0] == 0.8);

    CHECK_FALSE(StableMixture({0.3, 0.8}, {0.5, 0.5}, true).weight_sum_off_unity());
    CHECK(StableMixture({0.3, 0.8}, {0.4, 0.4}).weight_sum_off_unity());
}

TEST_CASE("laplace exponent") {
    CHECK(subordinator::psi(StableMixture({0.8}, {1.0}), 1.0) == doctest::Approx(1.0));
    CHECK(subordinator::psi(two_term(), 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(subordinator::psi(two_term(), 4.0)
          == doctest::Approx(0.5 * std::pow(4.0, 0.3) + 0.5 * std::pow(4.0, 0.8)).epsilon(1e-15));
    CHECK_THROWS_AS(subordinator::psi(two_term(), 0.0), DomainError);
}

TEST_CASE("phi basics and single-order reduction") {
    CHECK(subordinator::phi(two_term(), 1.0, 0.0) == 1.0);
    CHECK(subordinator::phi(two_term(), 7.3, 0.0) == 1.0);

    // c1 = 0: Phi collapses to the Mittag-Leffler decay E_{b2,1}(-theta t^{b2})
    StableMixture single({0.3, 0.8}, {0.0, 1.0});
    for (double theta : {0.5, 1.0, 2.0})
        for (double t : {0.1, 1.0, 10.0})
            CHECK(subordinator::phi(single, theta, t)
                  == doctest::Approx(mlf::ml(0.8, 1.0, -theta * std::pow(t, 0.8))).epsilon(1e-10));
    CHECK_THROWS_AS(subordinator::phi(two_term(), 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(subordinator::phi(two_term(), 1.0, -1.0), DomainError);
}

TEST_CASE("phi fixed reference values") {
    // references: high-precision inversion of (c1 s^{b1-1}+c2 s^{b2-1})/(theta+psi)
    CHECK(subordinator::phi(two_term(), 1.0, 1.0)
          == doctest::Approx(0.40699138220326488936).epsilon(1e-8));
    CHECK(subordinator::phi(two_term(), 0.5, 0.1)
          == doctest::Approx(0.876132536507600212).epsilon(1e-10));
    CHECK(subordinator::phi(two_term(), 1.0, 0.1)
          == doctest::Approx(0.771942463040792397).epsilon(1e-10));
    CHECK(subordinator::phi(two_term(), 2.0, 0.1)
          == doctest::Approx(0.60919442836423417).epsilon(1e-10));
}

TEST_CASE("phi double-series route vs inversion route") {
    const auto mix = two_term();
    for (double theta : {0.5, 1.0, 2.0}) {
        for (double t : {0.05, 0.1, 0.5, 1.0, 10.0}) {
            const double a = subordinator::phi(mix, theta, t);
            const double b = subordinator::phi_n(mix, theta, t);
            CHECK(a == doctest::Approx(b).epsilon(1e-6));
        }
    }
    // below t = 0.1 the series route is genuinely independent of inversion
    const auto r = subordinator::phi_ex(mix, 1.0, 0.05);
    CHECK_FALSE(r.used_inversion);
}

TEST_CASE("phi monotone in t and theta, bounded in (0,1]") {
    const auto mix = two_term();
    double prev = 1.0;
    for (double t : {0.1, 0.5, 1.0, 2.0, 5.0, 20.0}) {
        const double v = subordinator::phi(mix, 1.0, t);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(subordinator::phi(mix, 2.0, 1.0) < subordinator::phi(mix, 1.0, 1.0));
    CHECK(subordinator::phi(mix, 1.0, 1.0) < subordinator::phi(mix, 0.5, 1.0));
}

TEST_CASE("phi_n special cases") {
    // n = 1: inverse stable subordinator, Phi = E_{b,1}(-theta t^b)
    StableMixture one({0.5}, {1.0});
    CHECK(subordinator::phi_n(one, 1.0, 1.0)
          == doctest::Approx(0.42758357615580700441).epsilon(1e-8));
    // n = 3: value in (0,1), and both closed-form-free routes agree
    StableMixture three({0.2, 0.5, 0.8}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    const double v = subordinator::phi_n(three, 2.0, 1.0);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    CHECK(subordinator::phi(three, 2.0, 1.0) == doctest::Approx(v).epsilon(1e-12));
    // small-time expansion branch
    const double tiny = subordinator::phi_n(three, 1.0, 1e-8);
    CHECK(tiny > 0.99);
    CHECK(tiny < 1.0);
    CHECK(subordinator::phi_n(three, 1.0, 0.0) == 1.0);
}

TEST_CASE("mean of the inverse clock") {
    CHECK(subordinator::mean_inverse(two_term(), 0.0) == 0.0);
    StableMixture single({0.3, 0.8}, {0.0, 1.0});
    CHECK(subordinator::mean_inverse(single, 1.0)
          == doctest::Approx(1.0 / std::tgamma(1.8)).epsilon(1e-12));
    CHECK(subordinator::mean_inverse(two_term(), 2.0)
          == doctest::Approx(1.6756611089757206911).epsilon(1e-12));
    CHECK(subordinator::mean_inverse_n(two_term(), 2.0)
          == doctest::Approx(1.6756611089757206911).epsilon(1e-8));
}

TEST_CASE("mean asymptotics") {
    // single-term limit: asymptotic equals the exact formula
    StableMixture single({0.8}, {1.0});
    CHECK(subordinator::mean_inverse_asymptotic(single, 3.0, subordinator::AsymptoticRegime::large_t)
          == doctest::Approx(std::pow(3.0, 0.8) / std::tgamma(1.8)).epsilon(1e-12));

    const auto mix = two_term();
    const double t = 1e4;
    CHECK(subordinator::mean_inverse_asymptotic(mix, t, subordinator::AsymptoticRegime::large_t)
          == doctest::Approx(std::pow(t, 0.3) / (0.5 * std::tgamma(1.3))).epsilon(1e-12));
    // large-t law approaches the exact mean
    CHECK(subordinator::mean_inverse_asymptotic(mix, t, subordinator::AsymptoticRegime::large_t)
          == doctest::Approx(subordinator::mean_inverse(mix, t)).epsilon(2e-2));
    // small-t law: the implemented second-order coefficient differs from the
    // direct expansion in a c2-vs-c2^2 factor; both stay within 1e-2 here
    CHECK(subordinator::mean_inverse_asymptotic(mix, 1e-3, subordinator::AsymptoticRegime::small_t)
          == doctest::Approx(subordinator::mean_inverse(mix, 1e-3)).epsilon(1e-2));
}

TEST_CASE("renewal kernel") {
    StableMixture single({0.3, 0.8}, {0.0, 1.0});
    CHECK(subordinator::h_kernel(single, 1.0)
          == doctest::Approx(1.0 / std::tgamma(0.8)).epsilon(1e-12));
    CHECK(subordinator::h_kernel(two_term(), 0.5)
          == doctest::Approx(0.93587880636631522346).epsilon(1e-12));
    CHECK_THROWS_AS(subordinator::h_kernel(two_term(), 0.0), DomainError);

    // integral identity: int_0^s h = E[E(s)]
    boost::math::quadrature::tanh_sinh<double> integrator;
    for (double s : {0.5, 1.0}) {
        const double integral = integrator.integrate(
            [&](double y) { return subordinator::h_kernel(two_term(), y); }, 0.0, s, 1e-10);
        CHECK(integral == doctest::Approx(subordinator::mean_inverse(two_term(), s)).epsilon(1e-8));
    }
}

TEST_CASE("n-term kernel") {
    // n = 2: multinomial sum collapses onto the two-term closed form
    const auto r2 = subordinator::h_kernel_n(two_term(), 0.5);
    CHECK(r2.method == subordinator::HKernelMethod::multinomial_series);
    CHECK(r2.value == doctest::Approx(subordinator::h_kernel(two_term(), 0.5)).epsilon(1e-8));

    StableMixture three({0.2, 0.5, 0.8}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    for (double y : {0.3, 0.7, 1.0}) {
        const double inv =
            subordinator::h_kernel_n(three, y, subordinator::HKernelMethod::laplace_inversion).value;
        CHECK(inv > 0.0);
        try {
            const double series = subordinator::h_kernel_n(three, y).value;
            CHECK(series == doctest::Approx(inv).epsilon(1e-6));
        } catch (const NonConvergence&) {
            // outside the multinomial convergence region; inversion stands alone
        }
    }
}

TEST_CASE("inverse clock density") {
    const auto mix = two_term();
    auto f = [&](double u) { return subordinator::inverse_subordinator_density(mix, u, 1.0); };
    boost::math::quadrature::tanh_sinh<double> integrator;
    const double mass = integrator.integrate(f, 0.0, 12.0, 1e-6);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-4));
    const double lap = integrator.integrate(
        [&](double u) { return std::exp(-u) * f(u); }, 0.0, 12.0, 1e-7);
    CHECK(lap == doctest::Approx(subordinator::phi(mix, 1.0, 1.0)).epsilon(1e-5));
    const double mean = integrator.integrate(
        [&](double u) { return u * f(u); }, 0.0, 12.0, 1e-6);
    CHECK(mean == doctest::Approx(subordinator::mean_inverse(mix, 1.0)).epsilon(1e-4));
}

} // TEST_SUITE
