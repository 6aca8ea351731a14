#include <doctest.h>

#include "fracpearson/errors.hpp"
#include "fracpearson/laplace.hpp"
#include "fracpearson/mlf.hpp"

#include <cmath>

using namespace fracpearson;

TEST_SUITE("mlf") {

TEST_CASE("pochhammer basics") {
    CHECK(mlf::pochhammer(0.7, 0) == 1.0);
    CHECK(mlf::pochhammer(3.0, 2) == doctest::Approx(12.0).epsilon(1e-15));
    CHECK(mlf::pochhammer(0.5, 3) == doctest::Approx(1.875).epsilon(1e-15));
    // the log-space branch agrees with the direct product at its boundary
    CHECK(mlf::pochhammer(1.5, 31)
          == doctest::Approx(std::exp(std::lgamma(32.5) - std::lgamma(1.5))).epsilon(1e-12));
}

TEST_CASE("reciprocal gamma") {
    CHECK(mlf::reciprocal_gamma(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mlf::reciprocal_gamma(0.5) == doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-14));
    CHECK(mlf::reciprocal_gamma(0.0) == 0.0);
    CHECK(mlf::reciprocal_gamma(-1.0) == 0.0);
    CHECK(mlf::reciprocal_gamma(-7.0) == 0.0);
    CHECK(mlf::reciprocal_gamma(-0.5) == doctest::Approx(1.0 / std::tgamma(-0.5)).epsilon(1e-13));
}

TEST_CASE("series reduces to exp for alpha=beta=gamma=1") {
    for (int i = 0; i <= 20; ++i) {
        const double z = -5.0 + 0.5 * i;
        CHECK(mlf::ml(1.0, 1.0, z) == doctest::Approx(std::exp(z)).epsilon(1e-12));
        CHECK(mlf::gml({1.0, 1.0, 1.0, z}) == doctest::Approx(std::exp(z)).epsilon(1e-12));
    }
}

TEST_CASE("z = 0 gives 1/Gamma(beta)") {
    for (double alpha : {0.2, 0.5, 0.8, 1.0, 1.7})
        for (double beta : {0.4, 1.0, 1.5, 2.5})
            for (double gamma : {0.5, 1.0, 2.0, 3.0})
                CHECK(mlf::gml({alpha, beta, gamma, 0.0})
                      == doctest::Approx(1.0 / std::tgamma(beta)).epsilon(1e-14));
}

TEST_CASE("two-parameter closed forms") {
    // sum z^j / Gamma(j+2) = (e^z - 1)/z
    CHECK(mlf::ml(1.0, 2.0, 1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
    // E_{2,1}(z) = cosh(sqrt z), E_{2,1}(-z) = cos(sqrt z)
    CHECK(mlf::ml(2.0, 1.0, 4.0) == doctest::Approx(std::cosh(2.0)).epsilon(1e-13));
    CHECK(mlf::ml(2.0, 1.0, -4.0) == doctest::Approx(std::cos(2.0)).epsilon(1e-13));
}

TEST_CASE("fixed reference values") {
    // E_{1/2,1}(-x) = e^{x^2} erfc(x); evaluated at x = 1 in extended precision
    CHECK(mlf::ml(0.5, 1.0, -1.0)
          == doctest::Approx(0.42758357615580700441).epsilon(1e-13));
    CHECK(mlf::ml(0.6, 1.0, -2.0)
          == doctest::Approx(0.23557103111182731802).epsilon(1e-13));
    CHECK(mlf::ml(0.8, 1.0, -std::pow(2.0, 0.8))
          == doctest::Approx(0.2235468268148983075).epsilon(1e-13));
    // deep in the large-argument branch for small alpha; the multi-term
    // expansion is good to ~1e-7 here
    CHECK(mlf::gml({0.3, 1.0, 2.0, -7.924465962305567426})
          == doctest::Approx(0.00665833206496181839).epsilon(5e-7));
}

TEST_CASE("cross-check against Laplace inversion") {
    // E_{a,1}(-c t^a) has image s^{a-1} / (s^a + c)
    const double a = 0.6, c = 2.0;
    laplace::LaplaceImage img{
        [=](std::complex<double> s) { return std::pow(s, a - 1.0) / (std::pow(s, a) + c); },
        0.0};
    for (double t : {0.5, 1.0, 3.0}) {
        const double series = mlf::ml(a, 1.0, -c * std::pow(t, a));
        CHECK(laplace::invert(img, t) == doctest::Approx(series).epsilon(1e-7));
    }
}

TEST_CASE("leading large-argument term") {
    // 1 / (c^k t^{vk} Gamma(beta - vk))
    const auto a = mlf::gml_asymptotic(1, 0.5, 1.5, 2.0, 1e6);
    CHECK_FALSE(a.degenerate);
    CHECK(a.value == doctest::Approx(5.0e-4).epsilon(1e-12));

    const auto b = mlf::gml_asymptotic(1, 0.5, 1.0, 1.0, 1e4);
    CHECK(b.value == doctest::Approx(std::pow(1e4, -0.5) / std::tgamma(0.5)).epsilon(1e-12));

    // frozen reference for k=2, v=0.3, c=0.5 at t=1e4; the true value is
    // 0.0066583..., so the single leading term is only ~8% accurate there
    const auto c = mlf::gml_asymptotic(2, 0.3, 1.0, 0.5, 1e4);
    CHECK(c.value == doctest::Approx(0.0071790538543333289316).epsilon(1e-12));
    CHECK(c.value == doctest::Approx(0.00665833206496181839).epsilon(0.1));

    // beta - vk at a nonpositive integer: the term vanishes identically
    const auto d = mlf::gml_asymptotic(1, 1.0, 1.0, 1.0, 10.0);
    CHECK(d.degenerate);
    CHECK(d.value == 0.0);
}

TEST_CASE("small-time expansion") {
    CHECK(mlf::gml_small_time(1, 0.5, 1.0, 1.0, 0.0) == 1.0);
    CHECK(mlf::gml_small_time(1, 0.5, 1.0, 1.0, 0.01)
          == doctest::Approx(1.0 - 0.1 / std::tgamma(1.5)).epsilon(1e-14));
    // against the full series at t = 1e-3 (reference summed in high precision);
    // the dropped term of the expansion is O(t^{2v}) ~ 3e-3 at this t
    const double full = 1.0213968290027906744;
    CHECK(mlf::gml({0.4, 1.2, 2.0, -0.5 * std::pow(1e-3, 0.4)})
          == doctest::Approx(full).epsilon(1e-12));
    CHECK(std::abs(mlf::gml_small_time(2, 0.4, 1.2, 0.5, 1e-3) - full)
          <= 4.0 * std::pow(1e-3, 0.8));
    // four-digit agreement once t is small enough for the dropped term
    const double full6 = mlf::gml({0.4, 1.2, 2.0, -0.5 * std::pow(1e-6, 0.4)});
    CHECK(mlf::gml_small_time(2, 0.4, 1.2, 0.5, 1e-6) == doctest::Approx(full6).epsilon(1e-4));
}

TEST_CASE("domain and convergence errors") {
    CHECK_THROWS_AS(mlf::gml({0.0, 1.0, 1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(mlf::gml({-0.5, 1.0, 1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(mlf::gml({0.5, 1.0, 0.0, 1.0}), DomainError);
    mlf::EvalPolicy starved;
    starved.max_terms = 3;
    CHECK_THROWS_AS(mlf::ml(0.5, 1.0, -0.5, starved), NonConvergence);
}

} // TEST_SUITE
