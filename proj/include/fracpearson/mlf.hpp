#pragma once

#include <cstdint>

namespace fracpearson::mlf {

/// Parameter pack for the three-parameter (Prabhakar) Mittag-Leffler function
/// E^gamma_{alpha,beta}(z). All orders restricted to positive reals.
struct GmlArgs {
    double alpha;
    double beta;
    double gamma;
    double z;
};

struct EvalPolicy {
    double abs_tol = 1e-14;
    int max_terms = 4000;
    // For z below -threshold the alternating power series is abandoned in
    // favour of the large-argument expansion. The effective switch point is
    // additionally capped at ~21^alpha, where cancellation exhausts the
    // extended-precision accumulator.
    double asymptotic_z_threshold = 35.0;
};

/// Rising factorial (gamma)_j = gamma (gamma+1) ... (gamma+j-1), (gamma)_0 = 1.
double pochhammer(double gamma, int j);

/// 1/Gamma(x) for any real x; exactly 0 at the poles x = 0, -1, -2, ...
double reciprocal_gamma(double x);

/// E^gamma_{alpha,beta}(z) = sum_j (gamma)_j z^j / (j! Gamma(alpha j + beta)).
double gml(const GmlArgs& args, const EvalPolicy& policy = {});

/// Two-parameter Mittag-Leffler E_{alpha,beta}(z) (gamma = 1).
double ml(double alpha, double beta, double z, const EvalPolicy& policy = {});

struct AsymptoticTerm {
    double value = 0.0;
    // Set when beta - v*k hits a pole of 1/Gamma: the leading term vanishes
    // identically and the returned 0 carries no scale information.
    bool degenerate = false;
};

/// Leading large-t term of E^k_{v,beta}(-c t^v): 1 / (c^k t^{vk} Gamma(beta - vk)).
AsymptoticTerm gml_asymptotic(int k, double v, double beta, double c, double t);

/// Two-term small-t expansion of E^k_{v,beta}(-c t^v):
/// 1/Gamma(beta) - c t^v k / Gamma(beta + v).
double gml_small_time(int k, double v, double beta, double c, double t);

} // namespace fracpearson::mlf
