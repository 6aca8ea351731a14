#include "fracpearson/mlf.hpp"
#include "fracpearson/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fracpearson::mlf {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr long double kPiL = 3.141592653589793238462643383279502884L;

void check_args(const GmlArgs& a) {
    if (!(a.alpha > 0.0) || !(a.beta > 0.0) || !(a.gamma > 0.0))
        throw DomainError("gml: alpha, beta, gamma must be positive");
}

bool near_nonpositive_integer(double x, double tol = 1e-12) {
    if (x > 0.5) return false;
    return std::abs(x - std::round(x)) < tol;
}

// log|1/Gamma(x)| and its sign, valid for all real x off the poles.
// Uses the reflection formula for x < 0.5.
void log_rgamma(double x, long double& log_mag, int& sign) {
    if (x >= 0.5) {
        log_mag = -std::lgammal((long double)x);
        sign = 1;
        return;
    }
    const long double s = std::sin(kPi * (long double)x);
    if (s == 0.0L) {
        log_mag = -std::numeric_limits<long double>::infinity();
        sign = 0;
        return;
    }
    // 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi
    log_mag = std::lgammal(1.0L - (long double)x) + std::log(std::abs(s)) - std::log((long double)kPi);
    sign = s > 0 ? 1 : -1;
}

// Large-argument expansion of E^gamma_{alpha,beta}(-x), x > 0, 0 < alpha < 1:
//   sum_{k>=0} (-1)^k (gamma)_k / k! * x^{-gamma-k} / Gamma(beta - alpha(gamma+k))
// summed to optimal truncation.
double gml_negative_asymptotic(const GmlArgs& a, const EvalPolicy& policy) {
    const double x = -a.z;
    const long double logx = std::log((long double)x);
    long double sum = 0.0L, comp = 0.0L;
    long double prev_env = std::numeric_limits<long double>::infinity();
    const long double lg_gamma = std::lgammal((long double)a.gamma);
    for (int k = 0; k < policy.max_terms; ++k) {
        const long double gk = (long double)a.gamma + k;
        const long double arg = (long double)a.beta - (long double)a.alpha * gk;
        const long double base = std::lgammal(gk) - lg_gamma
            - std::lgammal((long double)(k + 1)) - gk * logx;
        // Truncate on the smooth envelope with the bounded reflection sine
        // split off, so Gamma poles (near-zero terms) cannot masquerade as
        // the onset of the divergent tail.
        long double env_log, osc;
        if (arg >= 0.5L) {
            env_log = base - std::lgammal(arg);
            osc = 1.0L;
        } else {
            const long double m = std::nearbyintl(arg);
            env_log = base + std::lgammal(1.0L - arg) - std::log(kPiL);
            osc = std::sin(kPiL * (arg - m));  // sin(pi*arg) = (-1)^m sin(pi*(arg-m))
            if (std::fmod(std::fabs(m), 2.0L) == 1.0L) osc = -osc;
        }
        const long double env = std::exp(env_log);
        if (env > prev_env) break;  // divergent tail of the asymptotic series
        const long double term = (k % 2 == 0 ? osc : -osc) * env;
        const long double y = term - comp;
        const long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (env < (long double)policy.abs_tol) break;
        prev_env = env;
    }
    return (double)sum;
}

} // namespace

double pochhammer(double gamma, int j) {
    if (j < 0) throw DomainError("pochhammer: j must be nonnegative");
    if (j == 0) return 1.0;
    if (j <= 30) {
        double p = 1.0;
        for (int i = 0; i < j; ++i) p *= gamma + i;
        return p;
    }
    return std::exp(std::lgamma(gamma + j) - std::lgamma(gamma));
}

double reciprocal_gamma(double x) {
    if (near_nonpositive_integer(x)) return 0.0;
    long double log_mag;
    int sign;
    log_rgamma(x, log_mag, sign);
    return (double)(sign * std::exp(log_mag));
}

double gml(const GmlArgs& a, const EvalPolicy& policy) {
    check_args(a);
    if (a.z == 0.0) return 1.0 / std::tgamma(a.beta);

    // Cancellation in the alternating series destroys ~0.434*|z|^{1/alpha}
    // digits; the 80-bit accumulator holds ~19, so cap the series range.
    const double cancel_cap = std::pow(21.0, a.alpha);
    if (a.z < -std::min(policy.asymptotic_z_threshold, cancel_cap))
        return gml_negative_asymptotic(a, policy);

    const long double logz = std::log((long double)std::abs(a.z));
    const bool negative = a.z < 0.0;
    const long double lg_gamma = std::lgammal((long double)a.gamma);
    long double sum = 0.0L, comp = 0.0L;
    long double prev_mag = std::numeric_limits<long double>::infinity();
    bool decreasing = false;
    for (int j = 0; j < policy.max_terms; ++j) {
        const long double log_mag = std::lgammal((long double)a.gamma + j) - lg_gamma
            - std::lgammal((long double)(j + 1)) + j * logz
            - std::lgammal((long double)a.alpha * j + (long double)a.beta);
        const long double mag = std::exp(log_mag);
        const long double term = (negative && (j % 2 == 1)) ? -mag : mag;
        const long double y = term - comp;
        const long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (mag < prev_mag) decreasing = true;
        if (decreasing && mag < (long double)policy.abs_tol) return (double)sum;
        prev_mag = mag;
    }
    throw NonConvergence("gml: series did not converge within max_terms");
}

double ml(double alpha, double beta, double z, const EvalPolicy& policy) {
    return gml({alpha, beta, 1.0, z}, policy);
}

AsymptoticTerm gml_asymptotic(int k, double v, double beta, double c, double t) {
    if (k < 1) throw DomainError("gml_asymptotic: k must be a positive integer");
    if (!(c > 0.0) || !(t > 0.0) || !(v > 0.0))
        throw DomainError("gml_asymptotic: c, t, v must be positive");
    const double arg = beta - v * k;
    if (near_nonpositive_integer(arg)) return {0.0, true};
    const double value = reciprocal_gamma(arg)
        * std::exp(-k * std::log(c) - v * k * std::log(t));
    return {value, false};
}

double gml_small_time(int k, double v, double beta, double c, double t) {
    if (k < 1) throw DomainError("gml_small_time: k must be a positive integer");
    if (t == 0.0) return 1.0 / std::tgamma(beta);
    return 1.0 / std::tgamma(beta) - c * std::pow(t, v) * k / std::tgamma(beta + v);
}

} // namespace fracpearson::mlf
