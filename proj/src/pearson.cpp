#include "fracpearson/pearson.hpp"
#include "fracpearson/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>

namespace fracpearson::pearson {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct HermiteParams {
    double mean, sigma;
};
struct LaguerreParams {
    double shift, shape, rate;  // support (shift, inf), z = rate (x - shift)
};
struct JacobiParams {
    double l, L, p, q;  // m ~ (x-l)^{p-1} (L-x)^{q-1}, a = q-1, b = p-1
};

HermiteParams hermite_params(const PearsonModel& m) {
    return {-m.a0 / m.a1, std::sqrt(-m.d0 / m.a1)};
}

LaguerreParams laguerre_params(const PearsonModel& m) {
    const double shift = -m.d0 / m.d1;
    return {shift, m.drift(shift) / m.d1, -m.a1 / m.d1};
}

JacobiParams jacobi_params(const PearsonModel& m) {
    const double disc = m.d1 * m.d1 - 4.0 * m.d2 * m.d0;
    const double r1 = (-m.d1 + std::sqrt(disc)) / (2.0 * m.d2);
    const double r2 = (-m.d1 - std::sqrt(disc)) / (2.0 * m.d2);
    const double l = std::min(r1, r2), L = std::max(r1, r2);
    const double dD = [&](double x) { return m.d1 + 2.0 * m.d2 * x; }(l);
    const double dDL = m.d1 + 2.0 * m.d2 * L;
    return {l, L, m.drift(l) / dD, m.drift(L) / dDL};
}

void require_supported(PearsonClass c) {
    if (c == PearsonClass::Unsupported)
        throw UnsupportedClass("pearson: model has a continuous spectral component");
}

// Probabilists' Hermite He_n(z) / sqrt(n!).
double hermite_q(int n, double z) {
    if (n == 0) return 1.0;
    double prev = 1.0, cur = z;
    for (int k = 1; k < n; ++k) {
        const double next = z * cur - k * prev;
        prev = cur;
        cur = next;
    }
    return cur * std::exp(-0.5 * std::lgamma(n + 1.0));
}

// Generalized Laguerre L_n^{(alpha)}(z), normalized against the gamma law.
double laguerre_q(int n, double alpha, double z) {
    double cur = 1.0;
    if (n >= 1) {
        double prev = 1.0;
        cur = 1.0 + alpha - z;
        for (int k = 1; k < n; ++k) {
            const double next = ((2.0 * k + 1.0 + alpha - z) * cur - (k + alpha) * prev) / (k + 1.0);
            prev = cur;
            cur = next;
        }
    }
    const double log_norm = 0.5 * (std::lgamma(n + 1.0) + std::lgamma(alpha + 1.0)
                                   - std::lgamma(n + alpha + 1.0));
    return cur * std::exp(log_norm);
}

// Jacobi P_n^{(a,b)}(u), normalized against the beta law on (-1,1).
double jacobi_q(int n, double a, double b, double u) {
    double cur = 1.0;
    if (n >= 1) {
        double prev = 1.0;
        cur = 0.5 * (a + b + 2.0) * u + 0.5 * (a - b);
        for (int k = 2; k <= n; ++k) {
            const double s = 2.0 * k + a + b;
            const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
            const double c2 = (s - 1.0) * (s * (s - 2.0) * u + a * a - b * b);
            const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
            const double next = (c2 * cur - c3 * prev) / c1;
            prev = cur;
            cur = next;
        }
    }
    // integral of P_n^2 against the beta(a+1, b+1) density on (-1, 1) is
    // h_n / C with C = 2^{a+b+1} B(a+1, b+1).
    const double log_hn_over_C = -std::log(2.0 * n + a + b + 1.0)
        + std::lgamma(n + a + 1.0) + std::lgamma(n + b + 1.0)
        - std::lgamma(n + a + b + 1.0) - std::lgamma(n + 1.0)
        - (std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
    return cur * std::exp(-0.5 * log_hn_over_C);
}

} // namespace

PearsonClass classify(const PearsonModel& model) {
    if (!(model.a1 < 0.0)) throw DomainError("pearson: a1 must be negative (mean reversion)");
    if (model.d1 == 0.0 && model.d2 == 0.0)
        return model.d0 > 0.0 ? PearsonClass::Hermite : PearsonClass::Unsupported;
    if (model.d2 == 0.0 && model.d1 > 0.0) {
        const auto p = laguerre_params(model);
        return (p.shape > 0.0 && p.rate > 0.0) ? PearsonClass::Laguerre : PearsonClass::Unsupported;
    }
    if (model.d2 < 0.0) {
        const double disc = model.d1 * model.d1 - 4.0 * model.d2 * model.d0;
        if (disc <= 0.0) return PearsonClass::Unsupported;
        const auto p = jacobi_params(model);
        return (p.p > 0.0 && p.q > 0.0) ? PearsonClass::Jacobi : PearsonClass::Unsupported;
    }
    return PearsonClass::Unsupported;
}

StationaryLaw stationary_law(const PearsonModel& model) {
    const PearsonClass cls = classify(model);
    require_supported(cls);
    switch (cls) {
    case PearsonClass::Hermite: {
        const auto p = hermite_params(model);
        const double norm = 1.0 / (p.sigma * std::sqrt(2.0 * 3.14159265358979323846));
        return {[p, norm](double x) {
                    const double z = (x - p.mean) / p.sigma;
                    return norm * std::exp(-0.5 * z * z);
                },
                p.mean, p.sigma * p.sigma, -kInf, kInf};
    }
    case PearsonClass::Laguerre: {
        const auto p = laguerre_params(model);
        const double log_norm = p.shape * std::log(p.rate) - std::lgamma(p.shape);
        return {[p, log_norm](double x) {
                    if (x <= p.shift) return 0.0;
                    const double u = x - p.shift;
                    return std::exp(log_norm + (p.shape - 1.0) * std::log(u) - p.rate * u);
                },
                p.shift + p.shape / p.rate, p.shape / (p.rate * p.rate), p.shift, kInf};
    }
    default: {
        const auto p = jacobi_params(model);
        const double log_norm = std::lgamma(p.p + p.q) - std::lgamma(p.p) - std::lgamma(p.q)
            - (p.p + p.q - 1.0) * std::log(p.L - p.l);
        const double width = p.L - p.l;
        const double mean = p.l + width * p.p / (p.p + p.q);
        const double var = width * width * p.p * p.q
            / ((p.p + p.q) * (p.p + p.q) * (p.p + p.q + 1.0));
        return {[p, log_norm](double x) {
                    if (x <= p.l || x >= p.L) return 0.0;
                    return std::exp(log_norm + (p.p - 1.0) * std::log(x - p.l)
                                    + (p.q - 1.0) * std::log(p.L - x));
                },
                mean, var, p.l, p.L};
    }
    }
}

SpectralData spectral_data(const PearsonModel& model, int N) {
    if (N < 2) throw DomainError("spectral_data: N must be >= 2");
    const PearsonClass cls = classify(model);
    require_supported(cls);

    SpectralData out;
    out.eigenvalues.resize(N);
    for (int n = 0; n < N; ++n)
        out.eigenvalues[n] = -n * model.a1 - n * (n - 1.0) * model.d2;
    out.theta = out.eigenvalues[1];

    switch (cls) {
    case PearsonClass::Hermite: {
        const auto p = hermite_params(model);
        out.eigenfunction = [p](int n, double x) { return hermite_q(n, (x - p.mean) / p.sigma); };
        break;
    }
    case PearsonClass::Laguerre: {
        const auto p = laguerre_params(model);
        out.eigenfunction = [p](int n, double x) {
            return laguerre_q(n, p.shape - 1.0, p.rate * (x - p.shift));
        };
        break;
    }
    default: {
        const auto p = jacobi_params(model);
        out.eigenfunction = [p](int n, double x) {
            const double u = 2.0 * (x - p.l) / (p.L - p.l) - 1.0;
            return jacobi_q(n, p.q - 1.0, p.p - 1.0, u);
        };
        break;
    }
    }
    return out;
}

DensityResult transition_density_ex(const PearsonModel& model, double x, double t, double y, int N) {
    if (!(t > 0.0)) throw DomainError("transition_density: t must be positive");
    const auto law = stationary_law(model);
    const auto spec = spectral_data(model, N);
    double sum = 0.0;
    for (int n = 0; n < N; ++n)
        sum += std::exp(-spec.eigenvalues[n] * t) * spec.eigenfunction(n, x) * spec.eigenfunction(n, y);
    const double mx = law.density(x);
    const double lamN = -N * model.a1 - N * (N - 1.0) * model.d2;
    return {std::max(mx * sum, 0.0), std::exp(-lamN * t) * std::max(mx, 1.0)};
}

double transition_density(const PearsonModel& model, double x, double t, double y, int N) {
    return transition_density_ex(model, x, t, y, N).value;
}

std::vector<double> phi_spectrum(const PearsonModel& model,
                                 const subordinator::StableMixture& mix,
                                 double t, int N) {
    const auto spec = spectral_data(model, N);
    std::vector<double> phis(N);
    phis[0] = 1.0;  // lambda_0 = 0 mode is conserved
    for (int n = 1; n < N; ++n)
        phis[n] = subordinator::phi(mix, spec.eigenvalues[n], t);
    return phis;
}

double transition_density_time_changed(const PearsonModel& model,
                                       std::span<const double> phis,
                                       double x, double y) {
    const auto law = stationary_law(model);
    const auto spec = spectral_data(model, static_cast<int>(phis.size()));
    double sum = 0.0;
    for (std::size_t n = 0; n < phis.size(); ++n)
        sum += phis[n] * spec.eigenfunction((int)n, x) * spec.eigenfunction((int)n, y);
    return std::max(law.density(x) * sum, 0.0);
}

double transition_density_time_changed(const PearsonModel& model,
                                       const subordinator::StableMixture& mix,
                                       double x, double t, double y, int N) {
    const auto phis = phi_spectrum(model, mix, t, N);
    return transition_density_time_changed(model, std::span<const double>(phis), x, y);
}

double solve_fractional_cauchy(const PearsonModel& model,
                               const subordinator::StableMixture& mix,
                               std::span<const double> g_coeffs, double t, double y) {
    const int N = static_cast<int>(g_coeffs.size());
    const auto spec = spectral_data(model, std::max(N, 2));
    double sum = 0.0;
    for (int n = 0; n < N; ++n) {
        if (g_coeffs[n] == 0.0) continue;
        const double h = (n == 0 || t == 0.0)
            ? 1.0
            : subordinator::phi(mix, spec.eigenvalues[n], t);
        sum += g_coeffs[n] * h * spec.eigenfunction(n, y);
    }
    return sum;
}

std::vector<double> project_coefficients(const PearsonModel& model,
                                         const std::function<double(double)>& g, int N) {
    const auto law = stationary_law(model);
    const auto spec = spectral_data(model, std::max(N, 2));
    using boost::math::quadrature::gauss_kronrod;
    std::vector<double> coeffs(N);
    for (int n = 0; n < N; ++n) {
        auto integrand = [&](double x) { return g(x) * spec.eigenfunction(n, x) * law.density(x); };
        coeffs[n] = gauss_kronrod<double, 61>::integrate(integrand, law.l, law.L, 12, 1e-10);
    }
    return coeffs;
}

double stationary_corr(const PearsonModel& model, double t, double s) {
    if (t < 0.0 || s < 0.0) throw DomainError("stationary_corr: times must be nonnegative");
    const auto spec = spectral_data(model, 2);
    return std::exp(-spec.theta * std::abs(t - s));
}

} // namespace fracpearson::pearson
