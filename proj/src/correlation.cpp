#include "fracpearson/correlation.hpp"
#include "fracpearson/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace fracpearson::correlation {

namespace {

double integrate_convolution(const std::function<double(double)>& f, double s,
                             const QuadraturePolicy& q) {
    if (q.rel_tol <= 0.0) throw DomainError("QuadraturePolicy: rel_tol must be positive");
    if (q.singularity_exponent <= -1.0 || q.singularity_exponent > 0.0)
        throw DomainError("QuadraturePolicy: singularity_exponent must lie in (-1, 0]");
    try {
        if (q.scheme == QuadScheme::double_exponential) {
            boost::math::quadrature::tanh_sinh<double> integrator(q.max_refinements);
            return integrator.integrate(f, 0.0, s, q.rel_tol);
        }
        // Power substitution y = s u^p flattens the y^{singularity_exponent}
        // endpoint; p = 1/(1 + exponent) maps it to a bounded integrand.
        const double p = 1.0 / (1.0 + q.singularity_exponent);
        auto g = [&](double u) {
            const double y = s * std::pow(u, p);
            return f(y) * s * p * std::pow(u, p - 1.0);
        };
        return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            g, 0.0, 1.0, q.max_refinements, q.rel_tol);
    } catch (const std::exception& e) {
        throw QuadratureFailure(std::string("correlation quadrature failed: ") + e.what());
    }
}

double corr_impl(double theta, double t, double s, const QuadraturePolicy& q,
                 const std::function<double(double)>& h,
                 const std::function<double(double)>& phi_of) {
    if (t < 0.0 || s < 0.0) throw DomainError("corr: times must be nonnegative");
    if (t < s) std::swap(t, s);  // corr(t,s) = corr(s,t)
    if (t == 0.0) return 1.0;    // by continuity
    const double phi_t = phi_of(t);
    if (s == 0.0) return phi_t;
    const double integral = integrate_convolution(
        [&](double y) { return h(y) * phi_of(t - y); }, s, q);
    return theta * integral + phi_t;
}

} // namespace

double corr_time_changed(const pearson::PearsonModel& model,
                         const subordinator::StableMixture& mix,
                         double t, double s, const QuadraturePolicy& q) {
    if (mix.size() > 2)
        throw DomainError("corr_time_changed: closed forms require n <= 2; use corr_time_changed_n");
    const double theta = pearson::spectral_data(model, 2).theta;
    QuadraturePolicy qp = q;
    // assume the weaker integrability exponent b1 - 1 for the endpoint
    qp.singularity_exponent = std::min(q.singularity_exponent, mix.orders()[0] - 1.0);
    return corr_impl(theta, t, s, qp,
                     [&](double y) { return subordinator::h_kernel(mix, y); },
                     [&](double u) { return subordinator::phi(mix, theta, u); });
}

double corr_time_changed_n(const pearson::PearsonModel& model,
                           const subordinator::StableMixture& mix,
                           double t, double s, const QuadraturePolicy& q) {
    const double theta = pearson::spectral_data(model, 2).theta;
    auto h = [&](double y) {
        try {
            return subordinator::h_kernel_n(mix, y).value;
        } catch (const NonConvergence&) {
            return subordinator::h_kernel_n(mix, y, subordinator::HKernelMethod::laplace_inversion).value;
        }
    };
    auto phi_of = [&](double u) { return subordinator::phi_n(mix, theta, u); };
    QuadraturePolicy qp = q;
    qp.singularity_exponent = std::min(q.singularity_exponent, mix.orders()[0] - 1.0);
    return corr_impl(theta, t, s, qp, h, phi_of);
}

double corr_asymptotic(const pearson::PearsonModel& model,
                       const subordinator::StableMixture& mix,
                       double t, double s) {
    if (!(t > 0.0) || !(s > 0.0)) throw DomainError("corr_asymptotic: t and s must be positive");
    const double theta = pearson::spectral_data(model, 2).theta;
    const double b1 = mix.orders()[0];
    const double c1 = mix.weights()[0];
    const double prefactor = std::pow(t, -b1) / std::tgamma(1.0 - b1);
    if (mix.size() == 1)
        // single order: c1 int_0^s h = s^{b1} / Gamma(1+b1)
        return prefactor * (c1 / theta + std::pow(s, b1) / std::tgamma(1.0 + b1));
    if (mix.size() != 2) throw DomainError("corr_asymptotic: requires n <= 2");
    const double b2 = mix.orders()[1];
    const double c2 = mix.weights()[1];
    const double tail = (c1 / c2) * std::pow(s, b2)
        * mlf::ml(b2 - b1, b2 + 1.0, -(c1 / c2) * std::pow(s, b2 - b1));
    return prefactor * (c1 / theta + tail);
}

double corr_asymptotic_n(const pearson::PearsonModel& model,
                         const subordinator::StableMixture& mix,
                         double t, double s, const QuadraturePolicy&) {
    if (!(t > 0.0) || !(s > 0.0)) throw DomainError("corr_asymptotic_n: t and s must be positive");
    const double theta = pearson::spectral_data(model, 2).theta;
    const double b1 = mix.orders()[0];
    const double c1 = mix.weights()[0];
    const double h_integral = subordinator::mean_inverse_n(mix, s);  // int_0^s h_n = E[E(s)]
    return std::pow(t, -b1) / std::tgamma(1.0 - b1) * (c1 / theta + c1 * h_integral);
}

LrdFit fit_power_law(std::span<const double> t_grid, std::span<const double> corr_values) {
    if (t_grid.size() != corr_values.size() || t_grid.size() < 3)
        throw DomainError("fit_power_law: need matching grids with >= 3 points");
    const std::size_t n = t_grid.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(t_grid[i]);
        const double y = std::log(corr_values[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
    }
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::log(corr_values[i]) - (intercept + slope * std::log(t_grid[i]));
        ss_res += r * r;
    }
    return {slope, intercept, ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0};
}

LrdFit lrd_exponent_estimate(const pearson::PearsonModel& model,
                             const subordinator::StableMixture& mix,
                             double s, std::span<const double> t_grid,
                             const QuadraturePolicy& q) {
    std::vector<double> corr(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        corr[i] = mix.size() <= 2
            ? corr_time_changed(model, mix, t_grid[i], s, q)
            : corr_time_changed_n(model, mix, t_grid[i], s, q);
    }
    return fit_power_law(t_grid, corr);
}

} // namespace fracpearson::correlation
