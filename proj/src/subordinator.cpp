#include "fracpearson/subordinator.hpp"
#include "fracpearson/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numeric>

namespace fracpearson::subordinator {

namespace {

using cplx = std::complex<double>;

cplx psi_c(const StableMixture& mix, cplx s) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < mix.size(); ++i)
        acc += mix.weights()[i] * std::pow(s, mix.orders()[i]);
    return acc;
}

laplace::LaplaceImage phi_image(const StableMixture& mix, double theta) {
    return {[&mix, theta](cplx s) {
                const cplx p = psi_c(mix, s);
                return p / (s * (theta + p));
            },
            0.0};
}

// Inversion that stays usable below the public oracle's t >= 0.01 floor;
// both contours are still well conditioned for psi-type images there.
double invert_checked(const laplace::LaplaceImage& image, double t, int nodes, double rel_tol) {
    const double a = laplace::invert_talbot(image, t, nodes);
    const double b = laplace::invert_dehoog(image, t, nodes);
    const double scale = std::max({std::abs(a), std::abs(b), 1e-30});
    if (std::abs(a - b) > 10.0 * rel_tol * scale)
        throw InversionUnstable("subordinator: inversion methods disagree");
    return a;
}

// Small-t expansion of Phi_{theta,n}(t) = 1 - theta E[E(t)] + theta^2 E[E(t)^2]/2 - ...
// with the two leading small-t terms of E[E(t)] and the leading term of E[E(t)^2].
double phi_small_time(const StableMixture& mix, double theta, double t) {
    const std::size_t n = mix.size();
    const double bn = mix.orders()[n - 1];
    const double cn = mix.weights()[n - 1];
    double mean = std::pow(t, bn) / (cn * std::tgamma(1.0 + bn));
    if (n >= 2) {
        const double bm = mix.orders()[n - 2];
        const double cm = mix.weights()[n - 2];
        mean -= cm / (cn * cn) * std::pow(t, 2.0 * bn - bm) / std::tgamma(1.0 + 2.0 * bn - bm);
    }
    const double meansq = 2.0 * std::pow(t, 2.0 * bn) / (cn * cn * std::tgamma(1.0 + 2.0 * bn));
    return 1.0 - theta * mean + 0.5 * theta * theta * meansq;
}

double multinomial_coeff(int m, const std::vector<int>& k) {
    double lg = std::lgamma(m + 1.0);
    for (int ki : k) lg -= std::lgamma(ki + 1.0);
    return std::exp(lg);
}

// Enumerate compositions k_1 + ... + k_slots = m, k_i >= 0.
void for_each_composition(int m, int slots, std::vector<int>& k, int pos,
                          const std::function<void(const std::vector<int>&)>& fn) {
    if (pos == slots - 1) {
        k[pos] = m;
        fn(k);
        return;
    }
    for (int v = 0; v <= m; ++v) {
        k[pos] = v;
        for_each_composition(m - v, slots, k, pos + 1, fn);
    }
}

} // namespace

StableMixture::StableMixture(std::vector<double> orders, std::vector<double> weights,
                             bool normalized) {
    if (orders.size() != weights.size() || orders.empty())
        throw DomainError("StableMixture: orders and weights must be nonempty and equal-sized");
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (std::size_t i = 0; i < orders.size(); ++i) {
        if (!(orders[i] > 0.0) || !(orders[i] < 1.0))
            throw DomainError("StableMixture: orders must lie in (0,1)");
        if (i > 0 && !(orders[i] > orders[i - 1]))
            throw DomainError("StableMixture: orders must be strictly increasing");
        if (weights[i] < 0.0)
            throw DomainError("StableMixture: weights must be nonnegative");
        if (weights[i] > 0.0) {
            orders_.push_back(orders[i]);
            weights_.push_back(weights[i]);
        }
    }
    if (orders_.empty())
        throw DomainError("StableMixture: at least one weight must be positive");
    if (normalized && std::abs(sum - 1.0) > 1e-9)
        throw DomainError("StableMixture: weights must sum to 1 when normalized is set");
    weight_sum_warning_ = !normalized && std::abs(sum - 1.0) > 1e-9;
}

double psi(const StableMixture& mix, double s) {
    if (!(s > 0.0)) throw DomainError("psi: s must be positive");
    double acc = 0.0;
    for (std::size_t i = 0; i < mix.size(); ++i)
        acc += mix.weights()[i] * std::pow(s, mix.orders()[i]);
    return acc;
}

PhiResult phi_ex(const StableMixture& mix, double theta, double t,
                 const mlf::EvalPolicy& policy) {
    if (!(theta > 0.0)) throw DomainError("phi: theta must be positive");
    if (t < 0.0) throw DomainError("phi: t must be nonnegative");
    if (t == 0.0) return {1.0, false};

    if (mix.size() == 1) {
        const double b = mix.orders()[0];
        const double c = mix.weights()[0];
        return {mlf::ml(b, 1.0, -theta * std::pow(t, b) / c, policy), false};
    }
    if (mix.size() != 2)
        return {phi_n(mix, theta, t), true};

    const double b1 = mix.orders()[0], b2 = mix.orders()[1];
    const double c1 = mix.weights()[0], c2 = mix.weights()[1];
    const double x = -c1 * std::pow(t, b2 - b1) / c2;
    const double w = -theta * std::pow(t, b2) / c2;

    // The outer parameter exceeding ~1 breaks naive truncation of the double
    // series; the transform representation is unconditionally valid instead.
    if (std::abs(x) > 0.9)
        return {phi_n(mix, theta, t), true};

    const double v = b2 - b1;
    double sum = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int r = 0; r < policy.max_terms; ++r) {
        const double xr = std::pow(x, r);
        const double a = xr * mlf::gml({b2, v * r + 1.0, r + 1.0, w}, policy);
        const double b = xr * x * mlf::gml({b2, v * (r + 1) + 1.0, r + 1.0, w}, policy);
        sum += a - b;
        const double mag = std::abs(a) + std::abs(b);
        if (mag < policy.abs_tol && mag <= prev) return {sum, false};
        prev = mag;
    }
    return {phi_n(mix, theta, t), true};
}

double phi(const StableMixture& mix, double theta, double t, const mlf::EvalPolicy& policy) {
    return phi_ex(mix, theta, t, policy).value;
}

double phi_n(const StableMixture& mix, double theta, double t,
             const laplace::InversionPolicy& policy) {
    if (!(theta > 0.0)) throw DomainError("phi_n: theta must be positive");
    if (t < 0.0) throw DomainError("phi_n: t must be nonnegative");
    if (t == 0.0) return 1.0;
    if (t < 1e-6) return phi_small_time(mix, theta, t);
    return invert_checked(phi_image(mix, theta), t, policy.nodes, policy.target_rel_tol);
}

double mean_inverse(const StableMixture& mix, double t) {
    if (t < 0.0) throw DomainError("mean_inverse: t must be nonnegative");
    if (t == 0.0) return 0.0;
    if (mix.size() == 1) {
        const double b = mix.orders()[0];
        return std::pow(t, b) / (mix.weights()[0] * std::tgamma(1.0 + b));
    }
    if (mix.size() != 2)
        throw DomainError("mean_inverse: closed form requires n <= 2; use mean_inverse_n");
    const double b1 = mix.orders()[0], b2 = mix.orders()[1];
    const double c1 = mix.weights()[0], c2 = mix.weights()[1];
    return std::pow(t, b2) / c2
        * mlf::ml(b2 - b1, b2 + 1.0, -(c1 / c2) * std::pow(t, b2 - b1));
}

double mean_inverse_asymptotic(const StableMixture& mix, double t, AsymptoticRegime regime) {
    if (!(t > 0.0)) throw DomainError("mean_inverse_asymptotic: t must be positive");
    if (mix.size() == 1) {
        const double b = mix.orders()[0];
        return std::pow(t, b) / (mix.weights()[0] * std::tgamma(1.0 + b));
    }
    if (mix.size() != 2)
        throw DomainError("mean_inverse_asymptotic: requires n <= 2");
    const double b1 = mix.orders()[0], b2 = mix.orders()[1];
    const double c1 = mix.weights()[0], c2 = mix.weights()[1];
    if (regime == AsymptoticRegime::large_t)
        return std::pow(t, b1) / (c1 * std::tgamma(1.0 + b1));
    // Small-t branch with c2 in the second denominator; a direct two-term
    // expansion of the closed form puts c2^2 there instead.
    return std::pow(t, b2) / (c2 * std::tgamma(1.0 + b2))
        - c1 * std::pow(t, 2.0 * b2 - b1) / (c2 * std::tgamma(1.0 + 2.0 * b2 - b1));
}

double mean_inverse_n(const StableMixture& mix, double t, const laplace::InversionPolicy& policy) {
    if (t < 0.0) throw DomainError("mean_inverse_n: t must be nonnegative");
    if (t == 0.0) return 0.0;
    const laplace::LaplaceImage image{
        [&mix](cplx s) { return 1.0 / (s * psi_c(mix, s)); }, 0.0};
    return invert_checked(image, t, policy.nodes, policy.target_rel_tol);
}

double h_kernel(const StableMixture& mix, double y) {
    if (!(y > 0.0)) throw DomainError("h_kernel: y must be positive");
    if (mix.size() == 1) {
        const double b = mix.orders()[0];
        return std::pow(y, b - 1.0) / (mix.weights()[0] * std::tgamma(b));
    }
    if (mix.size() != 2)
        throw DomainError("h_kernel: closed form requires n <= 2; use h_kernel_n");
    const double b1 = mix.orders()[0], b2 = mix.orders()[1];
    const double c1 = mix.weights()[0], c2 = mix.weights()[1];
    return std::pow(y, b2 - 1.0) / c2
        * mlf::ml(b2 - b1, b2, -(c1 / c2) * std::pow(y, b2 - b1));
}

HKernelResult h_kernel_n(const StableMixture& mix, double y, HKernelMethod method) {
    if (!(y > 0.0)) throw DomainError("h_kernel_n: y must be positive");
    const std::size_t n = mix.size();
    if (n <= 2 && method == HKernelMethod::multinomial_series)
        return {h_kernel(mix, y), HKernelMethod::multinomial_series};

    if (method == HKernelMethod::laplace_inversion) {
        const laplace::LaplaceImage image{
            [&mix](cplx s) { return 1.0 / psi_c(mix, s); }, 0.0};
        return {invert_checked(image, y, 32, 1e-9), HKernelMethod::laplace_inversion};
    }

    // Multinomial expansion of 1/psi around the two largest orders. Writing
    // R = sum_{i<n-1} c_i s^{b_i},
    //   1/psi = sum_m (-R)^m / (c_n s^{b_n} + c_{n-1} s^{b_{n-1}})^{m+1},
    // each composition of m inverting to a GML term with
    //   gamma = b_n (m+1) - sum_i b_i k_i.
    const double bn = mix.orders()[n - 1], bnm1 = mix.orders()[n - 2];
    const double cn = mix.weights()[n - 1], cnm1 = mix.weights()[n - 2];
    const double v = bn - bnm1;
    const double w = -(cnm1 / cn) * std::pow(y, v);
    const int slots = static_cast<int>(n) - 2;
    const int max_m = 80;
    const double tol = 1e-13;

    double sum = 0.0;
    double prev_level = std::numeric_limits<double>::infinity();
    for (int m = 0; m < max_m; ++m) {
        double level = 0.0;
        std::vector<int> k(slots);
        for_each_composition(m, slots, k, 0, [&](const std::vector<int>& comp) {
            double gamma = bn * (m + 1);
            double coeff = 1.0 / cn;
            for (int i = 0; i < slots; ++i) {
                gamma -= mix.orders()[i] * comp[i];
                coeff *= std::pow(mix.weights()[i] / cn, comp[i]);
            }
            coeff *= multinomial_coeff(m, comp);
            level += coeff * std::pow(y, gamma - 1.0)
                * mlf::gml({v, gamma, m + 1.0, w});
        });
        sum += (m % 2 == 0 ? level : -level);
        const double mag = std::abs(level);
        if (mag < tol * std::max(1.0, std::abs(sum)) && mag <= prev_level)
            return {sum, HKernelMethod::multinomial_series};
        if (m > 8 && mag > prev_level && mag > std::abs(sum))
            throw NonConvergence("h_kernel_n: multinomial series diverging");
        prev_level = mag;
    }
    throw NonConvergence("h_kernel_n: multinomial series did not converge");
}

double inverse_subordinator_density(const StableMixture& mix, double u, double t) {
    if (!(u > 0.0) || !(t > 0.0))
        throw DomainError("inverse_subordinator_density: u and t must be positive");
    // exp(-u psi(s)) grows on the Talbot contour where Re psi < 0, so this
    // image is inverted with de Hoog only, self-checked by node doubling.
    const laplace::LaplaceImage image{
        [&mix, u](cplx s) { return psi_c(mix, s) / s * std::exp(-u * psi_c(mix, s)); }, 0.0};
    const double a = laplace::invert_dehoog(image, t, 32);
    const double b = laplace::invert_dehoog(image, t, 48);
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale < 1e-9) return 0.0;  // tail values below the inversion noise floor
    if (std::abs(a - b) > 1e-5 * scale)
        throw InversionUnstable("inverse_subordinator_density: node-doubling check failed");
    return std::max(b, 0.0);
}

} // namespace fracpearson::subordinator
