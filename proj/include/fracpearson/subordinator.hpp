#pragma once

#include "fracpearson/laplace.hpp"
#include "fracpearson/mlf.hpp"

#include <vector>

namespace fracpearson::subordinator {

/// Finite discrete mixture of stable subordinators: Laplace exponent
/// psi(s) = sum_i c_i s^{b_i} with 0 < b_1 < ... < b_n < 1 and c_i > 0.
/// Zero-weight components are dropped at construction, so the c_1 = 0 and
/// c_2 = 0 edges of the two-term theorems collapse to single-term mixtures.
class StableMixture {
public:
    StableMixture(std::vector<double> orders, std::vector<double> weights,
                  bool normalized = false);

    const std::vector<double>& orders() const { return orders_; }
    const std::vector<double>& weights() const { return weights_; }
    std::size_t size() const { return orders_.size(); }
    bool weight_sum_off_unity() const { return weight_sum_warning_; }

private:
    std::vector<double> orders_;
    std::vector<double> weights_;
    bool weight_sum_warning_ = false;
};

/// psi(s) = sum_i c_i s^{b_i}.
double psi(const StableMixture& mix, double s);

struct PhiResult {
    double value;
    bool used_inversion;  // series fallback taken (or n != 2)
};

/// Phi_theta(t) = E[exp(-theta E(t))] via the generalized Mittag-Leffler
/// double series for two-term mixtures, with Laplace-inversion fallback when
/// the outer series parameter (c1/c2) t^{b2-b1} exceeds 0.9.
PhiResult phi_ex(const StableMixture& mix, double theta, double t,
                 const mlf::EvalPolicy& policy = {});
double phi(const StableMixture& mix, double theta, double t,
           const mlf::EvalPolicy& policy = {});

/// Phi_{theta,n}(t) by numerical inversion of psi(s) / (s (theta + psi(s))),
/// valid for any number of mixture terms. Switches to a small-time expansion
/// below t ~ 1e-6 where contour inversion is not trusted.
double phi_n(const StableMixture& mix, double theta, double t,
             const laplace::InversionPolicy& policy = {});

/// E[E(t)] = (1/c2) t^{b2} E_{b2-b1, b2+1}(-(c1/c2) t^{b2-b1}) (n <= 2).
double mean_inverse(const StableMixture& mix, double t);

enum class AsymptoticRegime { large_t, small_t };

/// Two-term asymptotics of E[E(t)] for n = 2 mixtures. The small-t branch
/// keeps the conventional c2 second-denominator coefficient; see the tests
/// for the c2 vs c2^2 discrepancy against the direct expansion.
double mean_inverse_asymptotic(const StableMixture& mix, double t, AsymptoticRegime regime);

/// E[E(t)] for any n, via inversion of 1 / (s psi(s)).
double mean_inverse_n(const StableMixture& mix, double t,
                      const laplace::InversionPolicy& policy = {});

/// h(y) = (1/c2) y^{b2-1} E_{b2-b1, b2}(-(c1/c2) y^{b2-b1}); the density of
/// the renewal kernel with Laplace transform 1/psi(s). n <= 2 closed form.
double h_kernel(const StableMixture& mix, double y);

enum class HKernelMethod { multinomial_series, laplace_inversion };

struct HKernelResult {
    double value;
    HKernelMethod method;
};

/// n-term kernel h_n(y): multinomial generalized Mittag-Leffler expansion,
/// or inversion of 1/psi(s).
HKernelResult h_kernel_n(const StableMixture& mix, double y,
                         HKernelMethod method = HKernelMethod::multinomial_series);

/// Density f_t(u) of the inverse subordinator E(t), by inverting (in t, for
/// fixed u) the image s -> (psi(s)/s) exp(-u psi(s)).
double inverse_subordinator_density(const StableMixture& mix, double u, double t);

} // namespace fracpearson::subordinator
