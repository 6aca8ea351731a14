#pragma once

#include "fracpearson/pearson.hpp"
#include "fracpearson/subordinator.hpp"

#include <span>

namespace fracpearson::correlation {

enum class QuadScheme { double_exponential, gauss_with_substitution };

struct QuadraturePolicy {
    QuadScheme scheme = QuadScheme::double_exponential;
    double rel_tol = 1e-9;
    int max_refinements = 15;
    // Worst-case endpoint exponent of h(y) at y -> 0; drives the power
    // substitution in the gauss scheme.
    double singularity_exponent = -0.5;
};

/// corr[X(t), X(s)] = theta * int_0^s h(y) Phi_theta(t-y) dy + Phi_theta(t)
/// for a two-term mixture, theta = lambda_1. Symmetric in (t, s).
double corr_time_changed(const pearson::PearsonModel& model,
                         const subordinator::StableMixture& mix,
                         double t, double s, const QuadraturePolicy& q = {});

/// Same formula through the n-term route: h_n (multinomial with inversion
/// fallback) and Phi_{theta,n} (inversion).
double corr_time_changed_n(const pearson::PearsonModel& model,
                           const subordinator::StableMixture& mix,
                           double t, double s, const QuadraturePolicy& q = {});

/// Large-t law for fixed s (two-term mixture):
/// (1/(t^{b1} Gamma(1-b1))) (c1/theta + (c1/c2) s^{b2} E_{b2-b1,b2+1}(-(c1/c2) s^{b2-b1})).
double corr_asymptotic(const pearson::PearsonModel& model,
                       const subordinator::StableMixture& mix,
                       double t, double s);

/// n-term large-t law: (1/(t^{b1} Gamma(1-b1))) (c1/theta + c1 int_0^s h_n).
double corr_asymptotic_n(const pearson::PearsonModel& model,
                         const subordinator::StableMixture& mix,
                         double t, double s, const QuadraturePolicy& q = {});

struct LrdFit {
    double slope;
    double intercept;
    double r_squared;
};

/// Least-squares slope of log corr(t, s) vs log t over t_grid; approximately
/// -b1 for time-changed diffusions.
LrdFit lrd_exponent_estimate(const pearson::PearsonModel& model,
                             const subordinator::StableMixture& mix,
                             double s, std::span<const double> t_grid,
                             const QuadraturePolicy& q = {});

/// Slope fit against precomputed correlation values (used for the classical
/// exponential sanity check).
LrdFit fit_power_law(std::span<const double> t_grid, std::span<const double> corr_values);

} // namespace fracpearson::correlation
