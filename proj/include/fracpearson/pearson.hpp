#pragma once

#include "fracpearson/subordinator.hpp"

#include <functional>
#include <span>
#include <vector>

namespace fracpearson::pearson {

/// Scalar diffusion with drift mu(x) = a0 + a1 x and squared diffusion
/// D(x) = sigma^2(x)/2 = d0 + d1 x + d2 x^2, positive on the state interval.
struct PearsonModel {
    double a0 = 0.0;
    double a1 = -1.0;  // must be negative (mean reversion)
    double d0 = 1.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double l = 0.0;  // state interval (l, L); infinities allowed
    double L = 0.0;

    double drift(double x) const { return a0 + a1 * x; }
    double diffusion(double x) const { return d0 + d1 * x + d2 * x * x; }
};

enum class PearsonClass { Hermite, Laguerre, Jacobi, Unsupported };

PearsonClass classify(const PearsonModel& model);

/// Stationary density m with its first two moments. Normal for Hermite,
/// gamma for Laguerre, beta for Jacobi, derived from (D m)' = mu m.
struct StationaryLaw {
    std::function<double(double)> density;
    double mean;
    double variance;
    double l, L;
};

StationaryLaw stationary_law(const PearsonModel& model);

/// First N generator eigenpairs. lambda_n = -n a1 - n(n-1) d2 and Q_n are the
/// orthonormal polynomials of the stationary law (classical recurrences).
struct SpectralData {
    std::vector<double> eigenvalues;                  // lambda_0 = 0 < lambda_1 < ...
    std::function<double(int, double)> eigenfunction; // Q_n(x)
    double theta;                                     // lambda_1, the correlation parameter
};

SpectralData spectral_data(const PearsonModel& model, int N);

/// Classical transition density m(x) sum_{n<N} e^{-lambda_n t} Q_n(x) Q_n(y),
/// clipped at zero.
double transition_density(const PearsonModel& model, double x, double t, double y, int N);

struct DensityResult {
    double value;
    double truncation_bound;  // e^{-lambda_N t} scale of the dropped tail
};

DensityResult transition_density_ex(const PearsonModel& model, double x, double t, double y, int N);

/// Time-changed transition density m(x) sum Phi_{lambda_n}(t) Q_n(x) Q_n(y).
double transition_density_time_changed(const PearsonModel& model,
                                       const subordinator::StableMixture& mix,
                                       double x, double t, double y, int N);

/// Phi_{lambda_n}(t) for n < N, for reuse across a spatial grid.
std::vector<double> phi_spectrum(const PearsonModel& model,
                                 const subordinator::StableMixture& mix,
                                 double t, int N);

double transition_density_time_changed(const PearsonModel& model,
                                       std::span<const double> phis,
                                       double x, double y);

/// u(t,y) = sum_n g_n Phi_{lambda_n}(t) Q_n(y) for expansion coefficients g_n.
double solve_fractional_cauchy(const PearsonModel& model,
                               const subordinator::StableMixture& mix,
                               std::span<const double> g_coeffs, double t, double y);

/// g_n = integral of g Q_n m over the state interval, n < N.
std::vector<double> project_coefficients(const PearsonModel& model,
                                         const std::function<double(double)>& g, int N);

/// Classical stationary correlation exp(-theta |t - s|).
double stationary_corr(const PearsonModel& model, double t, double s);

} // namespace fracpearson::pearson
