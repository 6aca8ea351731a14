#pragma once

#include <complex>
#include <functional>

namespace fracpearson::laplace {

/// A Laplace-domain image F(s). `eval` must be analytic to the right of
/// `abscissa` (caller-asserted; the inverter cannot verify it).
struct LaplaceImage {
    std::function<std::complex<double>(std::complex<double>)> eval;
    double abscissa = 0.0;
};

enum class InversionMethod { talbot_contour, series_acceleration };

struct InversionPolicy {
    InversionMethod method = InversionMethod::talbot_contour;
    int nodes = 32;
    double target_rel_tol = 1e-9;
};

/// Numerically invert `image` at time t. Both algorithms are always run and
/// their disagreement beyond 10 * target_rel_tol raises InversionUnstable;
/// the method selected by the policy provides the returned value.
/// Refuses t < 0.01, where contour inversion degrades.
double invert(const LaplaceImage& image, double t, const InversionPolicy& policy = {});

/// Fixed-Talbot deformed-contour inversion (Abate & Valko).
double invert_talbot(const LaplaceImage& image, double t, int nodes);

/// de Hoog quotient-difference series acceleration on the Bromwich line.
double invert_dehoog(const LaplaceImage& image, double t, int nodes, double tol = 1e-12);

} // namespace fracpearson::laplace
