#include "fracpearson/laplace.hpp"
#include "fracpearson/errors.hpp"

#include <cmath>
#include <vector>

namespace fracpearson::laplace {

namespace {

constexpr double kPi = 3.14159265358979323846;
using cplx = std::complex<double>;

// Shift the image so the effective abscissa of convergence is <= 0:
// L^{-1}[F](t) = e^{at} L^{-1}[F(. + a)](t).
struct Shifted {
    const LaplaceImage& image;
    double a;
    cplx operator()(cplx s) const { return image.eval(s + a); }
};

} // namespace

double invert_talbot(const LaplaceImage& image, double t, int nodes) {
    if (!(t > 0.0)) throw DomainError("invert_talbot: t must be positive");
    const int M = nodes;
    const double a = std::max(image.abscissa, 0.0);
    const Shifted F{image, a};

    const double r = 2.0 * M / (5.0 * t);
    double acc = 0.5 * std::exp(r * t) * F(cplx(r, 0.0)).real();
    for (int k = 1; k < M; ++k) {
        const double theta = k * kPi / M;
        const double cot = std::cos(theta) / std::sin(theta);
        const cplx s(r * theta * cot, r * theta);
        const double sigma = theta + (theta * cot - 1.0) * cot;
        const cplx val = std::exp(s * t) * F(s) * cplx(1.0, sigma);
        acc += val.real();
    }
    return std::exp(a * t) * (r / M) * acc;
}

double invert_dehoog(const LaplaceImage& image, double t, int nodes, double tol) {
    if (!(t > 0.0)) throw DomainError("invert_dehoog: t must be positive");
    const int M = nodes;
    const double a = std::max(image.abscissa, 0.0);
    const Shifted F{image, a};

    const double T = 4.0 * t;                       // period of the Fourier series
    const double gamma = -0.5 * std::log(tol) / T;  // Bromwich line offset

    std::vector<cplx> fs(2 * M + 1);
    fs[0] = 0.5 * F(cplx(gamma, 0.0));
    for (int i = 1; i <= 2 * M; ++i) fs[i] = F(cplx(gamma, i * kPi / T));

    // Quotient-difference algorithm building the continued-fraction
    // coefficients d[] (de Hoog, Knight & Stokes 1982).
    std::vector<std::vector<cplx>> e(2 * M + 1, std::vector<cplx>(M + 1, 0.0));
    std::vector<std::vector<cplx>> q(2 * M + 1, std::vector<cplx>(M + 1, 0.0));
    for (int i = 0; i < 2 * M; ++i) q[i][1] = fs[i + 1] / fs[i];
    for (int r = 1; r <= M - 1; ++r) {
        for (int i = 2 * (M - r); i >= 0; --i) {
            if (i < 2 * (M - r) && r > 1)
                q[i][r] = q[i + 1][r - 1] * e[i + 1][r - 1] / e[i][r - 1];
            e[i][r] = q[i + 1][r] - q[i][r] + e[i + 1][r - 1];
        }
    }
    std::vector<cplx> d(2 * M + 1);
    d[0] = fs[0];
    for (int m = 1; m <= M; ++m) {
        d[2 * m - 1] = -q[0][m];
        d[2 * m] = -e[0][m];
    }

    // Evaluate the continued fraction by forward recurrence with the
    // remainder estimate of eqns (23)-(24).
    const cplx z(std::cos(kPi * t / T), std::sin(kPi * t / T));
    std::vector<cplx> A(2 * M + 2), B(2 * M + 2);
    A[0] = 0.0; B[0] = 1.0;
    A[1] = d[0]; B[1] = 1.0;
    for (int n = 2; n <= 2 * M + 1; ++n) {
        const cplx dz = d[n - 1] * z;
        A[n] = A[n - 1] + dz * A[n - 2];
        B[n] = B[n - 1] + dz * B[n - 2];
    }
    const cplx h2M = 0.5 * (1.0 + z * (d[2 * M - 1] - d[2 * M]));
    const cplx R2M = -h2M * (1.0 - std::sqrt(1.0 + z * d[2 * M] / (h2M * h2M)));
    const cplx An = A[2 * M] + R2M * A[2 * M - 1];
    const cplx Bn = B[2 * M] + R2M * B[2 * M - 1];

    return std::exp(a * t) * std::exp(gamma * t) / T * (An / Bn).real();
}

double invert(const LaplaceImage& image, double t, const InversionPolicy& policy) {
    if (!(t > 0.0)) throw DomainError("laplace::invert: t must be positive");
    if (t < 0.01)
        throw DomainError("laplace::invert: t < 0.01 is outside the oracle's trusted range");
    if (policy.nodes < 16) throw DomainError("laplace::invert: nodes must be >= 16");
    if (!(policy.target_rel_tol > 0.0))
        throw DomainError("laplace::invert: target_rel_tol must be positive");

    const double talbot = invert_talbot(image, t, policy.nodes);
    const double dehoog = invert_dehoog(image, t, policy.nodes, 1e-12);

    const double scale = std::max({std::abs(talbot), std::abs(dehoog), 1e-30});
    if (std::abs(talbot - dehoog) > 10.0 * policy.target_rel_tol * scale)
        throw InversionUnstable("laplace::invert: talbot and de Hoog disagree beyond tolerance");

    return policy.method == InversionMethod::talbot_contour ? talbot : dehoog;
}

} // namespace fracpearson::laplace
