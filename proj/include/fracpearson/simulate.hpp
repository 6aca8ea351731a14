#pragma once

#include "fracpearson/pearson.hpp"
#include "fracpearson/subordinator.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace fracpearson::simulate {

enum class Scheme { exact_ou, euler_reflected };

struct SimConfig {
    int n_paths = 1000;
    double dtau = 1e-3;           // operational (subordinator clock) step
    double horizon = 10.0;        // initial T_op; extended per path as needed
    std::vector<double> observation_times;  // sorted physical times
    std::uint64_t seed = 1;
    Scheme scheme = Scheme::exact_ou;
};

/// Seeded ensemble of time-changed paths at shared observation times.
/// E-values per path are nondecreasing.
struct PathEnsemble {
    std::vector<double> observation_times;
    std::vector<std::vector<double>> clock;  // E(t_j), one row per path
    std::vector<std::vector<double>> state;  // X(t_j) = X_1(E(t_j))
    std::uint64_t seed = 0;
};

using Rng = std::mt19937_64;

/// RNG for path `index`: independent of path count and schedule.
Rng path_rng(std::uint64_t seed, std::uint64_t index);

/// One increment of a standard one-sided beta-stable subordinator over dt
/// (Laplace exponent s^beta), via the two-uniform (Kanter/CMS) transform.
double sample_stable_increment(double beta, double dt, Rng& rng);

/// Mixture subordinator D(tau_j) = sum_i c_i^{1/b_i} D^i(tau_j) on the grid
/// tau_j = j dtau, j = 0..n_steps.
std::vector<double> sample_mixture_path(const subordinator::StableMixture& mix,
                                        double dtau, int n_steps, Rng& rng);

/// First-passage inverse E(t) = inf{tau : D(tau) > t} on the grid, linearly
/// interpolated. Throws HorizonTooShort if D never exceeds an observation.
std::vector<double> invert_path(std::span<const double> d_path, double dtau,
                                std::span<const double> observation_times);

/// Pearson path on given clock increments, started from x0. Hermite uses the
/// exact OU transition; other classes use full-truncation Euler-Maruyama with
/// substeps of size <= dtau.
std::vector<double> sample_pearson_path(const pearson::PearsonModel& model,
                                        std::span<const double> clock_values,
                                        double x0, double dtau, Scheme scheme, Rng& rng);

double sample_stationary(const pearson::PearsonModel& model, Rng& rng);

/// Full ensemble: mixture clocks, inverse time change, stationary-start
/// Pearson paths. Parallel over paths (FRACPEARSON_THREADS caps workers);
/// deterministic for fixed seed and config.
PathEnsemble simulate_ensemble(const pearson::PearsonModel& model,
                               const subordinator::StableMixture& mix,
                               const SimConfig& cfg);

struct CorrEstimate {
    double estimate;
    double std_error;
};

/// Sample Pearson correlation of (X(t), X(s)) across paths with a
/// delta-method standard error.
CorrEstimate empirical_corr(const PathEnsemble& ensemble, double t, double s);

/// Columnar CSV: path_id,t,E,X (one row per path per observation time).
void write_ensemble_csv(const PathEnsemble& ensemble, const std::string& path);

/// Compact binary dump. Header: magic "FPEN1", then little-endian u64
/// n_paths, u64 n_obs, followed by observation times, then per path the E row
/// and the X row, all 64-bit floats.
void write_ensemble_binary(const PathEnsemble& ensemble, const std::string& path);

} // namespace fracpearson::simulate
