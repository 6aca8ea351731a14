#include "fracpearson/simulate.hpp"
#include "fracpearson/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <thread>

namespace fracpearson::simulate {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

int worker_count() {
    if (const char* env = std::getenv("FRACPEARSON_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace

Rng path_rng(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(seed ^ splitmix64(index + 1)));
}

double sample_stable_increment(double beta, double dt, Rng& rng) {
    if (!(beta > 0.0) || !(beta < 1.0))
        throw DomainError("sample_stable_increment: beta must lie in (0,1)");
    if (!(dt > 0.0)) throw DomainError("sample_stable_increment: dt must be positive");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u;
    do { u = unif(rng) * kPi; } while (u <= 0.0 || u >= kPi);
    double w;
    do { w = -std::log(unif(rng)); } while (!(w > 0.0));
    // Kanter representation of the standard one-sided stable law,
    // E[exp(-s S)] = exp(-s^beta).
    const double ratio = (1.0 - beta) / beta;
    const double s = std::sin(beta * u)
        * std::pow(std::sin((1.0 - beta) * u) / w, ratio)
        / std::pow(std::sin(u), 1.0 / beta);
    return std::pow(dt, 1.0 / beta) * s;
}

std::vector<double> sample_mixture_path(const subordinator::StableMixture& mix,
                                        double dtau, int n_steps, Rng& rng) {
    if (!(dtau > 0.0) || n_steps < 1)
        throw DomainError("sample_mixture_path: need dtau > 0 and n_steps >= 1");
    const std::size_t n = mix.size();
    std::vector<double> scale(n);
    for (std::size_t i = 0; i < n; ++i)
        scale[i] = std::pow(mix.weights()[i], 1.0 / mix.orders()[i]);
    std::vector<double> path(n_steps + 1);
    path[0] = 0.0;
    for (int j = 1; j <= n_steps; ++j) {
        double inc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            inc += scale[i] * sample_stable_increment(mix.orders()[i], dtau, rng);
        path[j] = path[j - 1] + inc;
    }
    return path;
}

std::vector<double> invert_path(std::span<const double> d_path, double dtau,
                                std::span<const double> observation_times) {
    std::vector<double> out(observation_times.size());
    std::size_t k = 1;
    for (std::size_t j = 0; j < observation_times.size(); ++j) {
        const double t = observation_times[j];
        while (k < d_path.size() && d_path[k] <= t) ++k;
        if (k == d_path.size())
            throw HorizonTooShort("invert_path: subordinator never exceeded an observation time");
        const double d0 = d_path[k - 1], d1 = d_path[k];
        out[j] = dtau * (k - 1) + dtau * (t - d0) / (d1 - d0);
    }
    return out;
}

double sample_stationary(const pearson::PearsonModel& model, Rng& rng) {
    const auto cls = pearson::classify(model);
    const auto law = pearson::stationary_law(model);
    switch (cls) {
    case pearson::PearsonClass::Hermite: {
        std::normal_distribution<double> normal(law.mean, std::sqrt(law.variance));
        return normal(rng);
    }
    case pearson::PearsonClass::Laguerre: {
        const double mean = law.mean - law.l;
        const double shape = mean * mean / law.variance;
        const double scale = law.variance / mean;
        std::gamma_distribution<double> gamma(shape, scale);
        return law.l + gamma(rng);
    }
    default: {
        const double width = law.L - law.l;
        const double mu = (law.mean - law.l) / width;
        const double v = law.variance / (width * width);
        const double pq = mu * (1.0 - mu) / v - 1.0;
        std::gamma_distribution<double> g1(mu * pq, 1.0), g2((1.0 - mu) * pq, 1.0);
        const double a = g1(rng), b = g2(rng);
        return law.l + width * a / (a + b);
    }
    }
}

std::vector<double> sample_pearson_path(const pearson::PearsonModel& model,
                                        std::span<const double> clock_values,
                                        double x0, double dtau, Scheme scheme, Rng& rng) {
    const auto cls = pearson::classify(model);
    const bool exact = scheme == Scheme::exact_ou && cls == pearson::PearsonClass::Hermite;
    const auto law = pearson::stationary_law(model);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<double> out(clock_values.size());
    double x = x0;
    double prev = 0.0;
    for (std::size_t j = 0; j < clock_values.size(); ++j) {
        const double de = clock_values[j] - prev;
        prev = clock_values[j];
        if (de > 0.0) {
            if (exact) {
                const double rho = std::exp(model.a1 * de);
                const double sd = std::sqrt(law.variance * (1.0 - rho * rho));
                x = law.mean + (x - law.mean) * rho + sd * gauss(rng);
            } else {
                const int n_sub = std::max(1, (int)std::ceil(de / dtau));
                const double h = de / n_sub;
                for (int k = 0; k < n_sub; ++k) {
                    // full truncation: coefficients evaluated at the clamped state
                    const double xc = std::clamp(x, law.l, law.L);
                    const double d = std::max(model.diffusion(xc), 0.0);
                    x += model.drift(xc) * h + std::sqrt(2.0 * d * h) * gauss(rng);
                }
            }
        }
        out[j] = x;
    }
    return out;
}

PathEnsemble simulate_ensemble(const pearson::PearsonModel& model,
                               const subordinator::StableMixture& mix,
                               const SimConfig& cfg) {
    if (cfg.n_paths < 1) throw DomainError("simulate_ensemble: n_paths must be >= 1");
    if (cfg.observation_times.empty())
        throw DomainError("simulate_ensemble: no observation times");
    if (!std::is_sorted(cfg.observation_times.begin(), cfg.observation_times.end()))
        throw DomainError("simulate_ensemble: observation times must be sorted");

    const double max_obs = cfg.observation_times.back();
    const int chunk_steps = std::max(1, (int)std::ceil(cfg.horizon / cfg.dtau));

    PathEnsemble ens;
    ens.observation_times = cfg.observation_times;
    ens.seed = cfg.seed;
    ens.clock.resize(cfg.n_paths);
    ens.state.resize(cfg.n_paths);

    auto run_path = [&](int p) {
        Rng rng = path_rng(cfg.seed, (std::uint64_t)p);
        const double x0 = sample_stationary(model, rng);

        // extend the operational horizon until the subordinator clears the
        // last observation; discarding slow paths would bias the ensemble
        std::vector<double> d_path = sample_mixture_path(mix, cfg.dtau, chunk_steps, rng);
        int extensions = 0;
        while (d_path.back() <= max_obs) {
            if (++extensions > 64)
                throw HorizonTooShort("simulate_ensemble: horizon extension limit reached");
            std::vector<double> more = sample_mixture_path(mix, cfg.dtau, chunk_steps, rng);
            const double base = d_path.back();
            for (std::size_t i = 1; i < more.size(); ++i) d_path.push_back(base + more[i]);
        }

        ens.clock[p] = invert_path(d_path, cfg.dtau, cfg.observation_times);
        ens.state[p] = sample_pearson_path(model, ens.clock[p], x0, cfg.dtau, cfg.scheme, rng);
    };

    const int workers = std::min(worker_count(), cfg.n_paths);
    if (workers <= 1) {
        for (int p = 0; p < cfg.n_paths; ++p) run_path(p);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (int p = w; p < cfg.n_paths; p += workers) run_path(p);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    return ens;
}

CorrEstimate empirical_corr(const PathEnsemble& ensemble, double t, double s) {
    auto index_of = [&](double v) {
        for (std::size_t j = 0; j < ensemble.observation_times.size(); ++j)
            if (std::abs(ensemble.observation_times[j] - v) < 1e-12) return j;
        throw DomainError("empirical_corr: time not among observation times");
    };
    const std::size_t jt = index_of(t), js = index_of(s);
    const std::size_t n = ensemble.state.size();
    if (n < 2) throw DomainError("empirical_corr: need at least 2 paths");

    double mt = 0, ms = 0;
    for (std::size_t p = 0; p < n; ++p) {
        mt += ensemble.state[p][jt];
        ms += ensemble.state[p][js];
    }
    mt /= n; ms /= n;
    double vt = 0, vs = 0, cov = 0;
    for (std::size_t p = 0; p < n; ++p) {
        const double a = ensemble.state[p][jt] - mt;
        const double b = ensemble.state[p][js] - ms;
        vt += a * a; vs += b * b; cov += a * b;
    }
    vt /= (n - 1); vs /= (n - 1); cov /= (n - 1);
    if (vt <= 1e-14 * (1.0 + mt * mt) || vs <= 1e-14 * (1.0 + ms * ms))
        throw DegenerateVariance("empirical_corr: sample variance is ~0");
    const double r = cov / std::sqrt(vt * vs);
    const double se = (1.0 - r * r) / std::sqrt((double)n - 1.0);
    return {r, se};
}

void write_ensemble_csv(const PathEnsemble& ensemble, const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: LF line endings everywhere
    if (!out) throw std::runtime_error("write_ensemble_csv: cannot open " + path);
    out << "path_id,t,E,X\n";
    char buf[128];
    for (std::size_t p = 0; p < ensemble.state.size(); ++p) {
        for (std::size_t j = 0; j < ensemble.observation_times.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", p,
                          ensemble.observation_times[j], ensemble.clock[p][j],
                          ensemble.state[p][j]);
            out << buf;
        }
    }
}

void write_ensemble_binary(const PathEnsemble& ensemble, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_ensemble_binary: cannot open " + path);
    out.write("FPEN1", 5);
    const std::uint64_t n_paths = ensemble.state.size();
    const std::uint64_t n_obs = ensemble.observation_times.size();
    out.write(reinterpret_cast<const char*>(&n_paths), 8);
    out.write(reinterpret_cast<const char*>(&n_obs), 8);
    auto write_row = [&](const std::vector<double>& row) {
        out.write(reinterpret_cast<const char*>(row.data()),
                  (std::streamsize)(row.size() * sizeof(double)));
    };
    write_row(ensemble.observation_times);
    for (std::size_t p = 0; p < n_paths; ++p) {
        write_row(ensemble.clock[p]);
        write_row(ensemble.state[p]);
    }
}

} // namespace fracpearson::simulate
