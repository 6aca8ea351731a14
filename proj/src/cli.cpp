#include "fracpearson/cli.hpp"

#include "fracpearson/correlation.hpp"
#include "fracpearson/errors.hpp"
#include "fracpearson/mlf.hpp"
#include "fracpearson/pearson.hpp"
#include "fracpearson/simulate.hpp"
#include "fracpearson/subordinator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace fracpearson::cli {

using nlohmann::json;

namespace {

const char* kVersion = "1.0.0";

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DomainError(std::string("config is not valid JSON: ") + e.what());
    }
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

std::vector<double> as_grid(const json& j, const std::string& what) {
    require(j.is_array() && !j.empty(), what + " must be a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        require(v.is_number(), what + " must contain only numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

pearson::PearsonModel model_from_json(const json& j) {
    require(j.is_object(), "model must be an object");
    pearson::PearsonModel m;
    if (j.contains("class")) {
        const std::string cls = j.at("class").get<std::string>();
        const double theta = j.value("theta", 1.0);
        require(theta > 0.0, "model.theta must be positive");
        if (cls == "hermite") {
            const double mean = j.value("mean", 0.0);
            const double sigma = j.value("sigma", 1.0);
            require(sigma > 0.0, "model.sigma must be positive");
            m.a1 = -theta;
            m.a0 = theta * mean;
            m.d0 = theta * sigma * sigma;
            m.d1 = m.d2 = 0.0;
        } else if (cls == "laguerre") {
            const double shift = j.value("shift", 0.0);
            const double shape = j.value("shape", 1.0);
            const double rate = j.value("rate", 1.0);
            require(shape > 0.0 && rate > 0.0, "model.shape and model.rate must be positive");
            m.a1 = -theta;
            m.d1 = theta / rate;
            m.d0 = -shift * m.d1;
            m.d2 = 0.0;
            m.a0 = shape * m.d1 - m.a1 * shift;
        } else if (cls == "jacobi") {
            const double l = j.value("l", -1.0), L = j.value("L", 1.0);
            const double p = j.value("p", 1.0), q = j.value("q", 1.0);
            require(L > l, "model.L must exceed model.l");
            require(p > 0.0 && q > 0.0, "model.p and model.q must be positive");
            m.a1 = -theta;
            m.d2 = m.a1 / (p + q);
            m.d1 = -m.d2 * (l + L);
            m.d0 = m.d2 * l * L;
            m.a0 = p * m.d2 * (l - L) - m.a1 * l;
        } else {
            throw DomainError("model.class must be hermite, laguerre, or jacobi");
        }
    } else {
        for (const char* k : {"a0", "a1", "d0", "d1", "d2"})
            require(j.contains(k), std::string("model needs coefficient ") + k);
        m.a0 = j.at("a0").get<double>();
        m.a1 = j.at("a1").get<double>();
        m.d0 = j.at("d0").get<double>();
        m.d1 = j.at("d1").get<double>();
        m.d2 = j.at("d2").get<double>();
    }
    pearson::classify(m);  // throws on an invalid model
    const auto law = pearson::stationary_law(m);
    m.l = law.l;
    m.L = law.L;
    return m;
}

json model_to_json(const pearson::PearsonModel& m) {
    return {{"a0", m.a0}, {"a1", m.a1}, {"d0", m.d0}, {"d1", m.d1}, {"d2", m.d2}};
}

subordinator::StableMixture mixture_from_json(const json& j) {
    require(j.is_object(), "mixture must be an object");
    require(j.contains("orders") && j.contains("weights"),
            "mixture needs orders and weights arrays");
    return subordinator::StableMixture(as_grid(j.at("orders"), "mixture.orders"),
                                       as_grid(j.at("weights"), "mixture.weights"),
                                       j.value("normalized", false));
}

correlation::QuadraturePolicy quad_from_json(const json& j) {
    correlation::QuadraturePolicy q;
    const std::string scheme = j.value("scheme", "double_exponential");
    if (scheme == "double_exponential")
        q.scheme = correlation::QuadScheme::double_exponential;
    else if (scheme == "gauss_with_substitution")
        q.scheme = correlation::QuadScheme::gauss_with_substitution;
    else
        throw DomainError("quadrature.scheme must be double_exponential or gauss_with_substitution");
    q.rel_tol = j.value("rel_tol", 1e-9);
    q.max_refinements = j.value("max_refinements", 15);
    q.singularity_exponent = j.value("singularity_exponent", -0.5);
    return q;
}

json quad_to_json(const correlation::QuadraturePolicy& q) {
    return {{"scheme", q.scheme == correlation::QuadScheme::double_exponential
                           ? "double_exponential" : "gauss_with_substitution"},
            {"rel_tol", q.rel_tol},
            {"max_refinements", q.max_refinements},
            {"singularity_exponent", q.singularity_exponent}};
}

simulate::SimConfig sim_from_json(const json& j) {
    simulate::SimConfig c;
    c.n_paths = j.value("n_paths", 1000);
    c.dtau = j.value("dtau", 1e-3);
    c.horizon = j.value("horizon", 10.0);
    c.seed = j.value("seed", (std::uint64_t)1);
    const std::string scheme = j.value("scheme", "exact_ou");
    if (scheme == "exact_ou")
        c.scheme = simulate::Scheme::exact_ou;
    else if (scheme == "euler_reflected")
        c.scheme = simulate::Scheme::euler_reflected;
    else
        throw DomainError("sim.scheme must be exact_ou or euler_reflected");
    if (j.contains("observation_times") && !j.at("observation_times").empty())
        c.observation_times = as_grid(j.at("observation_times"), "sim.observation_times");
    require(c.n_paths >= 1, "sim.n_paths must be >= 1");
    require(c.dtau > 0.0, "sim.dtau must be positive");
    require(c.horizon > 0.0, "sim.horizon must be positive");
    return c;
}

json sim_to_json(const simulate::SimConfig& c) {
    return {{"n_paths", c.n_paths},
            {"dtau", c.dtau},
            {"horizon", c.horizon},
            {"seed", c.seed},
            {"scheme", c.scheme == simulate::Scheme::exact_ou ? "exact_ou" : "euler_reflected"},
            {"observation_times", c.observation_times}};
}

// (t, s) evaluation points: explicit pairs, else the t x s product grid.
std::vector<std::pair<double, double>> ts_points(const json& grids) {
    std::vector<std::pair<double, double>> pts;
    if (grids.contains("pairs")) {
        for (const auto& p : grids.at("pairs")) {
            require(p.is_array() && p.size() == 2, "grids.pairs entries must be [t, s]");
            pts.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
        require(!pts.empty(), "grids.pairs must be non-empty");
        return pts;
    }
    require(grids.contains("t") && grids.contains("s"),
            "task needs grids.pairs or both grids.t and grids.s");
    for (double t : as_grid(grids.at("t"), "grids.t"))
        for (double s : as_grid(grids.at("s"), "grids.s"))
            pts.emplace_back(t, s);
    return pts;
}

void write_csv(const RunResult& r, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    for (std::size_t c = 0; c < r.columns.size(); ++c)
        out << (c ? "," : "") << r.columns[c];
    out << "\n";
    for (const auto& row : r.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << fmt(row[c]);
        out << "\n";
    }
}

struct TaskOutput {
    RunResult result;
    std::vector<std::string> files;  // written beyond the results CSV
    double b1 = 0.0;                 // smallest mixture order, for plot reference
};

TaskOutput execute(const ExperimentConfig& cfg) {
    const json& c = cfg.raw;
    TaskOutput out;
    RunResult& r = out.result;

    switch (cfg.task) {
    case Task::eval_gml: {
        require(c.contains("gml"), "task eval_gml needs a gml object");
        const json& g = c.at("gml");
        const double alpha = g.value("alpha", 1.0);
        const double beta = g.value("beta", 1.0);
        const double gamma = g.value("gamma", 1.0);
        r.columns = {"alpha", "beta", "gamma", "z", "value"};
        for (double z : as_grid(g.at("z"), "gml.z"))
            r.rows.push_back({alpha, beta, gamma, z, mlf::gml({alpha, beta, gamma, z})});
        break;
    }
    case Task::phi: {
        const auto mix = mixture_from_json(c.at("mixture"));
        const json& grids = c.at("grids");
        r.columns = {"theta", "t", "phi"};
        for (double theta : as_grid(grids.at("theta"), "grids.theta"))
            for (double t : as_grid(grids.at("t"), "grids.t"))
                r.rows.push_back({theta, t,
                                  mix.size() <= 2 ? subordinator::phi(mix, theta, t)
                                                  : subordinator::phi_n(mix, theta, t)});
        out.b1 = mix.orders()[0];
        break;
    }
    case Task::mean_inverse: {
        const auto mix = mixture_from_json(c.at("mixture"));
        r.columns = {"t", "mean_inverse"};
        for (double t : as_grid(c.at("grids").at("t"), "grids.t"))
            r.rows.push_back({t, mix.size() <= 2 ? subordinator::mean_inverse(mix, t)
                                                 : subordinator::mean_inverse_n(mix, t)});
        break;
    }
    case Task::corr:
    case Task::corr_asymptotic: {
        const auto model = model_from_json(c.at("model"));
        const auto mix = mixture_from_json(c.at("mixture"));
        const auto quad = quad_from_json(c.value("quadrature", json::object()));
        const bool asym = cfg.task == Task::corr_asymptotic;
        r.columns = {"t", "s", asym ? "corr_asymptotic" : "corr_analytic"};
        for (auto [t, s] : ts_points(c.at("grids"))) {
            double v;
            if (asym)
                v = mix.size() <= 2 ? correlation::corr_asymptotic(model, mix, t, s)
                                    : correlation::corr_asymptotic_n(model, mix, t, s, quad);
            else
                v = mix.size() <= 2 ? correlation::corr_time_changed(model, mix, t, s, quad)
                                    : correlation::corr_time_changed_n(model, mix, t, s, quad);
            r.rows.push_back({t, s, v});
        }
        out.b1 = mix.orders()[0];
        break;
    }
    case Task::simulate: {
        const auto model = model_from_json(c.at("model"));
        const auto mix = mixture_from_json(c.at("mixture"));
        auto sim = sim_from_json(c.value("sim", json::object()));
        require(!sim.observation_times.empty(), "task simulate needs sim.observation_times");
        const auto ens = simulate::simulate_ensemble(model, mix, sim);
        const std::string csv = c.at("output").at("csv").get<std::string>();
        simulate::write_ensemble_csv(ens, csv);
        out.files.push_back(csv);
        if (c.at("output").contains("binary")) {
            const std::string bin = c.at("output").at("binary").get<std::string>();
            simulate::write_ensemble_binary(ens, bin);
            out.files.push_back(bin);
        }
        r.columns = {"path_id", "t", "E", "X"};  // schema of the file just written
        break;
    }
    case Task::compare: {
        const auto model = model_from_json(c.at("model"));
        const auto mix = mixture_from_json(c.at("mixture"));
        const auto quad = quad_from_json(c.value("quadrature", json::object()));
        auto sim = sim_from_json(c.value("sim", json::object()));
        const auto pts = ts_points(c.at("grids"));
        if (sim.observation_times.empty()) {
            for (auto [t, s] : pts) {
                sim.observation_times.push_back(t);
                sim.observation_times.push_back(s);
            }
            std::sort(sim.observation_times.begin(), sim.observation_times.end());
            sim.observation_times.erase(
                std::unique(sim.observation_times.begin(), sim.observation_times.end()),
                sim.observation_times.end());
        }
        const auto ens = simulate::simulate_ensemble(model, mix, sim);
        r.columns = {"t", "s", "corr_analytic", "corr_mc", "mc_stderr", "z_score"};
        for (auto [t, s] : pts) {
            const double analytic =
                mix.size() <= 2 ? correlation::corr_time_changed(model, mix, t, s, quad)
                                : correlation::corr_time_changed_n(model, mix, t, s, quad);
            const auto mc = simulate::empirical_corr(ens, t, s);
            r.rows.push_back({t, s, analytic, mc.estimate, mc.std_error,
                              (mc.estimate - analytic) / mc.std_error});
        }
        out.b1 = mix.orders()[0];
        break;
    }
    case Task::density: {
        const auto model = model_from_json(c.at("model"));
        require(c.contains("density"), "task density needs a density object");
        const json& d = c.at("density");
        const double t = d.value("t", 1.0);
        const int n_modes = d.value("n_modes", 30);
        const auto xs = as_grid(d.at("x"), "density.x");
        const auto ys = as_grid(d.at("y"), "density.y");
        r.columns = {"x", "y", "p"};
        if (c.contains("mixture")) {
            const auto mix = mixture_from_json(c.at("mixture"));
            const auto phis = pearson::phi_spectrum(model, mix, t, n_modes);
            for (double x : xs)
                for (double y : ys)
                    r.rows.push_back({x, y,
                                      pearson::transition_density_time_changed(
                                          model, std::span<const double>(phis), x, y)});
        } else {
            for (double x : xs)
                for (double y : ys)
                    r.rows.push_back({x, y, pearson::transition_density(model, x, t, y, n_modes)});
        }
        break;
    }
    }
    return out;
}

} // namespace

Task parse_task(const std::string& name) {
    if (name == "eval_gml") return Task::eval_gml;
    if (name == "phi") return Task::phi;
    if (name == "mean_inverse") return Task::mean_inverse;
    if (name == "corr") return Task::corr;
    if (name == "corr_asymptotic") return Task::corr_asymptotic;
    if (name == "simulate") return Task::simulate;
    if (name == "compare") return Task::compare;
    if (name == "density") return Task::density;
    throw DomainError("unknown task: " + name);
}

std::string task_name(Task t) {
    switch (t) {
    case Task::eval_gml: return "eval_gml";
    case Task::phi: return "phi";
    case Task::mean_inverse: return "mean_inverse";
    case Task::corr: return "corr";
    case Task::corr_asymptotic: return "corr_asymptotic";
    case Task::simulate: return "simulate";
    case Task::compare: return "compare";
    default: return "density";
    }
}

ExperimentConfig load_config(const std::string& path) {
    json j = read_json(path);
    if (j.contains("config") && j.at("config").is_object())
        j = j.at("config");  // a manifest re-runs its embedded config
    require(j.is_object(), "config root must be a JSON object");
    require(j.contains("task"), "config needs a task");

    ExperimentConfig cfg;
    cfg.task = parse_task(j.at("task").get<std::string>());

    // normalize: make every default explicit so the manifest is self-contained
    json n;
    n["task"] = task_name(cfg.task);
    if (j.contains("model")) n["model"] = model_to_json(model_from_json(j.at("model")));
    if (j.contains("mixture")) {
        const auto mix = mixture_from_json(j.at("mixture"));
        n["mixture"] = {{"orders", mix.orders()}, {"weights", mix.weights()}};
    }
    if (j.contains("grids")) n["grids"] = j.at("grids");
    if (j.contains("gml")) n["gml"] = j.at("gml");
    if (j.contains("density")) n["density"] = j.at("density");
    n["quadrature"] = quad_to_json(quad_from_json(j.value("quadrature", json::object())));
    if (j.contains("sim") || cfg.task == Task::simulate || cfg.task == Task::compare)
        n["sim"] = sim_to_json(sim_from_json(j.value("sim", json::object())));
    n["output"] = {{"csv", "results.csv"}, {"manifest", "manifest.json"}};
    if (j.contains("output")) n["output"].update(j.at("output"));
    cfg.raw = n;

    // task-specific required fields, checked up front so `validate` catches them
    switch (cfg.task) {
    case Task::eval_gml:
        require(n.contains("gml") && n["gml"].contains("z"), "task eval_gml needs gml.z");
        break;
    case Task::phi:
        require(n.contains("mixture"), "task phi needs a mixture");
        require(n.contains("grids") && n["grids"].contains("theta") && n["grids"].contains("t"),
                "task phi needs grids.theta and grids.t");
        break;
    case Task::mean_inverse:
        require(n.contains("mixture"), "task mean_inverse needs a mixture");
        require(n.contains("grids") && n["grids"].contains("t"), "task mean_inverse needs grids.t");
        break;
    case Task::corr:
    case Task::corr_asymptotic:
    case Task::compare:
        require(n.contains("model") && n.contains("mixture"),
                "correlation tasks need model and mixture");
        require(n.contains("grids"), "correlation tasks need grids");
        ts_points(n["grids"]);
        break;
    case Task::simulate:
        require(n.contains("model") && n.contains("mixture"),
                "task simulate needs model and mixture");
        require(!n["sim"]["observation_times"].empty(),
                "task simulate needs sim.observation_times");
        break;
    case Task::density:
        require(n.contains("model"), "task density needs a model");
        require(n.contains("density") && n["density"].contains("x") && n["density"].contains("y"),
                "task density needs density.x and density.y");
        break;
    }
    return cfg;
}

void emit_plot_data(const RunResult& results, PlotStyle style, const std::string& path,
                    double reference_slope) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open plot file: " + path);
    switch (style) {
    case PlotStyle::loglog_corr: {
        std::vector<double> ts, cs;
        for (const auto& row : results.rows) {
            if (row.size() >= 3 && row[0] > 0.0 && row[2] > 0.0) {
                ts.push_back(row[0]);
                cs.push_back(row[2]);
                out << fmt(std::log(row[0])) << " " << fmt(std::log(row[2])) << "\n";
            }
        }
        const auto fit = correlation::fit_power_law(ts, cs);
        std::ofstream slope(path + ".slope", std::ios::binary);
        slope << "slope " << fmt(fit.slope) << "\n"
              << "intercept " << fmt(fit.intercept) << "\n"
              << "r_squared " << fmt(fit.r_squared) << "\n"
              << "reference " << fmt(reference_slope) << "\n";
        break;
    }
    case PlotStyle::phi_decay:
        // phi rows are (theta, t, phi); emit the t/phi table
        for (const auto& row : results.rows)
            out << fmt(row[row.size() - 2]) << " " << fmt(row.back()) << "\n";
        break;
    case PlotStyle::density_heatmap:
        for (const auto& row : results.rows)
            out << fmt(row[0]) << " " << fmt(row[1]) << " " << fmt(row[2]) << "\n";
        break;
    }
}

int run(const std::string& config_path) {
    ExperimentConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "fracpearson: validation error: " << e.what() << "\n";
        return 2;
    }
    try {
        const auto start = std::chrono::steady_clock::now();
        TaskOutput out = execute(cfg);
        const json& oj = cfg.raw.at("output");
        const std::string csv = oj.at("csv").get<std::string>();
        if (cfg.task != Task::simulate) {
            write_csv(out.result, csv);
            out.files.insert(out.files.begin(), csv);
        }
        if (oj.contains("plot")) {
            const std::string style = oj.value("plot_style", "loglog_corr");
            PlotStyle ps = PlotStyle::loglog_corr;
            if (style == "phi_decay") ps = PlotStyle::phi_decay;
            else if (style == "density_heatmap") ps = PlotStyle::density_heatmap;
            else if (style != "loglog_corr")
                throw DomainError("unknown plot_style: " + style);
            const std::string plot = oj.at("plot").get<std::string>();
            emit_plot_data(out.result, ps, plot, -out.b1);
            out.files.push_back(plot);
        }
        const double wall = std::chrono::duration<double>(
            std::chrono::steady_clock::now() - start).count();

        json manifest = {{"tool", "fracpearson"},
                         {"version", kVersion},
                         {"config", cfg.raw},
                         {"seed", cfg.raw.contains("sim") ? cfg.raw["sim"]["seed"].get<std::uint64_t>()
                                                          : (std::uint64_t)0},
                         {"wall_time_seconds", wall},
                         {"outputs", out.files}};
        std::ofstream mf(oj.at("manifest").get<std::string>(), std::ios::binary);
        if (!mf) throw std::runtime_error("cannot open manifest file");
        mf << manifest.dump(2) << "\n";
        return 0;
    } catch (const DomainError& e) {
        std::cerr << "fracpearson: validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "fracpearson: numeric failure: " << e.what() << "\n";
        return 3;
    }
}

int validate(const std::string& config_path) {
    try {
        load_config(config_path);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "fracpearson: validation error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace fracpearson::cli
