#include "cli_app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "statage/error.hpp"
#include "statage/fading.hpp"
#include "statage/io.hpp"
#include "statage/risk_metrics.hpp"
#include "statage/simulator.hpp"
#include "statage/tdma.hpp"

namespace statage::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

int thread_cap() {
    int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("STATAGE_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return n;
}

// Evaluates fn(i) for i in [0, n) on up to thread_cap() workers; results keep index order.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, Fn fn) {
    std::vector<std::optional<T>> slots(n);
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_cap()), std::max<std::size_t>(n, 1));
    std::vector<std::exception_ptr> errors(workers);
    const auto work = [&](std::size_t w) {
        try {
            for (std::size_t i = w; i < n; i += workers) slots[i].emplace(fn(i));
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    std::vector<T> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

std::vector<double> log_grid(double from, double to, int steps) {
    if (!(from > 0.0) || !(to >= from) || steps < 1) throw DomainError("grid: need 0 < from <= to and steps >= 1");
    std::vector<double> out(steps);
    for (int i = 0; i < steps; ++i) {
        out[i] = steps == 1 ? from : std::exp(std::log(from) + (std::log(to) - std::log(from)) * i / (steps - 1));
    }
    out.back() = to;
    return out;
}

std::string f(double v) { return io::format_double(v); }

struct Session {
    std::vector<std::string> args;
    std::string config_path;
    std::string defaults = "table2";
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    json config_json = json::object();
    std::vector<std::string> outputs;

    io::Defaults defaults_mode() const { return defaults == "none" ? io::Defaults::none : io::Defaults::table2; }

    json raw_config() const { return config_path.empty() ? json::object() : io::read_json_file(config_path); }

    std::string path(const std::string& name) {
        fs::create_directories(out_dir);
        const std::string p = (fs::path(out_dir) / name).string();
        outputs.push_back(p);
        return p;
    }

    void finish(const std::string& stem, const json& summary) {
        io::write_json_file(path(stem + ".summary.json"), summary);
        io::RunManifest m;
        m.command_line = args;
        m.config_hash = io::hex64(io::fnv1a(config_json.dump()));
        m.seed = seed;
        m.outputs = outputs;
        for (const auto& o : outputs) m.output_hashes.push_back(io::file_hash(o));
        const std::string manifest = (fs::path(out_dir) / (stem + ".manifest.json")).string();
        io::write_json_file(manifest, io::to_json(m));
        std::cout << summary.dump(2) << '\n';
    }
};

fading::FadingConfig fading_config(Session& s) {
    const auto params = io::load_fading_params(s.raw_config(), s.defaults_mode());
    s.config_json = io::to_json(params);
    return fading::FadingConfig(params);
}

tdma::TdmaConfig tdma_config(Session& s) {
    const auto cfg = io::load_tdma_config(s.raw_config(), s.defaults_mode());
    s.config_json = io::to_json(cfg);
    return cfg;
}

tdma::Objective parse_objective(const std::string& name) {
    return name == "small-eps" ? tdma::Objective::small_eps : tdma::Objective::exact;
}

std::string boundary_name(numerics::BoundaryHit b) {
    switch (b) {
        case numerics::BoundaryHit::lower: return "lower";
        case numerics::BoundaryHit::upper: return "upper";
        default: return "none";
    }
}

std::string limit_name(ThetaLimit l) {
    switch (l) {
        case ThetaLimit::zero: return "zero";
        case ThetaLimit::infinity: return "infinity";
        default: return "none";
    }
}

void write_policy_csv(const std::string& path, std::span<const double> rates, const fading::FadingConfig& cfg) {
    io::CsvWriter csv(path, {"gamma", "lambda_hz", "power_w", "peak_age_s", "prob_mass"});
    const auto gains = cfg.grid().gains();
    const auto weights = cfg.grid().weights();
    double total = 0.0;
    for (std::size_t i = 0; i < rates.size(); ++i) total += weights[i] * rates[i];
    for (std::size_t i = 0; i < rates.size(); ++i) {
        csv.row({f(gains[i]), f(rates[i]), f(fading::power_for_gain(gains[i], cfg)), f(1.0 / rates[i] + cfg.tau()),
                 f(weights[i] * rates[i] / total)});
    }
}

void write_histogram_csv(const std::string& path, const std::vector<sim::HistogramBin>& bins) {
    io::CsvWriter csv(path, {"bin_left_s", "bin_right_s", "mass"});
    for (const auto& b : bins) csv.row({f(b.left), f(b.right), f(b.mass)});
}

struct PolicyChoice {
    fading::FadingPolicy policy;
    double delta = 0.0;
    double theta = 0.0;
};

PolicyChoice choose_policy(const std::string& name, const fading::FadingConfig& cfg, RiskLevel rho) {
    if (name == "opt") {
        auto r = fading::optimize(cfg, rho);
        return {std::move(r.policy), r.risk.delta, r.risk.theta_star};
    }
    PolicyChoice c;
    c.policy = name == "avg" ? fading::avg_paoi_policy(cfg) : fading::max_paoi_policy(cfg);
    const auto risk = entropic_value_at_risk(fading::peak_age_distribution(c.policy.rates, cfg), rho);
    c.delta = risk.delta;
    c.theta = risk.theta_star;
    return c;
}

json violation_json(const sim::ViolationReport& v) {
    return json{{"fraction", v.fraction}, {"allowance", v.allowance}, {"n", v.n}, {"pass", v.pass}};
}

}  // namespace

int run(const std::vector<std::string>& args) {
    Session s;
    s.args = args;

    CLI::App app{"Statistical age-of-information solvers for fading and TDMA status updates"};
    app.require_subcommand(1);
    app.add_option("--config", s.config_path, "JSON configuration file");
    app.add_option("--defaults", s.defaults, "values for omitted fields: table2 or none")
        ->check(CLI::IsMember({"table2", "none"}));
    app.add_option("--out", s.out_dir, "output directory");

    // fading
    auto* fading_cmd = app.add_subcommand("fading", "block-fading sampling control");
    fading_cmd->require_subcommand(1);
    double rho = 0.5;
    std::string search = "golden";
    auto* f_solve = fading_cmd->add_subcommand("solve", "optimal policy for one violation probability");
    f_solve->add_option("--rho", rho, "violation probability")->required()->check(CLI::Range(1e-300, 1.0));
    f_solve->add_option("--search", search, "outer search: golden or derivative")
        ->check(CLI::IsMember({"golden", "derivative"}));

    double from = 1e-3, to = 1.0;
    int steps = 31;
    auto* f_sweep = fading_cmd->add_subcommand("sweep-rho", "proposed versus baseline policies over rho");
    f_sweep->add_option("--from", from)->check(CLI::Range(1e-300, 1.0));
    f_sweep->add_option("--to", to)->check(CLI::Range(1e-300, 1.0));
    f_sweep->add_option("--steps", steps)->check(CLI::PositiveNumber);

    std::string policy_name = "opt";
    int bins = 50;
    auto* f_pdf = fading_cmd->add_subcommand("pdf", "peak-age histogram of a policy");
    f_pdf->add_option("--rho", rho)->check(CLI::Range(1e-300, 1.0));
    f_pdf->add_option("--policy", policy_name)->check(CLI::IsMember({"opt", "avg", "max"}));
    f_pdf->add_option("--bins", bins)->check(CLI::PositiveNumber);

    std::vector<double> theta_grid;
    double theta_from = 1e-3, theta_to = 1e4;
    int theta_steps = 8;
    auto* f_policy = fading_cmd->add_subcommand("policy", "optimal rate versus gain over a theta grid");
    f_policy->add_option("--theta-grid", theta_grid, "explicit exponents")->delimiter(',');
    f_policy->add_option("--theta-from", theta_from)->check(CLI::PositiveNumber);
    f_policy->add_option("--theta-to", theta_to)->check(CLI::PositiveNumber);
    f_policy->add_option("--theta-steps", theta_steps)->check(CLI::PositiveNumber);

    // tdma
    auto* tdma_cmd = app.add_subcommand("tdma", "multi-source TDMA transmission-time allocation");
    tdma_cmd->require_subcommand(1);
    std::string objective = "exact";
    bool equal = false;
    auto* t_alloc = tdma_cmd->add_subcommand("allocate", "min-max statistical AoI allocation");
    t_alloc->add_option("--objective", objective)->check(CLI::IsMember({"exact", "small-eps"}));
    t_alloc->add_flag("--equal", equal, "equal split baseline");

    auto* t_taumax = tdma_cmd->add_subcommand("sweep-taumax", "single-source statistical AoI versus tau_max");
    int tau_steps = 50;
    t_taumax->add_option("--steps", tau_steps)->check(CLI::PositiveNumber);

    auto* t_rho = tdma_cmd->add_subcommand("sweep-rho", "closed-form exponents and time versus rho");
    double tdma_from = 1e-3, tdma_to = 0.5;
    int tdma_steps = 31;
    std::optional<double> tau_max;
    t_rho->add_option("--from", tdma_from)->check(CLI::Range(1e-300, 1.0));
    t_rho->add_option("--to", tdma_to)->check(CLI::Range(1e-300, 1.0));
    t_rho->add_option("--steps", tdma_steps)->check(CLI::PositiveNumber);
    t_rho->add_option("--tau-max", tau_max, "cap on the transmission time (default: frame)");

    auto* t_frame = tdma_cmd->add_subcommand("frame-sweep", "maximum statistical AoI versus frame period");
    std::vector<int> ks{2, 3, 5};
    double frame_rho = 0.01, frame_from = 1e-4, frame_to = 1e-1;
    int frame_steps = 30;
    t_frame->add_option("--k", ks)->delimiter(',');
    t_frame->add_option("--rho", frame_rho)->check(CLI::Range(1e-300, 0.999999));
    t_frame->add_option("--from", frame_from)->check(CLI::PositiveNumber);
    t_frame->add_option("--to", frame_to)->check(CLI::PositiveNumber);
    t_frame->add_option("--steps", frame_steps)->check(CLI::PositiveNumber);
    t_frame->add_option("--objective", objective)->check(CLI::IsMember({"exact", "small-eps"}));

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo peak-age runs");
    sim_cmd->require_subcommand(1);
    std::uint64_t seed = 1;
    std::size_t n = 100000;
    auto* s_fading = sim_cmd->add_subcommand("fading", "simulate a fading policy (n = coherence blocks)");
    s_fading->add_option("--rho", rho)->check(CLI::Range(1e-300, 1.0));
    s_fading->add_option("--policy", policy_name)->check(CLI::IsMember({"opt", "avg", "max"}));
    s_fading->add_option("--seed", seed);
    s_fading->add_option("--n", n)->check(CLI::PositiveNumber);
    s_fading->add_option("--bins", bins)->check(CLI::PositiveNumber);
    int source = 0;
    std::optional<double> sim_tau;
    auto* s_tdma = sim_cmd->add_subcommand("tdma", "simulate one TDMA source (n = updates)");
    s_tdma->add_option("--source", source, "source index into the allocation")->check(CLI::NonNegativeNumber);
    s_tdma->add_option("--tau", sim_tau, "transmission time instead of the allocated one");
    s_tdma->add_option("--seed", seed);
    s_tdma->add_option("--n", n)->check(CLI::PositiveNumber);
    s_tdma->add_option("--bins", bins)->check(CLI::PositiveNumber);

    std::string manifest_path;
    auto* replay = app.add_subcommand("replay", "re-run a manifest and compare output hashes");
    replay->add_option("manifest", manifest_path)->required();

    for (auto* sub : {fading_cmd, tdma_cmd, sim_cmd}) {
        sub->fallthrough();
        for (auto* leaf : sub->get_subcommands({})) leaf->fallthrough();
    }

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (app.exit(e) == 0) return 0;
        std::cerr << app.help();
        return 2;
    }

    try {
        if (f_solve->parsed()) {
            const auto cfg = fading_config(s);
            fading::OptimizeOptions opt;
            if (search == "derivative") opt.search = fading::OuterSearch::derivative_bisection;
            const auto r = fading::optimize(cfg, RiskLevel(rho), opt);
            write_policy_csv(s.path("fading_solve.csv"), r.policy.rates, cfg);
            json summary{{"rho", rho},
                         {"theta_star", r.risk.theta_star},
                         {"delta_s", r.risk.delta},
                         {"iterations", r.risk.iterations},
                         {"evaluations", r.evaluations},
                         {"boundary", boundary_name(r.risk.boundary)},
                         {"limit", limit_name(r.risk.limit)},
                         {"power_budget", cfg.power_budget()},
                         {"power_used", cfg.power_usage(r.policy.rates)}};
            if (r.policy.law) {
                summary["eta"] = r.policy.law->eta;
                summary["log_beta"] = r.policy.law->log_beta;
                summary["gamma1_th"] = r.policy.law->gamma1_th;
                summary["gamma2_th"] = r.policy.law->gamma2_th;
                summary["dinkelbach_iterations"] = r.policy.iterations;
            }
            s.finish("fading_solve", summary);
        } else if (f_sweep->parsed()) {
            const auto cfg = fading_config(s);
            const auto rhos = log_grid(from, to, steps);
            const auto avg = fading::peak_age_distribution(fading::avg_paoi_policy(cfg).rates, cfg);
            const auto mx = fading::peak_age_distribution(fading::max_paoi_policy(cfg).rates, cfg);
            struct Row {
                double rho, proposed, theta, avg, max;
                std::string boundary;
            };
            const auto rows = parallel_map<Row>(rhos.size(), [&](std::size_t i) {
                const RiskLevel r(rhos[i]);
                const auto o = fading::optimize(cfg, r);
                return Row{rhos[i], o.risk.delta, o.risk.theta_star, entropic_value_at_risk(avg, r).delta,
                           entropic_value_at_risk(mx, r).delta, boundary_name(o.risk.boundary)};
            });
            io::CsvWriter csv(s.path("fading_sweep_rho.csv"),
                              {"rho", "delta_proposed_s", "theta_star", "delta_avg_paoi_s", "delta_max_paoi_s",
                               "boundary"});
            for (const auto& r : rows) csv.row({f(r.rho), f(r.proposed), f(r.theta), f(r.avg), f(r.max), r.boundary});
            s.finish("fading_sweep_rho", json{{"points", rows.size()}, {"from", from}, {"to", to}});
        } else if (f_pdf->parsed()) {
            const auto cfg = fading_config(s);
            const auto choice = choose_policy(policy_name, cfg, RiskLevel(rho));
            const auto dist = fading::peak_age_distribution(choice.policy.rates, cfg);
            write_histogram_csv(s.path("fading_pdf.csv"), sim::histogram(dist, bins));
            const auto atoms = dist.atoms();
            const auto mode = std::max_element(atoms.begin(), atoms.end(), [](const auto& a, const auto& b) {
                return a.probability < b.probability;
            });
            double var = 0.0;
            const double mean = dist.mean();
            for (const auto& a : atoms) var += a.probability * (a.value - mean) * (a.value - mean);
            s.finish("fading_pdf", json{{"policy", policy_name},
                                        {"rho", rho},
                                        {"delta_s", choice.delta},
                                        {"mean_s", mean},
                                        {"variance_s2", var},
                                        {"modal_atom_s", mode->value},
                                        {"atoms", atoms.size()}});
        } else if (f_policy->parsed()) {
            const auto cfg = fading_config(s);
            const auto thetas = theta_grid.empty() ? log_grid(theta_from, theta_to, theta_steps) : theta_grid;
            const auto policies = parallel_map<fading::FadingPolicy>(
                thetas.size(), [&](std::size_t i) { return fading::dinkelbach(thetas[i], cfg); });
            io::CsvWriter csv(s.path("fading_policy.csv"), {"theta", "gamma", "lambda_hz"});
            json per_theta = json::array();
            for (std::size_t t = 0; t < thetas.size(); ++t) {
                const auto gains = cfg.grid().gains();
                for (std::size_t i = 0; i < gains.size(); ++i) {
                    csv.row({f(thetas[t]), f(gains[i]), f(policies[t].rates[i])});
                }
                per_theta.push_back({{"theta", thetas[t]},
                                     {"eta", policies[t].law->eta},
                                     {"gamma1_th", policies[t].law->gamma1_th},
                                     {"gamma2_th", policies[t].law->gamma2_th},
                                     {"middle_mass", fading::middle_mass(*policies[t].law, cfg)}});
            }
            s.finish("fading_policy", json{{"thetas", per_theta}});
        } else if (t_alloc->parsed()) {
            const auto cfg = tdma_config(s);
            const auto obj = parse_objective(objective);
            const auto a = equal ? tdma::equal_allocation(cfg, obj) : tdma::allocate(cfg, obj);
            io::CsvWriter csv(s.path("tdma_allocate.csv"), {"source", "rho", "tau_s", "theta", "delta_s", "constrained"});
            double total = 0.0;
            for (std::size_t i = 0; i < a.solutions.size(); ++i) {
                const auto& sol = a.solutions[i];
                total += sol.tau;
                csv.row({std::to_string(i + 1), f(cfg.rhos[i]), f(sol.tau), f(sol.theta), f(sol.delta),
                         sol.constrained ? "1" : "0"});
            }
            s.finish("tdma_allocate", json{{"delta_max_s", a.delta_max},
                                           {"total_time_s", total},
                                           {"unused_time_s", a.unused_time},
                                           {"equalized", a.equalized},
                                           {"iterations", a.iterations},
                                           {"objective", objective},
                                           {"baseline", equal ? "equal" : "min-max"}});
        } else if (t_taumax->parsed()) {
            const auto cfg = tdma_config(s);
            io::CsvWriter csv(s.path("tdma_sweep_taumax.csv"),
                              {"rho", "tau_max_s", "tau_s", "theta", "delta_s", "constrained"});
            json knees = json::array();
            for (double r : cfg.rhos) {
                const RiskLevel level(r);
                const auto sols = parallel_map<tdma::SourceSolution>(static_cast<std::size_t>(tau_steps), [&](std::size_t i) {
                    const double cap = cfg.frame_s * static_cast<double>(i + 1) / tau_steps;
                    return tdma::statistical_aoi_at_taumax(cap, level, cfg);
                });
                for (int i = 0; i < tau_steps; ++i) {
                    const double cap = cfg.frame_s * static_cast<double>(i + 1) / tau_steps;
                    const auto& sol = sols[i];
                    csv.row({f(r), f(cap), f(sol.tau), f(sol.theta), f(sol.delta), sol.constrained ? "1" : "0"});
                }
                knees.push_back({{"rho", r}, {"tau_tilde_s", tdma::tau_tilde(tdma::theta_opt_exact(level, cfg), cfg)}});
            }
            s.finish("tdma_sweep_taumax", json{{"knees", knees}});
        } else if (t_rho->parsed()) {
            const auto cfg = tdma_config(s);
            const double cap = tau_max.value_or(cfg.frame_s);
            const auto rhos = log_grid(tdma_from, tdma_to, tdma_steps);
            io::CsvWriter csv(s.path("tdma_sweep_rho.csv"),
                              {"rho", "theta_approx", "theta_exact", "tau_tilde_s", "tau_s", "delta_s", "constrained"});
            for (double r : rhos) {
                const RiskLevel level(r);
                const double te = tdma::theta_opt_exact(level, cfg);
                const auto sol = tdma::statistical_aoi_at_taumax(cap, level, cfg);
                csv.row({f(r), f(tdma::theta_opt_approx(level, cfg)), f(te), f(tdma::tau_tilde(te, cfg)), f(sol.tau),
                         f(sol.delta), sol.constrained ? "1" : "0"});
            }
            s.finish("tdma_sweep_rho", json{{"points", rhos.size()}, {"tau_max_s", cap}});
        } else if (t_frame->parsed()) {
            const auto base = tdma_config(s);
            const auto obj = parse_objective(objective);
            const auto frames = log_grid(frame_from, frame_to, frame_steps);
            io::CsvWriter csv(s.path("tdma_frame_sweep.csv"), {"k", "frame_s", "delta_max_s", "equalized"});
            json per_k = json::array();
            for (int k : ks) {
                const auto allocs = parallel_map<tdma::TimeAllocation>(frames.size(), [&](std::size_t i) {
                    tdma::TdmaConfig c{k, base.c_per_s, frames[i], std::vector<double>(k, frame_rho)};
                    return tdma::allocate(c, obj);
                });
                std::size_t best = 0;
                for (std::size_t i = 0; i < frames.size(); ++i) {
                    csv.row({std::to_string(k), f(frames[i]), f(allocs[i].delta_max), allocs[i].equalized ? "1" : "0"});
                    if (allocs[i].delta_max < allocs[best].delta_max) best = i;
                }
                per_k.push_back({{"k", k}, {"best_frame_s", frames[best]}, {"best_delta_max_s", allocs[best].delta_max}});
            }
            s.finish("tdma_frame_sweep", json{{"per_k", per_k}, {"rho", frame_rho}, {"objective", objective}});
        } else if (s_fading->parsed()) {
            const auto cfg = fading_config(s);
            s.seed = seed;
            const RiskLevel level(rho);
            const auto choice = choose_policy(policy_name, cfg, level);
            const auto run = sim::simulate_fading(choice.policy.rates, cfg, seed, n, thread_cap());
            {
                io::CsvWriter csv(s.path("simulate_fading_samples.csv"), {"peak_age_s"});
                for (double a : run.samples) csv.row({f(a)});
            }
            write_histogram_csv(s.path("simulate_fading_hist.csv"), sim::histogram(run.samples, bins));
            const auto check = sim::check_violation(run, choice.delta, level);
            const auto empirical = entropic_value_at_risk(PeakAgeDistribution::from_samples(run.samples), level);
            s.finish("simulate_fading", json{{"policy", policy_name},
                                             {"rho", rho},
                                             {"seed", seed},
                                             {"blocks", n},
                                             {"events", run.n_events},
                                             {"delta_s", choice.delta},
                                             {"empirical_evar_s", empirical.delta},
                                             {"violation", violation_json(check)}});
        } else if (s_tdma->parsed()) {
            const auto cfg = tdma_config(s);
            s.seed = seed;
            if (source >= cfg.k) throw DomainError("--source must be below k");
            const RiskLevel level(cfg.rhos[source]);
            const double tau = sim_tau ? *sim_tau : tdma::allocate(cfg).solutions[source].tau;
            const double delta = tdma::statistical_aoi_exact(tau, level, cfg).delta;
            const auto run = sim::simulate_tdma(tau, cfg.c_per_s, cfg.frame_s, seed, n, thread_cap());
            {
                io::CsvWriter csv(s.path("simulate_tdma_samples.csv"), {"peak_age_s"});
                for (double a : run.samples) csv.row({f(a)});
            }
            write_histogram_csv(s.path("simulate_tdma_hist.csv"), sim::histogram(run.samples, bins));
            const auto check = sim::check_violation(run, delta, level);
            s.finish("simulate_tdma", json{{"source", source},
                                           {"rho", cfg.rhos[source]},
                                           {"tau_s", tau},
                                           {"seed", seed},
                                           {"updates", n},
                                           {"delta_s", delta},
                                           {"violation", violation_json(check)}});
        } else if (replay->parsed()) {
            const auto m = io::manifest_from_json(io::read_json_file(manifest_path));
            if (m.command_line.empty()) throw ConfigError({"manifest: empty command line"});
            const int code = run(m.command_line);
            if (code != 0) return code;
            bool same = m.output_hashes.size() == m.outputs.size();
            for (std::size_t i = 0; same && i < m.outputs.size(); ++i) same = io::file_hash(m.outputs[i]) == m.output_hashes[i];
            std::cout << (same ? "replay: outputs identical\n" : "replay: outputs differ\n");
            return same ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace statage::cli
