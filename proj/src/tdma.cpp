#include "statage/tdma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "statage/error.hpp"
#include "statage/numerics.hpp"

namespace statage::tdma {

namespace {

constexpr double kLogThetaTol = 1e-12;
constexpr double kWindowLow = 1e-10;   // lower theta bound as a fraction of c tau / T
constexpr double kWindowHigh = 1e-13;  // gap left below c tau / T
constexpr double kFloorFraction = 1e-9;

double theta_window(double tau, const TdmaConfig& config) { return config.c_per_s * tau / config.frame_s; }

// Statistical-AoI objective at (tau, theta); the small-eps form drops the (1 - eps) numerator.
double aoi_objective(double tau, double theta, double log_inv_rho, Objective objective, const TdmaConfig& config) {
    const double c = config.c_per_s;
    const double t = config.frame_s;
    const double log_one_minus_eps = objective == Objective::exact ? std::log(-std::expm1(-c * tau)) : 0.0;
    const double log_denominator = std::log(-std::expm1(theta * t - c * tau));
    return tau + t + (log_one_minus_eps - log_denominator + log_inv_rho) / theta;
}

struct SourceModel {
    RiskLevel rho;
    Objective objective;
    double knee = 0.0;
    double theta_knee = 0.0;
    double flat = 0.0;
};

// Smallest tau in [floor, model.knee] whose statistical AoI does not exceed target.
double required_time(const SourceModel& model, double target, double floor, const TdmaConfig& config) {
    if (target >= model.flat) {
        const auto excess = [&](double tau) {
            return statistical_aoi(tau, model.rho, config, model.objective).delta - target;
        };
        if (excess(floor) <= 0.0) return floor;
        if (excess(model.knee) > 0.0) return model.knee;
        return numerics::find_root_monotone(excess, numerics::Bracket{floor, model.knee},
                                            numerics::RootOptions{0.0, 0.0, 200});
    }
    return std::numeric_limits<double>::infinity();
}

SourceSolution solution_at(double tau, double theta_model, bool constrained, RiskLevel rho, const TdmaConfig& config,
                           Objective objective = Objective::exact) {
    const RiskResult exact = statistical_aoi(tau, rho, config, objective);
    return SourceSolution{tau, exact.theta_star, theta_model, exact.delta, constrained};
}

}  // namespace

void TdmaConfig::validate() const {
    std::vector<std::string> issues;
    if (k < 1) issues.push_back("k: must be at least 1");
    if (!(c_per_s > 0.0) || !std::isfinite(c_per_s)) issues.push_back("c_per_s: must be positive and finite");
    if (!(frame_s > 0.0) || !std::isfinite(frame_s)) issues.push_back("frame_s: must be positive and finite");
    if (static_cast<int>(rhos.size()) != k) {
        issues.push_back("rhos: expected " + std::to_string(k) + " entries, got " + std::to_string(rhos.size()));
    }
    for (std::size_t i = 0; i < rhos.size(); ++i) {
        if (!(rhos[i] > 0.0) || !(rhos[i] < 1.0)) {
            issues.push_back("rhos[" + std::to_string(i) + "]: must lie in (0, 1)");
        }
    }
    if (!issues.empty()) throw ConfigError(std::move(issues));
}

double error_prob(double tau, double c) {
    if (!(tau >= 0.0)) throw DomainError("error_prob: tau must be nonnegative");
    return std::exp(-c * tau);
}

double log_peak_age_mgf_tdma(double tau, double theta, const TdmaConfig& config) {
    if (!(tau > 0.0)) throw DomainError("tdma mgf: tau must be positive");
    const double c = config.c_per_s;
    const double t = config.frame_s;
    const double gap = theta * t - c * tau;
    if (!(gap < 0.0)) {
        throw DomainError("tdma mgf: existence requires theta < c tau / T = " + std::to_string(c * tau / t));
    }
    return std::log(-std::expm1(-c * tau)) + theta * (tau + t) - std::log(-std::expm1(gap));
}

double peak_age_mgf_tdma(double tau, double theta, const TdmaConfig& config) {
    const double l = log_peak_age_mgf_tdma(tau, theta, config);
    if (l > std::log(std::numeric_limits<double>::max())) throw OverflowError("tdma mgf: exponent overflow");
    return std::exp(l);
}

RiskResult statistical_aoi_exact(double tau, RiskLevel rho, const TdmaConfig& config) {
    return statistical_aoi(tau, rho, config, Objective::exact);
}

RiskResult statistical_aoi(double tau, RiskLevel rho, const TdmaConfig& config, Objective objective) {
    if (!(tau > 0.0)) throw DomainError("statistical_aoi: tau must be positive");
    const double window = theta_window(tau, config);
    if (!(window > std::numeric_limits<double>::min()) || !std::isfinite(window)) {
        throw FeasibilityError("statistical_aoi: empty exponent window at tau = " + std::to_string(tau));
    }
    RiskResult result;
    result.rho = rho.value();
    if (rho.value() == 1.0) {
        if (objective == Objective::small_eps) throw DomainError("small-eps objective is unbounded at rho = 1");
        result.theta_star = window * kWindowLow;
        result.delta = tau + config.frame_s / -std::expm1(-config.c_per_s * tau);
        result.limit = ThetaLimit::zero;
        return result;
    }
    const double log_inv_rho = rho.log_inverse();
    const auto g = [&](double log_theta) {
        return aoi_objective(tau, std::exp(log_theta), log_inv_rho, objective, config);
    };
    const numerics::Bracket bracket{std::log(window * kWindowLow), std::log(window) + std::log1p(-kWindowHigh)};
    const auto best = numerics::minimize_unimodal(g, bracket, kLogThetaTol);
    result.theta_star = std::exp(best.x);
    result.delta = best.fx;
    result.iterations = best.iterations;
    result.residual = best.final_width;
    result.boundary = best.boundary;
    return result;
}

double tau_tilde(double theta, const TdmaConfig& config) {
    if (!(theta > 0.0)) throw DomainError("tau_tilde: theta must be positive");
    const double c = config.c_per_s;
    return std::log1p(c / theta) / c + theta * config.frame_s / c;
}

double theta_opt_approx(RiskLevel rho, const TdmaConfig& config) {
    return std::sqrt(config.c_per_s * rho.log_inverse() / config.frame_s);
}

double theta_opt_exact(RiskLevel rho, const TdmaConfig& config) {
    if (!(rho.value() < 1.0)) throw DomainError("theta_opt_exact: rho must be below 1");
    const double c = config.c_per_s;
    const double t = config.frame_s;
    const double l = rho.log_inverse();
    // theta^2 times the stationarity condition; increasing past its single root.
    const auto scaled = [&](double theta) { return t * theta * theta / c - l - std::log1p(theta / c); };
    const double approx = theta_opt_approx(rho, config);
    double hi = 2.0 * approx;
    for (int i = 0; i < 200 && scaled(hi) <= 0.0; ++i) hi *= 2.0;
    return numerics::find_root_monotone(scaled, numerics::Bracket{approx, hi}, numerics::RootOptions{0.0, 0.0, 400});
}

double constrained_slope(double theta, double tau_max, RiskLevel rho, const TdmaConfig& config) {
    const double t = config.frame_s;
    const double gap = theta * t - config.c_per_s * tau_max;
    const double one_minus_x = -std::expm1(gap);
    const double x = std::exp(gap);
    return std::log(one_minus_x) / (theta * theta) + t * x / (theta * one_minus_x) - rho.log_inverse() / (theta * theta);
}

double theta_constrained(double tau_max, RiskLevel rho, const TdmaConfig& config) {
    if (!(tau_max > 0.0)) throw DomainError("theta_constrained: tau_max must be positive");
    if (!(rho.value() < 1.0)) throw DomainError("theta_constrained: rho must be below 1");
    const double window = theta_window(tau_max, config);
    if (!(window > std::numeric_limits<double>::min()) || !std::isfinite(window)) {
        throw FeasibilityError("theta_constrained: empty exponent window at tau_max = " + std::to_string(tau_max));
    }
    const double t = config.frame_s;
    const double l = rho.log_inverse();
    // theta^2 times the slope: log(1 - x) + theta T x/(1 - x) - log(1/rho), increasing in theta.
    const auto scaled = [&](double theta) {
        const double gap = theta * t - config.c_per_s * tau_max;
        const double one_minus_x = -std::expm1(gap);
        return std::log(one_minus_x) + theta * t * std::exp(gap) / one_minus_x - l;
    };
    const numerics::Bracket bracket{window * kWindowLow, window * (1.0 - kWindowHigh)};
    return numerics::find_root_monotone(scaled, bracket, numerics::RootOptions{0.0, 0.0, 400});
}

SourceSolution statistical_aoi_at_taumax(double tau_max, RiskLevel rho, const TdmaConfig& config) {
    if (!(tau_max > 0.0) || tau_max > config.frame_s) {
        throw DomainError("statistical_aoi_at_taumax: tau_max must lie in (0, T]");
    }
    const double theta = theta_opt_exact(rho, config);
    const double knee = tau_tilde(theta, config);
    if (knee <= tau_max) return solution_at(knee, theta, false, rho, config);
    return solution_at(tau_max, theta_constrained(tau_max, rho, config), true, rho, config);
}

TimeAllocation allocate(const TdmaConfig& config, Objective objective) {
    config.validate();
    const std::size_t k = static_cast<std::size_t>(config.k);
    std::vector<SourceModel> models;
    models.reserve(k);
    for (double r : config.rhos) {
        const RiskLevel rho(r);
        const double theta = theta_opt_exact(rho, config);
        models.push_back(SourceModel{rho, objective, tau_tilde(theta, config), theta, 0.0});
    }

    TimeAllocation out;
    out.solutions.resize(k);
    std::vector<std::size_t> active(k);
    for (std::size_t i = 0; i < k; ++i) active[i] = i;
    double available = config.frame_s;
    const double floor = config.frame_s * kFloorFraction;

    while (!active.empty()) {
        double level = 0.0;
        std::size_t binding = active.front();
        for (std::size_t i : active) {
            auto& m = models[i];
            const double cap = std::min(tau_tilde(m.theta_knee, config), available);
            m.knee = cap;
            m.flat = statistical_aoi(cap, m.rho, config, objective).delta;
            if (m.flat > level) {
                level = m.flat;
                binding = i;
            }
        }

        const auto demand = [&](double target) {
            double s = 0.0;
            for (std::size_t i : active) s += required_time(models[i], target, floor, config);
            return s;
        };

        double others = 0.0;
        for (std::size_t i : active) {
            if (i != binding) others += required_time(models[i], level, floor, config);
        }
        const auto& bm = models[binding];
        if (others + bm.knee <= available || others + required_time(bm, level, floor, config) <= available) {
            // The strictest knee is reachable: pin that source there and share what is left.
            const double tau = others + bm.knee <= available ? bm.knee : required_time(bm, level, floor, config);
            const bool capped = tau < tau_tilde(bm.theta_knee, config);
            out.solutions[binding] = solution_at(tau, capped ? theta_constrained(tau, bm.rho, config) : bm.theta_knee,
                                                 capped, bm.rho, config, objective);
            available -= tau;
            active.erase(std::find(active.begin(), active.end(), binding));
            ++out.iterations;
            continue;
        }

        double hi = level;
        for (std::size_t i : active) {
            const double sliver = available / static_cast<double>(active.size()) * 1e-2;
            hi = std::max(hi, statistical_aoi(sliver, models[i].rho, config, objective).delta);
        }
        int expansions = 0;
        while (demand(hi) > available) {
            if (++expansions > 200) {
                std::vector<double> mins;
                for (std::size_t i : active) mins.push_back(required_time(models[i], hi, floor, config));
                throw InfeasibleAllocation("allocate: sources do not fit in the frame", std::move(mins));
            }
            hi *= 2.0;
        }
        const auto surplus = [&](double target) { return demand(target) - available; };
        const double target = numerics::find_root_monotone(
            surplus, numerics::Bracket{level, hi}, numerics::RootOptions{1e-13 * config.frame_s, 0.0, 200});
        out.iterations += 1;
        for (std::size_t i : active) {
            const auto& m = models[i];
            const double tau = required_time(m, target, floor, config);
            out.solutions[i] = solution_at(tau, theta_constrained(tau, m.rho, config), true, m.rho, config, objective);
            available -= tau;
        }
        active.clear();
    }

    out.unused_time = std::max(0.0, available);
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& s : out.solutions) {
        out.delta_max = std::max(out.delta_max, s.delta);
        lo = std::min(lo, s.delta);
    }
    out.equalized = out.delta_max - lo <= 1e-3 * out.delta_max;
    return out;
}

TimeAllocation equal_allocation(const TdmaConfig& config, Objective objective) {
    config.validate();
    TimeAllocation out;
    const double tau = config.frame_s / static_cast<double>(config.k);
    for (double r : config.rhos) {
        const RiskLevel rho(r);
        const double theta = theta_opt_exact(rho, config);
        const bool capped = tau < tau_tilde(theta, config);
        out.solutions.push_back(
            solution_at(tau, capped ? theta_constrained(tau, rho, config) : theta, capped, rho, config, objective));
    }
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& s : out.solutions) {
        out.delta_max = std::max(out.delta_max, s.delta);
        lo = std::min(lo, s.delta);
    }
    out.equalized = out.delta_max - lo <= 1e-3 * out.delta_max;
    return out;
}

}  // namespace statage::tdma
