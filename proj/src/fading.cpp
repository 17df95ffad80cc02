#include "statage/fading.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "statage/error.hpp"

namespace statage::fading {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kMergeTol = 1e-12;
constexpr double kRateTol = 1e-12;

// 1 - beta e^u (1 - u) without overflow (u >= 1) or cancellation (u small).
double one_minus_beta_phi(double log_beta, double u) {
    if (u >= 1.0) {
        if (u == 1.0) return 1.0;
        return 1.0 + std::exp(log_beta + u + std::log(u - 1.0));
    }
    return -std::expm1(log_beta) + std::exp(log_beta) * numerics::lambert_gap(u);
}

double log_weighted_mean_rate(std::span<const double> rates, std::span<const double> weights) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rates.size(); ++i) sum += weights[i] * rates[i];
    return std::log(sum);
}

void check_rates(std::span<const double> rates, const FadingConfig& config) {
    if (rates.size() != config.grid().size()) {
        throw DomainError("rate vector has " + std::to_string(rates.size()) + " entries, grid has " +
                          std::to_string(config.grid().size()));
    }
    const double lo = config.rate_min() * (1.0 - kRateTol);
    const double hi = config.rate_max() * (1.0 + kRateTol);
    for (double r : rates) {
        if (!(r >= lo && r <= hi)) {
            throw DomainError("rate " + std::to_string(r) + " outside [1/T, 1/tau]");
        }
    }
}

void check_feasible(const FadingConfig& config) {
    const double floor_power = config.grid().mean_inverse_gain() * config.rate_min();
    if (floor_power > config.power_budget() * (1.0 + 1e-12)) {
        throw FeasibilityError("power budget " + std::to_string(config.power_budget()) +
                               " is below E[1/gamma]/T = " + std::to_string(floor_power));
    }
}

std::vector<double> rates_for(const SamplingPolicy& law, const FadingConfig& config) {
    const auto gains = config.grid().gains();
    std::vector<double> rates(gains.size());
    for (std::size_t i = 0; i < gains.size(); ++i) rates[i] = policy_rate(law, gains[i], config);
    return rates;
}

}  // namespace

ChannelGrid ChannelGrid::rayleigh(double gamma_min, double gamma_max, int n) {
    if (!(gamma_min > 0.0) || !(gamma_max > gamma_min) || !std::isfinite(gamma_max)) {
        throw DomainError("gain range must satisfy 0 < gamma_min < gamma_max");
    }
    if (n < 2) throw DomainError("channel grid needs at least 2 points");
    ChannelGrid grid;
    grid.gains_.resize(n);
    const double log_lo = std::log(gamma_min);
    const double log_span = std::log(gamma_max) - log_lo;
    for (int i = 0; i < n; ++i) {
        grid.gains_[i] = std::exp(log_lo + log_span * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    grid.gains_.front() = gamma_min;
    grid.gains_.back() = gamma_max;

    std::vector<double> edges(n + 1);
    edges.front() = gamma_min;
    edges.back() = gamma_max;
    for (int i = 1; i < n; ++i) edges[i] = std::sqrt(grid.gains_[i - 1] * grid.gains_[i]);
    grid.weights_.resize(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        grid.weights_[i] = -std::exp(-edges[i]) * std::expm1(-(edges[i + 1] - edges[i]));
        total += grid.weights_[i];
    }
    for (auto& w : grid.weights_) w /= total;
    return grid;
}

ChannelGrid ChannelGrid::from_points(std::vector<double> gains, std::vector<double> weights) {
    if (gains.empty() || gains.size() != weights.size()) {
        throw DomainError("channel grid needs matching, non-empty gain and weight lists");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < gains.size(); ++i) {
        if (!(gains[i] > 0.0) || !std::isfinite(gains[i])) throw DomainError("channel gains must be positive");
        if (i > 0 && !(gains[i] > gains[i - 1])) throw DomainError("channel gains must be strictly increasing");
        if (!(weights[i] > 0.0)) throw DomainError("channel weights must be positive");
        total += weights[i];
    }
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("channel weights must sum to 1");
    ChannelGrid grid;
    grid.gains_ = std::move(gains);
    grid.weights_ = std::move(weights);
    return grid;
}

double ChannelGrid::mean_inverse_gain() const noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < gains_.size(); ++i) s += weights_[i] / gains_[i];
    return s;
}

namespace {

void validate_params(const FadingParams& p, bool with_grid_range) {
    std::vector<std::string> issues;
    const auto positive = [&](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) issues.push_back(std::string(name) + ": must be positive and finite");
    };
    positive(p.p_bar_w, "p_bar_w");
    positive(p.bandwidth_hz, "bandwidth_hz");
    positive(p.tx_time_s, "tx_time_s");
    positive(p.coherence_time_s, "coherence_time_s");
    if (!(p.packet_bits >= 0.0) || !std::isfinite(p.packet_bits)) {
        issues.push_back("packet_bits: must be nonnegative and finite");
    }
    if (p.tx_time_s > p.coherence_time_s) {
        issues.push_back("tx_time_s: must not exceed coherence_time_s (tau <= T)");
    }
    if (with_grid_range) {
        positive(p.gamma_min, "gamma_min");
        if (!(p.gamma_max > p.gamma_min) || !std::isfinite(p.gamma_max)) {
            issues.push_back("gamma_max: must be finite and exceed gamma_min");
        }
        if (p.grid_points < 2) issues.push_back("grid_points: must be at least 2");
    }
    if (!issues.empty()) throw ConfigError(std::move(issues));
}

}  // namespace

FadingConfig::FadingConfig(const FadingParams& params) : params_(params), grid_(ChannelGrid::from_points({1.0}, {1.0})) {
    validate_params(params_, true);
    grid_ = ChannelGrid::rayleigh(params_.gamma_min, params_.gamma_max, params_.grid_points);
    init();
}

FadingConfig::FadingConfig(const FadingParams& params, ChannelGrid grid) : params_(params), grid_(std::move(grid)) {
    validate_params(params_, false);
    init();
}

void FadingConfig::init() {
    normalized_rate_ = params_.packet_bits * std::numbers::ln2 / (params_.tx_time_s * params_.bandwidth_hz);
    inversion_factor_ = std::expm1(normalized_rate_);
    power_budget_ = inversion_factor_ > 0.0 ? params_.p_bar_w / (params_.tx_time_s * inversion_factor_)
                                            : std::numeric_limits<double>::infinity();
}

double FadingConfig::power_usage(std::span<const double> rates) const {
    const auto gains = grid_.gains();
    const auto weights = grid_.weights();
    double s = 0.0;
    for (std::size_t i = 0; i < gains.size(); ++i) s += weights[i] * rates[i] / gains[i];
    return s;
}

double power_for_gain(double gamma, const FadingConfig& config) {
    if (!(gamma > 0.0)) throw DomainError("power_for_gain: gain must be positive");
    return config.inversion_factor() / gamma;
}

double SamplingPolicy::beta() const { return std::exp(log_beta); }

SamplingPolicy make_policy(double theta, double log_beta, double eta, const FadingConfig& config) {
    if (!(theta > 0.0)) throw DomainError("policy: theta must be positive");
    if (!(log_beta < 0.0)) throw DomainError("policy: beta must lie in (0, 1)");
    if (!(eta >= 0.0)) throw DomainError("policy: eta must be nonnegative");
    SamplingPolicy law{theta, log_beta, eta, 0.0, 0.0};
    law.gamma1_th = eta / one_minus_beta_phi(log_beta, theta * config.coherence());
    law.gamma2_th = eta / one_minus_beta_phi(log_beta, theta * config.tau());
    return law;
}

double policy_rate(const SamplingPolicy& law, double gamma, const FadingConfig& config) {
    if (!(gamma > 0.0)) throw DomainError("policy_rate: gain must be positive");
    if (gamma < law.gamma1_th) return config.rate_min();
    if (gamma > law.gamma2_th) return config.rate_max();

    double one_plus_w;
    const double s = law.eta / gamma - 1.0;
    if (s >= 0.0) {
        // Argument (eta - gamma)/(e beta gamma) is nonnegative and may exceed the double range.
        one_plus_w = s == 0.0 ? 1.0 : 1.0 + numerics::lambert_w0_exp(std::log(s) - 1.0 - law.log_beta);
    } else {
        // p = 1 + e * argument, the distance to the branch point.
        const double p = (law.eta / gamma + std::expm1(law.log_beta)) * std::exp(-law.log_beta);
        if (p < -1e-9) {
            throw Error("policy_rate: Lambert argument below -1/e inside the middle region (p = " +
                        std::to_string(p) + ")");
        }
        one_plus_w = numerics::lambert_w0_offset(std::max(p, 0.0));
    }
    const double rate = law.theta / one_plus_w;
    return std::clamp(rate, config.rate_min(), config.rate_max());
}

FadingPolicy solve_inner_given_beta(double theta, double log_beta, const FadingConfig& config) {
    check_feasible(config);
    const double budget = config.power_budget();
    const std::size_t n = config.grid().size();

    FadingPolicy out;
    const SamplingPolicy slack = make_policy(theta, log_beta, 0.0, config);
    const double top_power = config.grid().mean_inverse_gain() * config.rate_max();
    if (top_power <= budget) {
        out.rates.assign(n, config.rate_max());
        out.law = slack;
        return out;
    }

    const auto excess = [&](const std::vector<double>& rates) { return config.power_usage(rates) - budget; };

    double lo = 0.0;
    double hi = 1.0;
    SamplingPolicy law_hi = make_policy(theta, log_beta, hi, config);
    std::vector<double> rates_hi = rates_for(law_hi, config);
    double p_hi = excess(rates_hi);
    std::vector<double> rates_lo(n, config.rate_max());
    double p_lo = top_power - budget;
    while (p_hi > 0.0) {
        if (hi > 1e300) {
            // Budget equals E[1/gamma]/T: only the all-minimum policy fits.
            out.rates.assign(n, config.rate_min());
            out.law = law_hi;
            return out;
        }
        lo = hi;
        rates_lo = std::move(rates_hi);
        p_lo = p_hi;
        hi *= 2.0;
        law_hi = make_policy(theta, log_beta, hi, config);
        rates_hi = rates_for(law_hi, config);
        p_hi = excess(rates_hi);
    }

    while (p_hi != 0.0) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        const SamplingPolicy law_mid = make_policy(theta, log_beta, mid, config);
        std::vector<double> rates_mid = rates_for(law_mid, config);
        const double p_mid = excess(rates_mid);
        if (p_mid > 0.0) {
            lo = mid;
            rates_lo = std::move(rates_mid);
            p_lo = p_mid;
        } else {
            hi = mid;
            law_hi = law_mid;
            rates_hi = std::move(rates_mid);
            p_hi = p_mid;
        }
    }

    // eta is now resolved to adjacent doubles; a node with gamma near eta may
    // still jump between the two solutions, so mix them to spend the budget exactly.
    const double t = p_hi == 0.0 ? 0.0 : p_hi / (p_hi - p_lo);
    out.rates.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.rates[i] = std::clamp(t * rates_lo[i] + (1.0 - t) * rates_hi[i], config.rate_min(), config.rate_max());
    }
    out.law = law_hi;
    return out;
}

double log_ratio(double theta, std::span<const double> rates, const FadingConfig& config) {
    const auto weights = config.grid().weights();
    std::vector<double> exponents(rates.size());
    std::vector<double> masses(rates.size());
    for (std::size_t i = 0; i < rates.size(); ++i) {
        exponents[i] = theta / rates[i];
        masses[i] = weights[i] * rates[i];
    }
    return numerics::log_sum_exp(exponents, masses) - log_weighted_mean_rate(rates, weights);
}

FadingPolicy dinkelbach(double theta, const FadingConfig& config, const DinkelbachOptions& options) {
    if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("dinkelbach: theta must be positive");
    check_feasible(config);
    double start_rate = config.rate_min();
    if (options.start == DinkelbachStart::constant_rate) start_rate = max_paoi_policy(config).rates.front();
    double log_beta = -theta / start_rate;

    std::vector<double> trace{log_beta};
    for (int i = 0; i < options.max_iterations; ++i) {
        FadingPolicy pol = solve_inner_given_beta(theta, log_beta, config);
        const double next = -log_ratio(theta, pol.rates, config);
        trace.push_back(next);
        if (std::abs(next - log_beta) <= std::max(options.tol, 8.0 * kEps * std::abs(log_beta))) {
            pol.iterations = i + 1;
            pol.log_beta_trace = std::move(trace);
            return pol;
        }
        log_beta = next;
    }
    throw ConvergenceError("dinkelbach: no convergence in " + std::to_string(options.max_iterations) +
                               " iterations at theta = " + std::to_string(theta),
                           std::move(trace));
}

double objective_f(double theta, std::span<const double> rates, const FadingConfig& config, RiskLevel rho) {
    return (log_ratio(theta, rates, config) + rho.log_inverse()) / theta + config.tau();
}

OptimizeResult optimize(const FadingConfig& config, RiskLevel rho, const OptimizeOptions& options) {
    options.theta_bracket.validate();
    if (!(options.theta_bracket.lo > 0.0)) throw DomainError("optimize: theta bracket must be positive");

    OptimizeResult out;
    out.risk.rho = rho.value();
    if (rho.value() == 1.0) {
        out.policy = avg_paoi_policy(config);
        out.risk.theta_star = options.theta_bracket.lo;
        out.risk.delta = peak_age_distribution(out.policy.rates, config).mean();
        out.risk.limit = ThetaLimit::zero;
        return out;
    }

    const auto g = [&](double log_theta) {
        ++out.evaluations;
        const double theta = std::exp(log_theta);
        return objective_f(theta, dinkelbach(theta, config, options.inner).rates, config, rho);
    };
    const numerics::Bracket log_bracket{std::log(options.theta_bracket.lo), std::log(options.theta_bracket.hi)};

    double best_log_theta = 0.0;
    if (options.search == OuterSearch::golden) {
        const auto best = numerics::minimize_unimodal(g, log_bracket, options.log_theta_tol);
        best_log_theta = best.x;
        out.risk.iterations = best.iterations;
        out.risk.residual = best.final_width;
        out.risk.boundary = best.boundary;
    } else {
        const double h = 1e-4;
        const auto slope = [&](double s) { return numerics::central_difference(g, s, h); };
        const numerics::Bracket inner{log_bracket.lo + h, log_bracket.hi - h};
        try {
            best_log_theta = numerics::find_root_monotone(slope, inner, numerics::RootOptions{0.0, options.log_theta_tol, 200});
            out.risk.residual = std::abs(slope(best_log_theta));
        } catch (const BracketError& e) {
            // Slope keeps one sign: the minimum is at the end it points to.
            const bool increasing = e.f_lo() > 0.0;
            best_log_theta = increasing ? log_bracket.lo : log_bracket.hi;
            out.risk.boundary = increasing ? numerics::BoundaryHit::lower : numerics::BoundaryHit::upper;
        }
    }

    const double theta = std::exp(best_log_theta);
    out.policy = dinkelbach(theta, config, options.inner);
    out.risk.theta_star = theta;
    out.risk.delta = objective_f(theta, out.policy.rates, config, rho);
    return out;
}

FadingPolicy avg_paoi_policy(const FadingConfig& config) {
    check_feasible(config);
    const auto gains = config.grid().gains();
    const auto weights = config.grid().weights();
    const std::size_t n = gains.size();
    FadingPolicy out;
    out.rates.assign(n, config.rate_min());
    if (config.grid().mean_inverse_gain() * config.rate_max() <= config.power_budget()) {
        std::fill(out.rates.begin(), out.rates.end(), config.rate_max());
        return out;
    }
    double remaining = config.power_budget() - config.grid().mean_inverse_gain() * config.rate_min();
    const double step = config.rate_max() - config.rate_min();
    for (std::size_t k = n; k-- > 0;) {
        const double unit = weights[k] / gains[k];
        const double cost = unit * step;
        if (cost <= remaining) {
            out.rates[k] = config.rate_max();
            remaining -= cost;
        } else {
            out.rates[k] = config.rate_min() + std::max(remaining, 0.0) / unit;
            break;
        }
    }
    return out;
}

FadingPolicy max_paoi_policy(const FadingConfig& config) {
    check_feasible(config);
    const double rate =
        std::clamp(config.power_budget() / config.grid().mean_inverse_gain(), config.rate_min(), config.rate_max());
    FadingPolicy out;
    out.rates.assign(config.grid().size(), rate);
    return out;
}

PeakAgeDistribution peak_age_distribution(std::span<const double> rates, const FadingConfig& config) {
    check_rates(rates, config);
    const auto weights = config.grid().weights();
    std::vector<PeakAgeDistribution::Atom> raw(rates.size());
    for (std::size_t i = 0; i < rates.size(); ++i) raw[i] = {1.0 / rates[i] + config.tau(), weights[i] * rates[i]};
    std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.value < b.value; });

    std::vector<PeakAgeDistribution::Atom> merged;
    double total = 0.0;
    for (const auto& a : raw) {
        total += a.probability;
        if (!merged.empty() && a.value - merged.back().value <= kMergeTol * a.value) {
            merged.back().probability += a.probability;
        } else {
            merged.push_back(a);
        }
    }
    for (auto& a : merged) a.probability /= total;
    return PeakAgeDistribution::from_atoms(std::move(merged));
}

double stationarity_residual(const SamplingPolicy& law, double gamma, double rate) {
    const double u = law.theta / rate;
    return std::exp(law.log_beta + u) * (1.0 - u) - 1.0 + law.eta / gamma;
}

double middle_mass(const SamplingPolicy& law, const FadingConfig& config) {
    const auto gains = config.grid().gains();
    const auto weights = config.grid().weights();
    double m = 0.0;
    for (std::size_t i = 0; i < gains.size(); ++i) {
        if (gains[i] > law.gamma1_th && gains[i] < law.gamma2_th) m += weights[i];
    }
    return m;
}

}  // namespace statage::fading
