#pragma once

#include <optional>
#include <span>
#include <vector>

#include "statage/numerics.hpp"
#include "statage/risk_metrics.hpp"

namespace statage::fading {

/// Discretized channel power-gain distribution.
class ChannelGrid {
public:
    /// Unit-mean exponential (Rayleigh power) gain on n log-spaced nodes in
    /// [gamma_min, gamma_max]. Each node carries the exact probability of its
    /// cell, with cell edges at geometric midpoints, renormalized to 1.
    static ChannelGrid rayleigh(double gamma_min, double gamma_max, int n);

    /// Explicit nodes; gains strictly increasing and positive, weights positive
    /// and summing to 1 within 1e-12.
    static ChannelGrid from_points(std::vector<double> gains, std::vector<double> weights);

    std::span<const double> gains() const noexcept { return gains_; }
    std::span<const double> weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return gains_.size(); }

    /// E[1/gamma] over the grid.
    double mean_inverse_gain() const noexcept;

private:
    ChannelGrid() = default;

    std::vector<double> gains_;
    std::vector<double> weights_;
};

/// Scalar system parameters; defaults are the reference simulation setup.
struct FadingParams {
    double p_bar_w = 0.1;
    double bandwidth_hz = 1e6;
    double packet_bits = 100.0;
    double tx_time_s = 1e-3;
    double coherence_time_s = 0.1;
    double gamma_min = 1e-3;
    double gamma_max = 20.0;
    int grid_points = 2000;
};

/// Validated fading system: parameters, channel grid and derived quantities.
class FadingConfig {
public:
    /// Validates params (0 < tau <= T, positive power and bandwidth, ...) and
    /// builds the Rayleigh grid they describe.
    explicit FadingConfig(const FadingParams& params);
    FadingConfig(const FadingParams& params, ChannelGrid grid);

    const FadingParams& params() const noexcept { return params_; }
    const ChannelGrid& grid() const noexcept { return grid_; }
    double tau() const noexcept { return params_.tx_time_s; }
    double coherence() const noexcept { return params_.coherence_time_s; }
    double rate_min() const noexcept { return 1.0 / params_.coherence_time_s; }
    double rate_max() const noexcept { return 1.0 / params_.tx_time_s; }

    /// D ln2 / (tau B).
    double normalized_rate() const noexcept { return normalized_rate_; }
    /// e^{normalized_rate} - 1: transmit power per unit gain under channel inversion.
    double inversion_factor() const noexcept { return inversion_factor_; }
    /// P_bar / (tau (e^{normalized_rate} - 1)); +inf for zero-size packets.
    double power_budget() const noexcept { return power_budget_; }

    /// E[lambda/gamma] of a rate vector over the grid.
    double power_usage(std::span<const double> rates) const;

private:
    void init();

    FadingParams params_;
    ChannelGrid grid_;
    double normalized_rate_ = 0.0;
    double inversion_factor_ = 0.0;
    double power_budget_ = 0.0;
};

/// Per-channel transmit power (e^{D_tau} - 1)/gamma meeting the Shannon rate with equality.
double power_for_gain(double gamma, const FadingConfig& config);

/// Closed-form optimal rate law for fixed (theta, beta, eta).
struct SamplingPolicy {
    double theta = 0.0;
    double log_beta = 0.0;  // beta itself underflows at large theta
    double eta = 0.0;
    double gamma1_th = 0.0;
    double gamma2_th = 0.0;

    double beta() const;
};

/// Thresholds for the given multiplier; fills gamma1_th and gamma2_th.
SamplingPolicy make_policy(double theta, double log_beta, double eta, const FadingConfig& config);

/// 1/T below gamma1_th, theta/(1 + W0((eta - gamma)/(e beta gamma))) between
/// the thresholds, 1/tau above.
double policy_rate(const SamplingPolicy& policy, double gamma, const FadingConfig& config);

/// Rates on the grid together with the law that produced them (absent for baselines).
struct FadingPolicy {
    std::vector<double> rates;
    std::optional<SamplingPolicy> law;
    int iterations = 0;
    std::vector<double> log_beta_trace;
};

/// Inner problem for fixed (theta, beta): eta solves E[lambda/gamma] = P_tau,
/// or eta = 0 when the power constraint is slack at lambda = 1/tau.
FadingPolicy solve_inner_given_beta(double theta, double log_beta, const FadingConfig& config);

enum class DinkelbachStart { constant_rate, min_rate };

struct DinkelbachOptions {
    double tol = 1e-12;
    int max_iterations = 200;
    DinkelbachStart start = DinkelbachStart::constant_rate;
};

/// Fixed point beta = E[lambda]/E[lambda e^{theta/lambda}] of the ratio problem.
FadingPolicy dinkelbach(double theta, const FadingConfig& config, const DinkelbachOptions& options = {});

/// log E[lambda e^{theta/lambda}] - log E[lambda] over the grid.
double log_ratio(double theta, std::span<const double> rates, const FadingConfig& config);

/// (1/theta) log(E[e^{theta/lambda} lambda]/E[lambda]) + tau + (1/theta) log(1/rho).
double objective_f(double theta, std::span<const double> rates, const FadingConfig& config, RiskLevel rho);

enum class OuterSearch { golden, derivative_bisection };

struct OptimizeOptions {
    numerics::Bracket theta_bracket{1e-3, 1e10};
    double log_theta_tol = 1e-7;
    OuterSearch search = OuterSearch::golden;
    DinkelbachOptions inner{};
};

struct OptimizeResult {
    RiskResult risk;
    FadingPolicy policy;
    int evaluations = 0;
};

/// Outer search over theta of the two-step objective. rho = 1 returns the
/// step baseline mean (theta -> 0).
OptimizeResult optimize(const FadingConfig& config, RiskLevel rho, const OptimizeOptions& options = {});

/// Step policy maximizing E[lambda]: 1/tau above a gain threshold, 1/T below,
/// one fractional node spending the remaining budget.
FadingPolicy avg_paoi_policy(const FadingConfig& config);

/// Constant rate clamp(P_tau / E[1/gamma], 1/T, 1/tau).
FadingPolicy max_paoi_policy(const FadingConfig& config);

/// Peak ages 1/lambda_i + tau with rate-weighted masses w_i lambda_i / sum w_j lambda_j.
PeakAgeDistribution peak_age_distribution(std::span<const double> rates, const FadingConfig& config);

/// Residual beta e^{u}(1 - u) - 1 + eta/gamma, u = theta/lambda, at one grid node.
double stationarity_residual(const SamplingPolicy& law, double gamma, double rate);

/// Total weight of nodes strictly between the thresholds.
double middle_mass(const SamplingPolicy& law, const FadingConfig& config);

}  // namespace statage::fading
