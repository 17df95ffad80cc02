#pragma once

#include <vector>

#include "statage/risk_metrics.hpp"

namespace statage::tdma {

/// K sources sharing a TDMA frame; per-packet failure probability e^{-c tau}.
struct TdmaConfig {
    int k = 3;
    double c_per_s = 1000.0;
    double frame_s = 0.01;
    std::vector<double> rhos{0.1, 0.01, 0.001};

    /// Throws ConfigError listing every violated field.
    void validate() const;
};

struct SourceSolution {
    double tau = 0.0;
    double theta = 0.0;        // minimizer of the exact objective at tau
    double theta_model = 0.0;  // closed-form / constrained exponent that fixed tau
    double delta = 0.0;
    bool constrained = false;
};

struct TimeAllocation {
    std::vector<SourceSolution> solutions;
    double delta_max = 0.0;
    int iterations = 0;
    bool equalized = true;  // false when some source sits at its knee below the common level
    double unused_time = 0.0;
};

/// e^{-c tau}.
double error_prob(double tau, double c);

/// (1 - eps) e^{theta (tau + T)} / (1 - eps e^{theta T}); requires theta < c tau / T.
double peak_age_mgf_tdma(double tau, double theta, const TdmaConfig& config);

/// log of peak_age_mgf_tdma.
double log_peak_age_mgf_tdma(double tau, double theta, const TdmaConfig& config);

/// exact keeps the (1 - eps) factor of the geometric MGF; small_eps drops it
/// (1 - eps ~ 1), the simplification behind the closed-form time and exponent.
enum class Objective { exact, small_eps };

/// Statistical AoI at fixed tau under the chosen objective, minimized over theta.
RiskResult statistical_aoi(double tau, RiskLevel rho, const TdmaConfig& config, Objective objective);

/// Statistical AoI at fixed tau with the full geometric MGF, minimized over
/// theta in (0, c tau / T). rho = 1 gives the mean tau + T/(1 - eps).
RiskResult statistical_aoi_exact(double tau, RiskLevel rho, const TdmaConfig& config);

/// (1/c) log(1 + c/theta) + theta T / c.
double tau_tilde(double theta, const TdmaConfig& config);

/// sqrt(c log(1/rho) / T).
double theta_opt_approx(RiskLevel rho, const TdmaConfig& config);

/// Root of T/c - (log(1/rho) + log(1 + theta/c)) / theta^2.
double theta_opt_exact(RiskLevel rho, const TdmaConfig& config);

/// Exponent minimizing tau_max - (1/theta) log(1 - e^{theta T - c tau_max}) + (1/theta) log(1/rho).
double theta_constrained(double tau_max, RiskLevel rho, const TdmaConfig& config);

/// d/dtheta of the constrained objective above.
double constrained_slope(double theta, double tau_max, RiskLevel rho, const TdmaConfig& config);

/// Single source with transmission time capped at tau_max: tau = min(tau_max, tau_tilde).
SourceSolution statistical_aoi_at_taumax(double tau_max, RiskLevel rho, const TdmaConfig& config);

/// Min-max statistical AoI allocation of the frame across the configured sources.
TimeAllocation allocate(const TdmaConfig& config, Objective objective = Objective::exact);

/// Every source gets T/K.
TimeAllocation equal_allocation(const TdmaConfig& config, Objective objective = Objective::exact);

}  // namespace statage::tdma
