#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "statage/numerics.hpp"

namespace statage {

/// Violation probability rho in (0, 1].
class RiskLevel {
public:
    explicit RiskLevel(double rho);
    double value() const noexcept { return rho_; }
    /// log(1/rho), zero at rho = 1.
    double log_inverse() const noexcept;

private:
    double rho_;
};

/// Distribution of peak ages, held either as explicit atoms or as raw samples.
///
/// Both forms expose the canonical atom view (strictly increasing values); for
/// samples it is the empirical distribution, so every functional agrees between
/// a sample vector and its empirical atoms.
class PeakAgeDistribution {
public:
    struct Atom {
        double value = 0.0;
        double probability = 0.0;
    };

    /// Atoms are sorted and exact duplicates merged. Values must be finite and
    /// nonnegative, probabilities positive and summing to 1 within 1e-12.
    static PeakAgeDistribution from_atoms(std::vector<Atom> atoms);
    static PeakAgeDistribution from_samples(std::vector<double> samples);

    bool is_sample_form() const noexcept { return !samples_.empty(); }
    std::span<const Atom> atoms() const noexcept { return atoms_; }
    std::span<const double> samples() const noexcept { return samples_; }

    double mean() const noexcept;
    double ess_sup() const noexcept { return atoms_.back().value; }
    double ess_inf() const noexcept { return atoms_.front().value; }

    /// Pr(A >= threshold) and Pr(A > threshold), exact sums over atoms.
    double prob_at_least(double threshold) const noexcept;
    double prob_above(double threshold) const noexcept;

    /// Distribution of c*A for c > 0 (keeps the representation).
    PeakAgeDistribution scaled(double factor) const;

    /// Samples -> atoms conversion.
    PeakAgeDistribution to_atom_form() const;

private:
    PeakAgeDistribution() = default;

    std::vector<Atom> atoms_;
    std::vector<double> samples_;
};

void to_json(nlohmann::json& j, const PeakAgeDistribution& dist);
PeakAgeDistribution distribution_from_json(const nlohmann::json& j);

enum class ThetaLimit { none, zero, infinity };

struct RiskResult {
    double rho = 1.0;
    double theta_star = 0.0;
    double delta = 0.0;
    int iterations = 0;
    double residual = 0.0;
    numerics::BoundaryHit boundary = numerics::BoundaryHit::none;
    ThetaLimit limit = ThetaLimit::none;
};

/// log E[exp(theta A)] by log-sum-exp.
double log_mgf(const PeakAgeDistribution& dist, double theta);

/// E[exp(theta A)]; throws OverflowError once the log exceeds the double range.
double mgf(const PeakAgeDistribution& dist, double theta);

/// Value-at-risk: smallest support point a with Pr(A > a) <= rho.
double value_at_risk(const PeakAgeDistribution& dist, RiskLevel rho);

/// Conditional value-at-risk: min over t of t + E[(A - t)+] / rho.
double conditional_value_at_risk(const PeakAgeDistribution& dist, RiskLevel rho);

struct EvarOptions {
    numerics::Bracket theta_bracket{1e-4, 1e6};
    double tol = 1e-10;  // relative, on theta
};

/// Entropic value-at-risk (statistical AoI): min over theta of log(M(theta)/rho)/theta.
///
/// rho = 1 returns the mean (theta -> 0). When the minimum runs into the upper
/// end of the bracket the theta -> infinity limit, the essential supremum, is
/// reported with limit = infinity.
RiskResult entropic_value_at_risk(const PeakAgeDistribution& dist, RiskLevel rho,
                                  const EvarOptions& options = {});

}  // namespace statage
