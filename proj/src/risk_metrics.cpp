#include "statage/risk_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "statage/error.hpp"

namespace statage {

namespace {

constexpr double kProbabilitySumTol = 1e-12;
// Slack on tail-probability comparisons against rho; atom masses carry rounding.
constexpr double kTailTol = 1e-12;

void check_value(double v) {
    if (!std::isfinite(v) || v < 0.0) {
        throw DomainError("peak age " + std::to_string(v) + " must be finite and nonnegative");
    }
}

}  // namespace

RiskLevel::RiskLevel(double rho) : rho_(rho) {
    if (!(rho > 0.0) || !(rho <= 1.0)) {
        throw DomainError("risk level " + std::to_string(rho) + " outside (0, 1]");
    }
}

double RiskLevel::log_inverse() const noexcept { return rho_ == 1.0 ? 0.0 : -std::log(rho_); }

PeakAgeDistribution PeakAgeDistribution::from_atoms(std::vector<Atom> atoms) {
    if (atoms.empty()) throw DomainError("distribution needs at least one atom");
    double total = 0.0;
    for (const auto& a : atoms) {
        check_value(a.value);
        if (!(a.probability > 0.0) || !std::isfinite(a.probability)) {
            throw DomainError("atom probability " + std::to_string(a.probability) + " must be positive");
        }
        total += a.probability;
    }
    if (std::abs(total - 1.0) > kProbabilitySumTol) {
        throw DomainError("atom probabilities sum to " + std::to_string(total) + ", expected 1");
    }
    std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) { return x.value < y.value; });
    PeakAgeDistribution dist;
    for (const auto& a : atoms) {
        if (!dist.atoms_.empty() && dist.atoms_.back().value == a.value) {
            dist.atoms_.back().probability += a.probability;
        } else {
            dist.atoms_.push_back(a);
        }
    }
    return dist;
}

PeakAgeDistribution PeakAgeDistribution::from_samples(std::vector<double> samples) {
    if (samples.empty()) throw DomainError("distribution needs at least one sample");
    for (double v : samples) check_value(v);
    PeakAgeDistribution dist;
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        dist.atoms_.push_back({sorted[i], static_cast<double>(j - i) / n});
        i = j;
    }
    dist.samples_ = std::move(samples);
    return dist;
}

double PeakAgeDistribution::mean() const noexcept {
    double m = 0.0;
    for (const auto& a : atoms_) m += a.probability * a.value;
    return m;
}

double PeakAgeDistribution::prob_at_least(double threshold) const noexcept {
    double p = 0.0;
    for (auto it = atoms_.rbegin(); it != atoms_.rend() && it->value >= threshold; ++it) p += it->probability;
    return p;
}

double PeakAgeDistribution::prob_above(double threshold) const noexcept {
    double p = 0.0;
    for (auto it = atoms_.rbegin(); it != atoms_.rend() && it->value > threshold; ++it) p += it->probability;
    return p;
}

PeakAgeDistribution PeakAgeDistribution::scaled(double factor) const {
    if (!(factor > 0.0) || !std::isfinite(factor)) throw DomainError("scale factor must be positive");
    if (is_sample_form()) {
        std::vector<double> s = samples_;
        for (auto& v : s) v *= factor;
        return from_samples(std::move(s));
    }
    PeakAgeDistribution out = *this;
    for (auto& a : out.atoms_) a.value *= factor;
    return out;
}

PeakAgeDistribution PeakAgeDistribution::to_atom_form() const {
    PeakAgeDistribution out;
    out.atoms_ = atoms_;
    return out;
}

void to_json(nlohmann::json& j, const PeakAgeDistribution& dist) {
    if (dist.is_sample_form()) {
        j = nlohmann::json{{"samples", std::vector<double>(dist.samples().begin(), dist.samples().end())}};
        return;
    }
    auto atoms = nlohmann::json::array();
    for (const auto& a : dist.atoms()) atoms.push_back({a.value, a.probability});
    j = nlohmann::json{{"atoms", atoms}};
}

PeakAgeDistribution distribution_from_json(const nlohmann::json& j) {
    if (!j.is_object() || j.size() != 1) {
        throw DomainError(R"(distribution JSON must be {"atoms":[...]} or {"samples":[...]})");
    }
    if (j.contains("samples")) return PeakAgeDistribution::from_samples(j.at("samples").get<std::vector<double>>());
    if (!j.contains("atoms")) throw DomainError("distribution JSON: unknown key " + j.begin().key());
    std::vector<PeakAgeDistribution::Atom> atoms;
    for (const auto& pair : j.at("atoms")) {
        if (!pair.is_array() || pair.size() != 2) throw DomainError("atom must be [value, probability]");
        atoms.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    return PeakAgeDistribution::from_atoms(std::move(atoms));
}

double log_mgf(const PeakAgeDistribution& dist, double theta) {
    if (!std::isfinite(theta)) throw DomainError("mgf: theta must be finite");
    double peak = -std::numeric_limits<double>::infinity();
    for (const auto& a : dist.atoms()) peak = std::max(peak, theta * a.value);
    double sum = 0.0;
    for (const auto& a : dist.atoms()) sum += a.probability * std::exp(theta * a.value - peak);
    return peak + std::log(sum);
}

double mgf(const PeakAgeDistribution& dist, double theta) {
    const double l = log_mgf(dist, theta);
    if (l > std::log(std::numeric_limits<double>::max())) {
        throw OverflowError("mgf: exponent overflow (log M = " + std::to_string(l) + ")");
    }
    return std::exp(l);
}

double value_at_risk(const PeakAgeDistribution& dist, RiskLevel rho) {
    const auto atoms = dist.atoms();
    std::size_t j = atoms.size() - 1;
    double tail = 0.0;  // Pr(A > atoms[j].value)
    while (j > 0 && tail + atoms[j].probability <= rho.value() + kTailTol) {
        tail += atoms[j].probability;
        --j;
    }
    return atoms[j].value;
}

double conditional_value_at_risk(const PeakAgeDistribution& dist, RiskLevel rho) {
    if (rho.value() == 1.0) return dist.mean();
    const auto atoms = dist.atoms();
    // Objective t + E[(A - t)+]/rho is convex piecewise linear with kinks at the
    // atoms, so its minimum sits on one of them (the VaR point among them).
    double best = std::numeric_limits<double>::infinity();
    double mass_above = 0.0;
    double moment_above = 0.0;
    for (std::size_t k = atoms.size(); k-- > 0;) {
        const double t = atoms[k].value;
        const double excess = std::max(0.0, moment_above - t * mass_above);
        best = std::min(best, t + excess / rho.value());
        mass_above += atoms[k].probability;
        moment_above += atoms[k].probability * atoms[k].value;
    }
    return best;
}

RiskResult entropic_value_at_risk(const PeakAgeDistribution& dist, RiskLevel rho, const EvarOptions& options) {
    options.theta_bracket.validate();
    if (!(options.theta_bracket.lo > 0.0)) throw DomainError("evar: theta bracket must be positive");

    RiskResult result;
    result.rho = rho.value();
    if (rho.value() == 1.0) {
        result.theta_star = options.theta_bracket.lo;
        result.delta = dist.mean();
        result.limit = ThetaLimit::zero;
        return result;
    }

    const double log_inv_rho = rho.log_inverse();
    const auto objective = [&](double log_theta) {
        const double theta = std::exp(log_theta);
        return (log_mgf(dist, theta) + log_inv_rho) / theta;
    };
    const numerics::Bracket log_bracket{std::log(options.theta_bracket.lo), std::log(options.theta_bracket.hi)};
    const auto best = numerics::minimize_unimodal(objective, log_bracket, options.tol);

    result.theta_star = std::exp(best.x);
    result.delta = best.fx;
    result.iterations = best.iterations;
    result.residual = best.final_width;
    result.boundary = best.boundary;
    // The objective tends to the essential supremum as theta grows; a minimum
    // pushed against the upper end is the theta -> infinity limit.
    if (dist.ess_sup() <= result.delta) {
        result.delta = dist.ess_sup();
        result.limit = ThetaLimit::infinity;
        result.theta_star = options.theta_bracket.hi;
    }
    return result;
}

}  // namespace statage
