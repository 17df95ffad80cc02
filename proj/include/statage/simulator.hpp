#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "statage/fading.hpp"
#include "statage/risk_metrics.hpp"

namespace statage::sim {

/// Stateless generator: the i-th draw of a stream is a pure function of (seed, i),
/// so shards can start anywhere without replaying the stream.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) noexcept;

    std::uint64_t bits(std::uint64_t counter) const noexcept;
    /// Uniform on (0, 1), never exactly 0 or 1.
    double uniform(std::uint64_t counter) const noexcept;

private:
    std::uint64_t key_;
};

struct SimRun {
    std::uint64_t seed = 0;
    std::size_t n_events = 0;
    std::vector<double> samples;
};

/// One gain per coherence block drawn by grid weight; each block emits
/// round-half-even(T lambda) peaks of value 1/lambda + tau.
SimRun simulate_fading(std::span<const double> rates, const fading::FadingConfig& config, std::uint64_t seed,
                       std::size_t n_blocks, int threads = 1);

/// Peaks tau + n T with n geometric on {1, 2, ...}, success probability 1 - e^{-c tau}.
SimRun simulate_tdma(double tau, double c_per_s, double frame_s, std::uint64_t seed, std::size_t n_updates,
                     int threads = 1);

struct ViolationReport {
    double fraction = 0.0;   // #{A >= delta} / N
    double allowance = 0.0;  // rho + 3 sqrt(rho (1 - rho) / N)
    std::size_t n = 0;
    bool pass = false;
};

ViolationReport check_violation(const SimRun& run, double delta, RiskLevel rho);

struct HistogramBin {
    double left = 0.0;
    double right = 0.0;
    double mass = 0.0;
};

/// Equal-width bins over [min, max] of the samples; masses sum to 1.
std::vector<HistogramBin> histogram(std::span<const double> samples, int bins);

/// Same binning applied to the atoms of a distribution.
std::vector<HistogramBin> histogram(const PeakAgeDistribution& dist, int bins);

}  // namespace statage::sim
