#include "statage/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "statage/error.hpp"

namespace statage::sim {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Runs body(begin, end, out) over contiguous shards and concatenates the
// outputs in shard order, so the result does not depend on the thread count.
template <typename Body>
std::vector<double> sharded(std::size_t n, int threads, Body body) {
    const std::size_t shards = std::max<std::size_t>(1, std::min<std::size_t>(threads > 0 ? threads : 1, n));
    std::vector<std::vector<double>> parts(shards);
    const auto range = [&](std::size_t s) {
        return std::pair<std::size_t, std::size_t>{n * s / shards, n * (s + 1) / shards};
    };
    if (shards == 1) {
        body(0, n, parts[0]);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t s = 0; s < shards; ++s) {
            pool.emplace_back([&, s] {
                const auto [b, e] = range(s);
                body(b, e, parts[s]);
            });
        }
        for (auto& t : pool) t.join();
    }
    std::size_t total = 0;
    for (const auto& p : parts) total += p.size();
    std::vector<double> out;
    out.reserve(total);
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

std::vector<HistogramBin> bin_atoms(std::span<const PeakAgeDistribution::Atom> atoms, int bins) {
    if (bins < 1) throw DomainError("histogram: need at least one bin");
    const double lo = atoms.front().value;
    const double hi = atoms.back().value;
    if (hi == lo) return {HistogramBin{lo, hi, 1.0}};
    const double width = (hi - lo) / bins;
    std::vector<HistogramBin> out(bins);
    for (int b = 0; b < bins; ++b) {
        out[b].left = lo + width * b;
        out[b].right = b + 1 == bins ? hi : lo + width * (b + 1);
    }
    for (const auto& a : atoms) {
        const int b = std::min(bins - 1, static_cast<int>((a.value - lo) / width));
        out[b].mass += a.probability;
    }
    return out;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed) noexcept : key_(mix64(seed + kGamma)) {}

std::uint64_t CounterRng::bits(std::uint64_t counter) const noexcept { return mix64(key_ + (counter + 1) * kGamma); }

double CounterRng::uniform(std::uint64_t counter) const noexcept {
    return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
}

SimRun simulate_fading(std::span<const double> rates, const fading::FadingConfig& config, std::uint64_t seed,
                       std::size_t n_blocks, int threads) {
    const auto weights = config.grid().weights();
    if (rates.size() != weights.size()) throw DomainError("simulate_fading: rate vector does not match the grid");
    std::vector<double> cdf(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) cdf[i] = acc += weights[i];
    std::vector<double> ages(rates.size());
    std::vector<long> counts(rates.size());
    for (std::size_t i = 0; i < rates.size(); ++i) {
        ages[i] = 1.0 / rates[i] + config.tau();
        counts[i] = static_cast<long>(std::nearbyint(config.coherence() * rates[i]));
    }
    const CounterRng rng(seed);
    SimRun run;
    run.seed = seed;
    run.samples = sharded(n_blocks, threads, [&](std::size_t begin, std::size_t end, std::vector<double>& out) {
        for (std::size_t b = begin; b < end; ++b) {
            const double u = rng.uniform(b) * acc;
            const std::size_t i = std::min<std::size_t>(
                static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin()), cdf.size() - 1);
            out.insert(out.end(), static_cast<std::size_t>(counts[i]), ages[i]);
        }
    });
    run.n_events = run.samples.size();
    return run;
}

SimRun simulate_tdma(double tau, double c_per_s, double frame_s, std::uint64_t seed, std::size_t n_updates,
                     int threads) {
    if (!(tau > 0.0) || !(c_per_s > 0.0) || !(frame_s > 0.0)) {
        throw DomainError("simulate_tdma: tau, c and frame must be positive");
    }
    const double log_eps = -c_per_s * tau;
    const CounterRng rng(seed);
    SimRun run;
    run.seed = seed;
    run.samples = sharded(n_updates, threads, [&](std::size_t begin, std::size_t end, std::vector<double>& out) {
        out.reserve(end - begin);
        for (std::size_t i = begin; i < end; ++i) {
            const double n = 1.0 + std::floor(std::log(rng.uniform(i)) / log_eps);
            out.push_back(tau + n * frame_s);
        }
    });
    run.n_events = run.samples.size();
    return run;
}

ViolationReport check_violation(const SimRun& run, double delta, RiskLevel rho) {
    if (run.samples.empty()) throw DomainError("check_violation: empty run");
    ViolationReport r;
    r.n = run.samples.size();
    const auto hits = std::count_if(run.samples.begin(), run.samples.end(), [&](double a) { return a >= delta; });
    r.fraction = static_cast<double>(hits) / static_cast<double>(r.n);
    const double p = rho.value();
    r.allowance = p + 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(r.n));
    r.pass = r.fraction <= r.allowance;
    return r;
}

std::vector<HistogramBin> histogram(std::span<const double> samples, int bins) {
    if (samples.empty()) throw DomainError("histogram: no samples");
    return histogram(PeakAgeDistribution::from_samples({samples.begin(), samples.end()}).to_atom_form(), bins);
}

std::vector<HistogramBin> histogram(const PeakAgeDistribution& dist, int bins) { return bin_atoms(dist.atoms(), bins); }

}  // namespace statage::sim
