#pragma once
// Independent ground-truth engines for testing: exact full-scan frequencies
// and confidence, the adjusted frequency the decayed estimator converges to,
// and a Monte Carlo harness for the estimator itself.
//
// Nothing here shares counting code with chain_builder or estimator — this
// module exists to catch their bugs.

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "oric/pattern.hpp"
#include "oric/rng.hpp"

namespace oric {
namespace oracle {

struct ExactStats {
    double freq_pos = 0.0;
    double freq_neg = 0.0;
    std::optional<double> confidence; // empty if absent from both classes
    std::uint64_t support_pos = 0;
    std::uint64_t support_neg = 0;
};

// Exact containment counting by full scan; confidence uses exact batch priors.
std::unordered_map<Pattern, ExactStats>
exact_scan(const LabeledBatch& batch, std::span<const Pattern> patterns);

// Weighted historical average p_tilde with weights
// alpha_t = (1 - p_t^L) / (1 - p_t) * gamma^(T-t); the p_t -> 1 weight limit
// is L (continuity).
double adjusted_frequency(std::span<const double> history, double gamma,
                          std::uint32_t length);

struct EstimatorSample {
    double mean = 0.0;
    double stddev = 0.0;
};

// Simulates the per-chain occurrence counts period by period (geometric
// survival censored at the chain length), accumulates the decayed statistics
// and returns the frequency estimate of each independent replicate.
std::vector<double> simulate_estimator_samples(std::span<const double> history,
                                               double gamma, std::uint32_t length,
                                               std::uint64_t chains,
                                               std::uint32_t replicates, Rng& rng);

// Mean/std over the replicate estimates above.
EstimatorSample simulate_estimator(std::span<const double> history, double gamma,
                                   std::uint32_t length, std::uint64_t chains,
                                   std::uint32_t replicates, Rng& rng);

// Fraction of `trials` detection experiments (M length-L chains each) in which
// a frequency-p pattern reaches at least one tail. Survival is simulated row
// by row.
double mc_detection_probability(double p, std::uint32_t length,
                                std::uint64_t chains, std::uint32_t trials,
                                Rng& rng);

} // namespace oracle
} // namespace oric
