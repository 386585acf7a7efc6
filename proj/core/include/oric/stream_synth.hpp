#pragma once
// Reproducible non-stationary labeled categorical streams with planted
// interactions of scheduled per-period frequencies. Ground truth is exact:
// planted patterns are feature-disjoint, and background fills never collide
// with a full planted combination, so the per-class empirical frequency of
// every planted pattern is Binomial(rows, schedule) / rows.

#include <cstdint>
#include <string>
#include <vector>

#include "oric/pattern.hpp"

namespace oric {
namespace synth {

struct PlantedPattern {
    Pattern pattern;
    std::vector<double> freq_pos; // per-period target frequency in positives
    std::vector<double> freq_neg;
};

struct StreamSpec {
    std::uint32_t num_features = 1;
    std::uint32_t categories_per_feature = 2;
    std::uint32_t rows_per_period = 1;
    std::uint32_t horizon = 1;
    double positive_rate = 0.5;
    std::vector<PlantedPattern> planted;
    std::uint64_t rng_seed = 42;

    std::vector<std::string> schema() const; // f0, f1, ...
    void validate() const;
};

// Period t (1-based). Deterministic given (spec.rng_seed, t); periods can be
// generated in any order or in parallel.
LabeledBatch generate_period(const StreamSpec& spec, std::uint32_t t);

} // namespace synth
} // namespace oric
