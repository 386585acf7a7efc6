#pragma once
// Online model state: time-decayed per-class pattern statistics, MAP frequency
// estimates, Bayes confidence, the frequency/confidence selection procedure
// with reluctant pruning, and the per-period update.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "oric/chain_builder.hpp"
#include "oric/pattern.hpp"

namespace oric {

// Decayed per-class occurrence statistics of one pattern.
struct PatternStats {
    double k_pos = 0.0;
    double i_pos = 0.0;
    double k_neg = 0.0;
    double i_neg = 0.0;
    std::uint32_t first_seen = 0;
    std::uint32_t last_updated = 0;

    void decay(double gamma) {
        k_pos *= gamma;
        i_pos *= gamma;
        k_neg *= gamma;
        i_neg *= gamma;
    }
    double mass() const { return k_pos + i_pos + k_neg + i_neg; }
};

struct ClassPriors {
    double pos = 0.0; // decayed count of positive rows
    double neg = 0.0;

    // Decayed proportion of positive rows; empty before any data.
    std::optional<double> positive_rate() const {
        const double total = pos + neg;
        if (total <= 0.0) return std::nullopt;
        return pos / total;
    }
};

// MAP estimate (K+a-1)/(K+a+I+b-2) under a Beta(a, b) prior; a = b = 1 is the
// MLE K/(K+I). Empty when the denominator is zero (no evidence, uniform
// prior): callers treat such a pattern as never observed.
std::optional<double> map_frequency(double k, double i, double a = 1.0,
                                    double b = 1.0);

// Bayes confidence q = fp*pi / (fp*pi + fn*(1-pi)) with pi the positive-class
// prior. Empty when the pattern is absent from both classes.
std::optional<double> confidence(double freq_pos, double freq_neg,
                                 const ClassPriors& priors);

struct OricConfig {
    ChainConfig chains;
    std::uint32_t top_frequent = 100; // d_freq
    std::uint32_t top_confident = 50; // d_conf
    double decay = 1.0;               // gamma

    // Throws on hard violations; returns human-readable warnings (e.g.
    // d_conf > d_freq, which is legal but usually unintended).
    std::vector<std::string> validate() const;
};

struct RankedInteraction {
    Pattern pattern;
    double freq_pos = 0.0;
    double freq_neg = 0.0;
    double confidence = 0.0;
    std::optional<Pattern> pruned_by;
};

// Outcome of the selection procedure. `selected` is the post-pruning result
// (confidence descending, at most d_conf entries); `pruned` holds the
// candidates removed by reluctant pruning, each naming the sub-pattern that
// beat it. selected ∪ pruned is the pre-pruning top-d_conf set.
struct Selection {
    std::vector<RankedInteraction> selected;
    std::vector<RankedInteraction> pruned;

    std::vector<Pattern> selected_patterns() const;
};

struct UpdateReport {
    std::uint32_t period = 0;
    bool has_positive = false;
    bool has_negative = false;
    std::size_t rows_positive = 0;
    std::size_t rows_negative = 0;
    std::size_t tails_positive = 0;
    std::size_t tails_negative = 0;
    std::size_t new_patterns = 0;
    std::size_t evicted = 0;
    std::size_t registry_size = 0;
};

class OricModel {
public:
    OricModel() = default;
    OricModel(OricConfig config, std::vector<std::string> schema);

    // Restores persisted state (used by dataio).
    OricModel(OricConfig config, std::vector<std::string> schema,
              std::uint32_t period, ClassPriors priors,
              std::unordered_map<Pattern, PatternStats> registry);

    // One Algorithm-style period update: decay everything by gamma, split the
    // batch by label, run chains per class, add the per-class (K, I) to the
    // decayed statistics and register new tail patterns (plus their singleton
    // constituents). A class with no rows is flagged and only decayed.
    // Deterministic given (config.chains.rng_seed, period).
    UpdateReport update(const LabeledBatch& batch, unsigned threads = 1);

    // Selection: rank the registry by positive-class frequency, keep the
    // d_freq most frequent, compute negative-class frequency and confidence
    // for those, keep the d_conf most confident, then apply reluctant pruning
    // against tracked proper sub-patterns. Ties break on (confidence desc,
    // freq_pos desc, order asc, lexicographic asc).
    Selection select() const;
    Selection select(std::uint32_t top_confident_override) const;

    // Estimated frequencies/confidence of one tracked pattern (empty if the
    // pattern is not in the registry or its confidence is indeterminate).
    std::optional<RankedInteraction> estimate(const Pattern& pattern) const;

    const OricConfig& config() const noexcept { return config_; }
    const std::vector<std::string>& schema() const noexcept { return schema_; }
    std::uint32_t period() const noexcept { return period_; }
    const ClassPriors& priors() const noexcept { return priors_; }
    const std::unordered_map<Pattern, PatternStats>& registry() const noexcept {
        return registry_;
    }

private:
    Selection select_impl(std::uint32_t d_conf) const;
    std::optional<double> pattern_confidence(const PatternStats& stats) const;
    // Most confident tracked proper sub-pattern (ties: lexicographically
    // smallest); empty when none has a computable confidence.
    std::optional<std::pair<Pattern, double>>
    best_subpattern(const Pattern& pattern) const;

    OricConfig config_;
    std::vector<std::string> schema_;
    std::uint32_t period_ = 0;
    ClassPriors priors_;
    std::unordered_map<Pattern, PatternStats> registry_;
};

} // namespace oric
