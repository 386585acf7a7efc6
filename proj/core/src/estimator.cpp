#include "oric/estimator.hpp"

#include <algorithm>
#include <cmath>

namespace oric {

namespace {

// Registry entries whose decayed mass falls below this are dropped; keeps the
// per-pattern storage bound honest under drift.
constexpr double kEvictionMass = 1e-6;

struct Candidate {
    Pattern pattern;
    double freq_pos = 0.0;
    double freq_neg = 0.0;
    double conf = 0.0;
};

bool frequency_order(const Candidate& a, const Candidate& b) {
    if (a.freq_pos != b.freq_pos) return a.freq_pos > b.freq_pos;
    if (a.pattern.order() != b.pattern.order())
        return a.pattern.order() < b.pattern.order();
    return a.pattern < b.pattern;
}

bool confidence_order(const Candidate& a, const Candidate& b) {
    if (a.conf != b.conf) return a.conf > b.conf;
    return frequency_order(a, b);
}

} // namespace

std::optional<double> map_frequency(double k, double i, double a, double b) {
    if (k < 0.0 || i < 0.0)
        throw OricError(Errc::invalid_config, "negative occurrence statistics");
    if (a < 1.0 || b < 1.0)
        throw OricError(Errc::invalid_config, "prior shapes must be >= 1");
    const double denom = k + a + i + b - 2.0;
    if (denom <= 0.0) return std::nullopt;
    return (k + a - 1.0) / denom;
}

std::optional<double> confidence(double freq_pos, double freq_neg,
                                 const ClassPriors& priors) {
    const auto pi = priors.positive_rate();
    if (!pi) return std::nullopt;
    const double num = freq_pos * *pi;
    const double denom = num + freq_neg * (1.0 - *pi);
    if (denom <= 0.0) return std::nullopt;
    return num / denom;
}

std::vector<std::string> OricConfig::validate() const {
    chains.validate();
    if (!(decay >= 0.0 && decay <= 1.0))
        throw OricError(Errc::invalid_config, "decay must be in [0, 1]");
    if (top_frequent < 1)
        throw OricError(Errc::invalid_config, "top_frequent must be >= 1");
    if (top_confident < 1)
        throw OricError(Errc::invalid_config, "top_confident must be >= 1");
    std::vector<std::string> warnings;
    if (top_confident > top_frequent)
        warnings.push_back("top_confident (" + std::to_string(top_confident) +
                           ") exceeds top_frequent (" + std::to_string(top_frequent) +
                           "); at most top_frequent candidates can be selected");
    return warnings;
}

std::vector<Pattern> Selection::selected_patterns() const {
    std::vector<Pattern> out;
    out.reserve(selected.size());
    for (const auto& ri : selected) out.push_back(ri.pattern);
    return out;
}

OricModel::OricModel(OricConfig config, std::vector<std::string> schema)
    : config_(std::move(config)), schema_(std::move(schema)) {}

OricModel::OricModel(OricConfig config, std::vector<std::string> schema,
                     std::uint32_t period, ClassPriors priors,
                     std::unordered_map<Pattern, PatternStats> registry)
    : config_(std::move(config)), schema_(std::move(schema)), period_(period),
      priors_(priors), registry_(std::move(registry)) {}

UpdateReport OricModel::update(const LabeledBatch& batch, unsigned threads) {
    batch.validate();
    if (schema_.empty() && period_ == 0)
        schema_ = batch.schema;
    else if (batch.schema != schema_)
        throw OricError(Errc::schema_mismatch,
                        "batch schema does not match the model schema");

    const std::uint32_t now = period_ + 1;
    const double gamma = config_.decay;

    UpdateReport report;
    report.period = now;

    for (auto& [pattern, stats] : registry_) stats.decay(gamma);
    priors_.pos *= gamma;
    priors_.neg *= gamma;

    const auto split = split_by_label(batch);
    report.has_positive = !split.positive.empty();
    report.has_negative = !split.negative.empty();
    report.rows_positive = split.positive.size();
    report.rows_negative = split.negative.size();

    if (report.has_positive || report.has_negative) {
        std::vector<Chain> chains_pos;
        std::vector<Chain> chains_neg;
        ChainConfig chain_cfg = config_.chains;
        if (report.has_positive && chain_cfg.num_chains > 0) {
            chain_cfg.rng_seed = chain_run_seed(config_.chains.rng_seed, now, 1);
            chains_pos = generate_chains(split.positive, chain_cfg, threads);
        }
        if (report.has_negative && chain_cfg.num_chains > 0) {
            chain_cfg.rng_seed = chain_run_seed(config_.chains.rng_seed, now, 0);
            chains_neg = generate_chains(split.negative, chain_cfg, threads);
        }

        const auto tails_pos = collect_tail_patterns(chains_pos);
        const auto tails_neg = collect_tail_patterns(chains_neg);
        report.tails_positive = tails_pos.size();
        report.tails_negative = tails_neg.size();

        // Scope: every tracked pattern plus both classes' new tails and their
        // singleton constituents. Counting the union over both chain sets
        // gives each new pattern statistics in both classes at once.
        std::vector<Pattern> scope;
        scope.reserve(registry_.size() + 2 * (tails_pos.size() + tails_neg.size()));
        for (const auto& [pattern, stats] : registry_) scope.push_back(pattern);
        auto append = [&scope](const std::vector<Pattern>& ps) {
            scope.insert(scope.end(), ps.begin(), ps.end());
        };
        append(tails_pos);
        append(singleton_constituents(tails_pos));
        append(tails_neg);
        append(singleton_constituents(tails_neg));
        std::sort(scope.begin(), scope.end());
        scope.erase(std::unique(scope.begin(), scope.end()), scope.end());

        const auto counts_pos = count_patterns(chains_pos, scope);
        const auto counts_neg = count_patterns(chains_neg, scope);

        for (const auto& pattern : scope) {
            auto [it, inserted] = registry_.try_emplace(pattern);
            auto& stats = it->second;
            if (inserted) {
                stats.first_seen = now;
                ++report.new_patterns;
            }
            if (report.has_positive) {
                const auto& pc = counts_pos.at(pattern);
                stats.k_pos += static_cast<double>(pc.occurrences);
                stats.i_pos += static_cast<double>(pc.misses);
            }
            if (report.has_negative) {
                const auto& pc = counts_neg.at(pattern);
                stats.k_neg += static_cast<double>(pc.occurrences);
                stats.i_neg += static_cast<double>(pc.misses);
            }
            stats.last_updated = now;
        }
    }

    priors_.pos += static_cast<double>(split.positive.size());
    priors_.neg += static_cast<double>(split.negative.size());
    period_ = now;

    report.evicted = std::erase_if(registry_, [](const auto& entry) {
        return entry.second.mass() < kEvictionMass;
    });
    report.registry_size = registry_.size();
    return report;
}

std::optional<double>
OricModel::pattern_confidence(const PatternStats& stats) const {
    const double fp = map_frequency(stats.k_pos, stats.i_pos).value_or(0.0);
    const double fn = map_frequency(stats.k_neg, stats.i_neg).value_or(0.0);
    return confidence(fp, fn, priors_);
}

std::optional<std::pair<Pattern, double>>
OricModel::best_subpattern(const Pattern& pattern) const {
    const std::size_t k = pattern.order();
    if (k < 2) return std::nullopt;

    std::optional<std::pair<Pattern, double>> best;
    auto consider = [&](const Pattern& sub, const PatternStats& stats) {
        const auto conf = pattern_confidence(stats);
        if (!conf) return;
        if (!best || *conf > best->second ||
            (*conf == best->second && sub < best->first))
            best = std::make_pair(sub, *conf);
    };

    // Subset enumeration is 2^k; scan the registry instead when that is the
    // cheaper side (tails can exceed max_tail_size when max_length stops the
    // chain first).
    const bool enumerate =
        k <= 20 && (std::size_t{1} << k) <= registry_.size() * 4 + 64;
    if (enumerate) {
        const auto& items = pattern.items();
        const std::uint32_t full = (1u << k) - 1;
        for (std::uint32_t mask = 1; mask < full; ++mask) {
            std::vector<Item> subset;
            for (std::size_t j = 0; j < k; ++j)
                if (mask & (1u << j)) subset.push_back(items[j]);
            const auto it = registry_.find(Pattern::from_items(std::move(subset)));
            if (it != registry_.end()) consider(it->first, it->second);
        }
    } else {
        for (const auto& [sub, stats] : registry_)
            if (pattern.is_proper_superset_of(sub)) consider(sub, stats);
    }
    return best;
}

Selection OricModel::select() const { return select_impl(config_.top_confident); }

Selection OricModel::select(std::uint32_t top_confident_override) const {
    return select_impl(top_confident_override);
}

Selection OricModel::select_impl(std::uint32_t d_conf) const {
    if (period_ == 0)
        throw OricError(Errc::empty_model, "select requires at least one update");

    std::vector<Candidate> candidates;
    candidates.reserve(registry_.size());
    for (const auto& [pattern, stats] : registry_) {
        Candidate c;
        c.pattern = pattern;
        c.freq_pos = map_frequency(stats.k_pos, stats.i_pos).value_or(0.0);
        candidates.push_back(std::move(c));
    }

    std::sort(candidates.begin(), candidates.end(), frequency_order);
    if (candidates.size() > config_.top_frequent)
        candidates.resize(config_.top_frequent);

    std::erase_if(candidates, [this](Candidate& c) {
        const auto& stats = registry_.at(c.pattern);
        c.freq_neg = map_frequency(stats.k_neg, stats.i_neg).value_or(0.0);
        const auto q = confidence(c.freq_pos, c.freq_neg, priors_);
        if (!q) return true; // absent from both classes: unrankable
        c.conf = *q;
        return false;
    });

    std::sort(candidates.begin(), candidates.end(), confidence_order);
    if (candidates.size() > d_conf) candidates.resize(d_conf);

    Selection out;
    for (const auto& c : candidates) {
        RankedInteraction ri{c.pattern, c.freq_pos, c.freq_neg, c.conf, std::nullopt};
        const auto best = best_subpattern(c.pattern);
        if (best && c.conf <= best->second) {
            ri.pruned_by = best->first;
            out.pruned.push_back(std::move(ri));
        } else {
            out.selected.push_back(std::move(ri));
        }
    }
    return out;
}

std::optional<RankedInteraction> OricModel::estimate(const Pattern& pattern) const {
    const auto it = registry_.find(pattern);
    if (it == registry_.end()) return std::nullopt;
    const auto& stats = it->second;
    RankedInteraction ri;
    ri.pattern = pattern;
    ri.freq_pos = map_frequency(stats.k_pos, stats.i_pos).value_or(0.0);
    ri.freq_neg = map_frequency(stats.k_neg, stats.i_neg).value_or(0.0);
    const auto q = confidence(ri.freq_pos, ri.freq_neg, priors_);
    if (!q) return std::nullopt;
    ri.confidence = *q;
    return ri;
}

} // namespace oric
