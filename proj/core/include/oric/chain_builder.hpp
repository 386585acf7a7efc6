#pragma once
// Chain generation and per-pattern (K, I) statistics for one class of one
// batch. Every chain draws from its own substream (seed, chain index), and
// merging counts is a commutative integer sum, so results are identical for
// any thread count.

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "oric/pattern.hpp"
#include "oric/rng.hpp"

namespace oric {

struct ChainConfig {
    std::uint32_t num_chains = 10000; // M
    std::uint32_t max_length = 20;    // L
    std::uint32_t max_tail_size = 4;  // stop once the tail has at most this many items
    std::uint64_t rng_seed = 42;

    void validate() const;
};

struct PatternCounts {
    std::int64_t occurrences = 0; // K: summed per-chain occurrence counts
    std::int64_t misses = 0;      // I: chains whose tail lacks the pattern
};

struct ChainBatchResult {
    std::vector<Pattern> tail_patterns; // distinct nonempty tails, sorted
    std::unordered_map<Pattern, PatternCounts> per_pattern_counts;
    std::uint64_t chains_generated = 0;
    std::vector<std::uint32_t> effective_lengths;
};

// Builds one chain: a uniformly sampled head row (all counts 1), then repeated
// uniform samples that extend the run of every current-tail item they match,
// until the tail has <= max_tail_size items or max_length is reached.
//
// Draw contract: consumes exactly one rng.uniform_index(view.size()) per
// sampled row, head first — an external oracle can replay the row sequence.
template <class R>
Chain generate_chain(const ClassView& view, const ChainConfig& cfg, R& rng) {
    if (view.empty())
        throw OricError(Errc::empty_class, "cannot sample a chain from an empty class");
    const auto width = static_cast<std::uint32_t>(view.feature_count());

    Chain chain;
    chain.items.reserve(width);
    chain.counts.assign(width, 1);
    const std::size_t head = rng.uniform_index(view.size());
    for (FeatureIndex f = 0; f < width; ++f)
        chain.items.push_back(Item{f, view.value(f, head)});
    chain.length = 1;

    std::uint32_t tail_size = width;
    while (chain.length < cfg.max_length && tail_size > cfg.max_tail_size) {
        const std::size_t row = rng.uniform_index(view.size());
        const std::uint32_t current = chain.length;
        for (FeatureIndex f = 0; f < width; ++f) {
            if (chain.counts[f] != current) continue;
            if (view.value(f, row) == chain.items[f].category)
                chain.counts[f] = current + 1;
            else
                --tail_size;
        }
        ++chain.length;
    }
    return chain;
}

Chain generate_chain(const ClassView& view, const ChainConfig& cfg, Rng& rng);

// cfg.num_chains chains, chain m from substream (cfg.rng_seed, m).
std::vector<Chain> generate_chains(const ClassView& view, const ChainConfig& cfg,
                                   unsigned threads = 1);

// Distinct nonempty tail itemsets, sorted.
std::vector<Pattern> collect_tail_patterns(std::span<const Chain> chains);

// Single-item constituents of every pattern in `patterns`, deduplicated.
std::vector<Pattern> singleton_constituents(std::span<const Pattern> patterns);

// (K, I) for every pattern in `scope` over all chains: K sums the per-chain
// occurrence counts, I counts chains whose tail misses the pattern.
std::unordered_map<Pattern, PatternCounts>
count_patterns(std::span<const Chain> chains, std::span<const Pattern> scope);

// Full per-class step: generate chains, then count tail patterns, their
// singleton constituents and every tracked pattern.
ChainBatchResult run_chains(const ClassView& view, const ChainConfig& cfg,
                            std::span<const Pattern> tracked, unsigned threads = 1);

} // namespace oric
