#include "oric/chain_builder.hpp"

#include <algorithm>
#include <thread>
#include <unordered_set>

namespace oric {

void ChainConfig::validate() const {
    if (num_chains < 1)
        throw OricError(Errc::invalid_config, "num_chains must be >= 1");
    if (max_length < 1)
        throw OricError(Errc::invalid_config, "max_length must be >= 1");
    if (max_tail_size < 1)
        throw OricError(Errc::invalid_config, "max_tail_size must be >= 1");
}

Chain generate_chain(const ClassView& view, const ChainConfig& cfg, Rng& rng) {
    return generate_chain<Rng>(view, cfg, rng);
}

std::vector<Chain> generate_chains(const ClassView& view, const ChainConfig& cfg,
                                   unsigned threads) {
    if (cfg.num_chains > 0 && view.empty())
        throw OricError(Errc::empty_class, "cannot sample chains from an empty class");

    std::vector<Chain> chains(cfg.num_chains);
    auto fill = [&](std::uint32_t begin, std::uint32_t end) {
        for (std::uint32_t m = begin; m < end; ++m) {
            Rng rng(cfg.rng_seed, m);
            chains[m] = generate_chain(view, cfg, rng);
        }
    };

    if (threads <= 1 || cfg.num_chains < 2 * threads) {
        fill(0, cfg.num_chains);
        return chains;
    }

    std::vector<std::thread> pool;
    const std::uint32_t step = (cfg.num_chains + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::uint32_t begin = t * step;
        const std::uint32_t end = std::min(cfg.num_chains, begin + step);
        if (begin >= end) break;
        pool.emplace_back(fill, begin, end);
    }
    for (auto& th : pool) th.join();
    return chains;
}

std::vector<Pattern> collect_tail_patterns(std::span<const Chain> chains) {
    std::vector<Pattern> tails;
    for (const auto& chain : chains) {
        auto node = chain.tail();
        if (node.empty()) continue; // annihilated tails contribute no pattern
        tails.push_back(Pattern::from_items(std::move(node)));
    }
    std::sort(tails.begin(), tails.end());
    tails.erase(std::unique(tails.begin(), tails.end()), tails.end());
    return tails;
}

std::vector<Pattern> singleton_constituents(std::span<const Pattern> patterns) {
    std::vector<Pattern> singles;
    for (const auto& p : patterns)
        for (const auto& item : p.items())
            singles.push_back(Pattern::from_items({item}));
    std::sort(singles.begin(), singles.end());
    singles.erase(std::unique(singles.begin(), singles.end()), singles.end());
    return singles;
}

std::unordered_map<Pattern, PatternCounts>
count_patterns(std::span<const Chain> chains, std::span<const Pattern> scope) {
    std::unordered_map<Pattern, PatternCounts> counts;
    counts.reserve(scope.size());
    for (const auto& s : scope) {
        PatternCounts pc;
        for (const auto& chain : chains) {
            const auto occ = chain.occurrence(s);
            pc.occurrences += occ.count;
            if (!occ.contained_in_tail) ++pc.misses;
        }
        counts.emplace(s, pc);
    }
    return counts;
}

ChainBatchResult run_chains(const ClassView& view, const ChainConfig& cfg,
                            std::span<const Pattern> tracked, unsigned threads) {
    ChainBatchResult result;
    if (cfg.num_chains == 0) return result; // decay-only updates pass M=0

    const auto chains = generate_chains(view, cfg, threads);
    result.chains_generated = chains.size();
    result.effective_lengths.reserve(chains.size());
    for (const auto& chain : chains) result.effective_lengths.push_back(chain.length);

    result.tail_patterns = collect_tail_patterns(chains);

    std::vector<Pattern> scope = result.tail_patterns;
    for (auto& s : singleton_constituents(result.tail_patterns)) scope.push_back(std::move(s));
    scope.insert(scope.end(), tracked.begin(), tracked.end());
    std::sort(scope.begin(), scope.end());
    scope.erase(std::unique(scope.begin(), scope.end()), scope.end());

    result.per_pattern_counts = count_patterns(chains, scope);
    return result;
}

} // namespace oric
