#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oric/chain_builder.hpp"
#include "test_support.hpp"

using namespace oric;

namespace {

// Independent oracle: materializes every node as an explicit itemset built by
// set intersection over the same replayed row draws.
template <class R>
std::vector<std::vector<Item>> explicit_nodes(const ClassView& view,
                                              const ChainConfig& cfg, R& rng) {
    std::vector<std::vector<Item>> nodes;
    const std::size_t head = rng.uniform_index(view.size());
    std::vector<Item> node;
    for (FeatureIndex f = 0; f < view.feature_count(); ++f)
        node.push_back(Item{f, view.value(f, head)});
    nodes.push_back(node);
    while (nodes.size() < cfg.max_length &&
           nodes.back().size() > cfg.max_tail_size) {
        const std::size_t row = rng.uniform_index(view.size());
        std::vector<Item> next;
        for (const auto& item : nodes.back())
            if (view.value(item.feature, row) == item.category)
                next.push_back(item);
        nodes.push_back(std::move(next));
    }
    return nodes;
}

// 1000 rows; f0 alternates so P(f0=0) is exactly one half; f1/f2 are constant
// so the tail never shrinks below two items and chains always reach max_length.
LabeledBatch half_frequency_batch() {
    LabeledBatch batch;
    batch.schema = {"f0", "f1", "f2"};
    batch.columns.assign(3, std::vector<CategoryCode>(1000));
    batch.labels.assign(1000, 1);
    for (std::size_t i = 0; i < 1000; ++i) {
        batch.columns[0][i] = i % 2;
        batch.columns[1][i] = 7;
        batch.columns[2][i] = 9;
    }
    return batch;
}

LabeledBatch random_batch(Rng& rng, std::size_t rows, std::size_t features,
                          CategoryCode cats) {
    LabeledBatch batch;
    for (std::size_t f = 0; f < features; ++f)
        batch.schema.push_back("f" + std::to_string(f));
    batch.columns.assign(features, std::vector<CategoryCode>(rows));
    batch.labels.assign(rows, 1);
    for (std::size_t f = 0; f < features; ++f)
        for (std::size_t r = 0; r < rows; ++r)
            batch.columns[f][r] = static_cast<CategoryCode>(rng.uniform_index(cats));
    return batch;
}

} // namespace

TEST_CASE("generate_chain reproduces the illustration run") {
    const auto batch = test::illustration_batch();
    const ClassView view(batch, 1);
    ChainConfig cfg;
    cfg.max_length = 3;
    cfg.max_tail_size = 1;

    test::SequenceRng rng({0, 1, 2});
    const auto chain = generate_chain(view, cfg, rng);
    CHECK(rng.exhausted());
    CHECK(chain.items == test::illustration_chain().items);
    CHECK(chain.counts == std::vector<std::uint32_t>{3, 1, 2});
    CHECK(chain.length == 3);
}

TEST_CASE("generate_chain stops immediately when the head is small enough") {
    LabeledBatch batch;
    batch.schema = {"x", "y"};
    batch.columns = {{4}, {5}};
    batch.labels = {1};
    const ClassView view(batch, 1);
    ChainConfig cfg;
    cfg.max_length = 10;
    cfg.max_tail_size = 2; // >= row width

    Rng rng(1);
    const auto chain = generate_chain(view, cfg, rng);
    CHECK(chain.length == 1);
    CHECK(chain.counts == std::vector<std::uint32_t>{1, 1});
}

TEST_CASE("generate_chain throws on an empty class") {
    const auto batch = test::illustration_batch(1);
    const ClassView negatives(batch, 0);
    ChainConfig cfg;
    Rng rng(1);
    CHECK_THROWS_WITH_AS(generate_chain(negatives, cfg, rng),
                         doctest::Contains("EmptyClass"), OricError);
    CHECK_THROWS_AS(run_chains(negatives, cfg, {}), OricError);
}

TEST_CASE("compressed chains equal the explicit intersection oracle") {
    Rng seeder(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        Rng data_rng(seeder.next_u64());
        const auto batch = random_batch(data_rng, 10, 5, 3);
        const ClassView view(batch, 1);
        ChainConfig cfg;
        cfg.max_length = 4;
        cfg.max_tail_size = 1 + static_cast<std::uint32_t>(seeder.uniform_index(3));

        const std::uint64_t chain_seed = seeder.next_u64();
        Rng rng_a(chain_seed);
        Rng rng_b(chain_seed);
        const auto chain = generate_chain(view, cfg, rng_a);
        const auto nodes = explicit_nodes(view, cfg, rng_b);

        REQUIRE(chain.length == nodes.size());
        for (std::uint32_t r = 1; r <= chain.length; ++r)
            CHECK(chain.node_at(r) == nodes[r - 1]);
    }
}

TEST_CASE("count_patterns matches the worked single-chain example") {
    const std::vector<Chain> one = {test::illustration_chain()};
    const auto tails = collect_tail_patterns(one);
    REQUIRE(tails.size() == 1);
    CHECK(tails[0] == Pattern::from_pairs({{0, 1}}));

    const auto counts = count_patterns(one, tails);
    const auto& pc = counts.at(tails[0]);
    CHECK(pc.occurrences == 3);
    CHECK(pc.misses == 0);
}

TEST_CASE("count_patterns accumulates over identical chains") {
    const std::vector<Chain> two = {test::illustration_chain(),
                                    test::illustration_chain()};
    const std::vector<Pattern> tracked = {Pattern::from_pairs({{0, 1}, {2, 1}})};
    const auto counts = count_patterns(two, tracked);
    const auto& pc = counts.at(tracked[0]);
    CHECK(pc.occurrences == 4); // two occurrences per chain
    CHECK(pc.misses == 2);      // absent from both tails
}

TEST_CASE("run_chains scope covers tails, their singletons and tracked") {
    const auto batch = test::illustration_batch();
    const ClassView view(batch, 1);
    ChainConfig cfg;
    cfg.num_chains = 50;
    cfg.max_length = 3;
    cfg.max_tail_size = 1;
    cfg.rng_seed = 5;

    const auto tracked = Pattern::from_pairs({{1, 2}});
    const auto result = run_chains(view, cfg, std::vector<Pattern>{tracked});
    CHECK(result.chains_generated == 50);
    CHECK(result.effective_lengths.size() == 50);
    CHECK(result.per_pattern_counts.count(tracked) == 1);
    for (const auto& tail : result.tail_patterns) {
        const auto& pc = result.per_pattern_counts.at(tail);
        CHECK(pc.occurrences >= 1);
        CHECK(pc.misses < static_cast<std::int64_t>(result.chains_generated));
        for (const auto& item : tail.items())
            CHECK(result.per_pattern_counts.count(
                      Pattern::from_items({item})) == 1);
    }
}

TEST_CASE("run_chains is deterministic and thread-count invariant") {
    Rng data_rng(99);
    const auto batch = random_batch(data_rng, 200, 6, 4);
    const ClassView view(batch, 1);
    ChainConfig cfg;
    cfg.num_chains = 101;
    cfg.max_length = 6;
    cfg.max_tail_size = 2;
    cfg.rng_seed = 77;

    const auto base = run_chains(view, cfg, {});
    for (unsigned threads : {1u, 2u, 3u}) {
        const auto other = run_chains(view, cfg, {}, threads);
        CHECK(other.tail_patterns == base.tail_patterns);
        CHECK(other.effective_lengths == base.effective_lengths);
        REQUIRE(other.per_pattern_counts.size() == base.per_pattern_counts.size());
        for (const auto& [pattern, pc] : base.per_pattern_counts) {
            const auto& opc = other.per_pattern_counts.at(pattern);
            CHECK(opc.occurrences == pc.occurrences);
            CHECK(opc.misses == pc.misses);
        }
    }
}

TEST_CASE("per-chain occurrence counts follow the censored geometric law") {
    const auto batch = half_frequency_batch();
    const ClassView view(batch, 1);
    ChainConfig cfg;
    cfg.num_chains = 20000;
    cfg.max_length = 5;
    cfg.max_tail_size = 1; // constants keep the tail at >= 2 items
    cfg.rng_seed = 31;

    const auto chains = generate_chains(view, cfg);
    const auto s = Pattern::from_pairs({{0, 0}});
    std::vector<std::uint64_t> observed(cfg.max_length + 1, 0);
    for (const auto& chain : chains) {
        REQUIRE(chain.length == cfg.max_length);
        ++observed[chain.occurrence(s).count];
    }

    // P(k) = p^k (1-p) for k < L and p^L at k = L, with p = 1/2.
    const double p = 0.5;
    double chi2 = 0.0;
    for (std::uint32_t k = 0; k <= cfg.max_length; ++k) {
        const double prob = (k < cfg.max_length)
                                ? std::pow(p, k) * (1.0 - p)
                                : std::pow(p, cfg.max_length);
        const double expected = prob * cfg.num_chains;
        const double diff = observed[k] - expected;
        chi2 += diff * diff / expected;
    }
    CHECK(chi2 < 20.5); // chi-square 0.999 quantile at 5 dof
}

TEST_CASE("frequency recovered from K/(K+I) at planted one-half") {
    const auto batch = half_frequency_batch();
    const ClassView view(batch, 1);
    ChainConfig cfg;
    cfg.num_chains = 1000;
    cfg.max_length = 5;
    cfg.max_tail_size = 1;
    cfg.rng_seed = 13;

    const auto s = Pattern::from_pairs({{0, 0}});
    const auto result = run_chains(view, cfg, std::vector<Pattern>{s});
    const auto& pc = result.per_pattern_counts.at(s);
    const double estimate =
        double(pc.occurrences) / double(pc.occurrences + pc.misses);
    CHECK(estimate == doctest::Approx(0.5).epsilon(0.1)); // +-0.05 absolute
    CHECK(std::abs(estimate - 0.5) <= 0.05);
}

TEST_CASE("count bounds: I <= M and K <= M*L") {
    Rng seeder(404);
    for (int trial = 0; trial < 20; ++trial) {
        Rng data_rng(seeder.next_u64());
        const auto batch = random_batch(data_rng, 50, 4, 3);
        const ClassView view(batch, 1);
        ChainConfig cfg;
        cfg.num_chains = 64;
        cfg.max_length = 1 + static_cast<std::uint32_t>(seeder.uniform_index(6));
        cfg.max_tail_size = 1 + static_cast<std::uint32_t>(seeder.uniform_index(4));
        cfg.rng_seed = seeder.next_u64();

        const auto result = run_chains(view, cfg, {});
        const std::int64_t total_length = std::accumulate(
            result.effective_lengths.begin(), result.effective_lengths.end(),
            std::int64_t{0});
        for (const auto& [pattern, pc] : result.per_pattern_counts) {
            CHECK(pc.misses <= std::int64_t(cfg.num_chains));
            CHECK(pc.occurrences <= std::int64_t(cfg.num_chains) * cfg.max_length);
            CHECK(pc.occurrences <= total_length);
        }
    }
}

TEST_CASE("chain config validation") {
    ChainConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.num_chains = 0;
    CHECK_THROWS_AS(cfg.validate(), OricError);
}
