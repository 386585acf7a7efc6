#include "oric/stream_synth.hpp"

#include <unordered_set>

#include "oric/rng.hpp"

namespace oric {
namespace synth {

std::vector<std::string> StreamSpec::schema() const {
    std::vector<std::string> names;
    names.reserve(num_features);
    for (std::uint32_t f = 0; f < num_features; ++f)
        names.push_back("f" + std::to_string(f));
    return names;
}

void StreamSpec::validate() const {
    if (num_features < 1)
        throw OricError(Errc::invalid_config, "need >= 1 feature");
    if (categories_per_feature < 1)
        throw OricError(Errc::invalid_config, "need >= 1 category per feature");
    if (rows_per_period < 1)
        throw OricError(Errc::invalid_config, "need >= 1 row per period");
    if (horizon < 1)
        throw OricError(Errc::invalid_config, "horizon must be >= 1");
    if (!(positive_rate >= 0.0 && positive_rate <= 1.0))
        throw OricError(Errc::invalid_config, "positive_rate must be in [0, 1]");

    std::unordered_set<FeatureIndex> used;
    for (const auto& planted : this->planted) {
        for (const auto& item : planted.pattern.items()) {
            if (item.feature >= num_features)
                throw OricError(Errc::invalid_config,
                                "planted pattern references feature " +
                                    std::to_string(item.feature) +
                                    " outside the schema");
            if (item.category >= categories_per_feature)
                throw OricError(Errc::invalid_config,
                                "planted category code out of range");
            if (!used.insert(item.feature).second)
                throw OricError(Errc::invalid_config,
                                "planted patterns must be feature-disjoint");
        }
        for (double q : planted.freq_pos)
            if (!(q >= 0.0 && q <= 1.0))
                throw OricError(Errc::invalid_config, "schedule value out of [0, 1]");
        for (double q : planted.freq_neg)
            if (!(q >= 0.0 && q <= 1.0))
                throw OricError(Errc::invalid_config, "schedule value out of [0, 1]");
    }
    if (!planted.empty() && categories_per_feature < 2)
        throw OricError(Errc::invalid_config,
                        "planting frequencies below 1 needs >= 2 categories");
}

LabeledBatch generate_period(const StreamSpec& spec, std::uint32_t t) {
    spec.validate();
    if (t < 1 || t > spec.horizon)
        throw OricError(Errc::invalid_config,
                        "period " + std::to_string(t) + " outside the horizon");
    for (const auto& planted : spec.planted)
        if (planted.freq_pos.size() < t || planted.freq_neg.size() < t)
            throw OricError(Errc::schedule_too_short,
                            "schedule of pattern " + planted.pattern.to_string() +
                                " shorter than period " + std::to_string(t));

    std::vector<bool> is_planted_feature(spec.num_features, false);
    for (const auto& planted : spec.planted)
        for (const auto& item : planted.pattern.items())
            is_planted_feature[item.feature] = true;

    LabeledBatch batch;
    batch.period = t;
    batch.schema = spec.schema();
    batch.columns.assign(spec.num_features, {});
    for (auto& col : batch.columns) col.resize(spec.rows_per_period);
    batch.labels.resize(spec.rows_per_period);

    Rng rng(spec.rng_seed, t);
    const std::uint32_t cats = spec.categories_per_feature;
    for (std::uint32_t row = 0; row < spec.rows_per_period; ++row) {
        const bool positive = rng.bernoulli(spec.positive_rate);
        batch.labels[row] = positive ? 1 : 0;

        for (const auto& planted : spec.planted) {
            const double q =
                positive ? planted.freq_pos[t - 1] : planted.freq_neg[t - 1];
            const auto& items = planted.pattern.items();
            if (rng.bernoulli(q)) {
                for (const auto& item : items)
                    batch.columns[item.feature][row] = item.category;
                continue;
            }
            // Not planted: fill uniformly, but exclude the exact full
            // combination so the empirical frequency matches the schedule.
            bool collision = true;
            for (const auto& item : items) {
                const auto value =
                    static_cast<CategoryCode>(rng.uniform_index(cats));
                batch.columns[item.feature][row] = value;
                if (value != item.category) collision = false;
            }
            if (collision) {
                const auto& last = items.back();
                auto value = static_cast<CategoryCode>(rng.uniform_index(cats - 1));
                if (value >= last.category) ++value;
                batch.columns[last.feature][row] = value;
            }
        }

        for (std::uint32_t f = 0; f < spec.num_features; ++f) {
            if (is_planted_feature[f]) continue;
            batch.columns[f][row] = static_cast<CategoryCode>(rng.uniform_index(cats));
        }
    }
    return batch;
}

} // namespace synth
} // namespace oric
