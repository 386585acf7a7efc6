#include "oric/oracle.hpp"

#include <cmath>

namespace oric {
namespace oracle {

std::unordered_map<Pattern, ExactStats>
exact_scan(const LabeledBatch& batch, std::span<const Pattern> patterns) {
    batch.validate();
    for (const auto& p : patterns)
        for (const auto& item : p.items())
            if (item.feature >= batch.feature_count())
                throw OricError(Errc::schema_mismatch,
                                "pattern references feature " +
                                    std::to_string(item.feature) +
                                    " outside the batch schema");

    const std::size_t rows = batch.row_count();
    std::uint64_t rows_pos = 0;
    for (auto y : batch.labels) rows_pos += y;
    const std::uint64_t rows_neg = rows - rows_pos;

    std::unordered_map<Pattern, ExactStats> out;
    out.reserve(patterns.size());
    for (const auto& p : patterns) {
        ExactStats st;
        for (std::size_t r = 0; r < rows; ++r) {
            bool contained = true;
            for (const auto& item : p.items()) {
                if (batch.columns[item.feature][r] != item.category) {
                    contained = false;
                    break;
                }
            }
            if (!contained) continue;
            if (batch.labels[r])
                ++st.support_pos;
            else
                ++st.support_neg;
        }
        st.freq_pos = rows_pos ? double(st.support_pos) / double(rows_pos) : 0.0;
        st.freq_neg = rows_neg ? double(st.support_neg) / double(rows_neg) : 0.0;
        if (rows > 0) {
            const double pi = double(rows_pos) / double(rows);
            const double num = st.freq_pos * pi;
            const double denom = num + st.freq_neg * (1.0 - pi);
            if (denom > 0.0) st.confidence = num / denom;
        }
        out.emplace(p, st);
    }
    return out;
}

namespace {

double survival_weight(double p, std::uint32_t length) {
    // (1 - p^L) / (1 - p), with the continuous limit L at p = 1.
    if (p >= 1.0) return static_cast<double>(length);
    return (1.0 - std::pow(p, static_cast<double>(length))) / (1.0 - p);
}

} // namespace

double adjusted_frequency(std::span<const double> history, double gamma,
                          std::uint32_t length) {
    if (history.empty())
        throw OricError(Errc::empty_history, "adjusted frequency needs >= 1 period");
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw OricError(Errc::invalid_config, "gamma must be in [0, 1]");
    if (length < 1)
        throw OricError(Errc::invalid_config, "length must be >= 1");
    for (double p : history)
        if (!(p >= 0.0 && p <= 1.0))
            throw OricError(Errc::invalid_config, "frequencies must be in [0, 1]");

    const std::size_t periods = history.size();
    double weight_sum = 0.0;
    double weighted = 0.0;
    for (std::size_t t = 0; t < periods; ++t) {
        const double alpha = survival_weight(history[t], length) *
                             std::pow(gamma, double(periods - 1 - t));
        weight_sum += alpha;
        weighted += alpha * history[t];
    }
    if (weight_sum <= 0.0) return 0.0; // all-zero frequencies under gamma = 0
    return weighted / weight_sum;
}

std::vector<double> simulate_estimator_samples(std::span<const double> history,
                                               double gamma, std::uint32_t length,
                                               std::uint64_t chains,
                                               std::uint32_t replicates, Rng& rng) {
    if (history.empty())
        throw OricError(Errc::empty_history, "simulation needs >= 1 period");

    std::vector<double> estimates;
    estimates.reserve(replicates);
    for (std::uint32_t rep = 0; rep < replicates; ++rep) {
        double k_hat = 0.0;
        double i_hat = 0.0;
        for (double p : history) {
            std::uint64_t occurrences = 0;
            std::uint64_t misses = 0;
            for (std::uint64_t m = 0; m < chains; ++m) {
                std::uint32_t run = 0;
                while (run < length && rng.bernoulli(p)) ++run;
                occurrences += run;
                if (run < length) ++misses;
            }
            k_hat = double(occurrences) + gamma * k_hat;
            i_hat = double(misses) + gamma * i_hat;
        }
        const double denom = k_hat + i_hat;
        estimates.push_back(denom > 0.0 ? k_hat / denom : 0.0);
    }
    return estimates;
}

EstimatorSample simulate_estimator(std::span<const double> history, double gamma,
                                   std::uint32_t length, std::uint64_t chains,
                                   std::uint32_t replicates, Rng& rng) {
    if (replicates < 2)
        throw OricError(Errc::invalid_config, "need >= 2 replicates for a stddev");
    const auto estimates =
        simulate_estimator_samples(history, gamma, length, chains, replicates, rng);

    EstimatorSample sample;
    for (double e : estimates) sample.mean += e;
    sample.mean /= double(estimates.size());
    double ss = 0.0;
    for (double e : estimates) ss += (e - sample.mean) * (e - sample.mean);
    sample.stddev = std::sqrt(ss / double(estimates.size() - 1));
    return sample;
}

double mc_detection_probability(double p, std::uint32_t length,
                                std::uint64_t chains, std::uint32_t trials,
                                Rng& rng) {
    if (trials < 1)
        throw OricError(Errc::invalid_config, "need >= 1 trial");
    std::uint64_t detected = 0;
    for (std::uint32_t t = 0; t < trials; ++t) {
        bool hit = false;
        for (std::uint64_t m = 0; m < chains && !hit; ++m) {
            std::uint32_t run = 0;
            while (run < length && rng.bernoulli(p)) ++run;
            hit = run == length;
        }
        detected += hit;
    }
    return double(detected) / double(trials);
}

} // namespace oracle
} // namespace oric
