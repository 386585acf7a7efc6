#include "oric/planner.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "oric/errors.hpp"

namespace oric {
namespace planner {

namespace {

// Minimality nudges only make sense while count+-1 is representable.
constexpr double kExactIntegerLimit = 9.0e15;

double pow_pl(double p, std::uint32_t length) {
    return std::pow(p, static_cast<double>(length));
}

} // namespace

void PlannerSpec::validate() const {
    if (!(theta > 0.0 && theta <= 1.0))
        throw OricError(Errc::invalid_config, "theta must be in (0, 1]");
    if (!(eta1 > 0.0 && eta1 < 1.0) || !(eta2 > 0.0 && eta2 < 1.0))
        throw OricError(Errc::invalid_config, "eta1 and eta2 must be in (0, 1)");
    if (!(p2 >= 0.0 && p2 < theta && theta <= p1 && p1 <= 1.0))
        throw OricError(Errc::invalid_config, "need 0 <= p2 < theta <= p1 <= 1");
    if (horizon < 1)
        throw OricError(Errc::invalid_config, "horizon must be >= 1");
}

double detection_probability(double p, std::uint32_t length, double chain_count) {
    if (!(p >= 0.0 && p <= 1.0))
        throw OricError(Errc::invalid_config, "p must be in [0, 1]");
    if (length < 1)
        throw OricError(Errc::invalid_config, "length must be >= 1");
    if (!(chain_count >= 0.0))
        throw OricError(Errc::invalid_config, "chain count must be >= 0");
    if (chain_count == 0.0) return 0.0;
    const double ppl = pow_pl(p, length);
    if (ppl >= 1.0) return 1.0;
    // 1 - (1 - p^L)^M = -expm1(M * log1p(-p^L))
    return -std::expm1(chain_count * std::log1p(-ppl));
}

double conservative_chains(double p1, std::uint32_t length, double eta1) {
    if (!(p1 > 0.0 && p1 <= 1.0))
        throw OricError(Errc::invalid_config, "p1 must be in (0, 1]");
    if (!(eta1 > 0.0 && eta1 < 1.0))
        throw OricError(Errc::invalid_config, "eta1 must be in (0, 1)");
    if (p1 >= 1.0) return 1.0; // log(1-1) = -inf: a single chain is certain
    const double ppl = pow_pl(p1, length);
    if (ppl <= 0.0)
        throw OricError(Errc::planner_overflow,
                        "p1^L underflows at L=" + std::to_string(length) +
                            "; length is infeasible");
    const double ratio = std::log(eta1) / std::log1p(-ppl);
    if (!std::isfinite(ratio))
        throw OricError(Errc::planner_overflow,
                        "required chain count overflows at L=" +
                            std::to_string(length));
    return ratio + 1.0;
}

double required_chains(double p1, std::uint32_t length, double eta1) {
    if (p1 >= 1.0) return 1.0;
    double count = std::ceil(conservative_chains(p1, length, eta1) - 1.0);
    if (count < 1.0) count = 1.0;
    if (count > kExactIntegerLimit) return count;
    // ceil() can land one off at representation boundaries; pin minimality
    // with the same floating evaluation the property tests use.
    const double target = 1.0 - eta1;
    while (count > 1.0 && detection_probability(p1, length, count - 1.0) >= target)
        count -= 1.0;
    while (detection_probability(p1, length, count) < target)
        count += 1.0;
    return count;
}

PlannerResult plan(const PlannerSpec& spec, std::uint32_t l_max) {
    spec.validate();
    if (l_max < 1)
        throw OricError(Errc::invalid_config, "l_max must be >= 1");

    double previous_fp = 1.0;
    double best_fp = 1.0;
    std::uint32_t best_length = 0;
    for (std::uint32_t length = 1; length <= l_max; ++length) {
        double m_bar = 0.0;
        double m_star = 0.0;
        try {
            m_bar = conservative_chains(spec.p1, length, spec.eta1);
            m_star = required_chains(spec.p1, length, spec.eta1);
        } catch (const OricError& e) {
            if (e.code() == Errc::planner_overflow) break; // longer L only worse
            throw;
        }

        const double fp = detection_probability(spec.p2, length, m_bar);
        // The appendix's monotonicity: the false-positive curve cannot rise.
        if (fp > previous_fp + 1e-12)
            throw OricError(Errc::invalid_config,
                            "false-positive curve increased at L=" +
                                std::to_string(length));
        previous_fp = fp;
        if (fp < best_fp) {
            best_fp = fp;
            best_length = length;
        }

        if (fp <= spec.eta2) {
            PlannerResult result;
            result.chain_length = length;
            result.chain_count = m_star;
            result.detect_prob_frequent =
                detection_probability(spec.p1, length, m_star);
            result.detect_prob_infrequent = fp;
            result.multi_update_fp_bound = spec.eta2 * spec.horizon;
            return result;
        }
    }
    throw OricError(Errc::infeasible_plan,
                    "no L <= " + std::to_string(l_max) +
                        " meets the false-positive budget; best was " +
                        std::to_string(best_fp) + " at L=" +
                        std::to_string(best_length));
}

} // namespace planner
} // namespace oric
