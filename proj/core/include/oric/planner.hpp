#pragma once
// Chain-count/length planning against detection budgets: the tail-detection
// probability g(p; L, M) = 1 - (1 - p^L)^M, the minimal chain count meeting a
// miss budget, and the numeric search for the shortest length whose
// false-positive probability fits the per-update budget.

#include <cstdint>

namespace oric {
namespace planner {

struct PlannerSpec {
    double theta = 0.5;     // frequency threshold separating frequent/infrequent
    double eta1 = 0.05;     // miss budget for frequent patterns
    double eta2 = 0.05;     // per-update false-positive budget
    double p1 = 0.5;        // smallest frequency >= theta
    double p2 = 0.0;        // largest frequency < theta
    std::uint32_t horizon = 1; // updates T for the eta2*T bound

    void validate() const;
};

struct PlannerResult {
    std::uint32_t chain_length = 0;      // L*
    double chain_count = 0.0;            // M*, integer-valued
    double detect_prob_frequent = 0.0;   // g(p1; L*, M*)
    double detect_prob_infrequent = 0.0; // g(p2; L*, M_bar(L*))
    double multi_update_fp_bound = 0.0;  // eta2 * horizon
};

// P(pattern of frequency p reaches the tail of at least one of M length-L
// chains). Evaluated via log1p/expm1 so the p^L -> 0 extremes stay exact.
// M may be fractional (the proof-side conservative count).
double detection_probability(double p, std::uint32_t length, double chain_count);

// Smallest integer M with detection_probability(p1, L, M) >= 1 - eta1, i.e.
// ceil(log eta1 / log(1 - p1^L)). Returned as an integer-valued double: near-
// degenerate specs (p1 barely above p2) legitimately need counts beyond any
// machine integer. Throws Overflow when p1^L underflows to 0 (the L is
// infeasible in floating point).
double required_chains(double p1, std::uint32_t length, double eta1);

// Conservative real-valued chain count log eta1 / log(1 - p1^L) + 1.
double conservative_chains(double p1, std::uint32_t length, double eta1);

// Scans L = 1..l_max, chooses M*(L) on the miss budget, and returns the
// smallest L whose false-positive probability (at the conservative count) is
// within eta2. The false-positive curve is checked to be nonincreasing along
// the scan. Throws Infeasible when no L qualifies.
PlannerResult plan(const PlannerSpec& spec, std::uint32_t l_max = 64);

} // namespace planner
} // namespace oric
