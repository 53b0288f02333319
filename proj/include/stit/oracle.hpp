#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "stit/measure.hpp"
#include "stit/tess.hpp"
#include "stit/tree.hpp"

namespace stit {

// Rates of the states visited along one division chain; strictly increasing
// because every division adds the (positive) mass of the new facet.
struct RateSequence {
    std::vector<double> rates;

    // Throws DegenerateRates if two entries coincide within 1e-12 relative,
    // Error if the sequence is not strictly increasing or not positive.
    void validate() const;
};

// P(exactly k jumps by time t) for a pure-jump process whose first k+1
// states have the given rates (rates.size() == k+1): the chain spends an
// Exp(rates[s]) stage in state s and survives in state k.  Requires
// pairwise-distinct rates; throws DegenerateRates otherwise.
double hypoexp_window_prob(const std::vector<double>& rates, double t);

// P(S_n <= t) where S_n is a sum of independent Exp(rates[s]) stages,
// s = 0..n-1.
double hypoexp_cdf(const std::vector<double>& rates, double t);

// One sampled division chain of length k: the tessellation after k
// divisions, the visited state rates zeta_0..zeta_k, and the realized
// division tuple.  Cells are selected with probability mass/zeta and
// hyperplanes from the selected cell's hitting law, exactly the embedded
// chain of the process.
struct ChainSample {
    Tessellation state;
    RateSequence rates;
    TreeTuple tuple;
};
ChainSample sample_division_chain(const Cell& window, const HyperplaneMeasure& m, int k,
                                  RngStream& rng);

struct MarginalEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
};

// Monte Carlo estimate of P(the window holds exactly k+1 cells at time t):
// averages the hypoexponential weight over sampled division chains.  The
// estimator is unbiased; k = 0 is returned exactly with zero standard
// error.  Requires 0 <= k <= 12.
MarginalEstimate marginal_count_prob(const Cell& window, const HyperplaneMeasure& m,
                                     double t, int k, std::uint64_t n_samples,
                                     RngStream& rng);

// As above restricted to chains whose final state satisfies the predicate:
// estimates P(#cells = k+1 and event holds at time t).
MarginalEstimate marginal_event_prob(const Cell& window, const HyperplaneMeasure& m,
                                     double t, int k, std::uint64_t n_samples,
                                     const std::function<bool(const Tessellation&)>& event,
                                     RngStream& rng);

// Deterministic evaluation of the same probability for discrete theta and
// k <= 3: enumerates all depth-k division tuples and integrates over the
// cut positions with Gauss-Legendre quadrature.
double marginal_count_prob_exhaustive(const Cell& window, const HyperplaneMeasure& m,
                                      double t, int k, int quad_points = 20);

}  // namespace stit
