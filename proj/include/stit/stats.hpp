#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stit/construct.hpp"

namespace stit {

// --- special functions used by the tests ---

// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);
// Survival function of the chi-square distribution with df degrees.
double chi2_sf(double x, int df);
// Asymptotic Kolmogorov tail Q(lambda) = 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_q(double lambda);
// One- and two-sample KS p-values with the small-sample corrected argument.
double ks_p_value(double d, double n_effective);
double poisson_pmf(int k, double lambda);

// --- data containers ---

// A sample of reals or counts.  The histogram maps rounded values to
// multiplicities and is meant for integer-valued data.
struct EmpiricalSummary {
    std::vector<double> values;

    static EmpiricalSummary from_values(std::vector<double> v);

    std::size_t n() const { return values.size(); }
    double mean() const;
    double variance() const;
    std::map<long long, std::size_t> histogram() const;
};

struct TestReport {
    std::string kind;
    double statistic = 0.0;
    double p_value = 1.0;
    double alpha = 0.01;
    bool pass = true;
    std::string detail;
};

// --- hypothesis tests ---

// Two-sample chi-square homogeneity on integer-valued data.  Adjacent value
// bins are pooled until both expected counts reach min_bin; throws
// InsufficientData if fewer than two bins remain.
TestReport chi_square_two_sample(const EmpiricalSummary& a, const EmpiricalSummary& b,
                                 int min_bin = 5, double alpha = 0.01);

// One-sample chi-square of observed category counts against expected
// probabilities.  If the probabilities sum to less than one, the remainder
// becomes an implicit tail category.  Pooling as above.
TestReport chi_square_gof(const std::vector<std::uint64_t>& observed,
                          const std::vector<double>& probs, int min_bin = 5,
                          double alpha = 0.01);

// KS test of rate_i * sample_i against Exp(1); rates may be a single shared
// rate or one per sample.  Requires n >= 10.
TestReport ks_exponential(const std::vector<double>& samples,
                          const std::vector<double>& rates, double alpha = 0.01);
TestReport ks_exponential(const std::vector<double>& samples, double rate,
                          double alpha = 0.01);

// KS test against the uniform law on [0, 1].
TestReport ks_uniform01(std::vector<double> samples, double alpha = 0.01);

// Two-sample KS test.
TestReport ks_two_sample(std::vector<double> a, std::vector<double> b,
                         double alpha = 0.01);

// Runs n single jumps of the chosen construction from the frozen state and
// chi-squares the selected-cell counts against mass/zeta.
TestReport selection_frequency_test(const Tessellation& frozen,
                                    const HyperplaneMeasure& m, Construction tag,
                                    int n_steps, RngStreams& streams,
                                    double alpha = 0.01);

// --- proposal-efficiency benchmark ---

// Mean proposals consumed per jump, bucketed by the cell count of the state
// the jump left from (buckets are powers of two).
struct BenchRow {
    Construction tag = Construction::lifetime;
    std::size_t cells_lo = 0;  // inclusive
    std::size_t cells_hi = 0;  // exclusive
    std::uint64_t jumps = 0;
    double mean_proposals = 0.0;
};

std::vector<BenchRow> benchmark_proposals(const SimConfig& cfg,
                                          const std::vector<Construction>& tags,
                                          int replications);

}  // namespace stit
