#include "stit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "stit/errors.hpp"
#include "stit/numeric.hpp"

namespace stit {

namespace {

constexpr double kDistinctRel = 1e-12;

double rate_scale(const std::vector<double>& rates) {
    double scale = 0.0;
    for (double r : rates) scale = std::max(scale, std::abs(r));
    return scale;
}

void check_rates(const std::vector<double>& rates) {
    if (rates.empty()) throw ConfigError("rates: must not be empty");
    for (double r : rates) {
        if (!(r > 0.0)) throw ConfigError("rates: must be positive");
    }
    const double scale = rate_scale(rates);
    for (std::size_t i = 0; i < rates.size(); ++i) {
        for (std::size_t j = i + 1; j < rates.size(); ++j) {
            if (std::abs(rates[i] - rates[j]) <= kDistinctRel * scale) {
                throw DegenerateRates("rates: entries " + std::to_string(i) + " and " +
                                      std::to_string(j) + " coincide");
            }
        }
    }
}

// P(exactly rates.size()-1 jumps by t) along one chain.  The partial-fraction
// formula cancels catastrophically for long chains or (near-)equal rates
// (1D windows leave the rate constant), so internal weights are evaluated by
// uniformization of the pure-birth chain: every term is nonnegative, any
// rate pattern is handled, and the truncation error is below 1e-14.
double chain_weight(const std::vector<double>& rates, double t) {
    const int k = static_cast<int>(rates.size()) - 1;
    if (!(t > 0.0)) return k == 0 ? 1.0 : 0.0;
    double lam = 0.0;
    for (double r : rates) lam = std::max(lam, r);
    const double a = lam * t;
    if (a > 600.0) throw TooLarge("rate * time too large for uniformization");
    // v = state distribution of the uniformized chain after m steps over
    // states 0..k and one absorbing overflow state k+1.
    std::vector<double> v(rates.size() + 1, 0.0);
    v[0] = 1.0;
    double pw = std::exp(-a);  // Poisson(a) weight of m = 0
    double cum = 0.0;
    double out = 0.0;
    for (std::uint64_t m = 0; m < 200000; ++m) {
        out += pw * v[k];
        cum += pw;
        if (1.0 - cum < 1e-14 * (1.0 + cum)) break;
        for (std::size_t i = v.size() - 1; i > 0; --i) {
            const double stay = i < rates.size() ? 1.0 - rates[i] / lam : 1.0;
            v[i] = v[i] * stay + v[i - 1] * (rates[i - 1] / lam);
        }
        v[0] *= 1.0 - rates[0] / lam;
        pw *= a / static_cast<double>(m + 1);
    }
    return std::min(out, 1.0);
}

}  // namespace

void RateSequence::validate() const {
    if (rates.empty()) throw ConfigError("rates: must not be empty");
    const double scale = rate_scale(rates);
    for (double r : rates) {
        if (!(r > 0.0)) throw ConfigError("rates: must be positive");
    }
    for (std::size_t i = 1; i < rates.size(); ++i) {
        const double gap = rates[i] - rates[i - 1];
        if (std::abs(gap) <= kDistinctRel * scale) {
            throw DegenerateRates("rates: entries " + std::to_string(i - 1) + " and " +
                                  std::to_string(i) + " coincide");
        }
        if (gap < 0.0) throw ConfigError("rates: must be strictly increasing");
    }
}

double hypoexp_window_prob(const std::vector<double>& rates, double t) {
    check_rates(rates);
    if (t < 0.0) throw OutOfRange("t: must be nonnegative");
    const std::size_t n = rates.size();
    // P(exactly n-1 jumps by t) = (prod of stage rates) * sum_j exp(-z_j t)
    // over the products of pairwise rate differences.
    double prefactor = 1.0;
    for (std::size_t s = 0; s + 1 < n; ++s) prefactor *= rates[s];
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double denom = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i != j) denom *= rates[i] - rates[j];
        }
        sum += std::exp(-rates[j] * t) / denom;
    }
    return prefactor * sum;
}

double hypoexp_cdf(const std::vector<double>& rates, double t) {
    if (rates.empty()) return t >= 0.0 ? 1.0 : 0.0;
    check_rates(rates);
    if (t <= 0.0) return 0.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < rates.size(); ++j) {
        double coeff = 1.0;
        for (std::size_t i = 0; i < rates.size(); ++i) {
            if (i != j) coeff *= rates[i] / (rates[i] - rates[j]);
        }
        sum += coeff * std::exp(-rates[j] * t);
    }
    return 1.0 - sum;
}

ChainSample sample_division_chain(const Cell& window, const HyperplaneMeasure& m, int k,
                                  RngStream& rng) {
    if (k < 0) throw OutOfRange("k: must be nonnegative");
    ChainSample out{Tessellation::initial(window, m), {}, {}};
    out.rates.rates.reserve(static_cast<std::size_t>(k) + 1);
    std::vector<TreeWord> divided;
    divided.reserve(static_cast<std::size_t>(k));
    for (int s = 0; s < k; ++s) {
        const double zeta_s = out.state.zeta();
        out.rates.rates.push_back(zeta_s);
        // Select a cell with probability mass / zeta, scanning in word order.
        const double target = rng.uniform01() * zeta_s;
        TreeWord chosen;
        bool found = false;
        double acc = 0.0;
        out.state.for_each_cell([&](const Cell& c, double mass) {
            acc += mass;
            if (!found && target < acc) {
                chosen = c.label;
                found = true;
            }
        });
        if (!found) chosen = out.state.labels().back();
        // Draw from the chosen cell's hitting law; degenerate draws (cut
        // through a vertex, or exactly at the projection boundary) have
        // measure zero and are redrawn.
        HittingSampler sampler(m, out.state.cell(chosen));
        for (int attempt = 0;; ++attempt) {
            const Hyperplane h = sampler.draw(rng);
            try {
                out.state.divide(chosen, h, static_cast<double>(s + 1), m);
                break;
            } catch (const DegenerateCut&) {
                if (attempt >= 256) throw;
            } catch (const NoHit&) {
                if (attempt >= 256) throw;
            }
        }
        divided.push_back(chosen);
    }
    out.rates.rates.push_back(out.state.zeta());
    out.tuple = tuple_from_divisions(divided);
    return out;
}

namespace {

void check_marginal_args(double t, int k, std::uint64_t n_samples) {
    if (t < 0.0) throw OutOfRange("t: must be nonnegative");
    if (k < 0 || k > 12) throw OutOfRange("k: must lie in [0, 12]");
    if (n_samples < 1000) throw InsufficientData("n_samples: need at least 1000 samples");
}

MarginalEstimate average_weights(const Cell& window, const HyperplaneMeasure& m, double t,
                                 int k, std::uint64_t n_samples, RngStream& rng,
                                 const std::function<bool(const Tessellation&)>* event) {
    double mean = 0.0;
    double m2 = 0.0;
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        ChainSample chain = sample_division_chain(window, m, k, rng);
        double w = 0.0;
        if (event == nullptr || (*event)(chain.state)) {
            w = chain_weight(chain.rates.rates, t);
        }
        const double delta = w - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (w - mean);
    }
    const double n = static_cast<double>(n_samples);
    const double var = std::max(0.0, m2 / (n - 1.0));
    return {mean, std::sqrt(var / n), n_samples};
}

}  // namespace

MarginalEstimate marginal_count_prob(const Cell& window, const HyperplaneMeasure& m,
                                     double t, int k, std::uint64_t n_samples,
                                     RngStream& rng) {
    check_marginal_args(t, k, n_samples);
    if (k == 0) {
        // No divisions: the weight is the same for every sample.
        return {std::exp(-m.hit_mass(window) * t), 0.0, n_samples};
    }
    return average_weights(window, m, t, k, n_samples, rng, nullptr);
}

MarginalEstimate marginal_event_prob(const Cell& window, const HyperplaneMeasure& m,
                                     double t, int k, std::uint64_t n_samples,
                                     const std::function<bool(const Tessellation&)>& event,
                                     RngStream& rng) {
    check_marginal_args(t, k, n_samples);
    if (k == 0) {
        const Tessellation start = Tessellation::initial(window, m);
        const double p = event(start) ? std::exp(-m.hit_mass(window) * t) : 0.0;
        return {p, 0.0, n_samples};
    }
    return average_weights(window, m, t, k, n_samples, rng, &event);
}

namespace {

// One level of the exhaustive integral: integrates over the cut of pair s of
// the tuple, weighting by the unnormalized hitting measure restricted to the
// divided cell and by 1/zeta_s from the embedded chain's selection law.
double exhaustive_rec(const TreeTuple& tuple, int s, int k, const Tessellation& tess,
                      std::vector<double>& rates, const HyperplaneMeasure& m, double t,
                      const QuadRule& rule) {
    rates.push_back(tess.zeta());
    double out = 0.0;
    if (s == k) {
        out = chain_weight(rates, t);
    } else {
        const TreeWord label = tuple.divided_at(s);
        const Cell& cell = tess.cell(label);
        double acc = 0.0;
        for (const DirAtom& atom : m.theta().atoms()) {
            const auto [lo, hi] = projection_interval(cell, atom.dir);
            const double span = hi - lo;
            if (!(span > 0.0)) continue;
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double alpha = lo + 0.5 * span * (rule.nodes[q] + 1.0);
                Tessellation child = tess;
                child.divide(label, Hyperplane{alpha, atom.dir},
                             static_cast<double>(s + 1), m);
                acc += atom.weight * 0.5 * span * rule.weights[q] *
                       exhaustive_rec(tuple, s + 1, k, child, rates, m, t, rule);
            }
        }
        out = m.gamma() * acc / rates.back();
    }
    rates.pop_back();
    return out;
}

}  // namespace

double marginal_count_prob_exhaustive(const Cell& window, const HyperplaneMeasure& m,
                                      double t, int k, int quad_points) {
    if (t < 0.0) throw OutOfRange("t: must be nonnegative");
    if (k < 0) throw OutOfRange("k: must be nonnegative");
    if (k > 3) throw TooLarge("exhaustive enumeration supports k <= 3");
    if (m.theta().kind() != DirectionalDistribution::Kind::discrete) {
        throw ConfigError(
            "theta: exhaustive enumeration requires a discrete directional distribution");
    }
    if (quad_points < 2) throw ConfigError("quad_points: need at least 2 nodes");
    if (k == 0) return std::exp(-m.hit_mass(window) * t);
    const QuadRule& rule = gauss_legendre(quad_points);
    double total = 0.0;
    std::vector<double> rates;
    for (const TreeTuple& tuple : enumerate_theta(k)) {
        const Tessellation root = Tessellation::initial(window, m);
        total += exhaustive_rec(tuple, 0, k, root, rates, m, t, rule);
    }
    return total;
}

}  // namespace stit
