#include "stit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace stit {

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw Error("gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) {
        // Series for P(a, x); Q = 1 - P.
        double ap = a;
        double del = 1.0 / a;
        double sum = del;
        for (int i = 0; i < 1000; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-15) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    // Lentz continued fraction for Q(a, x).
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double chi2_sf(double x, int df) {
    if (df < 1) throw Error("chi2_sf: df must be positive");
    if (x <= 0.0) return 1.0;
    return gamma_q(0.5 * df, 0.5 * x);
}

double kolmogorov_q(double lambda) {
    if (lambda < 1e-3) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 200; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-14) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_p_value(double d, double n_effective) {
    const double sn = std::sqrt(n_effective);
    return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

double poisson_pmf(int k, double lambda) {
    if (k < 0) return 0.0;
    return std::exp(k * std::log(lambda) - lambda - std::lgamma(k + 1.0));
}

EmpiricalSummary EmpiricalSummary::from_values(std::vector<double> v) {
    if (v.empty()) throw InsufficientData("empty sample");
    return EmpiricalSummary{std::move(v)};
}

double EmpiricalSummary::mean() const {
    double s = 0.0;
    for (double x : values) s += x;
    return s / static_cast<double>(values.size());
}

double EmpiricalSummary::variance() const {
    const double m = mean();
    double s = 0.0;
    for (double x : values) s += (x - m) * (x - m);
    return values.size() > 1 ? s / static_cast<double>(values.size() - 1) : 0.0;
}

std::map<long long, std::size_t> EmpiricalSummary::histogram() const {
    std::map<long long, std::size_t> h;
    for (double x : values) ++h[std::llround(x)];
    return h;
}

namespace {

TestReport finish(std::string kind, double stat, double p, double alpha,
                  std::string detail = {}) {
    TestReport r;
    r.kind = std::move(kind);
    r.statistic = stat;
    r.p_value = p;
    r.alpha = alpha;
    r.pass = p > alpha;
    r.detail = std::move(detail);
    return r;
}

double ks_statistic_sorted(const std::vector<double>& z,
                           double (*cdf)(double)) {
    const double n = static_cast<double>(z.size());
    double d = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double f = cdf(z[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

double exp1_cdf(double z) { return z <= 0.0 ? 0.0 : -std::expm1(-z); }
double unit_cdf(double z) { return std::clamp(z, 0.0, 1.0); }

}  // namespace

TestReport chi_square_two_sample(const EmpiricalSummary& a, const EmpiricalSummary& b,
                                 int min_bin, double alpha) {
    if (a.n() == 0 || b.n() == 0) throw InsufficientData("empty sample");
    const auto ha = a.histogram();
    const auto hb = b.histogram();
    std::map<long long, std::pair<double, double>> joint;
    for (const auto& [k, c] : ha) joint[k].first = static_cast<double>(c);
    for (const auto& [k, c] : hb) joint[k].second = static_cast<double>(c);

    const double na = static_cast<double>(a.n());
    const double nb = static_cast<double>(b.n());
    // Pool adjacent value bins until the expected count under homogeneity is
    // at least min_bin in both samples.
    std::vector<std::pair<double, double>> bins;
    double ca = 0.0, cb = 0.0;
    for (const auto& [k, counts] : joint) {
        ca += counts.first;
        cb += counts.second;
        const double tot = ca + cb;
        if (tot * na / (na + nb) >= min_bin && tot * nb / (na + nb) >= min_bin) {
            bins.emplace_back(ca, cb);
            ca = cb = 0.0;
        }
    }
    if (ca + cb > 0.0) {
        if (!bins.empty()) {
            bins.back().first += ca;
            bins.back().second += cb;
        } else {
            bins.emplace_back(ca, cb);
        }
    }
    if (bins.size() < 2) throw InsufficientData("fewer than 2 bins after pooling");

    const double sa = std::sqrt(nb / na);
    const double sb = std::sqrt(na / nb);
    double stat = 0.0;
    for (const auto& [xa, xb] : bins) {
        const double diff = sa * xa - sb * xb;
        stat += diff * diff / (xa + xb);
    }
    const int df = static_cast<int>(bins.size()) - 1;
    std::ostringstream detail;
    detail << "bins=" << bins.size() << " df=" << df;
    return finish("chi_square_two_sample", stat, chi2_sf(stat, df), alpha, detail.str());
}

TestReport chi_square_gof(const std::vector<std::uint64_t>& observed,
                          const std::vector<double>& probs, int min_bin, double alpha) {
    if (observed.size() != probs.size()) throw Error("gof: size mismatch");
    double n = 0.0;
    for (std::uint64_t o : observed) n += static_cast<double>(o);
    if (n == 0.0) throw InsufficientData("empty sample");

    std::vector<std::pair<double, double>> cats;  // (observed, expected)
    double psum = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (probs[i] < 0.0) throw Error("gof: negative probability");
        cats.emplace_back(static_cast<double>(observed[i]), n * probs[i]);
        psum += probs[i];
    }
    if (psum > 1.0 + 1e-9) throw Error("gof: probabilities exceed 1");

    // Pool adjacent categories until each expected count reaches min_bin.
    std::vector<std::pair<double, double>> bins;
    double co = 0.0, ce = 0.0;
    for (const auto& [o, e] : cats) {
        co += o;
        ce += e;
        if (ce >= min_bin) {
            bins.emplace_back(co, ce);
            co = ce = 0.0;
        }
    }
    // Leftover tail (including the implicit remainder category).
    const double tail_e = ce + n * std::max(0.0, 1.0 - psum);
    double tail_o = co;
    {
        double seen = 0.0;
        for (const auto& [o, e] : cats) seen += o;
        tail_o += n - seen;
    }
    if (tail_e > 0.0 || tail_o > 0.0) {
        if (tail_e >= min_bin || bins.empty()) {
            bins.emplace_back(tail_o, tail_e);
        } else {
            bins.back().first += tail_o;
            bins.back().second += tail_e;
        }
    }
    if (bins.size() < 2) throw InsufficientData("fewer than 2 bins after pooling");

    double stat = 0.0;
    for (const auto& [o, e] : bins) {
        if (e <= 0.0) throw Error("gof: zero expected count after pooling");
        stat += (o - e) * (o - e) / e;
    }
    const int df = static_cast<int>(bins.size()) - 1;
    std::ostringstream detail;
    detail << "bins=" << bins.size() << " df=" << df;
    return finish("chi_square_gof", stat, chi2_sf(stat, df), alpha, detail.str());
}

TestReport ks_exponential(const std::vector<double>& samples,
                          const std::vector<double>& rates, double alpha) {
    if (samples.size() != rates.size()) throw Error("ks: size mismatch");
    if (samples.size() < 10) throw InsufficientData("KS requires n >= 10");
    std::vector<double> z(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) z[i] = rates[i] * samples[i];
    std::sort(z.begin(), z.end());
    const double d = ks_statistic_sorted(z, exp1_cdf);
    return finish("ks_exponential", d, ks_p_value(d, static_cast<double>(z.size())), alpha);
}

TestReport ks_exponential(const std::vector<double>& samples, double rate, double alpha) {
    return ks_exponential(samples, std::vector<double>(samples.size(), rate), alpha);
}

TestReport ks_uniform01(std::vector<double> samples, double alpha) {
    if (samples.size() < 10) throw InsufficientData("KS requires n >= 10");
    std::sort(samples.begin(), samples.end());
    const double d = ks_statistic_sorted(samples, unit_cdf);
    return finish("ks_uniform01", d, ks_p_value(d, static_cast<double>(samples.size())),
                  alpha);
}

TestReport ks_two_sample(std::vector<double> a, std::vector<double> b, double alpha) {
    if (a.size() < 10 || b.size() < 10) throw InsufficientData("KS requires n >= 10");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        // Advance both samples through the whole run of the next value, so
        // the EDF gap is only evaluated between jump points; the law may
        // carry atoms (boundary lengths do) and ties must not inflate D.
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = na * nb / (na + nb);
    return finish("ks_two_sample", d, ks_p_value(d, ne), alpha);
}

TestReport selection_frequency_test(const Tessellation& frozen,
                                    const HyperplaneMeasure& m, Construction tag,
                                    int n_steps, RngStreams& streams, double alpha) {
    if (n_steps < 1) throw InsufficientData("need at least one step");
    const std::vector<TreeWord> labels = frozen.labels();
    std::map<TreeWord, std::uint64_t> counts;
    for (int i = 0; i < n_steps; ++i) {
        const JumpSample s = sample_one_jump(frozen, m, tag, streams);
        ++counts[s.divided];
    }
    std::vector<std::uint64_t> observed;
    std::vector<double> probs;
    for (const TreeWord& l : labels) {
        observed.push_back(counts[l]);
        probs.push_back(frozen.cell_mass(l) / frozen.zeta());
    }
    TestReport r = chi_square_gof(observed, probs, 5, alpha);
    r.kind = "selection_frequency[" + to_string(tag) + "]";
    return r;
}

std::vector<BenchRow> benchmark_proposals(const SimConfig& cfg,
                                          const std::vector<Construction>& tags,
                                          int replications) {
    std::vector<BenchRow> out;
    for (Construction tag : tags) {
        // bucket index -> (jump count, proposal sum); bucket i covers cell
        // counts [2^i, 2^{i+1}).
        std::map<int, std::pair<std::uint64_t, double>> buckets;
        SimConfig c = cfg;
        c.construction = tag;
        for (int rep = 0; rep < replications; ++rep) {
            const Trajectory traj = simulate(c, static_cast<std::uint64_t>(rep));
            for (std::size_t j = 0; j < traj.proposals_per_jump.size(); ++j) {
                const std::size_t cells_before = 1 + j;
                int b = 0;
                while ((std::size_t{1} << (b + 1)) <= cells_before) ++b;
                auto& [jumps, props] = buckets[b];
                ++jumps;
                props += traj.proposals_per_jump[j];
            }
        }
        for (const auto& [b, agg] : buckets) {
            BenchRow row;
            row.tag = tag;
            row.cells_lo = std::size_t{1} << b;
            row.cells_hi = std::size_t{1} << (b + 1);
            row.jumps = agg.first;
            row.mean_proposals = agg.second / static_cast<double>(agg.first);
            out.push_back(row);
        }
    }
    return out;
}

}  // namespace stit
