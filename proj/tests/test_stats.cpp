#include "doctest.h"

#include <cmath>
#include <vector>

#include "stit/rng.hpp"
#include "stit/stats.hpp"

using namespace stit;

namespace {

int poisson_draw(RngStream& rng, double lambda) {
    // Knuth multiplication method; fine for the small lambdas used here.
    const double limit = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= rng.uniform01();
    } while (p > limit);
    return k - 1;
}

std::vector<double> poisson_sample(RngStream& rng, double lambda, int n) {
    std::vector<double> out(n);
    for (double& x : out) x = poisson_draw(rng, lambda);
    return out;
}

}  // namespace

TEST_CASE("chi-square survival function against known quantiles") {
    // df = 2 is an exponential: sf(x) = exp(-x/2).
    CHECK(chi2_sf(2.0, 2) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(chi2_sf(9.210340371976184, 2) == doctest::Approx(0.01).epsilon(1e-9));
    CHECK(chi2_sf(5.991464547107979, 2) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(chi2_sf(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(chi2_sf(23.209251158954356, 10) == doctest::Approx(0.01).epsilon(1e-9));
    CHECK(chi2_sf(0.0, 5) == 1.0);
    CHECK(gamma_q(1.0, 0.5) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("Kolmogorov tail values") {
    CHECK(kolmogorov_q(1.0) == doctest::Approx(0.26999967).epsilon(1e-5));
    CHECK(kolmogorov_q(1.3580986393225507) == doctest::Approx(0.05).epsilon(1e-4));
    CHECK(kolmogorov_q(1.6276236115189502) == doctest::Approx(0.01).epsilon(1e-3));
    CHECK(kolmogorov_q(0.0) == 1.0);
    CHECK(kolmogorov_q(3.0) < 1e-7);
}

TEST_CASE("Poisson pmf") {
    CHECK(poisson_pmf(0, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK(poisson_pmf(3, 2.0) ==
          doctest::Approx(std::exp(-2.0) * 8.0 / 6.0).epsilon(1e-12));
    double total = 0.0;
    for (int k = 0; k <= 40; ++k) total += poisson_pmf(k, 2.0);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("empirical summary invariants") {
    auto s = EmpiricalSummary::from_values({1, 2, 2, 3, 4});
    CHECK(s.n() == 5);
    CHECK(s.mean() == doctest::Approx(2.4));
    CHECK(s.variance() == doctest::Approx(1.3));
    std::size_t mass = 0;
    for (const auto& [k, c] : s.histogram()) mass += c;
    CHECK(mass == s.n());
    CHECK(s.histogram().at(2) == 2);
    CHECK_THROWS_AS(EmpiricalSummary::from_values({}), InsufficientData);
}

TEST_CASE("two-sample chi-square accepts homogeneous data and rejects a shift") {
    RngStream rng(555);
    auto a = EmpiricalSummary::from_values(poisson_sample(rng, 3.0, 4000));
    auto b = EmpiricalSummary::from_values(poisson_sample(rng, 3.0, 4000));
    TestReport same = chi_square_two_sample(a, b);
    CHECK(same.pass);
    CHECK(same.p_value > 0.01);

    auto c = EmpiricalSummary::from_values(poisson_sample(rng, 3.5, 4000));
    TestReport diff = chi_square_two_sample(a, c);
    CHECK_FALSE(diff.pass);
    CHECK(diff.p_value < 0.01);

    // A constant sample leaves a single bin.
    auto k1 = EmpiricalSummary::from_values(std::vector<double>(100, 7.0));
    auto k2 = EmpiricalSummary::from_values(std::vector<double>(100, 7.0));
    CHECK_THROWS_AS(chi_square_two_sample(k1, k2), InsufficientData);
}

TEST_CASE("two-sample chi-square calibration under the null") {
    // With both samples from the same law the test must pass at alpha = 0.01
    // in at least 95 of 100 repetitions.
    RngStream rng(20260823);
    int passed = 0;
    for (int rep = 0; rep < 100; ++rep) {
        auto a = EmpiricalSummary::from_values(poisson_sample(rng, 2.0, 2000));
        auto b = EmpiricalSummary::from_values(poisson_sample(rng, 2.0, 2000));
        if (chi_square_two_sample(a, b).pass) ++passed;
    }
    CHECK(passed >= 95);
}

TEST_CASE("goodness-of-fit chi-square with implicit tail") {
    RngStream rng(808);
    const double lambda = 1.0;
    std::vector<std::uint64_t> counts(8, 0);
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const int k = poisson_draw(rng, lambda);
        if (k < 8) ++counts[k];
    }
    std::vector<double> probs;
    for (int k = 0; k < 8; ++k) probs.push_back(poisson_pmf(k, lambda));
    TestReport ok = chi_square_gof(counts, probs);
    CHECK(ok.pass);
    // Wrong rate must be detected.
    std::vector<double> wrong;
    for (int k = 0; k < 8; ++k) wrong.push_back(poisson_pmf(k, 1.25));
    TestReport bad = chi_square_gof(counts, wrong);
    CHECK_FALSE(bad.pass);
}

TEST_CASE("KS against Exp(1) accepts exponential data") {
    RngStream rng(321);
    std::vector<double> x(10000);
    std::vector<double> rates(10000);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double rate = (i % 2 == 0) ? 0.5 : 4.0;
        rates[i] = rate;
        x[i] = rng.exponential(rate);
    }
    TestReport ok = ks_exponential(x, rates);
    CHECK(ok.pass);
    // Common-rate overload with a misspecified rate must fail.
    std::vector<double> y(10000);
    for (double& v : y) v = rng.exponential(1.0);
    CHECK(ks_exponential(y, 1.0).pass);
    CHECK_FALSE(ks_exponential(y, 1.15).pass);
    CHECK_THROWS_AS(ks_exponential(std::vector<double>(5, 1.0), 1.0), InsufficientData);
}

TEST_CASE("KS exponential calibration under the null") {
    RngStream rng(11);
    int passed = 0;
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> x(10000);
        for (double& v : x) v = rng.exponential(1.0);
        if (ks_exponential(x, 1.0).pass) ++passed;
    }
    CHECK(passed >= 95);
}

TEST_CASE("KS uniform") {
    RngStream rng(99);
    std::vector<double> u(5000);
    for (double& v : u) v = rng.uniform01();
    CHECK(ks_uniform01(u).pass);
    std::vector<double> skewed(5000);
    for (double& v : skewed) {
        const double x = rng.uniform01();
        v = x * x;
    }
    CHECK_FALSE(ks_uniform01(skewed).pass);
}

TEST_CASE("two-sample KS") {
    RngStream rng(2024);
    std::vector<double> a(4000), b(4000), c(4000);
    for (double& v : a) v = rng.exponential(1.0);
    for (double& v : b) v = rng.exponential(1.0);
    for (double& v : c) v = rng.exponential(1.3);
    CHECK(ks_two_sample(a, b).pass);
    CHECK_FALSE(ks_two_sample(a, c).pass);
}

TEST_CASE("two-sample KS tolerates atoms in the common law") {
    // Laws with point masses (boundary lengths have atoms at 0, 1, 2, ...)
    // must not trip the test via tie runs in the merged walk.
    RngStream rng(515253);
    const auto draw = [&](double atom0, std::size_t n) {
        std::vector<double> out(n);
        for (double& v : out) {
            const double u = rng.uniform01();
            if (u < atom0) {
                v = 0.0;
            } else if (u < atom0 + 0.25) {
                v = 1.0;
            } else {
                v = 1.0 + rng.uniform01();
            }
        }
        return out;
    };
    CHECK(ks_two_sample(draw(0.25, 4000), draw(0.25, 4000)).pass);
    CHECK_FALSE(ks_two_sample(draw(0.25, 4000), draw(0.45, 4000)).pass);
    // Identical samples give a zero statistic even when every value ties.
    std::vector<double> same = draw(0.25, 500);
    TestReport r = ks_two_sample(same, same);
    CHECK(r.statistic == 0.0);
    CHECK(r.p_value == doctest::Approx(1.0));
}
