#include "support.hpp"

#include "lightesd/esd.hpp"
#include "lightesd/random.hpp"
#include "oracles/brute_esd.hpp"
#include "oracles/t_integral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

using namespace lightesd;
using testing::error_code_of;

TEST_CASE("t quantile spot values") {
    CHECK(t_quantile(0.5, 1.0) == 0.0);
    CHECK(t_quantile(0.5, 37.0) == 0.0);
    CHECK(std::fabs(t_quantile(0.975, 10.0) - 2.2281) < 1e-3);
    CHECK(std::fabs(t_quantile(0.975, 10.0) - oracle::t_quantile(0.975, 10.0)) < 1e-9);
    // df = 1 is the Cauchy distribution: tan(pi (p - 1/2)).
    CHECK(std::fabs(t_quantile(0.95, 1.0) - 6.3138) < 1e-3);
    CHECK(std::fabs(t_quantile(0.95, 1.0) - std::tan(std::numbers::pi * 0.45)) < 1e-9);
    CHECK(t_quantile(0.025, 10.0) == doctest::Approx(-t_quantile(0.975, 10.0)).epsilon(1e-12));
}

TEST_CASE("t quantile closed forms for df 1 and 2") {
    for (double p : {0.6, 0.9, 0.99, 0.9999, 0.999999}) {
        CHECK(std::fabs(t_quantile(p, 1.0) - std::tan(std::numbers::pi * (p - 0.5))) <= 1e-9 * std::max(1.0, std::tan(std::numbers::pi * (p - 0.5))));
        const double two = (2.0 * p - 1.0) / std::sqrt(2.0 * p * (1.0 - p));
        CHECK(std::fabs(t_quantile(p, 2.0) - two) <= 1e-9 * std::max(1.0, two));
    }
}

TEST_CASE("t quantile against quadrature of the density") {
    for (double p : {0.9, 0.95, 0.975, 0.995, 0.999}) {
        for (double df : {1.0, 2.0, 5.0, 10.0, 30.0, 100.0, 1000.0}) {
            CAPTURE(p);
            CAPTURE(df);
            CHECK(std::fabs(t_quantile(p, df) - oracle::t_quantile(p, df)) <= 1e-6);
        }
    }
}

TEST_CASE("t upper tail round trip for tiny probabilities") {
    for (double df : {3.0, 48.0, 4998.0}) {
        for (double q : {1e-3, 1e-6, 1e-9}) {
            const double x = t_quantile_upper(q, df);
            CHECK(t_upper_tail(x, df) == doctest::Approx(q).epsilon(1e-9));
        }
    }
}

TEST_CASE("t quantile domain") {
    CHECK(error_code_of([] { t_quantile(0.0, 5.0); }) == ErrorCode::DomainError);
    CHECK(error_code_of([] { t_quantile(1.0, 5.0); }) == ErrorCode::DomainError);
    CHECK(error_code_of([] { t_quantile(0.9, 0.5); }) == ErrorCode::DomainError);
}

TEST_CASE("critical value") {
    // Rosner's 54-observation example: lambda_1 = 3.158.
    CHECK(std::fabs(esd_critical(54, 0, 0.05) - 3.16) <= 0.02);
    CHECK(esd_critical(54, 0, 0.05) == doctest::Approx(oracle::critical_value(54, 0, 0.05)).epsilon(1e-10));

    for (std::size_t n : {10u, 54u, 500u}) {
        double prev = esd_critical(n, 3, 0.0001);
        for (double alpha : {0.001, 0.01, 0.05, 0.1, 0.3}) {
            const double lam = esd_critical(n, 3, alpha);
            CHECK(lam < prev);
            prev = lam;
        }
    }

    CHECK_NOTHROW(esd_critical(20, 17, 0.05));  // df = 1
    try {
        esd_critical(20, 18, 0.05);
        FAIL("df = 0 accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateDf);
    }
}

TEST_CASE("robust scale S") {
    CHECK(robust_scale_s(std::vector<double>{0, 0, 0, 0}) == 0.0);
    CHECK(robust_scale_s(std::vector<double>{1, 2, 3, 4, 5}) == doctest::Approx(1.1926).epsilon(1e-12));
    CHECK(error_code_of([] { robust_scale_s(std::vector<double>{1.0}); }) == ErrorCode::TooShort);
    const auto z = testing::white_noise(10000, 5);
    const double s = robust_scale_s(z);
    CHECK(s >= 0.95);
    CHECK(s <= 1.05);
}

TEST_CASE("classic ESD keeps quiet on clean normal samples") {
    int quiet = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto x = testing::white_noise(10, 1000 + seed);
        if (classic_esd(x, 0.001, 1).outlier_indices.empty()) ++quiet;
    }
    CHECK(quiet >= 99);
}

TEST_CASE("classic ESD finds a dominant value first") {
    Rng rng(3);
    std::vector<double> x(20);
    for (auto& v : x) v = rng.uniform01();
    x[13] = 100.0;
    const auto r = classic_esd(x, 0.05, 3);
    CHECK(r.stats[0].candidate_index == 13);
    CHECK(r.stats[0].rejected);
}

TEST_CASE("classic ESD symmetric pair, statistics recomputed by hand") {
    std::vector<double> x(20, 0.0);
    x[4] = 100.0;
    x[15] = -100.0;
    const auto r = classic_esd(x, 0.05, 3);
    REQUIRE(r.stats.size() == 3);
    CHECK(r.stats[0].candidate_index == 4);  // tie goes to the lower index
    CHECK(r.stats[1].candidate_index == 15);
    CHECK(r.stats[0].rejected);
    CHECK(r.stats[1].rejected);

    // Iteration 0: mean 0, sample sd sqrt(20000 / 19).
    CHECK(r.stats[0].r_value == doctest::Approx(100.0 / std::sqrt(20000.0 / 19.0)).epsilon(1e-12));
    // Iteration 1: one -100 among 19 values.
    const double mu = -100.0 / 19.0;
    const double ss = (100.0 + mu) * (100.0 + mu) + 18.0 * mu * mu;
    CHECK(r.stats[1].r_value == doctest::Approx((100.0 + mu) / std::sqrt(ss / 18.0)).epsilon(1e-12));
    CHECK(r.stats[1].lambda_value == doctest::Approx(oracle::critical_value(20, 1, 0.05)).epsilon(1e-10));
}

TEST_CASE("improved ESD on constant data flags nothing") {
    const std::vector<double> x(30, 4.25);
    const auto r = improved_esd(x, 0.05, 3);
    CHECK(r.outlier_indices.empty());
    for (const auto& it : r.stats) CHECK(it.r_value == 0.0);
}

TEST_CASE("improved ESD finds a single huge value, matching the brute-force oracle") {
    auto x = testing::white_noise(100, 77);
    x[42] = 1e6;
    const auto r = improved_esd(x, 0.05, 10);
    CHECK(std::find(r.outlier_indices.begin(), r.outlier_indices.end(), 42u) != r.outlier_indices.end());
    CHECK(r.stats[0].candidate_index == 42);
    const auto steps = oracle::robust_esd(x, 0.05, 10);
    for (std::size_t l = 0; l < steps.size(); ++l) {
        CHECK(r.stats[l].candidate_index == steps[l].candidate);
        CHECK(r.stats[l].r_value == steps[l].r);
        CHECK(r.stats[l].rejected == steps[l].rejected);
    }
}

TEST_CASE("breakdown: 49 extremes among 51 normal values") {
    auto x = testing::white_noise(51, 2718);
    for (int i = 0; i < 49; ++i) x.push_back(1e9);
    const auto robust = improved_esd(x, 0.05, 50);
    const auto classic = classic_esd(x, 0.05, 50);
    auto planted = [](const EsdResult& r) {
        return std::count_if(r.outlier_indices.begin(), r.outlier_indices.end(), [](std::size_t i) { return i >= 51; });
    };
    CHECK(planted(robust) == 49);
    CHECK(planted(classic) < 49);
}

TEST_CASE("both scales zero: points off the median score infinity") {
    std::vector<double> x(20, 1.0);
    x[7] = 5.0;
    const auto r = improved_esd(x, 0.05, 2);
    CHECK(r.stats[0].candidate_index == 7);
    CHECK(std::isinf(r.stats[0].r_value));
    CHECK(r.outlier_indices == std::vector<std::size_t>{7});
}

TEST_CASE("preconditions") {
    const std::vector<double> x(5, 0.0);
    CHECK(error_code_of([&] { improved_esd(x, 0.05, 3); }) == ErrorCode::TooShort);
    CHECK(error_code_of([&] { classic_esd(x, 0.05, 3); }) == ErrorCode::TooShort);
    CHECK_NOTHROW(improved_esd(x, 0.05, 2));
    CHECK(error_code_of([&] { improved_esd(x, 0.05, 0); }) == ErrorCode::InvalidParam);
}

TEST_CASE("acceptance modes") {
    // Iteration verdicts R > lambda: a moderate value hides behind a masking
    // pair so the verdicts are not a prefix.
    Rng rng(5);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        auto x = testing::white_noise(40, 500 + trial);
        x[rng.below(40)] += rng.uniform(0.0, 8.0);
        x[rng.below(40)] -= rng.uniform(0.0, 8.0);
        const auto per = improved_esd(x, 0.05, 8, EsdAcceptance::PerIteration);
        const auto rosner = improved_esd(x, 0.05, 8, EsdAcceptance::UpToLastRejection);

        std::vector<std::size_t> expected_per, expected_rosner;
        std::size_t last = 0;
        for (std::size_t l = 0; l < per.stats.size(); ++l) {
            if (per.stats[l].rejected) {
                expected_per.push_back(per.stats[l].candidate_index);
                last = l + 1;
            }
        }
        for (std::size_t l = 0; l < last; ++l) expected_rosner.push_back(per.stats[l].candidate_index);
        CHECK(per.outlier_indices == expected_per);
        CHECK(rosner.outlier_indices == expected_rosner);
        CHECK(per.outlier_indices.size() <= 8);
        const std::set<std::size_t> unique(rosner.outlier_indices.begin(), rosner.outlier_indices.end());
        CHECK(unique.size() == rosner.outlier_indices.size());
        ++checked;
    }
    CHECK(checked == 300);
}

TEST_CASE("oracle equivalence on small grids") {
    const std::vector<double> grid{-3, -1, 0, 1, 3, 10};
    std::size_t cases = 0;
    for (std::size_t n = 4; n <= 5; ++n) {
        std::vector<std::size_t> digits(n, 0);
        while (true) {
            std::vector<double> x(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = grid[digits[i]];
            const std::size_t a_max = n - 3;
            const auto got = improved_esd(x, 0.05, a_max);
            const auto want = oracle::robust_esd(x, 0.05, a_max);
            for (std::size_t l = 0; l < a_max; ++l) {
                REQUIRE(got.stats[l].candidate_index == want[l].candidate);
                REQUIRE(got.stats[l].rejected == want[l].rejected);
            }
            ++cases;
            std::size_t k = 0;
            while (k < n && ++digits[k] == grid.size()) digits[k++] = 0;
            if (k == n) break;
        }
    }
    CHECK(cases == 6 * 6 * 6 * 6 + 6 * 6 * 6 * 6 * 6);
}

TEST_CASE("affine invariance of the decision") {
    Rng rng(31337);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 20 + rng.below(60);
        auto x = testing::white_noise(n, 4000 + trial);
        for (int k = 0; k < 3; ++k) x[rng.below(n)] += rng.uniform(-10.0, 10.0);
        const double a = std::exp(rng.uniform(std::log(0.01), std::log(100.0)));
        const double b = rng.uniform(-1e6, 1e6);
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b;
        const std::size_t a_max = 1 + rng.below(n / 4);
        CHECK(improved_esd(x, 0.05, a_max).outlier_indices == improved_esd(y, 0.05, a_max).outlier_indices);
    }
}

TEST_CASE("smaller alpha keeps a subset when the candidates agree") {
    for (int trial = 0; trial < 200; ++trial) {
        auto x = testing::white_noise(60, 9000 + trial);
        x[trial % 60] += 6.0;
        x[(trial * 7) % 60] -= 4.0;
        const auto loose = improved_esd(x, 0.05, 6);
        const auto strict = improved_esd(x, 0.001, 6);
        bool same = true;
        for (std::size_t l = 0; l < 6; ++l) same = same && loose.stats[l].candidate_index == strict.stats[l].candidate_index;
        REQUIRE(same);  // candidates never depend on alpha
        const std::set<std::size_t> big(loose.outlier_indices.begin(), loose.outlier_indices.end());
        for (auto i : strict.outlier_indices) CHECK(big.count(i) == 1);
    }
}
