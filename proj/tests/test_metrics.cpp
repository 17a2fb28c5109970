#include "support.hpp"

#include "lightesd/metrics.hpp"
#include "lightesd/random.hpp"

#include <cmath>

using namespace lightesd;
using testing::error_code_of;

using Idx = std::vector<std::size_t>;

TEST_CASE("precision, recall and F1 by exact index") {
    const EvalScores s = prf1(Idx{1, 2, 3}, Idx{2, 3, 4});
    CHECK(s.tp == 2);
    CHECK(s.fp == 1);
    CHECK(s.fn == 1);
    CHECK(s.precision == doctest::Approx(2.0 / 3.0));
    CHECK(s.recall == doctest::Approx(2.0 / 3.0));
    CHECK(s.f1 == doctest::Approx(2.0 / 3.0));

    const EvalScores same = prf1(Idx{5, 9}, Idx{9, 5});
    CHECK(same.precision == 1.0);
    CHECK(same.recall == 1.0);
    CHECK(same.f1 == 1.0);

    const EvalScores none = prf1(Idx{}, Idx{4});
    CHECK(none.recall == 0.0);
    CHECK(none.precision == 0.0);
    CHECK(none.f1 == 0.0);

    const EvalScores quiet = prf1(Idx{}, Idx{});
    CHECK(quiet.precision == 1.0);
    CHECK(quiet.recall == 1.0);

    const EvalScores dup = prf1(Idx{2, 2, 3}, Idx{2});
    CHECK(dup.tp == 1);
    CHECK(dup.fp == 1);
}

TEST_CASE("swapping prediction and truth swaps precision and recall") {
    Rng rng(31, 0);
    for (int k = 0; k < 300; ++k) {
        Idx a;
        Idx b;
        for (int i = 0; i < 20; ++i) {
            if (rng.below(3) == 0) a.push_back(i);
            if (rng.below(3) == 0) b.push_back(i);
        }
        const EvalScores x = prf1(a, b);
        const EvalScores y = prf1(b, a);
        CHECK(x.precision == y.recall);
        CHECK(x.recall == y.precision);
        CHECK(x.f1 == doctest::Approx(y.f1));
    }
}

TEST_CASE("windowed matching") {
    const EvalScores w = prf1_window(Idx{10, 30}, Idx{11, 50}, 1);
    CHECK(w.tp == 1);
    CHECK(w.fp == 1);
    CHECK(w.fn == 1);
    const EvalScores exact = prf1_window(Idx{1, 2, 3}, Idx{2, 3, 4}, 0);
    CHECK(exact.tp == 2);
    CHECK(prf1_window(Idx{0}, Idx{3}, 3).f1 == 1.0);
}

TEST_CASE("generality") {
    const Generality flat = generality(std::vector<double>{0.8, 0.8, 0.8});
    CHECK(flat.mean == doctest::Approx(0.8));
    CHECK(flat.cv == doctest::Approx(0.0));

    const Generality one = generality(std::vector<double>{0.79, 0.81, 0.80, 0.84});
    CHECK(std::fabs(one.mean - 0.81) <= 0.01);
    CHECK(std::fabs(one.cv - 0.02) <= 0.01);
    CHECK(one.cv == doctest::Approx(std::sqrt(0.0014 / 4.0) / 0.81).epsilon(1e-9));

    const Generality two = generality(std::vector<double>{0.83, 0.96, 0.84, 0.86});
    CHECK(std::fabs(two.mean - 0.87) <= 0.01);
    CHECK(std::fabs(two.cv - 0.06) <= 0.01);

    CHECK(error_code_of([] { generality(std::vector<double>{}); }) == ErrorCode::ZeroMean);
    CHECK(error_code_of([] { generality(std::vector<double>{0.0, 0.0}); }) == ErrorCode::ZeroMean);
}

TEST_CASE("latency normalization") {
    const auto n = normalize_latency(std::vector<double>{0.19, 0.24, 1.34});
    CHECK(n[0] == 0.0);
    CHECK(n[1] == doctest::Approx(0.05 / 1.15));
    CHECK(std::fabs(n[1] - 0.0435) <= 1e-4);
    CHECK(n[2] == 1.0);
    CHECK(normalize_latency(std::vector<double>{0.24}) == std::vector<double>{0.0});
    CHECK(normalize_latency(std::vector<double>{3, 3, 3}) == std::vector<double>{0, 0, 0});
}

TEST_CASE("ADCS extremes and the worked example") {
    AdcsInput best;
    best.f1 = 1.0;
    CHECK(adcomp_score(best) == 1.0);

    AdcsInput worst;
    worst.cv = worst.latency_norm = worst.cpu_frac = worst.ram_frac = worst.power_frac = 1.0;
    CHECK(adcomp_score(worst) == 0.0);

    AdcsInput ex;
    ex.f1 = 0.87;
    ex.cv = 0.06;
    ex.latency_norm = 0.0;
    ex.cpu_frac = 0.0547;
    ex.ram_frac = 0.0329;
    ex.power_frac = 0.143;
    CHECK(std::fabs(adcomp_score(ex) - 0.930) <= 0.002);
    CHECK(adcomp_score(ex) == doctest::Approx((0.87 + 0.94 + 1.0 + 0.9453 + 0.9671 + 0.857) / 6.0));

    // cv above 1 is clamped.
    AdcsInput wide = ex;
    wide.cv = 7.0;
    AdcsInput capped = ex;
    capped.cv = 1.0;
    CHECK(adcomp_score(wide) == adcomp_score(capped));
}

TEST_CASE("ADCS input checks") {
    AdcsInput in;
    in.weights = {0, 0, 0, 0, 0, 0};
    CHECK(error_code_of([&] { adcomp_score(in); }) == ErrorCode::WeightSumZero);
    in.weights = {1, 1, -1, 1, 1, 1};
    CHECK(error_code_of([&] { adcomp_score(in); }) == ErrorCode::InvalidParam);
    in = AdcsInput{};
    in.f1 = 1.2;
    CHECK(error_code_of([&] { adcomp_score(in); }) == ErrorCode::InvalidParam);
    in = AdcsInput{};
    in.cpu_frac = -0.1;
    CHECK(error_code_of([&] { adcomp_score(in); }) == ErrorCode::InvalidParam);
}

TEST_CASE("ADCS properties on random inputs") {
    Rng rng(77, 0);
    for (int k = 0; k < 1000; ++k) {
        AdcsInput in;
        in.f1 = rng.uniform01();
        in.cv = rng.uniform(0.0, 1.5);
        in.latency_norm = rng.uniform01();
        in.cpu_frac = rng.uniform01();
        in.ram_frac = rng.uniform01();
        in.power_frac = rng.uniform01();
        for (double& w : in.weights) w = rng.uniform(0.0, 3.0);
        const double base = adcomp_score(in);
        CHECK(base >= 0.0);
        CHECK(base <= 1.0);

        AdcsInput scaled = in;
        const double factor = rng.uniform(0.01, 100.0);
        for (double& w : scaled.weights) w *= factor;
        CHECK(adcomp_score(scaled) == doctest::Approx(base).epsilon(1e-12));

        AdcsInput up = in;
        up.f1 = in.f1 + (1.0 - in.f1) * rng.uniform01();
        CHECK(adcomp_score(up) >= base - 1e-15);

        double AdcsInput::*costs[] = {&AdcsInput::cv, &AdcsInput::latency_norm, &AdcsInput::cpu_frac,
                                      &AdcsInput::ram_frac, &AdcsInput::power_frac};
        for (auto member : costs) {
            AdcsInput worse = in;
            const double limit = member == &AdcsInput::cv ? 1.5 : 1.0;
            worse.*member = in.*member + (limit - in.*member) * rng.uniform01();
            CHECK(adcomp_score(worse) <= base + 1e-15);
        }
    }
}
