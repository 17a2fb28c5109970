#pragma once

#include "lightesd/core.hpp"
#include "lightesd/random.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace testing {

inline std::vector<double> white_noise(std::size_t n, std::uint64_t seed, double sd = 1.0) {
    lightesd::Rng rng(seed, 900);
    std::vector<double> v(n);
    for (auto& x : v) x = sd * rng.normal();
    return v;
}

inline std::vector<double> sinusoid(std::size_t n, double period, double amplitude = 1.0, double phase = 0.0) {
    std::vector<double> v(n);
    for (std::size_t t = 0; t < n; ++t) {
        v[t] = amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / period + phase);
    }
    return v;
}

inline std::vector<double> plus(std::vector<double> a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

template <typename Fn>
lightesd::ErrorCode error_code_of(Fn&& fn) {
    try {
        fn();
    } catch (const lightesd::Error& e) {
        return e.code();
    }
    FAIL("expected lightesd::Error");
    return lightesd::ErrorCode::InvalidParam;
}

} // namespace testing
