#pragma once

// Direct O(n^2) discrete Fourier transform, used to cross-check the FFT path.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace oracle {

// |X_k|^2 for k = 0..len/2 of x zero-padded to `len` samples.
inline std::vector<double> power_spectrum(const std::vector<double>& x, std::size_t len) {
    std::vector<double> out(len / 2 + 1);
    for (std::size_t k = 0; k < out.size(); ++k) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t t = 0; t < x.size(); ++t) {
            const std::size_t phase = (k * t) % len;
            const double a = 2.0 * std::numbers::pi * static_cast<double>(phase) / static_cast<double>(len);
            re += x[t] * std::cos(a);
            im -= x[t] * std::sin(a);
        }
        out[k] = re * re + im * im;
    }
    return out;
}

// Frequency (cycles per sample) of the strongest nonzero bin of the
// mean-removed series, over bins whose index lies in [k_lo, k_hi].
inline double dominant_frequency(const std::vector<double>& x, std::size_t k_lo, std::size_t k_hi) {
    double mu = 0.0;
    for (double v : x) mu += v;
    mu /= static_cast<double>(x.size());
    std::vector<double> centered(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) centered[i] = x[i] - mu;
    const auto p = power_spectrum(centered, x.size());
    std::size_t best = k_lo;
    for (std::size_t k = k_lo; k <= k_hi && k < p.size(); ++k) {
        if (p[k] > p[best]) best = k;
    }
    return static_cast<double>(best) / static_cast<double>(x.size());
}

} // namespace oracle
