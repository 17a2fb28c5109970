#include "lightesd/robust_stats.hpp"

#include <algorithm>
#include <cmath>

namespace lightesd {

double median(std::span<const double> x) {
    if (x.empty()) return 0.0;
    std::vector<double> v(x.begin(), x.end());
    const std::size_t n = v.size();
    const std::size_t mid = n / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (n % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return (lower + upper) / 2.0;
}

double mad(std::span<const double> x) {
    const double m = median(x);
    std::vector<double> dev(x.size());
    std::transform(x.begin(), x.end(), dev.begin(), [m](double v) { return std::fabs(v - m); });
    return median(dev);
}

namespace {

// k-th smallest (1-based) of the union of two ascending sequences given by
// accessors, sizes m and p, with 1 <= k <= m + p.
template <typename A, typename B>
double kth_of_two(const A& a, std::size_t m, const B& b, std::size_t p, std::size_t k) {
    std::size_t lo = k > p ? k - p : 0;
    std::size_t hi = std::min(k, m);
    while (lo < hi) {
        const std::size_t i = (lo + hi) / 2;  // take i from a, k - i from b
        if (a(i) < b(k - i - 1)) {
            lo = i + 1;
        } else {
            hi = i;
        }
    }
    const std::size_t i = lo;
    const std::size_t j = k - i;
    if (i == 0) return b(j - 1);
    if (j == 0) return a(i - 1);
    return std::max(a(i - 1), b(j - 1));
}

} // namespace

double sn_raw_sorted(std::span<const double> s) {
    const std::size_t n = s.size();
    if (n < 2) return 0.0;
    std::vector<double> inner(n);
    const std::size_t r_hi = n / 2 + 1;             // 1-based rank of the upper middle
    const std::size_t r_lo = n % 2 == 1 ? r_hi : n / 2;
    for (std::size_t i = 0; i < n; ++i) {
        auto left = [&](std::size_t j) { return s[i] - s[i - 1 - j]; };
        auto right = [&](std::size_t j) { return s[i + 1 + j] - s[i]; };
        const std::size_t m = i;
        const std::size_t p = n - 1 - i;
        // Rank 1 of the full multiset is the zero distance to itself.
        auto order_stat = [&](std::size_t rank) {
            return rank == 1 ? 0.0 : kth_of_two(left, m, right, p, rank - 1);
        };
        const double hi = order_stat(r_hi);
        inner[i] = r_lo == r_hi ? hi : (order_stat(r_lo) + hi) / 2.0;
    }
    return median(inner);
}

double sn_raw(std::span<const double> x) {
    std::vector<double> s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    return sn_raw_sorted(s);
}

std::vector<double> running_median(std::span<const double> x, std::size_t half_width) {
    const std::size_t n = x.size();
    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t lo = t > half_width ? t - half_width : 0;
        const std::size_t hi = std::min(n - 1, t + half_width);
        out[t] = median(x.subspan(lo, hi - lo + 1));
    }
    return out;
}

double mean(std::span<const double> x) {
    if (x.empty()) return 0.0;
    double sum = 0.0;
    for (double v : x) sum += v;
    return sum / static_cast<double>(x.size());
}

double stddev(std::span<const double> x) {
    if (x.empty()) return 0.0;
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x.size()));
}

} // namespace lightesd
