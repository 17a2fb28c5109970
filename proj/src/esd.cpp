#include "lightesd/esd.hpp"

#include "lightesd/robust_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

namespace lightesd {

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

// Regularized incomplete beta I_x(a, b); y = 1 - x is passed separately so
// callers can supply it without cancellation.
double incomplete_beta(double a, double b, double x, double y) {
    if (x <= 0.0) return 0.0;
    if (y <= 0.0) return 1.0;
    const double log_front =
        a * std::log(x) + b * std::log(y) - (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, y) / b;
}

double t_density(double x, double df) {
    const double log_c = std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) - 0.5 * std::log(df * std::numbers::pi);
    return std::exp(log_c - (df + 1.0) / 2.0 * std::log1p(x * x / df));
}

void require_iterable(std::size_t n, std::size_t a_max, const char* who) {
    if (a_max < 1) throw Error(ErrorCode::InvalidParam, std::string(who) + ": a_max must be at least 1");
    if (n < a_max + 3) {
        throw Error(ErrorCode::TooShort,
                    std::string(who) + ": need n >= a_max + 3 (n=" + std::to_string(n) +
                        ", a_max=" + std::to_string(a_max) + ")",
                    n);
    }
}

void finalize(EsdResult& result, EsdAcceptance acceptance) {
    std::size_t flagged = 0;
    if (acceptance == EsdAcceptance::UpToLastRejection) {
        for (std::size_t i = 0; i < result.stats.size(); ++i) {
            if (result.stats[i].rejected) flagged = i + 1;
        }
        for (std::size_t i = 0; i < flagged; ++i) result.stats[i].flagged = true;
    } else {
        for (auto& it : result.stats) it.flagged = it.rejected;
    }
    for (const auto& it : result.stats) {
        if (it.flagged) result.outlier_indices.push_back(it.candidate_index);
    }
}

struct Sample {
    double value;
    std::size_t index;
};

} // namespace

double t_upper_tail(double x, double df) {
    if (!(df > 0.0)) throw Error(ErrorCode::DomainError, "degrees of freedom must be positive");
    if (x < 0.0) return 1.0 - t_upper_tail(-x, df);
    const double denom = df + x * x;
    return 0.5 * incomplete_beta(df / 2.0, 0.5, df / denom, x * x / denom);
}

double t_quantile_upper(double q, double df) {
    if (!(q > 0.0 && q <= 0.5)) throw Error(ErrorCode::DomainError, "upper tail probability must lie in (0, 0.5]");
    if (!(df >= 1.0)) throw Error(ErrorCode::DomainError, "degrees of freedom must be at least 1");
    if (q == 0.5) return 0.0;

    // Bracket the root, then safeguarded Newton on the upper tail.
    double lo = 0.0;
    double hi = 1.0;
    while (t_upper_tail(hi, df) > q) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) return std::numeric_limits<double>::infinity();
    }
    double x = 0.5 * (lo + hi);
    for (int iter = 0; iter < 500; ++iter) {
        const double f = t_upper_tail(x, df) - q;
        if (f > 0.0) lo = x; else hi = x;
        if (f == 0.0) break;
        double next = x + f / t_density(x, df);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::fabs(next - x);
        x = next;
        if (step <= 1e-15 * std::max(1.0, x) || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
    }
    return x;
}

double t_quantile(double p, double df) {
    if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::DomainError, "probability must lie in (0, 1)");
    if (!(df >= 1.0)) throw Error(ErrorCode::DomainError, "degrees of freedom must be at least 1");
    if (p == 0.5) return 0.0;
    if (p > 0.5) return t_quantile_upper(1.0 - p, df);
    return -t_quantile_upper(p, df);
}

double esd_critical(std::size_t n, std::size_t l, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::DomainError, "alpha must lie in (0, 1)");
    if (n < l + 3) {
        throw Error(ErrorCode::DegenerateDf,
                    "n - l - 2 must be at least 1 (n=" + std::to_string(n) + ", l=" + std::to_string(l) + ")", l);
    }
    const double remaining = static_cast<double>(n - l);
    const double df = remaining - 2.0;
    const double t = t_quantile_upper(alpha / (2.0 * remaining), df);
    return t * (remaining - 1.0) / std::sqrt(remaining * (t * t + df));
}

double robust_scale_s(std::span<const double> x) {
    if (x.size() < 2) throw Error(ErrorCode::TooShort, "S needs at least 2 points", x.size());
    return kSnConsistency * sn_raw(x);
}

EsdResult classic_esd(std::span<const double> x, double alpha, std::size_t a_max, EsdAcceptance acceptance) {
    const std::size_t n = x.size();
    require_iterable(n, a_max, "classic_esd");
    std::vector<Sample> live;
    live.reserve(n);
    for (std::size_t i = 0; i < n; ++i) live.push_back({x[i], i});

    EsdResult result;
    for (std::size_t l = 0; l < a_max; ++l) {
        const double m = static_cast<double>(live.size());
        double mu = 0.0;
        for (const auto& s : live) mu += s.value;
        mu /= m;
        double ss = 0.0;
        for (const auto& s : live) ss += (s.value - mu) * (s.value - mu);
        const double sd = std::sqrt(ss / (m - 1.0));

        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t k = 0; k < live.size(); ++k) {
            const double dev = std::fabs(live[k].value - mu);
            if (dev > best || (dev == best && live[k].index < live[arg].index)) {
                best = dev;
                arg = k;
            }
        }
        EsdIteration it;
        it.l = l;
        it.candidate_index = live[arg].index;
        it.r_value = sd > 0.0 ? best / sd : 0.0;
        it.lambda_value = esd_critical(n, l, alpha);
        it.rejected = it.r_value > it.lambda_value;
        result.stats.push_back(it);
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(arg));
    }
    finalize(result, acceptance);
    return result;
}

EsdResult improved_esd(std::span<const double> x, double alpha, std::size_t a_max, EsdAcceptance acceptance) {
    const std::size_t n = x.size();
    require_iterable(n, a_max, "improved_esd");

    // Remaining points kept sorted by (value, index): the median and S come
    // straight from the order, and the farthest point from the median is a
    // run at either end.
    std::vector<Sample> live;
    live.reserve(n);
    for (std::size_t i = 0; i < n; ++i) live.push_back({x[i], i});
    std::sort(live.begin(), live.end(), [](const Sample& a, const Sample& b) {
        return a.value != b.value ? a.value < b.value : a.index < b.index;
    });
    std::vector<double> values(n);

    EsdResult result;
    for (std::size_t l = 0; l < a_max; ++l) {
        const std::size_t m = live.size();
        values.resize(m);
        for (std::size_t k = 0; k < m; ++k) values[k] = live[k].value;

        const double med = m % 2 == 1 ? values[m / 2] : (values[m / 2 - 1] + values[m / 2]) / 2.0;
        double scale = kSnConsistency * sn_raw_sorted(values);
        if (!(scale > 0.0)) scale = kMadConsistency * mad(values);

        // Candidate: largest |x - median|; the lowest index among ties is the
        // first element of the tied run at the low end or the high end.
        const double dev_low = std::fabs(values.front() - med);
        const double dev_high = std::fabs(values.back() - med);
        std::size_t low_pos = 0;
        std::size_t high_pos = m - 1;
        while (high_pos > 0 && values[high_pos - 1] == values.back()) --high_pos;
        std::size_t arg = 0;
        double dev = 0.0;
        if (dev_low > dev_high) {
            arg = low_pos;
            dev = dev_low;
        } else if (dev_high > dev_low) {
            arg = high_pos;
            dev = dev_high;
        } else {
            arg = live[low_pos].index < live[high_pos].index ? low_pos : high_pos;
            dev = dev_low;
        }

        EsdIteration it;
        it.l = l;
        it.candidate_index = live[arg].index;
        if (scale > 0.0) {
            it.r_value = dev / scale;
        } else {
            it.r_value = dev > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        }
        it.lambda_value = esd_critical(n, l, alpha);
        it.rejected = it.r_value > it.lambda_value;
        result.stats.push_back(it);
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(arg));
    }
    finalize(result, acceptance);
    return result;
}

} // namespace lightesd
