#include "lightesd/decomposition.hpp"

#include "banded.hpp"
#include "lightesd/robust_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lightesd {

namespace {

// Over-relaxation factor for the z and u updates.
constexpr double kRelaxation = 1.6;

double soft_threshold(double v, double k) {
    if (v > k) return v - k;
    if (v < -k) return v + k;
    return 0.0;
}

double l1_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += std::fabs(x);
    return s;
}

void first_diff_into(std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i + 1] - x[i];
}

void second_diff_into(std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i + 2] - 2.0 * x[i + 1] + x[i];
}

// Robust scale with fallbacks so standardization never divides by zero.
double positive_scale(std::span<const double> x) {
    if (x.size() >= 2) {
        const double s = kSnConsistency * sn_raw(x);
        if (s > 0.0) return s;
        const double m = kMadConsistency * mad(x);
        if (m > 0.0) return m;
        const double sd = stddev(x);
        if (sd > 0.0) return sd;
    }
    return 1.0;
}

// Auto bandwidth: 2 * S of the given differences, 0 if they are all equal.
double auto_bandwidth(std::span<const double> diffs) {
    if (diffs.size() < 2) return 0.0;
    const double s = kSnConsistency * sn_raw(diffs);
    if (s > 0.0) return 2.0 * s;
    return 2.0 * kMadConsistency * mad(diffs);
}

// exp(-d^2 / (2 sigma^2)); sigma == 0 keeps only exact matches.
double gaussian_similarity(double d, double sigma) {
    if (sigma > 0.0) return std::exp(-(d * d) / (2.0 * sigma * sigma));
    return d == 0.0 ? 1.0 : 0.0;
}

// Shared ADMM state for the two penalty splits z1 = D1 x, z2 = D2 x.
struct PenaltySplit {
    std::vector<double> z1, z2, u1, u2, d1, d2;

    explicit PenaltySplit(std::size_t n)
        : z1(n > 1 ? n - 1 : 0), z2(n > 2 ? n - 2 : 0), u1(z1.size()), u2(z2.size()), d1(z1.size()),
          d2(z2.size()) {}

    void init(std::span<const double> x) {
        first_diff_into(x, z1);
        second_diff_into(x, z2);
        std::fill(u1.begin(), u1.end(), 0.0);
        std::fill(u2.begin(), u2.end(), 0.0);
    }

    // rhs += rho * (D1^T (z1 - u1) + D2^T (z2 - u2))
    void add_rhs(std::span<double> rhs, double rho) const {
        const std::size_t n = rhs.size();
        std::vector<double> v1(z1.size()), v2(z2.size()), tmp(n);
        for (std::size_t i = 0; i < v1.size(); ++i) v1[i] = z1[i] - u1[i];
        for (std::size_t i = 0; i < v2.size(); ++i) v2[i] = z2[i] - u2[i];
        if (!v1.empty()) {
            detail::first_difference_transpose(v1, tmp);
            for (std::size_t i = 0; i < n; ++i) rhs[i] += rho * tmp[i];
        }
        if (!v2.empty()) {
            detail::second_difference_transpose(v2, tmp);
            for (std::size_t i = 0; i < n; ++i) rhs[i] += rho * tmp[i];
        }
    }

    // z/u updates after the x-step; returns squared primal and dual residual norms.
    std::pair<double, double> update(std::span<const double> x, double lambda1, double lambda2, double rho) {
        first_diff_into(x, d1);
        second_diff_into(x, d2);
        std::vector<double> dz1(z1.size()), dz2(z2.size());
        double primal = 0.0;
        for (std::size_t i = 0; i < z1.size(); ++i) {
            const double old = z1[i];
            const double v = kRelaxation * d1[i] + (1.0 - kRelaxation) * old;
            z1[i] = soft_threshold(v + u1[i], lambda1 / rho);
            dz1[i] = z1[i] - old;
            u1[i] += v - z1[i];
            const double r = d1[i] - z1[i];
            primal += r * r;
        }
        for (std::size_t i = 0; i < z2.size(); ++i) {
            const double old = z2[i];
            const double v = kRelaxation * d2[i] + (1.0 - kRelaxation) * old;
            z2[i] = soft_threshold(v + u2[i], lambda2 / rho);
            dz2[i] = z2[i] - old;
            u2[i] += v - z2[i];
            const double r = d2[i] - z2[i];
            primal += r * r;
        }
        const std::size_t n = x.size();
        std::vector<double> s(n, 0.0), tmp(n);
        if (!dz1.empty()) {
            detail::first_difference_transpose(dz1, tmp);
            for (std::size_t i = 0; i < n; ++i) s[i] += tmp[i];
        }
        if (!dz2.empty()) {
            detail::second_difference_transpose(dz2, tmp);
            for (std::size_t i = 0; i < n; ++i) s[i] += tmp[i];
        }
        double dual = 0.0;
        for (double v : s) dual += rho * rho * v * v;
        return {primal, dual};
    }

    // Scaled duals must follow a change of rho.
    void rescale_duals(double factor) {
        for (double& v : u1) v *= factor;
        for (double& v : u2) v *= factor;
    }
};

// Residual balancing: keep the primal and dual residual norms within a
// factor of 10 of each other by doubling or halving rho.
double rebalanced_rho(double rho, double primal_sq, double dual_sq) {
    if (primal_sq > 100.0 * dual_sq) return 2.0 * rho;
    if (dual_sq > 100.0 * primal_sq) return 0.5 * rho;
    return rho;
}

detail::BandedSpd difference_gram(std::size_t n) {
    auto gram = detail::BandedSpd::second_difference_gram(n);
    gram.add_scaled(detail::BandedSpd::first_difference_gram(n), 1.0);
    return gram;
}

} // namespace

std::vector<double> first_difference_matrix_apply(std::span<const double> x) {
    if (x.size() < 2) throw Error(ErrorCode::TooShort, "first difference needs at least 2 points", x.size());
    std::vector<double> out(x.size() - 1);
    first_diff_into(x, out);
    return out;
}

std::vector<double> second_difference_matrix_apply(std::span<const double> x) {
    if (x.size() < 3) throw Error(ErrorCode::TooShort, "second difference needs at least 3 points", x.size());
    std::vector<double> out(x.size() - 2);
    second_diff_into(x, out);
    return out;
}

double huber_loss(std::span<const double> r, double gamma) {
    double sum = 0.0;
    for (double u : r) {
        const double a = std::fabs(u);
        sum += a <= gamma ? 0.5 * u * u : gamma * a - 0.5 * gamma * gamma;
    }
    return sum;
}

double robust_trend_objective(std::span<const double> y, std::span<const double> trend, double gamma,
                              double lambda1, double lambda2) {
    const std::size_t n = y.size();
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = y[i] - trend[i];
    std::vector<double> d1(n > 1 ? n - 1 : 0), d2(n > 2 ? n - 2 : 0);
    first_diff_into(trend, d1);
    second_diff_into(trend, d2);
    return huber_loss(r, gamma) + lambda1 * l1_norm(d1) + lambda2 * l1_norm(d2);
}

double lad_objective(std::span<const double> x, std::span<const double> g, double lambda1, double lambda2) {
    const std::size_t n = x.size();
    double fit = 0.0;
    for (std::size_t i = 0; i < n; ++i) fit += std::fabs(x[i] - g[i]);
    std::vector<double> d1(n > 1 ? n - 1 : 0), d2(n > 2 ? n - 2 : 0);
    first_diff_into(g, d1);
    second_diff_into(g, d2);
    return fit + lambda1 * l1_norm(d1) + lambda2 * l1_norm(d2);
}

double robust_noise_scale(std::span<const double> y) {
    const auto smooth = running_median(y, 2);
    std::vector<double> rough(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) rough[i] = y[i] - smooth[i];
    const double s = kSnConsistency * sn_raw(rough);
    if (s > 0.0) return s;
    return positive_scale(y);
}

RobustTrendFit robust_trend_fit(std::span<const double> y, const RobustTrendParams& params) {
    const std::size_t n = y.size();
    if (n < 3) throw Error(ErrorCode::TooShort, "robust_trend needs at least 3 points", n);

    SolverDiagnostics diag;
    diag.center = median(y);
    diag.scale = params.scale ? *params.scale : robust_noise_scale(y);
    diag.gamma = params.huber_gamma.value_or(1.345);
    const double gamma = diag.gamma;
    double rho = params.admm_rho;

    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) ys[i] = (y[i] - diag.center) / diag.scale;

    std::vector<double> t = running_median(ys, 3);
    PenaltySplit split(n);
    split.init(t);

    const auto gram = difference_gram(n);
    std::vector<double> best = t;
    double best_obj = robust_trend_objective(ys, t, gamma, params.lambda1, params.lambda2);
    diag.objective_history.push_back(best_obj);

    std::vector<double> weights(n), rhs(n);
    const double primal_norm = std::sqrt(static_cast<double>(split.z1.size() + split.z2.size()));
    const double dual_norm = std::sqrt(static_cast<double>(n));
    for (std::size_t it = 0; it < params.max_iters; ++it) {
        // Majorize the Huber term at the current residual.
        for (std::size_t i = 0; i < n; ++i) {
            const double a = std::fabs(ys[i] - t[i]);
            weights[i] = a <= gamma ? 1.0 : gamma / a;
        }
        detail::BandedSpd system(n, 2);
        system.add_scaled(gram, rho);
        system.add_diagonal(weights);
        if (!system.factor()) break;
        for (std::size_t i = 0; i < n; ++i) rhs[i] = weights[i] * ys[i];
        split.add_rhs(rhs, rho);
        system.solve(rhs);
        t = rhs;

        const auto [primal_sq, dual_sq] = split.update(t, params.lambda1, params.lambda2, rho);
        diag.iterations = it + 1;
        diag.primal_residual = std::sqrt(primal_sq) / primal_norm;
        diag.dual_residual = std::sqrt(dual_sq) / dual_norm;
        const double next_rho = rebalanced_rho(rho, primal_sq, dual_sq);
        split.rescale_duals(rho / next_rho);
        rho = next_rho;

        const double obj = robust_trend_objective(ys, t, gamma, params.lambda1, params.lambda2);
        if (obj <= best_obj) {
            best_obj = obj;
            best = t;
            diag.objective_history.push_back(obj);
        }
        if (diag.primal_residual < params.tol_primal && diag.dual_residual < params.tol_dual) {
            diag.converged = true;
            break;
        }
    }

    RobustTrendFit fit;
    fit.decomposition.trend.resize(n);
    for (std::size_t i = 0; i < n; ++i) fit.decomposition.trend[i] = diag.center + diag.scale * best[i];
    std::vector<double> yv(y.begin(), y.end());
    fit.decomposition.residual = form_residual(yv, fit.decomposition.trend, {});
    fit.diagnostics = std::move(diag);
    return fit;
}

Decomposition robust_trend(const TimeSeries& series, const RobustTrendParams& params) {
    validate(series);
    return robust_trend_fit(series.values, params).decomposition;
}

std::vector<double> bilateral_denoise(std::span<const double> y, const StlParams& params) {
    const std::size_t h = params.bilateral_half_width;
    if (h < 1) throw Error(ErrorCode::InvalidParam, "bilateral_half_width must be at least 1");
    if (!(params.bilateral_sigma_d > 0.0)) throw Error(ErrorCode::InvalidParam, "bilateral_sigma_d must be positive");
    const std::size_t n = y.size();
    double sigma_i = 0.0;
    if (params.bilateral_sigma_i) {
        sigma_i = *params.bilateral_sigma_i;
    } else if (n >= 3) {
        sigma_i = auto_bandwidth(first_difference_matrix_apply(y));
    }

    std::vector<double> spatial(h + 1);
    for (std::size_t k = 0; k <= h; ++k) {
        const double d = static_cast<double>(k);
        spatial[k] = std::exp(-(d * d) / (2.0 * params.bilateral_sigma_d * params.bilateral_sigma_d));
    }

    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t lo = t > h ? t - h : 0;
        const std::size_t hi = std::min(n - 1, t + h);
        double num = 0.0;
        double den = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) {
            const std::size_t dist = j > t ? j - t : t - j;
            const double w = spatial[dist] * gaussian_similarity(y[t] - y[j], sigma_i);
            num += w * (y[j] - y[t]);
            den += w;
        }
        // den >= 1 because the centre sample always has weight 1. Averaging
        // offsets from y[t] keeps flat stretches exactly flat.
        out[t] = y[t] + num / den;
    }
    return out;
}

std::vector<double> bilateral_denoise(const TimeSeries& series, const StlParams& params) {
    validate(series);
    return bilateral_denoise(std::span<const double>(series.values), params);
}

std::vector<double> seasonal_difference(std::span<const double> x, std::size_t period) {
    const std::size_t n = x.size();
    if (period < 2 || period > n / 2) {
        throw Error(ErrorCode::PeriodOutOfRange,
                    "period " + std::to_string(period) + " outside [2, " + std::to_string(n / 2) + "]", period);
    }
    std::vector<double> out(n - period);
    for (std::size_t t = 0; t < out.size(); ++t) out[t] = x[t + period] - x[t];
    return out;
}

LadFit lad_trend_fit(std::span<const double> x, const StlParams& params) {
    const std::size_t n = x.size();
    if (n == 0) throw Error(ErrorCode::TooShort, "lad_trend needs a nonempty input", 0);

    LadFit fit;
    auto& diag = fit.diagnostics;
    diag.center = median(x);
    diag.scale = positive_scale(x);
    double rho = params.lad_rho;
    const double l1 = params.lad_lambda1;
    const double l2 = params.lad_lambda2;

    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = (x[i] - diag.center) / diag.scale;

    // All three splits share rho, so (I + D1^T D1 + D2^T D2) is fixed; factor once.
    auto system = difference_gram(n);
    system.add_diagonal(std::vector<double>(n, 1.0));
    system.factor();

    std::vector<double> g = n >= 3 ? running_median(xs, 3) : xs;
    std::vector<double> z0 = g, u0(n, 0.0), rhs(n);
    PenaltySplit split(n);
    split.init(g);

    std::vector<double> best = g;
    double best_obj = lad_objective(xs, g, l1, l2);
    diag.objective_history.push_back(best_obj);

    const double primal_norm = std::sqrt(static_cast<double>(n + split.z1.size() + split.z2.size()));
    const double dual_norm = std::sqrt(static_cast<double>(n));
    for (std::size_t it = 0; it < params.lad_max_iters; ++it) {
        for (std::size_t i = 0; i < n; ++i) rhs[i] = z0[i] - u0[i];
        split.add_rhs(rhs, 1.0);
        system.solve(rhs);
        g = rhs;

        double primal0 = 0.0;
        double dual0 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double old = z0[i];
            const double v = kRelaxation * g[i] + (1.0 - kRelaxation) * old;
            // prox of |x - .|_1 / rho
            z0[i] = xs[i] + soft_threshold(v + u0[i] - xs[i], 1.0 / rho);
            u0[i] += v - z0[i];
            const double r = g[i] - z0[i];
            primal0 += r * r;
            dual0 += rho * rho * (z0[i] - old) * (z0[i] - old);
        }
        const auto [primal_sq, dual_sq] = split.update(g, l1, l2, rho);
        diag.iterations = it + 1;
        diag.primal_residual = std::sqrt(primal0 + primal_sq) / primal_norm;
        diag.dual_residual = std::sqrt(dual0 + dual_sq) / dual_norm;
        const double next_rho = rebalanced_rho(rho, primal0 + primal_sq, dual0 + dual_sq);
        for (double& v : u0) v *= rho / next_rho;
        split.rescale_duals(rho / next_rho);
        rho = next_rho;

        const double obj = lad_objective(xs, g, l1, l2);
        if (obj <= best_obj) {
            best_obj = obj;
            best = g;
            diag.objective_history.push_back(obj);
        }
        if (diag.primal_residual < params.lad_tol && diag.dual_residual < params.lad_tol) {
            diag.converged = true;
            break;
        }
    }

    fit.trend_difference.resize(n);
    for (std::size_t i = 0; i < n; ++i) fit.trend_difference[i] = diag.center + diag.scale * best[i];
    return fit;
}

std::vector<double> lad_trend(std::span<const double> diffed, const StlParams& params) {
    return lad_trend_fit(diffed, params).trend_difference;
}

std::vector<double> integrate_seasonal_difference(std::span<const double> g, std::size_t period, std::size_t n) {
    std::vector<double> trend(n, 0.0);
    if (g.empty() || n == 0) return trend;
    const double last = static_cast<double>(g.size() - 1);
    const double p = static_cast<double>(period);
    // g[s] spans steps s .. s+period-1, so it estimates the slope at step
    // s + (period-1)/2; step j therefore reads g at j - (period-1)/2.
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double pos = std::clamp(static_cast<double>(j) - (p - 1.0) / 2.0, 0.0, last);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, g.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        const double slope = ((1.0 - frac) * g[lo] + frac * g[hi]) / p;
        trend[j + 1] = trend[j] + slope;
    }
    return trend;
}

std::vector<double> nonlocal_seasonal(std::span<const double> x, std::size_t period, const StlParams& params) {
    const std::size_t n = x.size();
    if (period < 2 || period > n / 2) {
        throw Error(ErrorCode::PeriodOutOfRange,
                    "period " + std::to_string(period) + " outside [2, " + std::to_string(n / 2) + "]", period);
    }
    if (params.neighbor_cycles < 1) throw Error(ErrorCode::InvalidParam, "neighbor_cycles must be at least 1");
    const double sigma = params.seasonal_sigma ? *params.seasonal_sigma : auto_bandwidth(seasonal_difference(x, period));
    const std::size_t k = params.neighbor_cycles;

    std::vector<double> out(n);
    std::vector<double> same_phase;
    same_phase.reserve(2 * k + 1);
    for (std::size_t t = 0; t < n; ++t) {
        same_phase.clear();
        for (std::size_t m = k; m >= 1; --m) {
            if (t >= m * period) same_phase.push_back(x[t - m * period]);
        }
        same_phase.push_back(x[t]);
        for (std::size_t m = 1; m <= k; ++m) {
            if (t + m * period < n) same_phase.push_back(x[t + m * period]);
        }
        const double ref = median(same_phase);
        double num = 0.0;
        double den = 0.0;
        for (double v : same_phase) {
            const double w = gaussian_similarity(v - ref, sigma);
            num += w * v;
            den += w;
        }
        out[t] = den > 0.0 ? num / den : ref;
    }

    // Center each aligned full cycle; a trailing partial cycle uses the mean
    // of the last `period` samples.
    std::vector<double> centered(n);
    const std::size_t full = n / period;
    for (std::size_t c = 0; c < full; ++c) {
        const auto block = std::span<const double>(out).subspan(c * period, period);
        const double mu = mean(block);
        for (std::size_t i = 0; i < period; ++i) centered[c * period + i] = block[i] - mu;
    }
    if (full * period < n) {
        const double mu = mean(std::span<const double>(out).subspan(n - period, period));
        for (std::size_t t = full * period; t < n; ++t) centered[t] = out[t] - mu;
    }
    return centered;
}

Decomposition fast_robust_stl(const TimeSeries& series, const PeriodSet& periods, const StlParams& params) {
    validate(series);
    if (!periods.is_seasonal || periods.periods.empty()) {
        throw Error(ErrorCode::InvalidParam, "fast_robust_stl requires a seasonal period set");
    }
    const auto& y = series.values;
    const std::size_t n = y.size();

    std::vector<std::size_t> order = periods.periods;
    std::sort(order.begin(), order.end(), std::greater<>());
    order.erase(std::unique(order.begin(), order.end()), order.end());
    for (std::size_t p : order) {
        if (p < 2 || p > n / 2) {
            throw Error(ErrorCode::PeriodOutOfRange,
                        "period " + std::to_string(p) + " outside [2, " + std::to_string(n / 2) + "]", p);
        }
    }
    const std::size_t largest = order.front();

    const auto denoised = bilateral_denoise(std::span<const double>(y), params);
    const auto diffed = seasonal_difference(denoised, largest);
    const auto g = lad_trend(diffed, params);

    Decomposition d;
    d.trend = integrate_seasonal_difference(g, largest, n);
    std::vector<double> offset(n);
    for (std::size_t t = 0; t < n; ++t) offset[t] = y[t] - d.trend[t];
    const double level = median(offset);
    for (double& v : d.trend) v += level;

    const auto& source = params.seasonal_on_denoised ? denoised : y;
    std::vector<double> remainder(n);
    for (std::size_t t = 0; t < n; ++t) remainder[t] = source[t] - d.trend[t];
    for (std::size_t p : order) {
        auto s = nonlocal_seasonal(remainder, p, params);
        for (std::size_t t = 0; t < n; ++t) remainder[t] -= s[t];
        d.seasonals.push_back(std::move(s));
        d.periods.push_back(p);
    }
    d.residual = form_residual(y, d.trend, d.seasonals);
    return d;
}

Decomposition extract_residual(const TimeSeries& series, const PeriodSet& periods, const DetectorConfig& config) {
    if (!periods.is_seasonal) return robust_trend(series, config.robust_trend);
    return fast_robust_stl(series, periods, config.stl);
}

} // namespace lightesd
