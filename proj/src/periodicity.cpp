#include "lightesd/periodicity.hpp"

#include "lightesd/random.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace lightesd {

namespace {

// FFTW's planner is not re-entrant; execution on a finished plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

class SpectrumWorkspace {
public:
    SpectrumWorkspace(std::size_t n, std::size_t segment_length, const WelchParams& params)
        : n_(n), seg_(segment_length), nfft_(welch_fft_length(params, segment_length)) {
        if (seg_ > n_) {
            throw Error(ErrorCode::SegmentTooLong,
                        "segment_length " + std::to_string(seg_) + " exceeds series length " + std::to_string(n_));
        }
        const auto overlap = static_cast<std::size_t>(std::floor(params.overlap_frac * static_cast<double>(seg_)));
        step_ = seg_ - overlap;
        segments_ = (n_ - seg_) / step_ + 1;

        window_.resize(seg_);
        const double half = (static_cast<double>(seg_) + 1.0) / 2.0;
        const double center = (static_cast<double>(seg_) - 1.0) / 2.0;
        window_power_ = 0.0;
        for (std::size_t j = 0; j < seg_; ++j) {
            const double t = (static_cast<double>(j) - center) / half;
            window_[j] = params.window == WindowKind::Quadratic ? 1.0 - t * t : 1.0 - std::fabs(t);
            window_power_ += window_[j] * window_[j];
        }

        first_bin_ = (nfft_ + seg_ - 1) / seg_;  // frequencies below 1/L are not resolved
        last_bin_ = nfft_ / 2;

        in_ = fftw_alloc_real(nfft_);
        out_ = fftw_alloc_complex(nfft_ / 2 + 1);
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(nfft_), in_, out_, FFTW_ESTIMATE);
    }

    ~SpectrumWorkspace() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
        fftw_free(in_);
        fftw_free(out_);
    }

    SpectrumWorkspace(const SpectrumWorkspace&) = delete;
    SpectrumWorkspace& operator=(const SpectrumWorkspace&) = delete;

    std::size_t bins() const { return last_bin_ - first_bin_ + 1; }

    double frequency(std::size_t i) const {
        return static_cast<double>(first_bin_ + i) / static_cast<double>(nfft_);
    }

    // Averaged one-sided PSD over the kept bins, written into psd.
    void estimate(std::span<const double> x, std::vector<double>& psd) {
        psd.assign(bins(), 0.0);
        for (std::size_t k = 0; k < segments_; ++k) {
            const std::size_t start = k * step_;
            double mu = 0.0;
            for (std::size_t j = 0; j < seg_; ++j) mu += x[start + j];
            mu /= static_cast<double>(seg_);
            for (std::size_t j = 0; j < seg_; ++j) in_[j] = (x[start + j] - mu) * window_[j];
            std::fill(in_ + seg_, in_ + nfft_, 0.0);
            fftw_execute(plan_);
            for (std::size_t b = first_bin_; b <= last_bin_; ++b) {
                const double re = out_[b][0];
                const double im = out_[b][1];
                const double one_sided = (b == nfft_ / 2) ? 1.0 : 2.0;
                psd[b - first_bin_] += one_sided * (re * re + im * im);
            }
        }
        const double scale = 1.0 / (window_power_ * static_cast<double>(segments_));
        for (double& p : psd) p *= scale;
    }

private:
    std::size_t n_;
    std::size_t seg_;
    std::size_t nfft_;
    std::size_t step_ = 1;
    std::size_t segments_ = 1;
    std::size_t first_bin_ = 1;
    std::size_t last_bin_ = 1;
    std::vector<double> window_;
    double window_power_ = 1.0;
    double* in_ = nullptr;
    fftw_complex* out_ = nullptr;
    fftw_plan plan_ = nullptr;
};

std::size_t order_statistic_rank(double percentile, std::size_t count) {
    // 1-based rank ceil(p * count); the epsilon absorbs 0.99 * 100 = 99.000...01.
    auto rank = static_cast<std::size_t>(std::ceil(percentile * static_cast<double>(count) - 1e-9));
    return std::clamp<std::size_t>(rank, 1, count);
}

} // namespace

std::vector<std::size_t> PeriodSet::reported() const {
    if (!is_seasonal) return {kNonseasonalPeriod};
    return periods;
}

std::size_t welch_segment_length(const WelchParams& params, std::size_t n) {
    if (params.segment_length) return *params.segment_length;
    return std::min<std::size_t>(256, n / 2);
}

std::size_t welch_fft_length(const WelchParams& params, std::size_t segment_length) {
    if (params.fft_length) return std::max(*params.fft_length, segment_length);
    std::size_t nfft = 1;
    while (nfft < 8 * segment_length) nfft <<= 1;
    return nfft;
}

Periodogram welch_psd(std::span<const double> values, const WelchParams& params) {
    const std::size_t seg = welch_segment_length(params, values.size());
    if (seg < 4) throw Error(ErrorCode::InvalidParam, "welch segment_length must be at least 4");
    if (!(params.overlap_frac >= 0.0 && params.overlap_frac <= 0.5)) {
        throw Error(ErrorCode::InvalidParam, "welch overlap_frac must lie in [0, 0.5]");
    }
    SpectrumWorkspace ws(values.size(), seg, params);
    Periodogram pg;
    ws.estimate(values, pg.psd);
    pg.frequencies.resize(ws.bins());
    for (std::size_t i = 0; i < ws.bins(); ++i) pg.frequencies[i] = ws.frequency(i);
    return pg;
}

Periodogram welch_psd(const TimeSeries& series, const WelchParams& params) {
    validate(series);
    return welch_psd(std::span<const double>(series.values), params);
}

std::vector<double> permutation_maxima(std::span<const double> values, const DetectorConfig& config) {
    const std::size_t seg = welch_segment_length(config.welch, values.size());
    SpectrumWorkspace ws(values.size(), seg, config.welch);
    std::vector<double> shuffled(values.begin(), values.end());
    std::vector<double> psd;
    std::vector<double> maxima;
    maxima.reserve(config.n_permutations);
    for (std::size_t i = 1; i <= config.n_permutations; ++i) {
        // Each shuffle starts from the original order so permutation i is
        // independent of the others.
        std::copy(values.begin(), values.end(), shuffled.begin());
        Rng rng(config.seed, i);
        rng.shuffle(std::span<double>(shuffled));
        ws.estimate(shuffled, psd);
        maxima.push_back(*std::max_element(psd.begin(), psd.end()));
    }
    std::sort(maxima.begin(), maxima.end());
    return maxima;
}

double permutation_threshold(const TimeSeries& series, const DetectorConfig& config) {
    validate(series);
    validate(config);
    const auto maxima = permutation_maxima(series.values, config);
    return maxima[order_statistic_rank(config.psd_percentile, maxima.size()) - 1];
}

PeriodSet detect_periods(const TimeSeries& series, const DetectorConfig& config) {
    validate(series);
    validate(config);
    const std::size_t n = series.size();

    PeriodSet out;
    out.threshold = permutation_threshold(series, config);
    const Periodogram pg = welch_psd(std::span<const double>(series.values), config.welch);
    const auto& pow = pg.psd;

    // period -> strongest accepted PSD
    std::map<std::size_t, double> accepted;
    double last_accepted_psd = -1.0;
    for (std::size_t j = 1; j + 1 < pow.size(); ++j) {
        if (!(pow[j] > out.threshold && pow[j] > pow[j - 1] && pow[j] > pow[j + 1])) continue;
        ++out.local_maxima_above_threshold;
        if (!config.accept_all_peaks && !(pow[j] > last_accepted_psd)) continue;
        const auto period = static_cast<std::size_t>(std::floor(1.0 / pg.frequencies[j]));
        if (period < 2 || period > n / 2) continue;
        last_accepted_psd = pow[j];
        auto [it, inserted] = accepted.try_emplace(period, pow[j]);
        if (!inserted) it->second = std::max(it->second, pow[j]);
    }

    std::vector<std::pair<double, std::size_t>> ranked;
    for (const auto& [period, psd] : accepted) ranked.emplace_back(psd, period);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second > b.second;
    });
    for (const auto& [psd, period] : ranked) {
        out.periods.push_back(period);
        out.peak_psd.push_back(psd);
    }
    out.is_seasonal = !out.periods.empty();
    return out;
}

} // namespace lightesd
