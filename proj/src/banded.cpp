#include "banded.hpp"

#include <algorithm>
#include <cmath>

namespace lightesd::detail {

BandedSpd::BandedSpd(std::size_t n, std::size_t bandwidth)
    : n_(n), bw_(bandwidth), band_(n * (bandwidth + 1), 0.0) {}

void BandedSpd::add_diagonal(std::span<const double> d) {
    for (std::size_t i = 0; i < n_; ++i) at(i, 0) += d[i];
}

void BandedSpd::add_scaled(const BandedSpd& other, double scale) {
    const std::size_t bw = std::min(bw_, other.bw_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t k = 0; k <= bw && k <= i; ++k) at(i, k) += scale * other.at(i, k);
    }
}

bool BandedSpd::factor() {
    // Row-oriented banded Cholesky: L(i, i-k) overwrites at(i, k).
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t kmax = std::min(bw_, i);
        for (std::size_t k = kmax; k >= 1; --k) {
            const std::size_t j = i - k;
            double sum = at(i, k);
            // sum over columns c < j shared by rows i and j within the band
            for (std::size_t m = k + 1; m <= kmax; ++m) {
                const std::size_t c = i - m;
                if (j - c > bw_) continue;
                sum -= at(i, m) * at(j, j - c);
            }
            at(i, k) = sum / at(j, 0);
        }
        double diag = at(i, 0);
        for (std::size_t k = 1; k <= kmax; ++k) diag -= at(i, k) * at(i, k);
        if (!(diag > 0.0)) return false;
        at(i, 0) = std::sqrt(diag);
    }
    return true;
}

void BandedSpd::solve(std::span<double> b) const {
    for (std::size_t i = 0; i < n_; ++i) {
        double sum = b[i];
        const std::size_t kmax = std::min(bw_, i);
        for (std::size_t k = 1; k <= kmax; ++k) sum -= at(i, k) * b[i - k];
        b[i] = sum / at(i, 0);
    }
    for (std::size_t ii = n_; ii-- > 0;) {
        double sum = b[ii];
        for (std::size_t k = 1; k <= bw_ && ii + k < n_; ++k) sum -= at(ii + k, k) * b[ii + k];
        b[ii] = sum / at(ii, 0);
    }
}

BandedSpd BandedSpd::first_difference_gram(std::size_t n) {
    BandedSpd g(n, 1);
    for (std::size_t r = 0; r + 1 < n; ++r) {
        // row r of D1 is e_{r+1} - e_r
        g.at(r, 0) += 1.0;
        g.at(r + 1, 0) += 1.0;
        g.at(r + 1, 1) -= 1.0;
    }
    return g;
}

BandedSpd BandedSpd::second_difference_gram(std::size_t n) {
    BandedSpd g(n, 2);
    const double coef[3] = {1.0, -2.0, 1.0};
    for (std::size_t r = 0; r + 2 < n; ++r) {
        for (std::size_t a = 0; a < 3; ++a) {
            for (std::size_t b = 0; b <= a; ++b) {
                g.at(r + a, a - b) += coef[a] * coef[b];
            }
        }
    }
    return g;
}

void first_difference_transpose(std::span<const double> v, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t r = 0; r < v.size(); ++r) {
        out[r] -= v[r];
        out[r + 1] += v[r];
    }
}

void second_difference_transpose(std::span<const double> v, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t r = 0; r < v.size(); ++r) {
        out[r] += v[r];
        out[r + 1] -= 2.0 * v[r];
        out[r + 2] += v[r];
    }
}

} // namespace lightesd::detail
