#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lightesd::detail {

/// Symmetric positive definite band matrix with `bandwidth` sub-diagonals,
/// factored in place by a banded Cholesky (O(n * bandwidth^2)).
class BandedSpd {
public:
    BandedSpd(std::size_t n, std::size_t bandwidth);

    std::size_t size() const { return n_; }

    /// Entry (i, i - k) of the lower triangle, k <= bandwidth.
    double& at(std::size_t i, std::size_t k) { return band_[i * (bw_ + 1) + k]; }
    double at(std::size_t i, std::size_t k) const { return band_[i * (bw_ + 1) + k]; }

    void add_diagonal(std::span<const double> d);
    void add_scaled(const BandedSpd& other, double scale);

    /// Returns false if a non-positive pivot appears.
    bool factor();
    void solve(std::span<double> rhs) const;

    /// D1^T D1 for the first-difference operator on n points.
    static BandedSpd first_difference_gram(std::size_t n);
    /// D2^T D2 for the second-difference operator on n points.
    static BandedSpd second_difference_gram(std::size_t n);

private:
    std::size_t n_;
    std::size_t bw_;
    std::vector<double> band_;
};

// out = D^T v for the difference operators (v has n-1 / n-2 entries).
void first_difference_transpose(std::span<const double> v, std::span<double> out);
void second_difference_transpose(std::span<const double> v, std::span<double> out);

} // namespace lightesd::detail
