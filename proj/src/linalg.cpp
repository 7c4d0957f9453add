#include "linfty/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace linfty {

BandMatrix::BandMatrix(int n, int bandwidth)
    : n_(n), bw_(std::min(bandwidth, n - 1)),
      band_(static_cast<std::size_t>(n) * (static_cast<std::size_t>(bw_) + 1), 0.0) {
    if (n < 1 || bandwidth < 0) throw std::invalid_argument("BandMatrix: bad dimensions");
}

double& BandMatrix::at(int i, int j) {
    if (j > i) std::swap(i, j);
    return band_[static_cast<std::size_t>(i) * (bw_ + 1) + (i - j)];
}

double BandMatrix::at(int i, int j) const {
    if (j > i) std::swap(i, j);
    if (i - j > bw_) return 0.0;
    return band_[static_cast<std::size_t>(i) * (bw_ + 1) + (i - j)];
}

void BandMatrix::clear() { std::fill(band_.begin(), band_.end(), 0.0); }

void BandMatrix::shift_diagonal(double mu) {
    for (int i = 0; i < n_; ++i) band_[static_cast<std::size_t>(i) * (bw_ + 1)] += mu;
}

bool BandMatrix::factorize() {
    for (int j = 0; j < n_; ++j) {
        double d = at(j, j);
        const int k0 = std::max(0, j - bw_);
        for (int k = k0; k < j; ++k) {
            const double l = at(j, k);
            d -= l * l;
        }
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        const double l_jj = std::sqrt(d);
        at(j, j) = l_jj;
        const int imax = std::min(n_ - 1, j + bw_);
        for (int i = j + 1; i <= imax; ++i) {
            double s = at(i, j);
            const int kk0 = std::max({0, i - bw_, j - bw_});
            for (int k = kk0; k < j; ++k) s -= at(i, k) * at(j, k);
            at(i, j) = s / l_jj;
        }
    }
    return true;
}

void BandMatrix::solve(std::vector<double>& rhs) const {
    if (static_cast<int>(rhs.size()) != n_) throw std::invalid_argument("BandMatrix::solve: size");
    // Forward substitution L y = rhs.
    for (int i = 0; i < n_; ++i) {
        double s = rhs[i];
        const int k0 = std::max(0, i - bw_);
        for (int k = k0; k < i; ++k) s -= at(i, k) * rhs[k];
        rhs[i] = s / at(i, i);
    }
    // Back substitution L^T x = y.
    for (int i = n_ - 1; i >= 0; --i) {
        double s = rhs[i];
        const int kmax = std::min(n_ - 1, i + bw_);
        for (int k = i + 1; k <= kmax; ++k) s -= at(k, i) * rhs[k];
        rhs[i] = s / at(i, i);
    }
}

}  // namespace linfty
