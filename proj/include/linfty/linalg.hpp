#pragma once

#include <vector>

namespace linfty {

/// Symmetric positive definite band matrix, lower storage: entry (i, j) with
/// 0 <= i - j <= bandwidth lives at band[i * (bandwidth + 1) + (i - j)].
class BandMatrix {
public:
    BandMatrix(int n, int bandwidth);

    int size() const { return n_; }
    int bandwidth() const { return bw_; }

    double& at(int i, int j);
    double at(int i, int j) const;
    void clear();
    /// Adds mu to every diagonal entry (Levenberg shift).
    void shift_diagonal(double mu);

    /// In-place Cholesky; returns false when a pivot is not positive.
    bool factorize();
    /// Solves L L^T x = rhs after factorize(); rhs is overwritten with x.
    void solve(std::vector<double>& rhs) const;

private:
    int n_;
    int bw_;
    std::vector<double> band_;
};

}  // namespace linfty
