#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <cstddef>

namespace tomobell {

/// Truncated Fock-basis density matrix for one or two modes.
///
/// Two-mode basis states |n1, n2> map to row index n1 * cutoff + n2.
/// Entries are stored sparsely; the benchmark states have only cutoff^2
/// nonzeros out of cutoff^4.  Probability mass lost to truncation is
/// carried in trace_deficit() rather than renormalized away.
class DensityMatrix {
public:
    using cd = std::complex<double>;
    using Sparse = Eigen::SparseMatrix<cd, Eigen::ColMajor, long>;

    DensityMatrix(int cutoff, int modes, Sparse entries, double trace_deficit);

    int cutoff() const { return cutoff_; }
    int modes() const { return modes_; }
    std::size_t dimension() const { return dimension_; }
    double trace_deficit() const { return trace_deficit_; }
    const Sparse& entries() const { return entries_; }

    cd entry(std::size_t row, std::size_t col) const;
    cd trace() const;

    /// max |rho_ij - conj(rho_ji)|
    double hermiticity_error() const;
    double min_diagonal() const;
    /// |Re Tr rho + trace_deficit - 1|
    double normalization_error() const;

    /// Smallest eigenvalue of the hermitian part; dense solve, dimension <= kMaxDenseDimension.
    double min_eigenvalue() const;

    Eigen::MatrixXcd to_dense() const;

    static constexpr std::size_t kMaxDenseDimension = 2048;

    static std::size_t index(int cutoff, int n1, int n2)
    {
        return static_cast<std::size_t>(n1) * cutoff + n2;
    }

private:
    int cutoff_;
    int modes_;
    std::size_t dimension_;
    Sparse entries_;
    double trace_deficit_;
};

} // namespace tomobell
