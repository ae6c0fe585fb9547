#include "tomobell/density_matrix.hpp"

#include "tomobell/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tomobell {

DensityMatrix::DensityMatrix(int cutoff, int modes, Sparse entries, double trace_deficit)
    : cutoff_(cutoff), modes_(modes), dimension_(0), entries_(std::move(entries)),
      trace_deficit_(trace_deficit)
{
    if (cutoff < 1) throw DomainError("DensityMatrix: cutoff must be >= 1");
    if (modes != 1 && modes != 2) throw DomainError("DensityMatrix: modes must be 1 or 2");
    dimension_ = modes == 1 ? static_cast<std::size_t>(cutoff)
                            : static_cast<std::size_t>(cutoff) * static_cast<std::size_t>(cutoff);
    if (static_cast<std::size_t>(entries_.rows()) != dimension_ ||
        static_cast<std::size_t>(entries_.cols()) != dimension_) {
        throw DimensionError("DensityMatrix: entries are " + std::to_string(entries_.rows()) + "x" +
                             std::to_string(entries_.cols()) + ", expected " +
                             std::to_string(dimension_));
    }
    entries_.makeCompressed();
}

DensityMatrix::cd DensityMatrix::entry(std::size_t row, std::size_t col) const
{
    if (row >= dimension_ || col >= dimension_) throw DimensionError("DensityMatrix: index out of range");
    return entries_.coeff(static_cast<long>(row), static_cast<long>(col));
}

DensityMatrix::cd DensityMatrix::trace() const
{
    cd sum = 0.0;
    for (std::size_t i = 0; i < dimension_; ++i) sum += entries_.coeff(static_cast<long>(i), static_cast<long>(i));
    return sum;
}

double DensityMatrix::hermiticity_error() const
{
    double worst = 0.0;
    for (long k = 0; k < entries_.outerSize(); ++k) {
        for (Sparse::InnerIterator it(entries_, k); it; ++it) {
            const cd mirror = entries_.coeff(it.col(), it.row());
            worst = std::max(worst, std::abs(it.value() - std::conj(mirror)));
        }
    }
    return worst;
}

double DensityMatrix::min_diagonal() const
{
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dimension_; ++i) {
        lowest = std::min(lowest, entries_.coeff(static_cast<long>(i), static_cast<long>(i)).real());
    }
    return lowest;
}

double DensityMatrix::normalization_error() const
{
    return std::fabs(trace().real() + trace_deficit_ - 1.0);
}

Eigen::MatrixXcd DensityMatrix::to_dense() const
{
    if (dimension_ > kMaxDenseDimension) {
        throw DimensionError("DensityMatrix: dimension " + std::to_string(dimension_) +
                             " too large for a dense copy");
    }
    return Eigen::MatrixXcd(entries_);
}

double DensityMatrix::min_eigenvalue() const
{
    const Eigen::MatrixXcd dense = to_dense();
    const Eigen::MatrixXcd herm = 0.5 * (dense + dense.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

} // namespace tomobell
