#include "triq/types.hpp"

#include <sstream>

#include "triq/errors.hpp"

namespace triq {

DensityMatrix DensityMatrix::from_matrix(const Matrix8c& m) {
    DensityMatrix rho(m);
    if (rho.hermiticity_error() > kHermitianTol)
        throw DomainError("DensityMatrix: matrix is not Hermitian");
    if (rho.trace_error() > kTraceTol)
        throw DomainError("DensityMatrix: trace differs from 1");
    if (rho.min_eigenvalue() < -kPositivityTol)
        throw DomainError("DensityMatrix: matrix is not positive semidefinite");
    return rho;
}

DensityMatrix DensityMatrix::basis_state(int level) {
    Matrix8c m = Matrix8c::Zero();
    m(level, level) = 1.0;
    return DensityMatrix(m);
}

DensityMatrix DensityMatrix::maximally_mixed() {
    return DensityMatrix(Matrix8c::Identity() / 8.0);
}

double DensityMatrix::hermiticity_error() const {
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::trace_error() const {
    return std::abs(m_.trace() - cd(1.0, 0.0));
}

double DensityMatrix::min_eigenvalue() const {
    const Matrix8c h = 0.5 * (m_ + m_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix8c> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

bool DensityMatrix::is_valid() const {
    return hermiticity_error() <= kHermitianTol && trace_error() <= kTraceTol
           && min_eigenvalue() >= -kPositivityTol;
}

} // namespace triq
