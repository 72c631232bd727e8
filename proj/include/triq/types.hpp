// types.hpp: fixed-size matrix aliases and the validated DensityMatrix value type

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace triq {

using cd = std::complex<double>;
using Matrix8c = Eigen::Matrix<cd, 8, 8>;
using Matrix4c = Eigen::Matrix<cd, 4, 4>;
using Matrix2c = Eigen::Matrix<cd, 2, 2>;
using Matrix8d = Eigen::Matrix<double, 8, 8>;
using Vector8d = Eigen::Matrix<double, 8, 1>;

inline constexpr int kDim = 8;

// Tolerances for a physically valid state.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPositivityTol = 1e-10;

// 8x8 Hermitian, unit-trace, positive-semidefinite matrix in the |1>..|8>
// product eigenbasis (|1> = |+++>, ..., |8> = |--->, ordering A,B,C).
class DensityMatrix {
public:
    DensityMatrix() = default;

    // Throws DomainError if m is not a valid state.
    static DensityMatrix from_matrix(const Matrix8c& m);
    // No validation; for values produced by trusted numerical routines.
    static DensityMatrix unchecked(const Matrix8c& m) { return DensityMatrix(m); }

    static DensityMatrix basis_state(int level);  // 0-based level index
    static DensityMatrix maximally_mixed();

    const Matrix8c& matrix() const noexcept { return m_; }
    cd operator()(int i, int j) const { return m_(i, j); }

    double hermiticity_error() const;
    double trace_error() const;
    double min_eigenvalue() const;
    bool is_valid() const;

private:
    explicit DensityMatrix(const Matrix8c& m) : m_(m) {}
    Matrix8c m_ = Matrix8c::Zero();
};

} // namespace triq
