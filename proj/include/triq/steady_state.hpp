// steady_state.hpp: steady states of the diode three ways. The rate-equation
// coefficient matrices M^I (independent reservoirs) and M^C (common left
// reservoir) are built in the reduced vector forms below and their null
// spaces are the authoritative answer; printed closed forms and spanning-tree
// sums serve as analytic cross-checks.
//
// Vector orders
//   M^I:  [rho11, rho22, ..., rho88]
//   M^C:  [rho11, rho22, rho33, rho44, rho66, rho88, rho25, rho47]
// with rho55 == rho22, rho77 == rho44 and real rho25, rho47 implied.
//
// Tilde basis (columns of tilde_basis(), 0-based |k> = level k):
//   ~1 = (|5>-|2>)/sqrt2   ~2 = (|7>-|4>)/sqrt2      subspace 1
//   ~3 = |1>  ~4 = |3>  ~5 = (|2>+|5>)/sqrt2  ~6 = (|4>+|7>)/sqrt2
//   ~7 = |6>  ~8 = |8>                              subspace 2

#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "triq/kirchhoff.hpp"
#include "triq/model.hpp"
#include "triq/types.hpp"

namespace triq {

struct CoefficientMatrixIHR {
    Matrix8d m = Matrix8d::Zero();
};

struct CoefficientMatrixCHR {
    Matrix8d m = Matrix8d::Zero();
};

// 2x2 rate block 2 [[-J(-w), J(+w)], [J(-w), -J(+w)]] on (upper, lower).
Eigen::Matrix2d rate_block(double kappa, double omega, double temperature);

CoefficientMatrixIHR build_M_ihr(const SystemParams& params);

// Throws ModeError if the crossing condition fails.
CoefficientMatrixCHR build_M_chr(const SystemParams& params);
// The two parts separately: the printed left matrix and the Kronecker right part.
Matrix8d build_M_chr_left(const SystemParams& params);
Matrix8d build_M_chr_right(const SystemParams& params);

struct NullSpace {
    Eigen::MatrixXd basis;             // columns, orthonormal
    Eigen::VectorXd singular_values;   // descending
    int dimension = 0;
};

// Dimension = number of singular values below rel_tol * sigma_max.
NullSpace null_space(const Matrix8d& m, double rel_tol = 1e-10);

// Diagonal steady state from the null vector of M^I. Throws
// DegenerateNullSpace if the second-smallest singular value is below
// 1e-10 * ||M||.
DensityMatrix steady_ihr(const SystemParams& params);

// Unnormalized populations at g_AB = g_BC = 0 from the printed closed form.
std::array<double, 8> ihr_decoupled_closed_form(const SystemParams& params);

// Spanning-tree populations of the 8-level rate graph (normalized).
std::array<double, 8> ihr_tree_populations(const SystemParams& params);

// ---------------------------------------------------------------- tilde basis

// Columns are |~1>..|~8> in the product basis.
const Matrix8c& tilde_basis();

// <~i|rho|~i>, i = 1..8 (returned 0-based).
std::array<double, 8> tilde_populations(const DensityMatrix& rho);

// sum_i w_i |~i><~i|.
DensityMatrix from_tilde_populations(const std::array<double, 8>& w);

// Weight of subspace 2: sum_{i=3..8} <~i|rho0|~i>.
double extract_fraction(const DensityMatrix& rho0);

// ---------------------------------------------------------------- CHR

struct SteadyDecomposition {
    double p = 0.0;
    DensityMatrix rho1;  // heat-resisting, supported on ~1, ~2
    DensityMatrix rho2;  // heat-conducting, supported on ~3..~8
    DensityMatrix rho;   // (1-p) rho1 + p rho2
};

// Both null-space steady states of M^C, separated by subspace weight.
// Throws DegenerateNullSpace unless the null space is two-dimensional.
struct ChrNullStates {
    DensityMatrix rho1;
    DensityMatrix rho2;
    NullSpace null;
};
ChrNullStates chr_null_states(const SystemParams& params);

// rho1 from its closed form, rho2 from the null space (closed-form collapse
// onto ~7, ~8 at T_L = 0). Requires the crossing condition.
SteadyDecomposition steady_chr(const SystemParams& params, double p);
SteadyDecomposition steady_chr(const SystemParams& params, const DensityMatrix& rho0);

DensityMatrix rho1_closed_form(const SystemParams& params);

// Spectral shorthand of the ladder: L35 <-> gap w+g+g_AC, L57 <-> w+g-g_AC,
// L46 <-> w-g+g_AC, L68 <-> w-g-g_AC (left bath), R34 <-> B 1->3,
// R56 <-> B 2->4 (== 5->7), R78 <-> B 6->8 (right bath). Index 2k is J(+w),
// 2k+1 is J(-w), k in the order above.
enum class LadderRate { L35 = 0, L46 = 1, L57 = 2, L68 = 3, R34 = 4, R56 = 5, R78 = 6 };
std::array<double, 14> ladder_rates(const SystemParams& params);

// Unnormalized rho~3..rho~8 (returned 0-based as entries 0..5) from the
// printed polynomials.
std::array<double, 6> rho2_closed_form_weights(const SystemParams& params);
// The printed g = 0 reduction (three-factor products).
std::array<double, 6> rho2_decoupled_weights(const SystemParams& params);
DensityMatrix rho2_closed_form(const SystemParams& params);

// Subspace-2 ladder as a rate graph (nodes ~3..~8 -> 0..5), edge rates
// 4 J on left rungs and 2 J on right rungs.
kirchhoff::Graph rho2_ladder_graph(const SystemParams& params);

// ---------------------------------------------------------------- dispatch

// Steady state for the active dissipation mode: the p-mixture in common mode,
// the unique IHR state otherwise (p ignored).
DensityMatrix steady_state(const SystemParams& params, double p);

} // namespace triq
