// correlations.hpp: entropies and correlation measures across the cut
// L = (A, C) | R = B of the three-qubit state.
//
// The bipartite matrix uses index 2*l + r with l = 2*a + c and r = b, where
// a, b, c are the spin bits of the storage index k = 4a + 2b + c.
// Entropies are reported in bits unless LogBase::E is requested.

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "triq/model.hpp"
#include "triq/types.hpp"

namespace triq {

enum class LogBase { Two, E };

enum class Execution { Serial, Parallel };

// Storage index k -> bipartite index; an involution.
inline constexpr std::array<int, 8> kBipartitePermutation{0, 2, 1, 3, 4, 6, 5, 7};

// Eigenvalues in [-1e-12, 0) are treated as 0.
inline constexpr double kEigenvalueFloor = 1e-12;

double shannon_entropy(std::span<const double> probabilities, LogBase base = LogBase::Two);
double von_neumann_entropy(const Eigen::MatrixXcd& rho, LogBase base = LogBase::Two);

struct BipartiteView {
    Matrix8c rho_lr;  // (4-dim L) x (2-dim R)
    Matrix4c rho_l;
    Matrix2c rho_r;

    static BipartiteView from_state(const DensityMatrix& rho);
    // From a matrix already in bipartite order.
    static BipartiteView from_bipartite(const Matrix8c& rho_lr);
};

Matrix8c to_bipartite(const Matrix8c& storage);
Matrix8c from_bipartite(const Matrix8c& bipartite);
Matrix4c partial_trace_r(const Matrix8c& rho_lr);
Matrix2c partial_trace_l(const Matrix8c& rho_lr);
Matrix8c partial_transpose_r(const Matrix8c& rho_lr);

double mutual_information(const BipartiteView& v, LogBase base = LogBase::Two);

// Projective measurement on R along the Bloch direction (theta, phi).
// Returns sum_k p_k S(rho_{L|k}).
double conditional_entropy(const BipartiteView& v, double theta, double phi,
                           LogBase base = LogBase::Two);

struct MeasurementOptions {
    int theta_points = 64;   // theta_i = pi i / (n - 1)
    int phi_points = 128;    // phi_j = 2 pi j / n
    double step_tol = 1e-9;  // compass refinement stops below this step (rad)
    Execution execution = Execution::Parallel;
};

// Objective on the grid, row-major in (theta, phi).
std::vector<double> measurement_grid(const BipartiteView& v, const MeasurementOptions& opts,
                                     LogBase base = LogBase::Two);

struct ClassicalCorrelation {
    double value = 0.0;
    double min_conditional_entropy = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    std::size_t grid_index = 0;  // best grid point before refinement
};

ClassicalCorrelation classical_correlation(const BipartiteView& v, const MeasurementOptions& opts = {},
                                           LogBase base = LogBase::Two);

// I - C; values in [-1e-8, 0) are clamped to 0.
double quantum_discord(const BipartiteView& v, const MeasurementOptions& opts = {},
                       LogBase base = LogBase::Two);

// Sum of |negative eigenvalues| of the partial transpose over R.
double negativity(const BipartiteView& v);

struct CorrelationReport {
    double s_l = 0.0;
    double s_r = 0.0;
    double s_lr = 0.0;
    double mutual_information = 0.0;
    double classical = 0.0;
    double discord = 0.0;
    double negativity = 0.0;
};

CorrelationReport correlation_report(const DensityMatrix& rho, const MeasurementOptions& opts = {},
                                     LogBase base = LogBase::Two);

// Mutual information of a steady state of the printed block form
//   sum_r [ w-weighted L states ] (x) |r><r|,
// where L is diagonal in the product basis except for the {+-, -+} pair,
// which carries the coherence rho_25 (r = +) or rho_47 (r = -). Evaluated as
// H(P_L) + H(P_R) - H(P_LR) from the block eigenvalues. Throws DomainError if
// rho has entries outside that pattern or the two blocks do not share an L
// eigenbasis.
double mutual_information_closed_form(const DensityMatrix& rho, LogBase base = LogBase::Two);

// The printed expression -sum_i w_i log w_i over the same block eigenvalues.
double printed_correlation_expression(const DensityMatrix& rho, LogBase base = LogBase::Two);

struct AsymmetryResult {
    double i_forward = 0.0;
    double i_reverse = 0.0;
    double a = 0.0;
    bool defined = false;
};

double asymmetry_from(double i_forward, double i_reverse, bool* defined = nullptr);

// Mutual information of the steady state at (T_L, T_R) and at the swapped
// temperatures (fraction p in common mode).
AsymmetryResult asymmetry_factor(const SystemParams& params, double p = 1.0,
                                 LogBase base = LogBase::Two);

// Coarse diagnostic for the discord with measurement on L: minimum over the
// product basis, the {psi+, psi-} basis and `samples` Haar-random bases
// (fixed seed). Gives an upper bound on Q(rho_RL).
double discord_l_side_upper_bound(const BipartiteView& v, int samples = 256,
                                  std::uint64_t seed = 1, LogBase base = LogBase::Two);

} // namespace triq
